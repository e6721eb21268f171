"""
Realizations of the Poisson point process and of the Wiener factor.
"""
import csv
from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np

import rng
from errors import ArgumentError


@dataclass(frozen=True, eq=False)
class JumpPath:
    """
    A time-sorted list of marked events on ``(0, T]``.

    Attributes:
        T (float): Horizon.
        times: ``(m,)`` strictly increasing event times in ``(0, T]``.
        marks: ``(m, mark_dim)`` mark vectors.
        layers: ``(m,)`` region id of the layer each event came from.
        seed (int): Seed the path was drawn with.
        replicate (int): Replicate index within the seed.
        layer_weights: ``((region_id, weight), ...)`` of every layer of the
            mark space, in exhaustion order, with ``simulated`` flags below.
        simulated: ``(region_id, ...)`` of the layers that were sampled.
    """
    T: float
    times: np.ndarray
    marks: np.ndarray
    layers: np.ndarray
    seed: int = 0
    replicate: int = 0
    layer_weights: Tuple[Tuple[int, float], ...] = ()
    simulated: Tuple[int, ...] = ()

    def __len__(self):
        return self.times.shape[0]

    def region_mask(self, region):
        if region is None:
            return np.ones(len(self), dtype=bool)
        if callable(region):
            return np.asarray(region(self.marks, self.layers), dtype=bool)
        return np.isin(self.layers, list(region))

    def restrict(self, region):
        mask = self.region_mask(region)
        return JumpPath(
            T=self.T, times=self.times[mask], marks=self.marks[mask],
            layers=self.layers[mask], seed=self.seed,
            replicate=self.replicate, layer_weights=self.layer_weights,
            simulated=tuple(i for i in self.simulated
                            if region is None or callable(region)
                            or i in region)
        )

    def to_csv(self, path):
        """Columns: ``tau, layer, mark_0 .. mark_{d-1}``."""
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['tau', 'layer'] + [
                'mark_{}'.format(i) for i in range(self.marks.shape[1])
            ])
            for t, layer, mark in zip(self.times, self.layers, self.marks):
                writer.writerow(
                    [repr(float(t)), int(layer)]
                    + [repr(float(v)) for v in mark]
                )


def jump_path(T, times, marks, layers=None, layer_weights=()):
    """
    Build a deterministic path from explicit events, e.g. for closed-form
    checks. Events are sorted by time with ties kept in input order.
    """
    times = np.asarray(times, dtype=float).reshape(-1)
    marks = np.asarray(marks, dtype=float).reshape(times.shape[0], -1)
    if layers is None:
        layers = np.ones(times.shape[0], dtype=int)
    layers = np.asarray(layers, dtype=int).reshape(-1)

    if np.any(times <= 0) or np.any(times > T):
        raise ArgumentError('event times must lie in (0, T]')

    order = np.argsort(times, kind='stable')
    return JumpPath(
        T=float(T), times=times[order], marks=marks[order],
        layers=layers[order], layer_weights=tuple(layer_weights),
        simulated=tuple(int(i) for i, _ in layer_weights)
    )


def sample_jump_path(marks, T, seed, replicate=0):
    """
    Sample the point process on ``(0, T]``.

    Per simulated layer of mass :math:`\\lambda` the count is
    Poisson(:math:`\\lambda T`), the times are i.i.d. uniform on ``(0, T]``
    and the marks come from the layer's sampler. Layer ``i`` draws from
    stream ``(seed, 0, i, replicate)``, so restricting to a subset of layers
    reproduces exactly the events those layers contribute here.

    Ties in time have probability zero; if they occur they are kept and
    ordered by event index.

    Raises:
        ArgumentError: if ``T <= 0`` or a simulated layer has infinite mass.
    """
    if not T > 0:
        raise ArgumentError('horizon must be positive, got {}'.format(T))

    times, drawn, layer_ids = [], [], []
    for index, layer in enumerate(marks.simulated):
        if not math.isfinite(layer.weight):
            raise ArgumentError(
                'layer {} has infinite mass and cannot be simulated; '
                'lower n_max'.format(layer.region_id)
            )
        if layer.weight == 0:
            continue

        gen = rng.stream(seed, rng.LAYERS, index, replicate)
        count = gen.poisson(layer.weight * T)
        if count == 0:
            continue

        # 1 - U maps [0, 1) onto (0, 1]
        times.append(T * (1.0 - gen.random(count)))
        drawn.append(np.asarray(layer.sampler(gen, count), dtype=float)
                     .reshape(count, marks.mark_dim))
        layer_ids.append(np.full(count, layer.region_id))

    if times:
        times = np.concatenate(times)
        drawn = np.concatenate(drawn)
        layer_ids = np.concatenate(layer_ids)
        order = np.argsort(times, kind='stable')
        times, drawn, layer_ids = times[order], drawn[order], layer_ids[order]
    else:
        times = np.zeros(0)
        drawn = np.zeros((0, marks.mark_dim))
        layer_ids = np.zeros(0, dtype=int)

    return JumpPath(
        T=float(T), times=times, marks=drawn, layers=layer_ids,
        seed=seed, replicate=replicate,
        layer_weights=tuple(
            (layer.region_id, layer.weight) for layer in marks.layers
        ),
        simulated=tuple(layer.region_id for layer in marks.simulated),
    )


def counting_measure(path, t0, t1, region=None):
    """
    :math:`N((t_0, t_1] \\times A)`.

    Args:
        region: ``None`` for all marks, an iterable of region ids, or a
            predicate ``region(marks, layers) -> bool mask``.
    """
    if not t0 < t1 <= path.T:
        raise ArgumentError(
            'need t0 < t1 <= T, got ({}, {}] with T={}'.format(t0, t1, path.T)
        )
    in_time = (path.times > t0) & (path.times <= t1)
    return int(np.count_nonzero(in_time & path.region_mask(region)))


@dataclass(frozen=True, eq=False)
class WienerPath:
    """
    Increments of a k-dimensional standard Wiener process on a time grid.

    Attributes:
        times: ``(n+1,)`` grid from 0 to T.
        increments: ``(n, k)`` increments, ``N(0, dt_i)`` per coordinate.
    """
    times: np.ndarray
    increments: np.ndarray
    seed: int = 0
    replicate: int = 0

    @property
    def k(self):
        return self.increments.shape[1]

    @property
    def T(self):
        return float(self.times[-1])

    @property
    def dt(self):
        return np.diff(self.times)

    @property
    def values(self):
        """Wiener process at the grid nodes, starting from 0."""
        return np.vstack([
            np.zeros((1, self.k)), np.cumsum(self.increments, axis=0)
        ])

    def refine(self, new_times):
        """
        Insert ``new_times`` into the grid by Brownian-bridge sampling, so
        the refined path has exactly the law of the Wiener process on the
        merged grid and agrees with this path at the old nodes.
        """
        new_times = np.unique(np.asarray(new_times, dtype=float))
        new_times = new_times[~np.isin(new_times, self.times)]
        if new_times.size == 0:
            return self
        if new_times[0] <= 0 or new_times[-1] > self.T:
            raise ArgumentError('refinement times must lie in (0, T]')

        gen = rng.stream(self.seed, rng.BRIDGE, self.replicate)
        old = self.values
        slot = np.searchsorted(self.times, new_times)

        grid = np.concatenate([self.times, new_times])
        values = np.concatenate([old, np.zeros((new_times.size, self.k))])

        i = 0
        while i < new_times.size:
            j = slot[i]
            a, wa = self.times[j - 1], old[j - 1]
            b, wb = self.times[j], old[j]
            while i < new_times.size and slot[i] == j:
                s = new_times[i]
                mean = wa + (s - a) / (b - a) * (wb - wa)
                var = (s - a) * (b - s) / (b - a)
                ws = mean + math.sqrt(var) * gen.standard_normal(self.k)
                values[self.times.size + i] = ws
                a, wa = s, ws
                i += 1

        order = np.argsort(grid, kind='stable')
        grid, values = grid[order], values[order]
        return WienerPath(
            times=grid, increments=np.diff(values, axis=0),
            seed=self.seed, replicate=self.replicate
        )


def sample_wiener(T, n_steps, k, seed, replicate=0):
    """
    Wiener increments on the uniform grid with ``n_steps`` steps, drawn
    from stream ``(seed, 1, replicate)``.
    """
    if not T > 0 or n_steps < 1 or k < 1:
        raise ArgumentError('need T > 0, n_steps >= 1 and k >= 1')

    gen = rng.stream(seed, rng.WIENER, replicate)
    dt = T / n_steps
    increments = math.sqrt(dt) * gen.standard_normal((n_steps, k))
    return WienerPath(
        times=np.linspace(0.0, T, n_steps + 1), increments=increments,
        seed=seed, replicate=replicate
    )
