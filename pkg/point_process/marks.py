"""
Mark spaces :math:`(Z, \\nu)` split into layers of finite mass.

Every mark space is a list of disjoint layers. A finite space has one layer
per atom; a layered space has layers :math:`L_1, L_2, \\dots` whose unions
:math:`D_n = L_1 \\cup \\dots \\cup L_n` form the exhausting sequence.
Each layer carries a sampler for its normalized mark law and a quadrature
rule (points and weights summing to the layer mass) so that
:math:`\\nu`-integrals are sums.
"""
from dataclasses import dataclass, field
import math
from typing import Callable, Optional, Tuple

import numpy as np

import constants
from errors import ArgumentError


@dataclass(frozen=True)
class Layer:
    """
    Attributes:
        region_id (int): Identifier of the layer. For atoms this is the
            mark id, for layered spaces the layer index starting at 1.
        weight (float): :math:`\\nu` mass of the layer. May be ``inf`` for
            declared but unsimulable layers.
        points: ``(m, mark_dim)`` quadrature points.
        point_weights: ``(m,)`` quadrature weights summing to ``weight``.
        sampler: ``sampler(gen, count)`` returning ``(count, mark_dim)``
            marks drawn from the layer's normalized law.
    """
    region_id: int
    weight: float
    points: np.ndarray
    point_weights: np.ndarray
    sampler: Callable = field(compare=False, repr=False)

    def __post_init__(self):
        if math.isnan(self.weight) or self.weight < 0:
            raise ArgumentError(
                'layer {} has invalid weight {}'.format(
                    self.region_id, self.weight
                )
            )


def _atom_sampler(value):
    def sample(gen, count):
        return np.broadcast_to(value, (count, value.shape[0])).copy()
    return sample


@dataclass(frozen=True)
class MarkSpace:
    """
    Attributes:
        kind (str): ``'finite'`` or ``'layered'``.
        layers (tuple of Layer): Disjoint layers in exhaustion order.
        mark_dim (int): Length of a mark vector.
        n_max (int or None): Number of leading layers that are simulated.
            ``None`` simulates every layer.
        power_law (tuple or None): ``(c, alpha)`` when the layers are the
            dyadic shells of :math:`c|z|^{-1-\\alpha}dz` on ``0<|z|<=1``.
    """
    kind: str
    layers: Tuple[Layer, ...]
    mark_dim: int
    n_max: Optional[int] = None
    power_law: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in ('finite', 'layered'):
            raise ArgumentError('unknown mark space kind {!r}'
                                .format(self.kind))
        ids = [layer.region_id for layer in self.layers]
        if len(set(ids)) != len(ids):
            raise ArgumentError('duplicate region ids {}'.format(ids))
        if self.n_max is not None and not 0 <= self.n_max <= len(self.layers):
            raise ArgumentError('n_max {} outside 0..{}'.format(
                self.n_max, len(self.layers)
            ))

    @property
    def simulated(self):
        if self.n_max is None:
            return self.layers
        return self.layers[:self.n_max]

    @property
    def total_mass_finite(self):
        return self.power_law is None and all(
            math.isfinite(layer.weight) for layer in self.layers
        )

    def layer(self, region_id):
        for layer in self.layers:
            if layer.region_id == region_id:
                return layer
        raise ArgumentError('no layer with region id {}'.format(region_id))

    def up_to(self, n):
        """Region ids making up :math:`D_n`."""
        return tuple(layer.region_id for layer in self.layers[:n])

    def simulated_mass(self):
        return float(sum(layer.weight for layer in self.simulated))

    def total_mass(self):
        if self.power_law is not None:
            return math.inf
        return float(sum(layer.weight for layer in self.layers))

    def tail_mass(self):
        """:math:`\\nu` mass of the marks outside the simulated layers."""
        if self.power_law is not None:
            return math.inf
        rest = self.layers[len(self.simulated):]
        return float(sum(layer.weight for layer in rest))

    def tail_moment(self, r):
        """
        :math:`\\int |z|^r \\nu(dz)` over the marks outside the simulated
        layers, or ``None`` when it is not known in closed form.
        """
        if self.power_law is not None:
            c, alpha = self.power_law
            if r <= alpha:
                return math.inf
            n = len(self.simulated)
            return 2.0 * c * 2.0 ** (-n * (r - alpha)) / (r - alpha)
        if not self.layers[len(self.simulated):]:
            return 0.0
        return None

    def nodes(self, region=None):
        """
        Quadrature nodes of the simulated layers selected by ``region``.

        Returns:
            Tuple ``(points, weights, region_ids)`` with shapes
            ``(m, mark_dim)``, ``(m,)`` and ``(m,)``.
        """
        selected = [
            layer for layer in self.simulated
            if region is None or layer.region_id in region
        ]
        if not selected:
            return (
                np.zeros((0, self.mark_dim)), np.zeros(0),
                np.zeros(0, dtype=int)
            )

        points = np.concatenate([layer.points for layer in selected])
        weights = np.concatenate([layer.point_weights for layer in selected])
        ids = np.concatenate([
            np.full(layer.points.shape[0], layer.region_id)
            for layer in selected
        ])
        return points, weights, ids

    def expect(self, f, times, region=None):
        """
        :math:`\\int f(t, z)\\,\\nu(dz)` at each time, over the simulated
        layers selected by ``region``.

        Args:
            f: Vectorized evaluator ``f(t, z)`` taking ``t`` of shape
                ``(n,)`` and ``z`` of shape ``(n, mark_dim)``, returning
                ``(n,)`` or ``(n, d)``.
            times: ``(N,)`` array of times.

        Returns:
            ``(N,)`` or ``(N, d)`` array.
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        points, weights, _ = self.nodes(region)
        n_t, n_z = times.shape[0], points.shape[0]

        if n_z == 0:
            probe = np.asarray(f(times[:1], np.zeros((1, self.mark_dim))))
            return np.zeros((n_t,) + probe.shape[1:])

        tt = np.repeat(times, n_z)
        zz = np.tile(points, (n_t, 1))
        vals = np.asarray(f(tt, zz), dtype=float)
        vals = vals.reshape((n_t, n_z) + vals.shape[1:])
        return np.einsum('q,tq...->t...', weights, vals)


def finite_marks(atoms):
    """
    Build a finite mark space.

    Args:
        atoms: iterable of ``(mark_id, weight, value)`` where ``value`` is a
            scalar or vector mark. Zero weights are allowed and produce no
            events.
    """
    layers = []
    mark_dim = None
    for mark_id, weight, value in atoms:
        value = np.atleast_1d(np.asarray(value, dtype=float))
        if mark_dim is None:
            mark_dim = value.shape[0]
        elif value.shape[0] != mark_dim:
            raise ArgumentError('all atoms must have the same mark length')
        if not math.isfinite(weight):
            raise ArgumentError(
                'atom {} has non-finite weight {}'.format(mark_id, weight)
            )

        layers.append(Layer(
            region_id=int(mark_id),
            weight=float(weight),
            points=value[None, :],
            point_weights=np.array([float(weight)]),
            sampler=_atom_sampler(value),
        ))

    if not layers:
        raise ArgumentError('a finite mark space needs at least one atom')
    return MarkSpace(kind='finite', layers=tuple(layers), mark_dim=mark_dim)


def _shell_sampler(lo, hi, alpha):
    u_lo, u_hi = hi ** -alpha, lo ** -alpha

    def sample(gen, count):
        u = gen.uniform(u_lo, u_hi, size=count)
        signs = gen.choice((-1.0, 1.0), size=count)
        return (signs * u ** (-1.0 / alpha))[:, None]
    return sample


def power_law_marks(c, alpha, n_max, n_nodes=None):
    """
    Symmetric scalar marks with intensity :math:`c|z|^{-1-\\alpha}dz` on
    ``0 < |z| <= 1``, split into dyadic shells
    ``2**-n < |z| <= 2**-(n-1)`` for ``n = 1..n_max``.

    Shell quadrature substitutes :math:`u = |z|^{-\\alpha}`, under which the
    shell measure is uniform, and applies Gauss-Legendre on each sign.
    """
    if not c > 0 or not 0 < alpha < 2:
        raise ArgumentError(
            'power-law marks need c > 0 and 0 < alpha < 2, got {} {}'.format(
                c, alpha
            )
        )
    if n_max < 1:
        raise ArgumentError('power-law marks need n_max >= 1')
    if n_nodes is None:
        n_nodes = constants.shell_nodes

    x, w = np.polynomial.legendre.leggauss(n_nodes)
    layers = []
    for n in range(1, n_max + 1):
        lo, hi = 2.0 ** -n, 2.0 ** -(n - 1)
        u_lo, u_hi = hi ** -alpha, lo ** -alpha
        mass = 2.0 * c * (u_hi - u_lo) / alpha

        u = 0.5 * (u_hi - u_lo) * x + 0.5 * (u_hi + u_lo)
        z = u ** (-1.0 / alpha)
        half = 0.5 * (u_hi - u_lo) * w * c / alpha

        layers.append(Layer(
            region_id=n,
            weight=mass,
            points=np.concatenate([z, -z])[:, None],
            point_weights=np.concatenate([half, half]),
            sampler=_shell_sampler(lo, hi, alpha),
        ))

    return MarkSpace(
        kind='layered', layers=tuple(layers), mark_dim=1, n_max=n_max,
        power_law=(float(c), float(alpha))
    )


def layered_marks(layers, mark_dim, n_max=None):
    """
    Build a layered space from user layers. Each entry is
    ``(region_id, weight, sampler, points, point_weights)``; the quadrature
    weights must sum to the layer weight.
    """
    built = []
    for region_id, weight, sampler, points, point_weights in layers:
        points = np.asarray(points, dtype=float).reshape(-1, mark_dim)
        point_weights = np.asarray(point_weights, dtype=float)
        if math.isfinite(weight) and not math.isclose(
            float(np.sum(point_weights)), weight, rel_tol=1e-9, abs_tol=1e-12
        ):
            raise ArgumentError(
                'quadrature weights of layer {} do not sum to its mass'.format(
                    region_id
                )
            )
        built.append(Layer(
            region_id=int(region_id), weight=float(weight), points=points,
            point_weights=point_weights, sampler=sampler
        ))

    return MarkSpace(
        kind='layered', layers=tuple(built), mark_dim=mark_dim, n_max=n_max
    )
