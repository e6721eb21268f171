"""
Jump noise for the quasi-geostrophic equation and its Ornstein-Uhlenbeck
convolution :math:`Z(t) = \\int_0^t e^{-(t-s)A}\\xi\\,\\tilde N(ds, dz)`
with :math:`A = -\\Delta`.

A mark is a pair ``(bundle, sign)``: the jump it produces is ``sign`` times
the bundle's field, a real combination of a few Fourier modes scaled to a
fixed :math:`W^{-s,4}` norm. The noise integral
:math:`\\int_0^T\\int|\\xi|^2_{W^{-s,4}}\\nu(dz)ds` is then a finite sum.
"""
from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np

from errors import ArgumentError
from log import debug
from point_process import finite_marks, sample_jump_path
from .fields import (
    SpectralField, dealias_mask, sobolev_norm, wavenumber_squared
)


def mode_bundle(n, modes, amplitudes=None):
    """
    Coefficients of the real field
    :math:`\\sum_j a_j e^{ik_j\\cdot x} + \\mathrm{c.c.}`.

    Raises:
        ArgumentError: for ``k = 0`` or a mode outside the dealiased band.
    """
    if amplitudes is None:
        amplitudes = [1.0] * len(modes)
    if len(amplitudes) != len(modes) or not modes:
        raise ArgumentError('a bundle needs one amplitude per mode')

    mask = dealias_mask(n)
    coeffs = np.zeros((n, n), dtype=complex)
    for (k1, k2), a in zip(modes, amplitudes):
        k1, k2 = int(k1), int(k2)
        if (k1, k2) == (0, 0):
            raise ArgumentError('noise modes must have k != 0')
        if max(abs(k1), abs(k2)) >= n // 2 or not mask[k1 % n, k2 % n]:
            raise ArgumentError('mode {} lies outside the dealiased band'
                                .format((k1, k2)))
        coeffs[k1 % n, k2 % n] += a
        coeffs[-k1 % n, -k2 % n] += np.conj(a)
    return coeffs


@dataclass(frozen=True, eq=False)
class QGENoise:
    """
    Attributes:
        n (int): Grid size.
        s (float): Negative smoothness of the noise norm, in ``(0, 1/2)``.
        bundles (tuple): ``(n, n)`` coefficient arrays, one per bundle.
        norms (tuple of float): :math:`|\\xi|_{W^{-s,4}}` of each bundle.
        marks (MarkSpace): Atoms with marks ``(bundle, sign)``.
    """
    n: int
    s: float
    bundles: Tuple[np.ndarray, ...]
    norms: Tuple[float, ...]
    marks: object

    @property
    def symmetric(self):
        rate = {}
        for layer in self.marks.layers:
            b, sign = layer.points[0]
            rate[(int(b), sign)] = layer.weight
        return all(
            rate.get((b, 1.0), 0.0) == rate.get((b, -1.0), 0.0)
            for b in range(len(self.bundles))
        )

    def jump(self, mark):
        b, sign = mark
        return sign * self.bundles[int(b)]

    def assumption_integral(self, T):
        """
        :math:`\\int_0^T\\int|\\xi|^2_{W^{-s,4}}\\nu(dz)ds`, exact.
        """
        return T * math.fsum(
            layer.weight * self.norms[int(layer.points[0][0])] ** 2
            for layer in self.marks.layers
        )

    def compensator(self):
        """
        Coefficients of :math:`\\int\\xi\\,\\nu(dz)`, identically zero for
        sign-symmetric rates.
        """
        if self.symmetric:
            return np.zeros((self.n, self.n), dtype=complex)
        out = np.zeros((self.n, self.n), dtype=complex)
        for layer in self.marks.layers:
            out += layer.weight * self.jump(layer.points[0])
        return out


def qge_noise(n, s, bundles, rates, target_norm=1.0, symmetric=True):
    """
    Build the noise.

    Args:
        n (int): Grid size.
        s (float): In ``(0, 1/2)``.
        bundles: One list of ``(k1, k2)`` modes per bundle, or
            ``(modes, amplitudes)`` pairs.
        rates: Jump rate of each bundle.
        target_norm: :math:`W^{-s,4}` norm each bundle is scaled to; a
            scalar or one value per bundle.
        symmetric (bool): Split each rate evenly between signs ``+1`` and
            ``-1``. Otherwise every jump has sign ``+1``.
    """
    if not 0 < s < 0.5:
        raise ArgumentError('s must lie in (0, 1/2), got {}'.format(s))
    if len(rates) != len(bundles):
        raise ArgumentError('need one rate per bundle')
    targets = np.broadcast_to(np.asarray(target_norm, dtype=float),
                              (len(bundles),))
    if np.any(targets <= 0) or not np.all(np.isfinite(targets)):
        raise ArgumentError('target norms must be positive and finite')

    fields, norms, atoms = [], [], []
    for b, (spec, rate, target) in enumerate(zip(bundles, rates, targets)):
        if not (rate >= 0 and math.isfinite(rate)):
            raise ArgumentError('bundle {} has invalid rate {}'
                                .format(b, rate))
        if len(spec) == 2 and not np.isscalar(spec[0][0]):
            coeffs = mode_bundle(n, spec[0], spec[1])
        else:
            coeffs = mode_bundle(n, spec)

        raw = sobolev_norm(SpectralField(n, coeffs), -s, 4)
        coeffs = coeffs * (target / raw)
        fields.append(coeffs)
        norms.append(float(target))

        if symmetric:
            atoms.append((2 * b, 0.5 * rate, (b, 1.0)))
            atoms.append((2 * b + 1, 0.5 * rate, (b, -1.0)))
        else:
            atoms.append((2 * b, rate, (b, 1.0)))

    return QGENoise(
        n=n, s=float(s), bundles=tuple(fields), norms=tuple(norms),
        marks=finite_marks(atoms),
    )


@dataclass(frozen=True, eq=False)
class FieldPath:
    """
    A field sampled at increasing times.

    Attributes:
        times: ``(m,)`` times.
        coeffs: ``(m, n, n)`` coefficients, value at each time.
    """
    times: np.ndarray
    coeffs: np.ndarray

    @property
    def n(self):
        return self.coeffs.shape[-1]

    @property
    def final(self):
        return SpectralField(self.n, self.coeffs[-1].copy())

    def field(self, j):
        return SpectralField(self.n, self.coeffs[j].copy())

    def index_of(self, times):
        """
        Positions of ``times`` in this path's grid.

        Raises:
            ArgumentError: if some time is not a grid node.
        """
        times = np.asarray(times, dtype=float)
        j = np.clip(np.searchsorted(self.times, times), 0,
                    self.times.size - 1)
        left = np.clip(j - 1, 0, self.times.size - 1)
        closer = np.abs(self.times[left] - times) < np.abs(self.times[j]
                                                           - times)
        j = np.where(closer, left, j)
        tol = 1e-9 * max(1.0, float(self.times[-1]))
        if np.any(np.abs(self.times[j] - times) > tol):
            raise ArgumentError('grids do not match')
        return j

    def restrict(self, times):
        return FieldPath(np.asarray(times, dtype=float),
                         self.coeffs[self.index_of(times)])


def ou_convolution_z(noise, T, grid, seed, replicate=0):
    """
    Sample :math:`Z` on ``grid`` by the exact per-mode recursion

    .. math::
        \\hat Z(t_{j+1}) = e^{-|k|^2\\Delta t}\\hat Z(t_j)
        + \\sum_{\\tau\\in(t_j, t_{j+1}]} e^{-|k|^2(t_{j+1}-\\tau)}\\hat\\xi
        - \\frac{1 - e^{-|k|^2\\Delta t}}{|k|^2}\\hat c,

    where :math:`\\hat c` is the compensator rate.

    Args:
        noise (QGENoise): The noise.
        T (float): Horizon.
        grid: Increasing times from 0 to ``T``.
        seed (int): Experiment seed.
        replicate (int): Replica index.

    Returns:
        FieldPath
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0 \
            or np.any(np.diff(grid) <= 0) or abs(grid[-1] - T) > 1e-12 * T:
        raise ArgumentError('grid must increase from 0 to T={}'.format(T))

    path = sample_jump_path(noise.marks, T, seed, replicate)
    debug('qge', 'replica {}: {} noise jumps'.format(replicate, len(path)))
    n = noise.n
    kk = wavenumber_squared(n)
    rate = noise.compensator()

    out = np.zeros((grid.size, n, n), dtype=complex)
    cell = np.searchsorted(grid, path.times, side='left')
    z = np.zeros((n, n), dtype=complex)
    for j in range(grid.size - 1):
        dt = grid[j + 1] - grid[j]
        decay = np.exp(-kk * dt)
        z = decay * z
        for e in np.nonzero(cell == j + 1)[0]:
            z += np.exp(-kk * (grid[j + 1] - path.times[e])) \
                * noise.jump(path.marks[e])
        if rate.any():
            with np.errstate(divide='ignore', invalid='ignore'):
                phi = np.where(kk > 0, -np.expm1(-kk * dt) / kk, dt)
            z -= phi * rate
        z[0, 0] = 0.0
        out[j + 1] = z

    return FieldPath(times=grid.copy(), coeffs=out)
