"""
Semigroups :math:`e^{tA}` acting on coordinate vectors.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from errors import ArgumentError
from log import log
import norms
import rng


@dataclass(frozen=True, eq=False)
class Semigroup:
    """
    Attributes:
        form (str): ``'matrix'`` or ``'diagonal'``.
        dim (int): Dimension of the space acted on.
        growth_alpha (float): Declared :math:`\\alpha \\ge 0` with
            :math:`\\|e^{tA}\\| \\le e^{\\alpha t}`.
        A: ``(dim, dim)`` generator for the matrix form.
        eigs: ``(dim,)`` eigenvalues for the diagonal form.
    """
    form: str
    dim: int
    growth_alpha: float
    A: Optional[np.ndarray] = None
    eigs: Optional[np.ndarray] = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_trivial(self):
        if self.form == 'diagonal':
            return not np.any(self.eigs)
        return not np.any(self.A)

    def _matrix(self, t):
        key = float(t)
        if key not in self._cache:
            self._cache[key] = scipy.linalg.expm(t * self.A)
        return self._cache[key]

    def operator(self, t):
        """Dense matrix of :math:`e^{tA}`."""
        if self.form == 'diagonal':
            return np.diag(np.exp(self.eigs * t))
        return self._matrix(t)

    def apply(self, t, x):
        """
        :math:`e^{tA}x` for a vector or a stack of row vectors. ``t`` may be
        an array broadcasting against the leading axes of ``x`` for the
        diagonal form.
        """
        x = np.asarray(x, dtype=float)
        if self.form == 'diagonal':
            t = np.asarray(t, dtype=float)
            return np.exp(self.eigs * t[..., None]) * x
        return x @ self._matrix(t).T

    def phi1(self, dt):
        """
        :math:`\\int_0^{dt} e^{\\lambda s} ds` per eigenvalue, for an array
        of steps. Diagonal form only.
        """
        dt = np.asarray(dt, dtype=float)[..., None]
        lam = self.eigs
        with np.errstate(divide='ignore', invalid='ignore'):
            out = np.where(lam == 0, dt, np.expm1(lam * dt) / lam)
        return out

    def growth_ratio(self, space, times, n_directions, seed):
        """
        Largest observed :math:`|e^{tA}h|/(|h| e^{\\alpha t})` over random
        unit directions and the given times. Values above one indicate the
        declared growth bound fails in ``space``.
        """
        gen = rng.stream(seed, rng.PROBES, 3)
        h = norms.space.random_directions(space, n_directions, gen)
        worst = 0.0
        for t in times:
            moved = norms.norm(space, self.apply(t, h))
            worst = max(worst, float(np.max(moved))
                        * float(np.exp(-self.growth_alpha * t)))
        return worst


def _check_alpha(alpha, floor, strict):
    if alpha is None:
        return max(0.0, floor)
    if alpha < 0:
        raise ArgumentError('growth bound must be >= 0, got {}'.format(alpha))
    if alpha < floor - 1e-12:
        msg = ('declared growth bound {} is below the generator bound {}'
               .format(alpha, floor))
        # Only the Euclidean bound is exact for a dense generator
        if strict:
            raise ArgumentError(msg)
        log('semigroup', msg)
    return float(alpha)


def matrix_semigroup(A, alpha=None):
    """
    Semigroup generated by a dense matrix. The default growth bound is
    the Euclidean logarithmic norm :math:`\\max(0, \\lambda_{max}((A+A^T)/2))`.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ArgumentError('generator must be square, got {}'.format(A.shape))

    lognorm = float(np.max(np.linalg.eigvalsh(0.5 * (A + A.T))))
    return Semigroup(
        form='matrix', dim=A.shape[0], A=A,
        growth_alpha=_check_alpha(alpha, lognorm, False)
    )


def diagonal_semigroup(eigs, alpha=None):
    eigs = np.atleast_1d(np.asarray(eigs, dtype=float))
    return Semigroup(
        form='diagonal', dim=eigs.shape[0], eigs=eigs,
        growth_alpha=_check_alpha(alpha, float(np.max(eigs)), True)
    )


def trivial_semigroup(dim):
    return diagonal_semigroup(np.zeros(dim))
