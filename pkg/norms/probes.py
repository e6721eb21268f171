"""
Monte Carlo diagnostics for a normed space: the Hoelder constant of the
power-norm derivative, the martingale type constant and the gamma-norm of
an operator into the space.
"""
from dataclasses import dataclass

import numpy as np

import constants
import rng
from errors import ArgumentError
from .space import norm, power_gradient, random_directions, dual_norm_estimate

_block = 4096


@dataclass(frozen=True)
class GammaFactor:
    """
    An operator :math:`g: \\mathbb{R}^k \\to E` in coordinates.

    Attributes:
        matrix: ``(dim, k)`` array.
    """
    matrix: np.ndarray

    @property
    def k(self):
        return self.matrix.shape[1]

    def __mul__(self, c):
        return GammaFactor(self.matrix * c)

    __rmul__ = __mul__


def holder_constant_probe(space, p, r, n_samples, seed,
                          n_directions=None):
    """
    Empirical supremum of

    .. math::
        \\frac{\\|\\psi_p'(x)-\\psi_p'(y)\\|}{(|x|+|y|)^{p-r}|x-y|^{r-1}}

    over random pairs. Pairs are drawn as ``y = x + eps*u`` with ``eps``
    log-uniform over four decades, so near-diagonal pairs are common.
    Both sides are homogeneous of degree ``p-1``, so ``x`` is drawn on the
    unit sphere.

    Args:
        space (NormedSpace): The space.
        p (float): Power, ``p >= r``.
        r (float): Hoelder exponent plus one.
        n_samples (int): Number of pairs; must be positive.
        seed (int): Stream seed.
        n_directions (int): Random unit directions used for the dual norm.
            Defaults to ``constants.probe_directions``.

    Returns:
        float: The largest observed ratio.
    """
    if n_samples < 1:
        raise ArgumentError('holder probe needs at least one sample pair')
    if p < r:
        raise ArgumentError('holder probe needs p >= r, got p={} r={}'.format(
            p, r
        ))
    if n_directions is None:
        n_directions = constants.probe_directions

    gen = rng.stream(seed, rng.PROBES, 0)
    directions = random_directions(space, n_directions, gen)

    best = 0.0
    remaining = n_samples
    while remaining > 0:
        m = min(remaining, _block)
        remaining -= m

        x = random_directions(space, m, gen)
        u = random_directions(space, m, gen)
        eps = 10.0 ** gen.uniform(-4.0, 0.6, size=m)
        y = x + eps[:, None] * u

        diff = power_gradient(space, x, p) - power_gradient(space, y, p)
        op = dual_norm_estimate(space, diff, directions)

        nx = norm(space, x)
        ny = norm(space, y)
        nd = norm(space, x - y)
        keep = nd > 0
        ratio = op[keep] * (nx[keep] + ny[keep]) ** (r - p) \
            * nd[keep] ** (1.0 - r)

        if ratio.size:
            best = max(best, float(np.max(ratio)))

    return best


def type_constant_probe(space, r, n_martingales, n_steps, seed):
    """
    Largest ratio :math:`E|M_n|^r / \\sum_{k\\le n} E|\\Delta M_k|^r` over
    ``n = 1..n_steps`` for random discrete martingales.

    Increments are :math:`\\varepsilon_k s_k v_k` with Rademacher signs
    :math:`\\varepsilon_k`, Gaussian directions :math:`v_k` and a scale
    :math:`s_k` depending on :math:`|M_{k-1}|`, so the scale is adapted and
    the increments are martingale differences.
    """
    if not 1 < r <= 2:
        raise ArgumentError('r must lie in (1,2], got {}'.format(r))
    if n_martingales < 1 or n_steps < 1:
        raise ArgumentError('need at least one martingale and one step')

    gen = rng.stream(seed, rng.PROBES, 1)

    m = np.zeros((n_martingales, space.dim))
    increments = 0.0
    best = 0.0
    for _ in range(n_steps):
        scale = 1.0 + 0.5 * np.tanh(norm(space, m))
        signs = gen.choice((-1.0, 1.0), size=n_martingales)
        v = gen.standard_normal((n_martingales, space.dim))
        dm = (signs * scale)[:, None] * v

        m = m + dm
        increments += np.mean(norm(space, dm) ** r)
        best = max(best, float(np.mean(norm(space, m) ** r) / increments))

    return best


def gamma_norm(space, g, n_gaussians, seed):
    """
    :math:`(E|g\\gamma|_E^2)^{1/2}` by Monte Carlo over standard Gaussian
    vectors. The same seed draws the same Gaussians, so scaling ``g``
    scales the estimate exactly.
    """
    if n_gaussians < 1:
        raise ArgumentError('gamma norm needs at least one Gaussian sample')
    matrix = np.asarray(g.matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != space.dim:
        raise ArgumentError(
            'gamma factor must have {} rows, got shape {}'.format(
                space.dim, matrix.shape
            )
        )

    gen = rng.stream(seed, rng.PROBES, 2)
    total = 0.0
    remaining = n_gaussians
    while remaining > 0:
        m = min(remaining, _block)
        remaining -= m
        gamma = gen.standard_normal((m, matrix.shape[1]))
        total += float(np.sum(norm(space, gamma @ matrix.T) ** 2))

    return (total / n_gaussians) ** 0.5
