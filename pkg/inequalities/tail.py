"""
Exponential tail bound for pure-jump stochastic convolutions with a
contraction semigroup in a 2-smooth space:

.. math::
    P(\\sup_{t \\le T}|X_t| \\ge R)
    \\le C_\\lambda e^{-(1+\\lambda R^2)^{1/2}},
    \\quad C_\\lambda = e^{1 + 3CM_\\lambda},

where :math:`M_\\lambda` bounds :math:`\\int_0^T\\int e^{\\lambda^{1/2}|\\xi|}
\\lambda|\\xi|^2 d\\nu ds` and :math:`C` is the Lipschitz constant of
:math:`f_\\lambda'` divided by :math:`\\lambda`.
"""
from dataclasses import dataclass, field
import math
from typing import Dict, Tuple

import numpy as np

import constants
import norms
import rng
from errors import ArgumentError, HypothesisViolatedError
from log import log
from ito import exponential_tail
from .estimates import wilson_interval
from .replicas import collect

TAIL_COLUMNS = (
    'R', 'hits', 'n_paths', 'probability', 'wilson_low', 'wilson_high',
    'bound', 'subgaussian_bound', 'status',
)


@dataclass(frozen=True)
class TailRow:
    R: float
    hits: int
    n_paths: int
    probability: float
    wilson_low: float
    wilson_high: float
    bound: float
    subgaussian_bound: float

    @property
    def status(self):
        """
        ``'holds'`` when the upper Wilson limit is below the bound,
        ``'violated'`` when the lower limit is above it, otherwise
        ``'inconclusive'``.
        """
        if self.wilson_high <= self.bound:
            return 'holds'
        if self.wilson_low > self.bound:
            return 'violated'
        return 'inconclusive'

    def to_dict(self):
        return {
            'R': self.R, 'hits': self.hits, 'n_paths': self.n_paths,
            'probability': self.probability, 'wilson_low': self.wilson_low,
            'wilson_high': self.wilson_high, 'bound': self.bound,
            'subgaussian_bound': self.subgaussian_bound,
            'status': self.status,
        }


@dataclass(frozen=True)
class TailReport:
    """
    Attributes:
        lam (float): :math:`\\lambda`.
        m_lambda (float): Hypothesis integral :math:`M_\\lambda`.
        smoothness_constant (float): Calibrated :math:`C`.
        c_lambda (float): :math:`e^{1+3CM_\\lambda}`.
        rows (tuple of TailRow): One row per radius, increasing.
        monotone (bool): Empirical tail non-increasing in R.
    """
    lam: float
    m_lambda: float
    smoothness_constant: float
    c_lambda: float
    rows: Tuple[TailRow, ...]
    monotone: bool
    diagnostics: Dict[str, object] = field(default_factory=dict)

    name = 'tail'

    @property
    def holds(self):
        return all(row.status == 'holds' for row in self.rows)

    @property
    def violated(self):
        return any(row.status == 'violated' for row in self.rows)

    def to_dict(self):
        return {
            'name': self.name, 'lambda': self.lam,
            'm_lambda': self.m_lambda,
            'smoothness_constant': self.smoothness_constant,
            'c_lambda': self.c_lambda,
            'rows': [row.to_dict() for row in self.rows],
            'monotone': self.monotone,
            'verdict': 'violated' if self.violated else (
                'holds' if self.holds else 'inconclusive'
            ),
            'diagnostics': dict(self.diagnostics),
        }

    def csv_rows(self):
        return [row.to_dict() for row in self.rows]


def hypothesis_integral(space, marks, xi, region, T, lam):
    """
    :math:`\\int_0^T\\int e^{\\lambda^{1/2}|\\xi|}\\lambda|\\xi|^2
    \\nu(dz)ds` by Gauss-Legendre in time and the mark quadrature.

    Raises:
        HypothesisViolatedError: if the integral is not finite.
    """
    def integrand(t, z):
        size = norms.norm(space, np.asarray(xi(t, z), dtype=float))
        with np.errstate(over='ignore', invalid='ignore'):
            return np.exp(math.sqrt(lam) * size) * lam * size ** 2

    x, w = np.polynomial.legendre.leggauss(constants.gauss_legendre_nodes)
    t = 0.5 * T * (x + 1.0)
    with np.errstate(over='ignore', invalid='ignore'):
        value = 0.5 * T * float(np.dot(w, marks.expect(integrand, t, region)))

    if not math.isfinite(value):
        raise HypothesisViolatedError(
            'exponential moment integral is not finite for lambda={}'.format(
                lam
            )
        )
    return value


def lipschitz_constant(space, lam, n_samples, seed):
    """
    Empirical
    :math:`\\sup\\|f_\\lambda'(x) - f_\\lambda'(y)\\|/(\\lambda|x-y|)`
    over random pairs at radii spread over four decades around
    :math:`\\lambda^{-1/2}`.
    """
    if n_samples < 1:
        raise ArgumentError('need at least one sample pair')
    tf = exponential_tail(space, lam)
    gen = rng.stream(seed, rng.PROBES, 5)
    directions = norms.space.random_directions(
        space, constants.probe_directions, gen
    )

    radius = 10.0 ** gen.uniform(-2.0, 2.0, size=n_samples) / math.sqrt(lam)
    x = radius[:, None] * norms.space.random_directions(space, n_samples, gen)
    eps = radius * 10.0 ** gen.uniform(-4.0, 0.0, size=n_samples)
    y = x + eps[:, None] * norms.space.random_directions(space, n_samples, gen)

    diff = norms.space.dual_norm_estimate(
        space, tf.grad(x) - tf.grad(y), directions
    )
    dist = norms.norm(space, x - y)
    keep = dist > 0
    return float(np.max(diff[keep] / (lam * dist[keep])))


def tail_report(spec, lam, R_grid, n_calibration=4096, confidence=None):
    """
    Empirical tail probabilities of :math:`\\sup_t|X_t|` with Wilson
    intervals against :math:`C_\\lambda e^{-(1+\\lambda R^2)^{1/2}}` and the
    sub-Gaussian form :math:`3e^{-R^2/(12CM_\\lambda)}`.

    ``confidence`` sets the Wilson level, default
    :data:`constants.confidence`.

    Raises:
        ArgumentError: for a non-contraction semigroup, a space that is not
            2-smooth, or an integrand with a Wiener part or drift.
        HypothesisViolatedError: if :math:`M_\\lambda` is not finite.
    """
    if not lam > 0:
        raise ArgumentError('lambda must be positive, got {}'.format(lam))
    if spec.space.smoothness_r != 2:
        raise ArgumentError('the tail bound needs a 2-smooth space')
    if spec.family.g is not None or spec.family.drift is not None:
        raise ArgumentError('the tail bound covers pure-jump integrands')
    if spec.semigroup is not None and spec.semigroup.growth_alpha != 0:
        raise ArgumentError('the tail bound needs a contraction semigroup')
    R_grid = np.sort(np.asarray(R_grid, dtype=float))
    if R_grid.size == 0 or np.any(R_grid <= 0):
        raise ArgumentError('radii must be positive')

    integrand = spec.family.integrand()
    m_lambda = hypothesis_integral(
        spec.space, spec.marks, integrand.xi,
        integrand.xi_region(spec.marks), spec.T, lam
    )
    c = lipschitz_constant(spec.space, lam, n_calibration, spec.seed)
    c_lambda = math.exp(1.0 + 3.0 * c * m_lambda)
    log('tail', 'M_lambda={:.6g} C={:.4g} C_lambda={:.6g}'.format(
        m_lambda, c, c_lambda
    ))

    samples = collect(spec, 'convolution')
    n = spec.n_paths
    rows = []
    for R in R_grid:
        hits = int(np.count_nonzero(samples.sup >= R))
        low, high = wilson_interval(hits, n, confidence)
        if c * m_lambda > 0:
            sub = 3.0 * math.exp(-R ** 2 / (12.0 * c * m_lambda))
        else:
            sub = 0.0
        rows.append(TailRow(
            R=float(R), hits=hits, n_paths=n, probability=hits / n,
            wilson_low=low, wilson_high=high,
            bound=c_lambda * math.exp(-math.sqrt(1.0 + lam * R ** 2)),
            subgaussian_bound=sub,
        ))

    probs = np.array([row.probability for row in rows])
    return TailReport(
        lam=float(lam), m_lambda=m_lambda, smoothness_constant=c,
        c_lambda=c_lambda, rows=tuple(rows),
        monotone=bool(np.all(np.diff(probs) <= 0)),
        diagnostics={'mean_sup': float(np.mean(samples.sup))},
    )
