"""
Monte Carlo estimates with standard errors, reduced in a fixed pairwise
order so results do not depend on how replicas were scheduled.
"""
from dataclasses import dataclass
import math

import numpy as np
import scipy.stats

import constants


@dataclass(frozen=True)
class Estimate:
    """
    Attributes:
        value (float): Point estimate.
        se (float): Standard error; zero for exactly computed quantities.
    """
    value: float
    se: float = 0.0

    def to_dict(self):
        return {'value': self.value, 'se': self.se}


def pairwise_sum(values):
    """
    Sum by repeated halving: neighbours are added level by level. The order
    of additions depends only on the length of ``values``.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        return 0.0
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        x = x[0::2] + x[1::2]
    return float(x[0])


def mean_estimate(samples):
    samples = np.asarray(samples, dtype=float).ravel()
    n = samples.size
    mean = pairwise_sum(samples) / n
    if n < 2:
        return Estimate(mean, 0.0)
    var = pairwise_sum((samples - mean) ** 2) / (n - 1)
    return Estimate(mean, math.sqrt(var / n))


def ratio_estimate(lhs, rhs):
    """
    :math:`\\bar L / \\bar R` with the delta-method standard error
    :math:`\\mathrm{sd}(L - \\rho R) / (\\sqrt{n}|\\bar R|)`.

    A zero denominator gives ratio 0 when the numerator is zero too and
    ``inf`` otherwise.
    """
    lhs = np.asarray(lhs, dtype=float).ravel()
    rhs = np.asarray(rhs, dtype=float).ravel()
    n = lhs.size
    num = pairwise_sum(lhs) / n
    den = pairwise_sum(rhs) / n

    if den == 0:
        return Estimate(0.0 if num == 0 else math.inf, 0.0)

    ratio = num / den
    if n < 2:
        return Estimate(ratio, 0.0)
    resid = lhs - ratio * rhs
    centered = resid - pairwise_sum(resid) / n
    var = pairwise_sum(centered ** 2) / (n - 1)
    return Estimate(ratio, math.sqrt(var / n) / abs(den))


def fold_spread(lhs, rhs, n_folds=None):
    """
    Spread (max - min) of the ratio over contiguous replica folds, or None
    with fewer replicas than folds.
    """
    if n_folds is None:
        n_folds = constants.n_folds
    lhs = np.asarray(lhs, dtype=float).ravel()
    rhs = np.asarray(rhs, dtype=float).ravel()
    if lhs.size < n_folds or n_folds < 2:
        return None

    ratios = [
        ratio_estimate(l_fold, r_fold).value
        for l_fold, r_fold in zip(np.array_split(lhs, n_folds),
                                  np.array_split(rhs, n_folds))
    ]
    finite = [v for v in ratios if math.isfinite(v)]
    if len(finite) < len(ratios):
        return math.inf
    return max(finite) - min(finite)


def combined_se(lhs, rhs, c=1.0):
    return math.sqrt(lhs.se ** 2 + (c * rhs.se) ** 2)


def wilson_interval(hits, n, confidence=None):
    """Wilson score interval for ``hits`` successes out of ``n``."""
    if confidence is None:
        confidence = constants.confidence
    ci = scipy.stats.binomtest(int(hits), int(n)).proportion_ci(
        confidence_level=confidence, method='wilson'
    )
    return float(ci.low), float(ci.high)
