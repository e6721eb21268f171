"""
Energy ledger for the :math:`Y` equation and the discrete interpolation
constants it is built from.

With :math:`C = C_R\\cdot L` where :math:`C_R` bounds
:math:`|\\mathcal{R}\\theta|_{L^4}/|\\theta|_{L^4}` and :math:`L` is the
Ladyzhenskaya constant, the energy estimate

.. math::
    \\frac12\\frac{d}{dt}|Y|^2_{L^2} + \\frac12|\\nabla Y|^2_{L^2}
    \\le \\frac12 C_1|Y|^2_{L^2}|\\tilde Z|^4_{L^4}
    + \\frac12 C_2|\\tilde Z|^4_{L^4},
    \\quad C_1 = \\frac{27C^4}{2},\\ C_2 = 2C^2,

and the two Gronwall bounds that follow from it are checked on a run.
"""
from dataclasses import dataclass, field
import math
from typing import Dict, Tuple

import numpy as np

import constants
from errors import ArgumentError
from log import log
from .fields import (
    SpectralField, dealias_mask, gradient_l2_norm, inner, l2_norm, lq_norm,
    sobolev_norm, transport_coeffs, transport_velocity
)

LEDGER_COLUMNS = (
    't', 'y_l2_sq', 'grad_y_l2_sq', 'z_l4', 'y_l4', 'ladyzhenskaya_ratio',
    'riesz_ratio', 'energy_lhs', 'energy_rhs', 'energy_fd_lhs',
    'gronwall_rhs',
)


def ladyzhenskaya_ratio(f):
    """
    :math:`|f|_{L^4} / (|\\nabla f|^{1/2}_{L^2}|f|^{1/2}_{L^2})`, or 0 for
    the zero field.
    """
    denom = math.sqrt(gradient_l2_norm(f) * l2_norm(f))
    if denom == 0:
        return 0.0
    return lq_norm(f.physical(), 4) / denom


def riesz_ratio(f):
    """:math:`|\\mathcal{R}f|_{L^4}/|f|_{L^4}` for the transport velocity."""
    size = lq_norm(f.physical(), 4)
    if size == 0:
        return 0.0
    return lq_norm(np.stack(transport_velocity(f.coeffs)), 4) / size


def riesz_l4_constant(fields):
    """Largest :func:`riesz_ratio` over ``fields``."""
    return max((riesz_ratio(f) for f in fields), default=0.0)


def gagliardo_nirenberg_constant(fields, s):
    """
    Largest :math:`|f|^4_{L^4}/(|f|^2_{W^{s,4}}|f|^2_{W^{-s,4}})` over
    ``fields``.
    """
    if not 0 < s < 1:
        raise ArgumentError('s must lie in (0, 1), got {}'.format(s))
    worst = 0.0
    for f in fields:
        denom = sobolev_norm(f, s, 4) ** 2 * sobolev_norm(f, -s, 4) ** 2
        if denom > 0:
            worst = max(worst, sobolev_norm(f, 0.0, 4) ** 4 / denom)
    return worst


@dataclass(frozen=True)
class LedgerCheck:
    """A ledger inequality. Checks with ``enforced`` off are diagnostics."""
    name: str
    lhs: float
    rhs: float
    passed: bool
    enforced: bool = True

    @property
    def margin(self):
        return self.rhs - self.lhs

    def to_dict(self):
        return {'name': self.name, 'lhs': self.lhs, 'rhs': self.rhs,
                'margin': self.margin, 'passed': self.passed,
                'enforced': self.enforced}


@dataclass(frozen=True)
class EnergyLedger:
    """
    Attributes:
        checks (tuple of LedgerCheck): ``energy`` (stepwise estimate, worst
            step), ``gronwall`` (sup bound on :math:`|Y|^2`),
            ``dissipation`` (bound on :math:`\\int|\\nabla Y|^2`) and the
            ``ladyzhenskaya`` diagnostic, which does not count towards
            :attr:`passed`.
        constants (dict): ``riesz``, ``ladyzhenskaya``, ``C``, ``C1``,
            ``C2``.
        rows (tuple of dict): One per grid time, keys ``LEDGER_COLUMNS``.
        flagged (tuple of str): Checks that need a closer look.
    """
    checks: Tuple[LedgerCheck, ...]
    constants: Dict[str, float]
    rows: Tuple[dict, ...]
    flagged: Tuple[str, ...] = field(default=())

    @property
    def passed(self):
        return all(check.passed for check in self.checks if check.enforced)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            'checks': [c.to_dict() for c in self.checks],
            'constants': dict(self.constants),
            'flagged': list(self.flagged),
            'passed': self.passed,
        }

    def csv_rows(self):
        return [dict(row) for row in self.rows]


def _tolerance(*values):
    return 1e-9 * max([1.0] + [abs(v) for v in values if math.isfinite(v)])


def energy_diagnostics(run):
    """
    Evaluate the energy estimate at every step, both Gronwall bounds and
    the Ladyzhenskaya inequality at every grid time.

    The stepwise estimate uses the exact tendency
    :math:`\\frac12\\frac{d}{dt}|Y|^2 = -|\\nabla Y|^2
    - \\langle B, Y\\rangle`;
    the forward difference of :math:`|Y|^2` is recorded next to it.
    Time integrals are left-point sums, matching the scheme.

    Returns:
        EnergyLedger
    """
    n = run.theta.n
    mask = dealias_mask(n)
    times = run.times
    zt = run.background
    m = times.size

    y_sq, grad_sq, z4, y4, lady, riesz, tendency = (np.zeros(m)
                                                    for _ in range(7))
    for j in range(m):
        y = SpectralField(n, run.y.coeffs[j])
        z = SpectralField(n, mask * zt.coeffs[j])
        theta = y + z
        y_sq[j] = l2_norm(y) ** 2
        grad_sq[j] = gradient_l2_norm(y) ** 2
        z4[j] = lq_norm(z.physical(), 4)
        y4[j] = lq_norm(y.physical(), 4)
        lady[j] = ladyzhenskaya_ratio(y)
        riesz[j] = riesz_ratio(theta)
        b = SpectralField(n, transport_coeffs(theta.coeffs, theta.coeffs,
                                              mask))
        tendency[j] = -grad_sq[j] - inner(b, y)

    c_r = max(1.0, float(np.max(riesz)))
    c_l = max(constants.ladyzhenskaya_constant, float(np.max(lady)))
    c = c_r * c_l
    c1 = 27.0 * c ** 4 / 2.0
    c2 = 2.0 * c ** 2

    dt = np.diff(times)
    zz = z4 ** 4
    energy_lhs = tendency + 0.5 * grad_sq
    energy_rhs = 0.5 * c1 * y_sq * zz + 0.5 * c2 * zz
    fd = np.append((np.diff(y_sq) / (2.0 * dt)) + 0.5 * grad_sq[1:], np.nan)

    # S_j = sum_{i<j} dt_i |Z_i|^4
    s = np.concatenate([[0.0], np.cumsum(dt * zz[:-1])])
    with np.errstate(over='ignore'):
        gronwall = np.exp(c1 * s) * y_sq[0] + c2 * np.concatenate([[0.0], [
            math.fsum(dt[i] * zz[i] * math.exp(min(c1 * (s[j] - s[i + 1]),
                                                   600.0))
                      for i in range(j))
            for j in range(1, m)
        ]])

    worst = int(np.argmax(energy_lhs - energy_rhs))
    checks = [
        LedgerCheck(
            'energy', float(energy_lhs[worst]), float(energy_rhs[worst]),
            bool(np.all(energy_lhs <= energy_rhs
                        + _tolerance(*energy_rhs, *energy_lhs))),
        ),
        LedgerCheck(
            'gronwall', float(np.max(y_sq)), float(gronwall[-1]),
            bool(np.all(y_sq <= gronwall + _tolerance(*gronwall))),
        ),
    ]

    dissipation = math.fsum(dt * grad_sq[1:])
    budget = y_sq[0] + math.fsum(dt * (c1 * y_sq[:-1] + c2) * zz[:-1])
    checks.append(LedgerCheck(
        'dissipation', dissipation, budget,
        dissipation <= budget + _tolerance(budget),
    ))

    flagged = []
    excess = float(np.max(lady)) - constants.ladyzhenskaya_constant
    if excess > constants.ladyzhenskaya_slack:
        flagged.append('ladyzhenskaya')
        log('qge', 'Ladyzhenskaya ratio {:.8f} exceeds 2^(1/4)'.format(
            float(np.max(lady))
        ))
    checks.append(LedgerCheck(
        'ladyzhenskaya', float(np.max(lady)),
        constants.ladyzhenskaya_constant, not flagged, enforced=False,
    ))

    rows = tuple(
        dict(zip(LEDGER_COLUMNS, (
            float(times[j]), float(y_sq[j]), float(grad_sq[j]),
            float(z4[j]), float(y4[j]), float(lady[j]), float(riesz[j]),
            float(energy_lhs[j]), float(energy_rhs[j]), float(fd[j]),
            float(gronwall[j]),
        )))
        for j in range(m)
    )
    ledger = EnergyLedger(
        checks=tuple(checks),
        constants={'riesz': c_r, 'ladyzhenskaya': c_l, 'C': c, 'C1': c1,
                   'C2': c2},
        rows=rows, flagged=tuple(flagged),
    )
    log('qge', 'energy ledger: {}'.format(
        ', '.join('{}={}'.format(ch.name, 'pass' if ch.passed
                                   else 'FAIL' if ch.enforced else 'flagged')
                  for ch in checks)
    ))
    return ledger


def z_moment(run, s):
    """:math:`\\sup_t |Z(t)|^2_{W^{-s,4}}` over the run's grid."""
    return max(
        sobolev_norm(SpectralField(run.z.n, c), -s, 4) ** 2
        for c in run.z.coeffs
    )
