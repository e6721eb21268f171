"""
Reports comparing both sides of the maximal inequalities for stochastic
integrals and convolutions.

The inequalities hold with constants that are not known in general. A
variant is judged against a declared constant only where classical theory
fixes one (Doob's constant for square-integrable martingales in a Hilbert
space, :math:`p^p` for the compensator inequality); otherwise the verdict
records the stabilized empirical constant. A declared constant :math:`c`
is violated when

.. math::
    \\hat L - c\\hat R
    > n_\\sigma \\sqrt{\\mathrm{se}_L^2 + c^2\\mathrm{se}_R^2}.
"""
from dataclasses import dataclass, field
import math
from typing import Dict, Optional, Tuple

import numpy as np

import constants
import norms
from errors import ArgumentError
from log import log
from integrator import trivial_semigroup, uniform_grid
from .estimates import (
    Estimate, combined_se, fold_spread, mean_estimate, ratio_estimate
)
from .replicas import collect

CSV_COLUMNS = (
    'report', 'variant', 'kind', 'p', 'r', 'lhs', 'lhs_se', 'rhs', 'rhs_se',
    'ratio', 'ratio_se', 'fold_spread', 'prefactor', 'constant', 'declared',
    'status', 'homogeneity_drift', 'homogeneity_se', 'homogeneity_ok',
)


@dataclass(frozen=True)
class Verdict:
    """
    Attributes:
        holds (bool): False only for a significant violation.
        constant (float): The declared constant, or the empirical ratio
            plus ``n_sigma`` standard errors when none is declared.
        declared (bool): Whether ``constant`` was declared.
        details (str): Why the variant is violated.
    """
    holds: bool
    constant: float
    declared: bool = False
    details: str = ''

    @property
    def status(self):
        return 'holds_with_constant' if self.holds else 'violated'

    def to_dict(self):
        out = {
            'status': self.status, 'constant': self.constant,
            'declared': self.declared,
        }
        if self.details:
            out['details'] = self.details
        return out


@dataclass(frozen=True)
class Homogeneity:
    """Ratio drift when the integrand is doubled on the same paths."""
    drift: float
    se: float
    ok: bool

    def to_dict(self):
        return {'drift': self.drift, 'se': self.se, 'ok': self.ok}


@dataclass(frozen=True)
class Variant:
    """
    One right-hand side of an inequality.

    Attributes:
        label (str): Variant name, e.g. ``'counting_r'``.
        lhs, rhs, ratio (Estimate): Both sides and their ratio. ``rhs``
            includes ``prefactor``.
        verdict (Verdict): Judgement of this variant.
        kind (str): ``'upper'`` for ``lhs <= c rhs``, ``'equality'`` for
            identities.
        prefactor (float): Growth factor of the semigroup, 1 without one.
        fold_spread (float): Spread of the ratio over seed folds.
        homogeneity (Homogeneity): Drift under doubling, or None.
    """
    label: str
    lhs: Estimate
    rhs: Estimate
    ratio: Estimate
    verdict: Verdict
    kind: str = 'upper'
    prefactor: float = 1.0
    fold_spread: Optional[float] = None
    homogeneity: Optional[Homogeneity] = None

    def to_dict(self):
        return {
            'label': self.label, 'kind': self.kind,
            'lhs': self.lhs.to_dict(), 'rhs': self.rhs.to_dict(),
            'ratio': self.ratio.to_dict(), 'prefactor': self.prefactor,
            'fold_spread': self.fold_spread,
            'verdict': self.verdict.to_dict(),
            'homogeneity': None if self.homogeneity is None
            else self.homogeneity.to_dict(),
        }


@dataclass(frozen=True)
class InequalityReport:
    """
    Attributes:
        name (str): Inequality identifier.
        p, r (float): Exponents.
        lhs (Estimate): Left-hand side shared by the variants.
        variants (tuple of Variant): Right-hand sides.
        warnings (tuple of str): Resolution and growth-bound warnings.
        diagnostics (dict): Extra numbers specific to the report.
        companions (tuple of InequalityReport): Related inequalities
            evaluated on the same samples.
    """
    name: str
    p: float
    r: float
    lhs: Estimate
    variants: Tuple[Variant, ...]
    warnings: Tuple[str, ...] = ()
    diagnostics: Dict[str, object] = field(default_factory=dict)
    companions: Tuple['InequalityReport', ...] = ()

    @property
    def violated(self):
        return any(not v.verdict.holds for v in self.variants) or any(
            c.violated for c in self.companions
        )

    @property
    def homogeneous(self):
        return all(
            v.homogeneity is None or v.homogeneity.ok for v in self.variants
        ) and all(c.homogeneous for c in self.companions)

    def to_dict(self):
        return {
            'name': self.name, 'p': self.p, 'r': self.r,
            'lhs': self.lhs.to_dict(),
            'rhs_variants': [v.to_dict() for v in self.variants],
            'verdict': 'violated' if self.violated else 'holds',
            'warnings': list(self.warnings),
            'diagnostics': {
                k: v.to_dict() if isinstance(v, Estimate) else v
                for k, v in self.diagnostics.items()
            },
            'companions': [c.to_dict() for c in self.companions],
        }

    def csv_rows(self):
        rows = []
        for v in self.variants:
            h = v.homogeneity
            rows.append({
                'report': self.name, 'variant': v.label, 'kind': v.kind,
                'p': self.p, 'r': self.r,
                'lhs': v.lhs.value, 'lhs_se': v.lhs.se,
                'rhs': v.rhs.value, 'rhs_se': v.rhs.se,
                'ratio': v.ratio.value, 'ratio_se': v.ratio.se,
                'fold_spread': v.fold_spread, 'prefactor': v.prefactor,
                'constant': v.verdict.constant,
                'declared': v.verdict.declared,
                'status': v.verdict.status,
                'homogeneity_drift': None if h is None else h.drift,
                'homogeneity_se': None if h is None else h.se,
                'homogeneity_ok': None if h is None else h.ok,
            })
        for c in self.companions:
            rows.extend(c.csv_rows())
        return rows


def judge(lhs, rhs, ratio, constant=None, kind='upper'):
    """Verdict for one variant, see the module docstring."""
    n_sigma = constants.n_sigma
    if not (math.isfinite(lhs.value) and math.isfinite(rhs.value)):
        return Verdict(False, math.inf, constant is not None,
                       'estimate is not finite')

    if constant is None:
        if rhs.value == 0:
            if lhs.value > n_sigma * lhs.se:
                return Verdict(False, math.inf, False,
                               'right-hand side vanishes, left-hand side '
                               'does not')
            return Verdict(True, 0.0, False)
        return Verdict(True, ratio.value + n_sigma * ratio.se, False)

    slack = max(
        n_sigma * combined_se(lhs, rhs, constant),
        1e-12 * max(abs(lhs.value), abs(constant * rhs.value))
    )
    excess = lhs.value - constant * rhs.value
    bad = abs(excess) > slack if kind == 'equality' else excess > slack
    if bad:
        return Verdict(
            False, constant, True,
            'lhs - {:g}*rhs = {:.6g} exceeds {:g} combined SE ({:.6g})'.format(
                constant, excess, n_sigma, slack
            )
        )
    return Verdict(True, constant, True)


def _homogeneity(ratio, scaled_ratio):
    drift = scaled_ratio.value - ratio.value
    se = math.hypot(ratio.se, scaled_ratio.se)
    if not math.isfinite(drift):
        # 0/0 on both scales is still homogeneous
        return Homogeneity(drift, se, ratio.value == scaled_ratio.value)
    tol = constants.n_sigma * se + 1e-9 * max(1.0, abs(ratio.value))
    return Homogeneity(drift, se, abs(drift) <= tol)


@dataclass(frozen=True)
class _Side:
    label: str
    rhs: object
    constant: Optional[float] = None
    kind: str = 'upper'
    prefactor: float = 1.0


def _variant(side, lhs_fn, samples, scaled):
    lhs_s = lhs_fn(samples)
    rhs_s = side.prefactor * side.rhs(samples)
    lhs, rhs = mean_estimate(lhs_s), mean_estimate(rhs_s)
    ratio = ratio_estimate(lhs_s, rhs_s)

    homogeneity = None
    if scaled is not None:
        scaled_ratio = ratio_estimate(
            lhs_fn(scaled), side.prefactor * side.rhs(scaled)
        )
        homogeneity = _homogeneity(ratio, scaled_ratio)

    return Variant(
        label=side.label, lhs=lhs, rhs=rhs, ratio=ratio,
        verdict=judge(lhs, rhs, ratio, side.constant, side.kind),
        kind=side.kind, prefactor=side.prefactor,
        fold_spread=fold_spread(lhs_s, rhs_s), homogeneity=homogeneity,
    )


def _resolution_warnings(samples):
    sup = float(np.mean(samples.sup))
    variation = float(np.mean(samples.variation))
    if sup > 0 and variation > constants.resolution_warning * sup:
        return ('sup under-resolved: mean continuous move between nodes is '
                '{:.3g} of the mean sup; raise n_steps'.format(
                    variation / sup),)
    return ()


def _report(name, spec, sides, lhs_fn, samples, scaled, warnings=(),
            diagnostics=None, companions=(), p=None):
    variants = tuple(_variant(s, lhs_fn, samples, scaled) for s in sides)
    report = InequalityReport(
        name=name, p=float(spec.p if p is None else p), r=float(spec.r),
        lhs=mean_estimate(lhs_fn(samples)), variants=variants,
        warnings=tuple(warnings), diagnostics=dict(diagnostics or {}),
        companions=tuple(companions),
    )
    for v in variants:
        log('mc', '{} {}: ratio {:.4g} +- {:.2g}, {}'.format(
            name, v.label, v.ratio.value, v.ratio.se, v.verdict.status
        ))
        if v.homogeneity is not None and not v.homogeneity.ok:
            log('mc', '{} {}: ratio drifts by {:.3g} under scaling'.format(
                name, v.label, v.homogeneity.drift
            ))
    return report


def _samples(spec, process, exponents, baseline=False, identity=False):
    samples = collect(spec, process, exponents, baseline=baseline,
                      identity=identity)
    scaled = None
    if spec.check_homogeneity:
        scaled = collect(spec, process, exponents,
                         family=spec.family.scaled(2.0), baseline=baseline,
                         identity=identity)
    return samples, scaled


def _doob(spec):
    return spec.space.is_hilbert and spec.p == 2 and spec.r == 2


def _sup_power(p):
    return lambda s: s.sup ** p


def _counting(e, power=1.0):
    return lambda s: s.counting(e) ** power


def _compensated(e, power=1.0):
    return lambda s: s.compensated(e) ** power


def _two_term(p, r):
    return lambda s: s.compensated(p) + s.compensated(r) ** (p / r)


def bdg_report(spec):
    """
    :math:`E\\sup_t|u_t|^p` against
    :math:`E(\\int\\int|\\xi|^r dN)^{p/r}` for :math:`p \\ge 1`. With
    :math:`p = r = 2` in a Hilbert space Doob's constant 4 is declared.
    """
    p, r = spec.p, spec.r
    if p < 1:
        raise ArgumentError('bdg report needs p >= 1, got {}'.format(p))

    samples, scaled = _samples(spec, 'compensated', (r,))
    doob = constants.doob_constant if _doob(spec) else None
    sides = [_Side('counting_r', _counting(r, p / r), doob)]
    return _report('bdg', spec, sides, _sup_power(p), samples, scaled,
                   _resolution_warnings(samples))


def small_p_reports(spec):
    """
    One report per right-hand side for :math:`p \\le r`:

    - ``compensator_r``: :math:`E(\\int\\int|\\xi|^r d\\nu ds)^{p/r}`,
      for :math:`0 < p \\le r`;
    - ``counting_r``: :math:`E(\\int\\int|\\xi|^r dN)^{p/r}`,
    - ``compensator_p``: :math:`E\\int\\int|\\xi|^p d\\nu ds`,
    - ``counting_p``: :math:`E\\int\\int|\\xi|^p dN`, each for
      :math:`1 \\le p \\le r`.

    The counting and compensator forms of the ``r`` functional bound the
    same left-hand side; the renderer shows the smaller of the two.
    """
    p, r = spec.p, spec.r
    if p > r:
        raise ArgumentError('small-p variants need p <= r, got p={} r={}'
                            .format(p, r))

    samples, scaled = _samples(spec, 'compensated', (r, p))
    doob = constants.doob_constant if _doob(spec) else None
    sides = [_Side('compensator_r', _compensated(r, p / r), doob)]
    if p >= 1:
        sides += [
            _Side('counting_r', _counting(r, p / r), doob),
            _Side('compensator_p', _compensated(p), doob),
            _Side('counting_p', _counting(p), doob),
        ]

    warnings = _resolution_warnings(samples)
    return [
        _report('small_p.' + side.label, spec, [side], _sup_power(p), samples,
                scaled, warnings)
        for side in sides
    ]


def lp_report(spec):
    """
    :math:`E\\sup_t|u_t|^p` against
    :math:`E\\int\\int|\\xi|^p d\\nu ds + E(\\int\\int|\\xi|^r d\\nu ds)^{p/r}`
    for :math:`p \\ge r`, with the companion bound of
    :math:`E(\\int\\int|\\xi|^r dN)^{p/r}` by the same right-hand side.
    """
    p, r = spec.p, spec.r
    if p < r:
        raise ArgumentError('lp report needs p >= r, got p={} r={}'.format(
            p, r
        ))

    samples, scaled = _samples(spec, 'compensated', (r, p))
    # Doob: E sup|u|^2 <= 4 E|u_T|^2 and the two-term side is 2 E|u_T|^2
    declared = 0.5 * constants.doob_constant if _doob(spec) else None
    companion = _report(
        'lp.companion', spec,
        [_Side('two_term', _two_term(p, r), 1.0 if p == r else None)],
        _counting(r, p / r), samples, scaled
    )
    return _report(
        'lp', spec, [_Side('two_term', _two_term(p, r), declared)],
        _sup_power(p), samples, scaled, _resolution_warnings(samples),
        companions=(companion,)
    )


def kallenberg_report(spec, p=None):
    """
    :math:`E(\\int\\int f\\,d\\nu ds)^p \\le p^p E(\\int\\int f\\,dN)^p` for
    :math:`f = |\\xi|_E`. The left-hand side is exact for deterministic
    families; at :math:`p = 1` both sides agree and the variant is judged
    as an identity.
    """
    p = spec.p if p is None else p
    if p < 1:
        raise ArgumentError('compensator inequality needs p >= 1, got {}'
                            .format(p))

    samples, scaled = _samples(spec, 'compensated', (1.0,))
    if p == 1:
        side = _Side('counting_1', _counting(1.0), 1.0, 'equality')
    else:
        side = _Side('counting_1', _counting(1.0, p), float(p) ** p)
    return _report('kallenberg', spec, [side], _compensated(1.0, p),
                   samples, scaled, p=p)


def compensation_report(spec):
    """
    The compensation identity :math:`E\\int\\int\\xi\\,dN =
    \\int\\int\\xi\\,d\\nu ds`, one equality variant per coordinate.
    """
    samples = collect(spec, 'compensated', (), identity=True)

    variants = []
    for i in range(spec.space.dim):
        jumps, comp = samples.jump_sum[:, i], samples.compensator[:, i]
        lhs, rhs = mean_estimate(jumps), mean_estimate(comp)
        ratio = ratio_estimate(jumps, comp)
        variants.append(Variant(
            label='coordinate_{}'.format(i), lhs=lhs, rhs=rhs, ratio=ratio,
            verdict=judge(lhs, rhs, ratio, 1.0, 'equality'),
            kind='equality', fold_spread=fold_spread(jumps, comp),
        ))

    report = InequalityReport(
        name='compensation', p=float(spec.p), r=float(spec.r),
        lhs=variants[0].lhs, variants=tuple(variants),
        warnings=_resolution_warnings(samples),
        diagnostics={'mean_sup': mean_estimate(samples.sup)},
    )
    log('mc', 'compensation identity {}'.format(
        'violated' if report.violated else 'holds'
    ))
    return report


def convolution_maximal_report(spec):
    """
    Maximal inequalities for :math:`X_t = \\int_0^t\\int e^{(t-s)A}\\xi\\,
    \\tilde N(ds,dz)`, every right-hand side multiplied by
    :math:`e^{\\alpha pT}`:

    - ``counting_r`` and ``two_term`` for :math:`p \\ge r`;
    - ``compensator_r`` for :math:`0 < p \\le r`.

    For a non-trivial semigroup the left-hand side of the plain integral on
    the same paths is reported as ``lhs_without_semigroup``.
    """
    if spec.semigroup is None:
        raise ArgumentError('the convolution report needs a semigroup')
    p, r, sg = spec.p, spec.r, spec.semigroup
    prefactor = math.exp(sg.growth_alpha * p * spec.T)

    exponents = (r, p) if p >= r else (r,)
    samples, scaled = _samples(spec, 'convolution', exponents,
                               baseline=not sg.is_trivial)

    doob = _doob(spec) and sg.is_trivial
    sides = []
    if p >= r:
        sides += [
            _Side('counting_r', _counting(r, p / r),
                  constants.doob_constant if doob else None,
                  prefactor=prefactor),
            _Side('two_term', _two_term(p, r),
                  0.5 * constants.doob_constant if doob else None,
                  prefactor=prefactor),
        ]
    if p <= r:
        sides.append(_Side('compensator_r', _compensated(r, p / r),
                           constants.doob_constant if doob else None,
                           prefactor=prefactor))

    warnings = list(_resolution_warnings(samples))
    diagnostics = {'growth_alpha': sg.growth_alpha}
    if not sg.is_trivial:
        lhs = mean_estimate(samples.sup ** p)
        base = mean_estimate(samples.baseline_sup ** p)
        diagnostics['lhs_without_semigroup'] = base
        if lhs.value - base.value > constants.n_sigma * combined_se(lhs, base):
            warnings.append('semigroup run exceeds the plain integral by '
                            '{:.3g}'.format(lhs.value - base.value))

    grid = uniform_grid(spec.T, min(spec.n_steps, 64))
    growth = sg.growth_ratio(spec.space, grid, constants.probe_directions,
                             spec.seed)
    diagnostics['growth_ratio'] = growth
    if growth > 1 + 1e-9:
        warnings.append('declared growth bound fails in this norm: ratio '
                        '{:.6g}'.format(growth))

    return _report('conv_maximal', spec, sides, _sup_power(p), samples,
                   scaled, warnings, diagnostics)


def _time_integral(fn, T):
    x, w = np.polynomial.legendre.leggauss(constants.gauss_legendre_nodes)
    t = 0.5 * T * (x + 1.0)
    return 0.5 * T * float(np.dot(w, fn(t)))


def gamma_integral(space, g, T, seed=0):
    """
    :math:`\\int_0^T \\|g_s\\|_{\\gamma}^2 ds`; the Hilbert-Schmidt norm in
    a Hilbert space, a Monte Carlo gamma norm otherwise.
    """
    def squared(t):
        mats = np.asarray(g(t), dtype=float)
        if space.is_hilbert:
            return np.sum(mats ** 2, axis=(1, 2))
        return np.array([
            norms.gamma_norm(space, norms.GammaFactor(m),
                             constants.gamma_gaussians, seed) ** 2
            for m in mats
        ])
    return _time_integral(squared, T)


def drift_integral(space, a, T):
    """:math:`\\int_0^T |a_s|_E ds`."""
    return _time_integral(lambda t: norms.norm(space, np.asarray(a(t))), T)


def levy_maximal_report(spec):
    """
    Maximal inequality for the Levy-type convolution
    :math:`\\int e^{(t-s)A}g\\,dW + \\int\\int e^{(t-s)A}\\xi\\,\\tilde N`,
    :math:`p \\ge 2`, in a 2-smooth space:

    - ``gaussian_jump``: :math:`e^{\\alpha T}[E(\\int\\|g\\|_\\gamma^2)^{p/2}
      + E\\int\\int|\\xi|^p d\\nu ds + E(\\int\\int|\\xi|^2 d\\nu ds)^{p/2}]`.

    With a trivial semigroup the process may carry a drift and two more
    variants are reported, both adding :math:`E(\\int|a|ds)^p`:
    ``gaussian_counting`` with :math:`E(\\int\\int|\\xi|^2 dN)^{p/2}`, and
    ``gaussian_compensator`` with both compensator terms.
    """
    p = spec.p
    if p < 2 or spec.r != 2 or spec.space.smoothness_r != 2:
        raise ArgumentError('the Levy maximal report needs p >= 2, r = 2 and '
                            'a 2-smooth space')
    sg = spec.semigroup or trivial_semigroup(spec.space.dim)
    has_drift = spec.family.drift is not None
    if has_drift and not sg.is_trivial:
        raise ArgumentError('a drift is only supported without a semigroup')

    samples, scaled = _samples(spec, 'levy', (2.0, p))

    def gaussian(family):
        integrand = family.integrand()
        gamma = 0.0 if integrand.g is None else gamma_integral(
            spec.space, integrand.g, spec.T, spec.seed
        )
        drift = 0.0 if integrand.a is None else drift_integral(
            spec.space, integrand.a, spec.T
        )
        return gamma, drift

    gamma, drift = gaussian(spec.family)
    scaled_terms = gaussian(spec.family.scaled(2.0))

    def side(fn):
        # the deterministic terms differ between the two scales
        def rhs(s):
            g, d = scaled_terms if s is scaled else (gamma, drift)
            return fn(s, g, d)
        return rhs

    doob = constants.doob_constant if (
        _doob(spec) and sg.is_trivial and not has_drift
    ) else None
    sides = []
    if not has_drift:
        sides.append(_Side(
            'gaussian_jump',
            side(lambda s, g, d: g ** (p / 2) + s.compensated(p)
                 + s.compensated(2.0) ** (p / 2)),
            doob, prefactor=math.exp(sg.growth_alpha * spec.T)
        ))
    if sg.is_trivial:
        sides += [
            _Side('gaussian_counting',
                  side(lambda s, g, d: d ** p + g ** (p / 2)
                       + s.counting(2.0) ** (p / 2)), doob),
            _Side('gaussian_compensator',
                  side(lambda s, g, d: d ** p + g ** (p / 2)
                       + s.compensated(p) + s.compensated(2.0) ** (p / 2)),
                  doob),
        ]

    return _report(
        'levy_maximal', spec, sides, _sup_power(p), samples, scaled,
        _resolution_warnings(samples),
        {'gamma_integral': gamma, 'drift_integral': drift,
         'growth_alpha': sg.growth_alpha}
    )
