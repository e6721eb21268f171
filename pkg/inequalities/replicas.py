"""
Replica loop: draws one path per replica, builds the process and records
the pathwise functionals every report needs.

Replica ``i`` uses only the streams keyed by ``(seed, ..., i)``, so the
samples are the same whichever worker computes them. Workers return their
results in replica order.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

import constants
from errors import ArgumentError
from log import debug, log
from point_process import sample_jump_path, sample_wiener
from integrator import (
    convolve, convolve_levy, integrate_compensated, integrate_counting,
    levy_process, quadratic_functionals, trivial_semigroup, uniform_grid
)

PROCESSES = ('compensated', 'convolution', 'levy')


@dataclass(frozen=True, eq=False)
class Samples:
    """
    Per-replica arrays, each of length ``n_paths``.

    Attributes:
        sup: :math:`\\sup_t |X_t|`.
        variation: Largest continuous move between grid nodes.
        functionals: exponent ``e`` -> ``(counting, compensator)`` with
            :math:`\\int\\int|\\xi|^e dN` and
            :math:`\\int\\int|\\xi|^e d\\nu ds`.
        baseline_sup: :math:`\\sup_t|u_t|` of the compensated integral on
            the same paths, when a semigroup run asked for it.
        jump_sum, compensator: ``(n_paths, dim)`` values of
            :math:`\\int\\int\\xi\\,dN` and :math:`\\int\\int\\xi\\,d\\nu ds`.
    """
    sup: np.ndarray
    variation: np.ndarray
    functionals: Dict[float, tuple]
    baseline_sup: Optional[np.ndarray] = None
    jump_sum: Optional[np.ndarray] = None
    compensator: Optional[np.ndarray] = None

    def counting(self, e):
        return self.functionals[float(e)][0]

    def compensated(self, e):
        return self.functionals[float(e)][1]


def _build(process, spec, integrand, semigroup, path, grid, w, region):
    marks = spec.marks
    if process == 'compensated':
        return integrate_compensated(integrand.xi, path, marks, grid, region)
    if process == 'convolution':
        return convolve(integrand.xi, path, marks, semigroup, grid, region)

    # a drift only enters through the non-convolved construction
    if integrand.a is not None:
        return levy_process(integrand, path, marks, grid, w=w).path
    return convolve_levy(integrand.g, integrand.xi, w, path, marks, semigroup,
                         grid, region)


def _replica(spec, family, process, exponents, baseline, identity, i):
    integrand = family.integrand()
    semigroup = spec.semigroup or trivial_semigroup(spec.space.dim)
    marks = spec.marks
    region = integrand.xi_region(marks)

    path = sample_jump_path(marks, spec.T, spec.seed, replicate=i)
    grid = uniform_grid(spec.T, spec.n_steps)
    w = None
    if integrand.g is not None:
        w = sample_wiener(spec.T, spec.n_steps, integrand.k, spec.seed,
                          replicate=i)

    x = _build(process, spec, integrand, semigroup, path, grid, w, region)
    out = {
        'sup': x.sup(spec.space),
        'variation': x.continuous_variation(spec.space),
    }

    for e in exponents:
        counting, meyer = quadratic_functionals(
            integrand.xi, path, marks, spec.space, e, grid, region
        )
        out[e] = (counting.final[0], meyer.final[0])

    if baseline:
        u = integrate_compensated(integrand.xi, path, marks, grid, region)
        out['baseline'] = u.sup(spec.space)

    if identity:
        u = x if process == 'compensated' else integrate_compensated(
            integrand.xi, path, marks, grid, region
        )
        jumps = integrate_counting(integrand.xi, path, grid, region).final
        out['jump_sum'] = jumps
        out['compensator'] = jumps - u.final

    return out


def collect(spec, process='compensated', exponents=(), family=None,
            baseline=False, identity=False):
    """
    Run every replica of ``spec`` and stack the results.

    Args:
        spec (ExperimentSpec): The experiment.
        process (str): ``'compensated'`` for :math:`u_t`,
            ``'convolution'`` for the stochastic convolution with
            ``spec.semigroup`` and ``'levy'`` for the full Levy-type
            convolution including the Wiener part and drift.
        exponents: Exponents ``e`` of the functionals to record.
        family (IntegrandFamily): Overrides ``spec.family``.
        baseline (bool): Also record the sup of the plain compensated
            integral on the same paths.
        identity (bool): Also record the jump sum and compensator vectors.

    Returns:
        Samples

    Raises:
        ArgumentError: for an unknown process, or a drift together with a
            non-trivial semigroup.
    """
    if process not in PROCESSES:
        raise ArgumentError('unknown process {!r}'.format(process))
    family = family or spec.family
    if process == 'levy' and family.drift is not None \
            and spec.semigroup is not None and not spec.semigroup.is_trivial:
        raise ArgumentError('a drift is only supported without a semigroup')
    exponents = tuple(sorted({float(e) for e in exponents}))
    jobs = spec.jobs or constants.jobs

    def run(i):
        return _replica(spec, family, process, exponents, baseline, identity,
                        i)

    log('mc', '{} replicas of {} process, family {} x{:g}, {} workers'.format(
        spec.n_paths, process, family.name, family.scale, jobs
    ))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(spec.n_paths)))
    else:
        results = [run(i) for i in range(spec.n_paths)]

    functionals = {
        e: (np.array([res[e][0] for res in results]),
            np.array([res[e][1] for res in results]))
        for e in exponents
    }
    samples = Samples(
        sup=np.array([res['sup'] for res in results]),
        variation=np.array([res['variation'] for res in results]),
        functionals=functionals,
        baseline_sup=np.array([res['baseline'] for res in results])
        if baseline else None,
        jump_sum=np.stack([res['jump_sum'] for res in results])
        if identity else None,
        compensator=np.stack([res['compensator'] for res in results])
        if identity else None,
    )
    debug('mc', 'mean sup {:.6g}'.format(float(np.mean(samples.sup))))
    return samples
