"""
One function per experiment kind. Each returns an :class:`Outcome` with the
JSON payload, the CSV tables and a flat summary used by sweeps.
"""
from dataclasses import dataclass, field
import math
from typing import Dict, List

import numpy as np

import constants
import inequalities
from errors import ArgumentError
from inequalities.reports import CSV_COLUMNS
from inequalities.tail import TAIL_COLUMNS
from integrator import uniform_grid
from ito import ito_residual_jump, ito_residual_levy
from log import log
from point_process import sample_jump_path, sample_wiener
from qge import refinement_gap, run_qge, z_moment
from qge.diagnostics import LEDGER_COLUMNS
from . import build

ITO_TERMS = ('drift', 'wiener', 'trace', 'eta_jumps', 'xi_compensated',
             'correction')
ITO_COLUMNS = ('replicate', 'lhs', 'residual', 'grid_resolution') + ITO_TERMS
CHECK_COLUMNS = ('run', 'name', 'lhs', 'rhs', 'margin', 'passed',
                 'enforced')


@dataclass
class Outcome:
    """
    Attributes:
        kind (str): Experiment kind.
        payload (dict): JSON-ready results.
        tables (dict): CSV name -> ``(columns, rows)``.
        violated (bool): Whether any verdict is a violation.
        summary (dict): Flat numbers for sweep rows.
        reports (list): Report objects, for the console summary.
    """
    kind: str
    payload: Dict[str, object]
    tables: Dict[str, tuple] = field(default_factory=dict)
    violated: bool = False
    summary: Dict[str, object] = field(default_factory=dict)
    reports: List[object] = field(default_factory=list)


def _inequality_outcome(kind, reports):
    first = reports[0].variants[0]
    rows = [row for report in reports for row in report.csv_rows()]
    violated = any(report.violated for report in reports)
    return Outcome(
        kind=kind,
        payload={'reports': [report.to_dict() for report in reports],
                 'verdict': 'violated' if violated else 'holds'},
        tables={'variants': (CSV_COLUMNS, rows)},
        violated=violated,
        summary={
            'lhs': first.lhs.value, 'lhs_se': first.lhs.se,
            'rhs': first.rhs.value, 'rhs_se': first.rhs.se,
            'ratio': first.ratio.value, 'ratio_se': first.ratio.se,
            'status': first.verdict.status,
            'verdict': 'violated' if violated else 'holds',
        },
        reports=list(reports),
    )


def run_integral(cfg):
    spec = build.experiment_spec(cfg)
    return _inequality_outcome(cfg.kind,
                               [inequalities.compensation_report(spec)])


def run_bdg(cfg):
    """The BDG report for ``p >= 1`` and the small-moment forms for
    ``p <= r``."""
    spec = build.experiment_spec(cfg)
    reports = []
    if spec.p >= 1:
        reports.append(inequalities.bdg_report(spec))
    if spec.p <= spec.r:
        reports.extend(inequalities.small_p_reports(spec))
    return _inequality_outcome(cfg.kind, reports)


def run_lp(cfg):
    return _inequality_outcome(
        cfg.kind, [inequalities.lp_report(build.experiment_spec(cfg))]
    )


def run_kallenberg(cfg):
    return _inequality_outcome(
        cfg.kind, [inequalities.kallenberg_report(build.experiment_spec(cfg))]
    )


def run_conv_maximal(cfg):
    spec = build.experiment_spec(cfg, default_trivial=True)
    return _inequality_outcome(
        cfg.kind, [inequalities.convolution_maximal_report(spec)]
    )


def run_levy_maximal(cfg):
    return _inequality_outcome(
        cfg.kind,
        [inequalities.levy_maximal_report(build.experiment_spec(cfg))]
    )


def run_tail(cfg):
    spec = build.experiment_spec(cfg)
    report = inequalities.tail_report(spec, cfg.tail.lam, cfg.tail.R,
                                      cfg.tail.n_calibration,
                                      cfg.mc.confidence)
    payload = report.to_dict()
    summary = {
        'verdict': payload['verdict'], 'm_lambda': report.m_lambda,
        'c_lambda': report.c_lambda, 'monotone': report.monotone,
    }
    if len(report.rows) == 1:
        row = report.rows[0].to_dict()
        for key in ('probability', 'wilson_low', 'wilson_high', 'bound',
                    'status'):
            summary[key] = row[key]
    return Outcome(
        kind=cfg.kind, payload={'reports': [payload],
                                'verdict': payload['verdict']},
        tables={'tail': (TAIL_COLUMNS, report.csv_rows())},
        violated=report.violated, summary=summary, reports=[report],
    )


def _ito(cfg, with_wiener):
    sp = build.space(cfg)
    marks = build.marks(cfg)
    family = build.family(cfg, sp.dim)
    integrand = family.integrand()
    tf = build.ito_function(cfg, sp)
    grid = uniform_grid(cfg.T, cfg.mc.n_steps)
    x0 = build.as_array(cfg.ito.x0)
    if with_wiener and integrand.g is None:
        raise ArgumentError('ito-levy needs an integrand with g')

    rows, residuals, lhs = [], [], []
    for i in range(cfg.mc.n_paths):
        path = sample_jump_path(marks, cfg.T, cfg.seed, replicate=i)
        if with_wiener:
            w = sample_wiener(cfg.T, cfg.mc.n_steps, integrand.k, cfg.seed,
                              replicate=i)
            report = ito_residual_levy(tf, integrand, path, w, marks, grid,
                                       x0=x0)
        else:
            report = ito_residual_jump(tf, integrand, path, marks, grid,
                                       x0=x0)
        row = {'replicate': i, 'lhs': report.lhs,
               'residual': report.residual,
               'grid_resolution': report.grid_resolution}
        row.update(report.rhs_terms)
        rows.append(row)
        residuals.append(report.residual)
        lhs.append(report.lhs)

    residuals, lhs = np.array(residuals), np.array(lhs)
    rms = math.sqrt(float(np.mean(residuals ** 2)))
    worst = float(np.max(np.abs(residuals)))
    summary = {'dt': cfg.T / cfg.mc.n_steps, 'rms_residual': rms,
               'max_abs_residual': worst}

    violated = False
    if not with_wiener:
        allowed = constants.ito_tolerance * (1.0 + np.abs(lhs))
        failures = int(np.count_nonzero(np.abs(residuals) > allowed))
        violated = failures > 0
        summary['failures'] = failures
    summary['verdict'] = 'violated' if violated else 'holds'
    log('ito', '{} paths: rms residual {:.3g}, max {:.3g}'.format(
        cfg.mc.n_paths, rms, worst
    ))

    payload = {
        'reports': [{
            'name': cfg.kind, 'test_function': cfg.ito.test_function,
            'param': cfg.ito.param, 'paths': rows,
            'rms_residual': rms, 'max_abs_residual': worst,
            'verdict': summary['verdict'],
        }],
        'verdict': summary['verdict'],
    }
    return Outcome(kind=cfg.kind, payload=payload,
                   tables={'ito': (ITO_COLUMNS, rows)}, violated=violated,
                   summary=summary)


def run_ito_jump(cfg):
    return _ito(cfg, with_wiener=False)


def run_ito_levy(cfg):
    return _ito(cfg, with_wiener=True)


def run_qge_experiment(cfg, snapshot_writer=None):
    """
    ``runs`` seeded solver runs with the energy ledger, the noise moment
    and, for the first run, the step refinement gap.
    """
    q = cfg.qge
    noise = build.noise(cfg)
    theta0 = build.theta0(cfg)

    ledger_rows, check_rows, runs = [], [], []
    violated = False
    for i in range(q.runs):
        run = run_qge(noise, theta0, q.T, q.dt, cfg.seed, replicate=i)
        ledger = run.diagnostics['ledger']
        violated = violated or not ledger.passed
        for row in ledger.csv_rows():
            ledger_rows.append(dict(row, run=i))
        for check in ledger.checks:
            check_rows.append(dict(check.to_dict(), run=i))

        entry = {
            'run': i,
            'ledger': ledger.to_dict(),
            'mild_residual': run.mild_residual,
            'splitting_defect': run.diagnostics['splitting_defect'],
            'z_moment': z_moment(run, q.s),
        }
        if i == 0 and q.refinement:
            entry['refinement_gap'] = refinement_gap(noise, theta0, q.T, q.dt,
                                                     cfg.seed)
        if i == 0 and q.snapshots > 0 and snapshot_writer is not None:
            snapshot_writer(run, q.snapshots)
        runs.append(entry)

    assumption = noise.assumption_integral(q.T)
    moments = np.array([entry['z_moment'] for entry in runs])
    verdict = 'violated' if violated else 'holds'
    summary = {
        'dt': q.dt, 'verdict': verdict,
        'mild_residual': max(entry['mild_residual'] for entry in runs),
        'splitting_defect': max(entry['splitting_defect'] for entry in runs),
        'z_moment_mean': float(np.mean(moments)),
        'assumption_integral': assumption,
    }
    if 'refinement_gap' in runs[0]:
        summary['refinement_gap'] = runs[0]['refinement_gap']

    payload = {
        'reports': [{
            'name': 'qge', 'n': q.n, 'T': q.T, 'dt': q.dt, 's': q.s,
            'assumption_integral': assumption,
            'z_moment_mean': summary['z_moment_mean'],
            'z_moment_ratio': summary['z_moment_mean'] / assumption
            if assumption > 0 else None,
            'runs': runs, 'verdict': verdict,
        }],
        'verdict': verdict,
    }
    return Outcome(
        kind=cfg.kind, payload=payload,
        tables={'ledger': (('run',) + LEDGER_COLUMNS, ledger_rows),
                'checks': (CHECK_COLUMNS, check_rows)},
        violated=violated, summary=summary,
    )


RUNNERS = {
    'integral': run_integral,
    'bdg': run_bdg,
    'lp': run_lp,
    'kallenberg': run_kallenberg,
    'conv-maximal': run_conv_maximal,
    'levy-maximal': run_levy_maximal,
    'tail': run_tail,
    'ito-jump': run_ito_jump,
    'ito-levy': run_ito_levy,
    'qge': run_qge_experiment,
}


def execute(cfg, snapshot_writer=None):
    """Run ``cfg`` and return its :class:`Outcome`."""
    if cfg.kind == 'qge':
        return run_qge_experiment(cfg, snapshot_writer)
    return RUNNERS[cfg.kind](cfg)
