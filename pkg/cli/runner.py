"""
Artifact plumbing for ``run`` and ``sweep``: output directories, the run
manifest, JSON reports and CSV tables.

Reports and tables depend only on the resolved config and seed; the
wall-clock timestamps live in the manifest alone.
"""
import csv
from dataclasses import asdict, dataclass, field
import datetime
import itertools
import json
import math
import os
from typing import List

import numpy as np
from scipy import stats

import constants
from errors import ConfigError
from log import log
from qge import write_snapshots
from .config import load_config, override
from .experiments import execute
from .render import render

SWEEP_KEYS = ('p', 'scale', 'lam', 'R', 'dt')


@dataclass
class RunManifest:
    """
    Attributes:
        config_hash (str): SHA-256 of the resolved config.
        seed (int): Experiment seed.
        tool_version (str): ``constants.tool_version``.
        started, finished (str): UTC timestamps, ISO 8601.
        outputs (list of str): Written files, relative to the output
            directory.
    """
    config_hash: str
    seed: int
    tool_version: str
    started: str
    finished: str = ''
    outputs: List[str] = field(default_factory=list)
    command: str = 'run'

    def to_dict(self):
        return asdict(self)


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def output_directory(cfg, kind_suffix=''):
    """
    ``output.directory`` if set, else ``$LEVYMAX_OUT/<kind>``, else
    ``levymax-out/<kind>``.
    """
    if cfg.output.directory:
        return cfg.output.directory
    root = os.environ.get(constants.output_env, 'levymax-out')
    return os.path.join(root, cfg.kind + kind_suffix)


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path, columns, rows):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_json(path, data):
    with open(path, 'w') as f:
        json.dump(_plain(data), f, indent=2, sort_keys=True)
        f.write('\n')


def _write_outcome(outcome, cfg, directory):
    written = []
    if 'json' in cfg.output.formats:
        target = os.path.join(directory, 'report.json')
        write_json(target, dict(
            outcome.payload, kind=cfg.kind, seed=cfg.seed,
            config_hash=cfg.content_hash(),
            tool_version=constants.tool_version,
        ))
        written.append(target)
    if 'csv' in cfg.output.formats:
        for name, (columns, rows) in sorted(outcome.tables.items()):
            target = os.path.join(directory, name + '.csv')
            write_csv(target, ('config_hash', 'seed') + tuple(columns), [
                dict(row, config_hash=cfg.content_hash(), seed=cfg.seed)
                for row in rows
            ])
            written.append(target)
    return written


def _finish(manifest, directory, written):
    manifest.outputs = sorted(os.path.relpath(p, directory) for p in written)
    manifest.finished = _now()
    write_json(os.path.join(directory, 'manifest.json'), manifest.to_dict())


def run(config_path, seed=None, out_dir=None, jobs=None):
    """
    Execute one config and write its artifacts.

    Returns:
        int: 0 when every verdict holds, 2 when any is violated.
    """
    cfg = load_config(config_path).with_overrides(seed, jobs, out_dir)
    directory = output_directory(cfg)
    os.makedirs(directory, exist_ok=True)
    manifest = RunManifest(cfg.content_hash(), cfg.seed,
                           constants.tool_version, _now())
    log('cli', 'running {} (seed {}, config {}) into {}'.format(
        cfg.kind, cfg.seed, manifest.config_hash[:12], directory
    ))

    snapshots = []

    def snapshot_writer(qge_run, count):
        snapshots.extend(write_snapshots(
            qge_run, os.path.join(directory, 'snapshots'), count
        ))

    outcome = execute(cfg, snapshot_writer)
    written = _write_outcome(outcome, cfg, directory) + snapshots
    _finish(manifest, directory, written)

    print(render(outcome))
    return 2 if outcome.violated else 0


def parse_grid(specs):
    """
    Parse ``key=v1,v2,...`` strings into ``[(key, values), ...]``.

    Raises:
        ConfigError: for an unknown key or a value that is not a number.
    """
    grid = []
    for spec in specs:
        key, sep, values = spec.partition('=')
        key = key.strip()
        if not sep or key not in SWEEP_KEYS:
            raise ConfigError('sweep grid must look like key=v1,v2 with key '
                              'in {}, got {!r}'.format(list(SWEEP_KEYS), spec))
        try:
            parsed = tuple(float(v) for v in values.split(',') if v.strip())
        except ValueError:
            raise ConfigError('sweep values must be numbers: {!r}'
                              .format(spec))
        if not parsed:
            raise ConfigError('empty sweep grid for {}'.format(key))
        grid.append((key, parsed))
    if not grid:
        raise ConfigError('sweep needs at least one --grid')
    return grid


def apply_point(cfg, key, value):
    """The config with one sweepable key set to ``value``."""
    if key == 'p':
        return override(cfg, p=value)
    if key == 'scale':
        if cfg.integrand is None:
            raise ConfigError('scale sweeps need an [integrand] table')
        return override(cfg, integrand=override(cfg.integrand, scale=value))
    if key == 'lam':
        if cfg.kind == 'tail':
            return override(cfg, tail=override(cfg.tail, lam=value))
        if cfg.ito is not None and cfg.ito.test_function == 'exponential_tail':
            return override(cfg, ito=override(cfg.ito, param=value))
        raise ConfigError('lam sweeps need a tail or exponential test '
                          'function config')
    if key == 'R':
        if cfg.kind != 'tail':
            raise ConfigError('R sweeps need a tail config')
        return override(cfg, tail=override(cfg.tail, R=(value,)))

    if cfg.kind == 'qge':
        return override(cfg, qge=override(cfg.qge, dt=value))
    steps = int(round(cfg.T / value))
    if steps < 1 or not math.isclose(steps * value, cfg.T, rel_tol=1e-9):
        raise ConfigError('dt={} does not divide T={}'.format(value, cfg.T))
    return override(cfg, mc=override(cfg.mc, n_steps=steps))


def analyse_sweep(grid, rows):
    """
    Regressions over a sweep: the log-log slope of the residual metrics
    against ``dt``, consistency of ratios over ``scale`` and monotonicity
    of tail probabilities over ``R``.
    """
    keys = [key for key, _ in grid]
    out = {}
    if 'dt' in keys and len(keys) == 1:
        dt = np.array([row['dt'] for row in rows])
        for metric in ('rms_residual', 'mild_residual', 'refinement_gap'):
            values = np.array([row.get(metric, np.nan) for row in rows],
                              dtype=float)
            if len(rows) >= 2 and np.all(values > 0):
                fit = stats.linregress(np.log(dt), np.log(values))
                out[metric + '_slope'] = {
                    'slope': float(fit.slope), 'stderr': float(fit.stderr),
                    'intercept': float(fit.intercept),
                }
    if 'scale' in keys and len(keys) == 1 and rows and 'ratio' in rows[0]:
        worst = 0.0
        for a, b in itertools.combinations(rows, 2):
            se = math.hypot(a['ratio_se'], b['ratio_se'])
            excess = abs(a['ratio'] - b['ratio']) - constants.n_sigma * se
            worst = max(worst, excess)
        out['scale_consistent'] = worst <= 0
    if 'R' in keys and len(keys) == 1 and rows and 'probability' in rows[0]:
        probs = [row['probability'] for row in rows]
        out['monotone'] = all(b <= a for a, b in zip(probs, probs[1:]))
    return out


def sweep(config_path, grid_specs, seed=None, out_dir=None, jobs=None):
    """
    Run the config at every point of the grid product and write
    ``sweep.csv`` (one row per point) and ``sweep.json``.

    Returns:
        int: 0, or 2 when any point has a violated verdict.
    """
    cfg = load_config(config_path).with_overrides(seed, jobs, out_dir)
    grid = parse_grid(grid_specs)
    directory = output_directory(cfg, '-sweep')
    os.makedirs(directory, exist_ok=True)
    manifest = RunManifest(cfg.content_hash(), cfg.seed,
                           constants.tool_version, _now(), command='sweep')

    keys = [key for key, _ in grid]
    rows, violated = [], False
    for point in itertools.product(*(values for _, values in grid)):
        point_cfg = cfg
        for key, value in zip(keys, point):
            point_cfg = apply_point(point_cfg, key, value)
        log('cli', 'sweep point {}'.format(dict(zip(keys, point))))
        outcome = execute(point_cfg)
        violated = violated or outcome.violated
        row = dict(outcome.summary)
        row.update(zip(keys, point))
        rows.append(row)

    if any(key == 'R' for key in keys):
        rows.sort(key=lambda row: row['R'])
    columns = list(keys)
    for row in rows:
        columns += [c for c in row if c not in columns]

    written = []
    target = os.path.join(directory, 'sweep.csv')
    write_csv(target, ['config_hash', 'seed'] + columns, [
        dict(row, config_hash=cfg.content_hash(), seed=cfg.seed)
        for row in rows
    ])
    written.append(target)

    target = os.path.join(directory, 'sweep.json')
    write_json(target, {
        'kind': cfg.kind, 'seed': cfg.seed,
        'config_hash': cfg.content_hash(),
        'tool_version': constants.tool_version,
        'grid': {key: list(values) for key, values in grid},
        'rows': rows, 'analysis': analyse_sweep(grid, rows),
        'verdict': 'violated' if violated else 'holds',
    })
    written.append(target)
    _finish(manifest, directory, written)

    log('cli', 'sweep of {} points written to {}'.format(len(rows),
                                                        directory))
    return 2 if violated else 0
