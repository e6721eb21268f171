import csv
import glob
import json
import os

import pytest

import cli
import constants
from cli.config import override
from cli.describe import DESCRIPTIONS
from cli.render import render
from cli.runner import analyse_sweep, apply_point, output_directory, \
    parse_grid
from errors import ArgumentError, ConfigError

CONFIGS = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..',
                       'configs')

BDG = """\
kind = "bdg"
seed = 7
p = 2
r = 2
T = 1.0

space = { kind = "lq", q = 2, dim = 1 }

[marks]
kind = "finite"
atoms = [{ id = 0, weight = 1.0, value = 1.0 }]

[integrand]
family = "constant"

[mc]
n_paths = 400
n_steps = 16
check_homogeneity = false
"""

QGE = """\
kind = "qge"
seed = 3

[qge]
n = 8
T = 0.02
dt = 0.01
s = 0.25
runs = 1
snapshots = 2
refinement = false
bundles = [{ modes = [[1, 0], [0, 1]], rate = 5.0 }]
theta0 = { kind = "mode", k = [1, 1], amplitude = 0.5 }
"""

TAIL = """\
kind = "tail"
seed = 17

space = { kind = "lq", q = 2, dim = 1, r = 2 }

[marks]
kind = "finite"
atoms = [{ id = 0, weight = 1.0, value = 0.5 }]

[integrand]
family = "mark"

[tail]
lam = 0.1
R = [0.5]
n_calibration = 256

[mc]
n_paths = 200
n_steps = 8
"""


def write(tmp_path, text, name='exp.toml'):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_config():
    cfg = cli.parse_config(BDG)
    assert cfg.kind == 'bdg'
    assert cfg.space.q == 2
    assert cfg.marks.atoms[0]['weight'] == 1.0
    assert cfg.mc.n_paths == 400


def test_rejects_r_outside_range_with_line():
    with pytest.raises(ConfigError) as info:
        cli.parse_config(BDG.replace('r = 2', 'r = 3'))
    assert info.value.line == 4
    assert 'r must lie in (1,2]' in str(info.value)
    assert str(info.value).startswith('line 4:')


def test_rejects_r_inside_inline_table():
    text = BDG.replace('dim = 1 }', 'dim = 1, r = 2.5 }')
    with pytest.raises(ConfigError) as info:
        cli.parse_config(text)
    assert info.value.line == 7
    assert 'r must lie in (1,2]' in str(info.value)


def test_rejects_unknown_keys():
    with pytest.raises(ConfigError) as info:
        cli.parse_config(BDG.replace('T = 1.0', 'horizon = 1.0'))
    assert info.value.line == 5
    assert 'horizon' in str(info.value)

    with pytest.raises(ConfigError) as info:
        cli.parse_config(BDG.replace('n_steps = 16', 'steps = 16'))
    assert info.value.line == 18


def test_rejects_invalid_toml():
    with pytest.raises(ConfigError) as info:
        cli.parse_config('kind = \n')
    assert 'not valid TOML' in str(info.value)


def test_rejects_missing_tables():
    with pytest.raises(ConfigError) as info:
        cli.parse_config(BDG.replace('kind = "bdg"', 'kind = "tail"'))
    assert 'needs a [tail] table' in str(info.value)
    with pytest.raises(ConfigError):
        cli.parse_config('seed = 1\n')


def test_rejects_unknown_kind():
    with pytest.raises(ConfigError) as info:
        cli.parse_config(BDG.replace('"bdg"', '"nope"'))
    assert info.value.line == 1


def test_shipped_configs_parse():
    paths = sorted(glob.glob(os.path.join(CONFIGS, '*.toml')))
    assert len(paths) == 10
    kinds = {cli.load_config(path).kind for path in paths}
    assert kinds == set(cli.config.KINDS)


def test_hash_ignores_jobs_and_output():
    cfg = cli.parse_config(BDG)
    assert cfg.with_overrides(jobs=3, directory='elsewhere').content_hash() \
        == cfg.content_hash()
    assert cfg.with_overrides(seed=8).content_hash() != cfg.content_hash()


def test_override_validates():
    cfg = cli.parse_config(BDG)
    with pytest.raises(ConfigError):
        override(cfg.mc, n_paths=0)
    with pytest.raises(ConfigError):
        cfg.with_overrides(seed=-1)


def test_output_directory(monkeypatch, tmp_path):
    cfg = cli.parse_config(BDG)
    monkeypatch.setenv('LEVYMAX_OUT', str(tmp_path))
    assert output_directory(cfg) == os.path.join(str(tmp_path), 'bdg')
    assert output_directory(cfg, '-sweep') == os.path.join(str(tmp_path),
                                                           'bdg-sweep')
    assert output_directory(cfg.with_overrides(directory='x')) == 'x'


def test_run_writes_artifacts(tmp_path, capsys):
    config = write(tmp_path, BDG)
    out = str(tmp_path / 'out')
    assert cli.main(['run', config, '--out-dir', out]) == 0
    assert 'bdg: holds' in capsys.readouterr().out

    with open(os.path.join(out, 'report.json')) as f:
        report = json.load(f)
    cfg = cli.load_config(config)
    assert report['config_hash'] == cfg.content_hash()
    assert report['seed'] == 7
    assert report['verdict'] == 'holds'

    with open(os.path.join(out, 'variants.csv')) as f:
        rows = list(csv.DictReader(f))
    assert rows and all(row['seed'] == '7' for row in rows)
    assert all(row['config_hash'] == cfg.content_hash() for row in rows)

    with open(os.path.join(out, 'manifest.json')) as f:
        manifest = json.load(f)
    assert manifest['config_hash'] == cfg.content_hash()
    assert manifest['tool_version'] == '1.0.0'
    assert manifest['outputs'] == ['report.json', 'variants.csv']
    assert manifest['started'] <= manifest['finished']


def test_runs_are_byte_identical(tmp_path):
    config = write(tmp_path, BDG)
    first, second = str(tmp_path / 'a'), str(tmp_path / 'b')
    assert cli.main(['run', config, '--out-dir', first, '--jobs', '1']) == 0
    assert cli.main(['run', config, '--out-dir', second, '--jobs', '3']) == 0
    for name in ('report.json', 'variants.csv'):
        with open(os.path.join(first, name), 'rb') as a, \
                open(os.path.join(second, name), 'rb') as b:
            assert a.read() == b.read()


def test_seed_flag_changes_results(tmp_path):
    config = write(tmp_path, BDG)
    first, second = str(tmp_path / 'a'), str(tmp_path / 'b')
    cli.main(['run', config, '--out-dir', first])
    cli.main(['run', config, '--out-dir', second, '--seed', '8'])
    with open(os.path.join(first, 'report.json')) as a, \
            open(os.path.join(second, 'report.json')) as b:
        assert json.load(a)['reports'] != json.load(b)['reports']


def test_bad_config_exits_with_one(tmp_path):
    config = write(tmp_path, BDG.replace('r = 2', 'r = 3'))
    assert cli.main(['run', config, '--out-dir', str(tmp_path)]) == 1


def test_missing_config_exits_with_one(tmp_path):
    assert cli.main(['run', str(tmp_path / 'missing.toml')]) == 1


def test_describe(capsys):
    assert cli.main(['describe', 'bdg']) == 0
    assert "Doob's 4" in capsys.readouterr().out
    assert cli.main(['describe', 'nope']) == 1


def test_every_kind_is_described():
    assert set(DESCRIPTIONS) == set(cli.config.KINDS)
    with pytest.raises(ArgumentError):
        cli.describe('nope')


def test_qge_run_writes_snapshots(tmp_path):
    config = write(tmp_path, QGE)
    out = str(tmp_path / 'out')
    assert cli.main(['run', config, '--out-dir', out]) == 0
    with open(os.path.join(out, 'manifest.json')) as f:
        outputs = json.load(f)['outputs']
    assert 'snapshots/snapshots.json' in outputs
    assert 'snapshots/theta.bin' in outputs
    assert 'ledger.csv' in outputs


def test_execute_and_render():
    outcome = cli.execute(cli.parse_config(BDG))
    assert not outcome.violated
    text = render(outcome)
    assert text.startswith('bdg: holds')
    assert 'counting_r' in text


def test_parse_grid():
    assert parse_grid(['p=1,2', 'scale=0.5']) == [('p', (1.0, 2.0)),
                                                  ('scale', (0.5,))]
    for bad in (['q=1'], ['p=a,b'], ['p='], ['p'], []):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_apply_point():
    cfg = cli.parse_config(BDG)
    assert apply_point(cfg, 'p', 3.0).p == 3.0
    assert apply_point(cfg, 'scale', 2.0).integrand.scale == 2.0
    assert apply_point(cfg, 'dt', 0.25).mc.n_steps == 4
    with pytest.raises(ConfigError):
        apply_point(cfg, 'dt', 0.3)
    with pytest.raises(ConfigError):
        apply_point(cfg, 'R', 1.0)
    with pytest.raises(ConfigError):
        apply_point(cfg, 'scale', -1.0)


def test_analyse_sweep():
    rows = [{'dt': dt, 'rms_residual': 3.0 * dt ** 0.5}
            for dt in (0.1, 0.05, 0.025)]
    fit = analyse_sweep([('dt', (0.1, 0.05, 0.025))], rows)
    assert fit['rms_residual_slope']['slope'] == pytest.approx(0.5)

    rows = [{'R': R, 'probability': p} for R, p in ((1, 0.3), (2, 0.1),
                                                    (3, 0.1))]
    assert analyse_sweep([('R', (1, 2, 3))], rows)['monotone']


def test_sweep_writes_one_row_per_point(tmp_path):
    config = write(tmp_path, BDG)
    out = str(tmp_path / 'out')
    code = cli.main(['sweep', config, '--out-dir', out,
                     '--grid', 'scale=1,2'])
    assert code == 0
    with open(os.path.join(out, 'sweep.csv')) as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = list(reader)
    assert header[:3] == ['config_hash', 'seed', 'scale']
    assert [row[2] for row in rows] == ['1.0', '2.0']
    with open(os.path.join(out, 'sweep.json')) as f:
        summary = json.load(f)
    assert summary['analysis']['scale_consistent']


@pytest.mark.parametrize('theta0, message', [
    ('{ kind = "mode", amplitude = 0.5 }', 'needs'),
    ('{ kind = "mode", k = [1, 1], amplitud = 0.5 }', 'amplitud'),
    ('{ kind = "zero", amplitude = 0.5 }', 'amplitude'),
    ('{ kind = "random", decay = -1.0 }', 'decay'),
    ('{ kind = "mode", k = [1] }', 'two integers'),
])
def test_rejects_bad_theta0_with_line(theta0, message):
    text = QGE.replace('{ kind = "mode", k = [1, 1], amplitude = 0.5 }',
                       theta0)
    with pytest.raises(ConfigError) as info:
        cli.parse_config(text)
    assert info.value.line == 13
    assert message in str(info.value)


def test_theta0_without_mode_exits_with_one(tmp_path):
    config = write(tmp_path, QGE.replace('k = [1, 1], ', ''))
    assert cli.main(['run', config, '--out-dir', str(tmp_path)]) == 1


def test_non_utf8_config_exits_with_one(tmp_path):
    path = tmp_path / 'latin1.toml'
    path.write_bytes(BDG.replace('bdg', 'b\xe9g').encode('latin-1'))
    with pytest.raises(ConfigError) as info:
        cli.load_config(str(path))
    assert 'UTF-8' in str(info.value)
    assert cli.main(['run', str(path)]) == 1


def test_confidence_stays_with_its_run():
    default = constants.confidence
    narrow = cli.parse_config(TAIL + 'confidence = 0.5\n')
    before = cli.execute(cli.parse_config(TAIL)).reports[0].rows[0]
    inside = cli.execute(narrow).reports[0].rows[0]
    after = cli.execute(cli.parse_config(TAIL)).reports[0].rows[0]

    assert constants.confidence == default
    assert (after.wilson_low, after.wilson_high) \
        == (before.wilson_low, before.wilson_high)
    assert inside.hits == before.hits
    assert inside.wilson_high - inside.wilson_low \
        < before.wilson_high - before.wilson_low
