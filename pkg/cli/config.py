"""
Experiment configs: TOML files validated into frozen dataclasses.

Every table maps to one dataclass. Keys a dataclass does not declare are
rejected, and validation errors carry the line of the offending key.
"""
from dataclasses import asdict, dataclass, field, fields, replace
import hashlib
import json
import math
import re
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from typing import Optional, Tuple

from errors import ConfigError

KINDS = (
    'integral', 'bdg', 'lp', 'kallenberg', 'conv-maximal', 'levy-maximal',
    'tail', 'ito-jump', 'ito-levy', 'qge',
)
MC_KINDS = KINDS[:7]
FORMATS = ('json', 'csv')


class _Invalid(Exception):
    def __init__(self, key, message):
        self.key = key
        super().__init__(message)


def _require(ok, key, message):
    if not ok:
        raise _Invalid(key, message)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(value)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def override(config, **changes):
    """
    ``dataclasses.replace`` for config blocks, with validation errors
    raised as :class:`ConfigError`.
    """
    try:
        return replace(config, **changes)
    except _Invalid as e:
        raise ConfigError('override of {}: {}'.format(e.key, e))


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, dict):
        return {k: _freeze(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class SpaceConfig:
    kind: str = 'lq'
    dim: int = 1
    q: float = 2.0
    r: Optional[float] = None
    n: Optional[int] = None
    s: float = 0.0

    def __post_init__(self):
        _require(self.kind in ('lq', 'spectral_sobolev'), 'kind',
                 'space kind must be "lq" or "spectral_sobolev"')
        _require(_is_int(self.dim) and self.dim >= 1, 'dim',
                 'dim must be a positive integer')
        _require(_is_number(self.q) and self.q >= 1, 'q', 'q must be >= 1')
        _require(self.r is None or (_is_number(self.r) and 1 < self.r <= 2),
                 'r', 'r must lie in (1,2], got {}'.format(self.r))
        if self.kind == 'spectral_sobolev':
            _require(_is_int(self.n), 'n', 'spectral spaces need a grid n')
        _require(_is_number(self.s), 's', 's must be a number')


@dataclass(frozen=True)
class MarksConfig:
    """
    ``kind = "finite"`` with ``atoms = [{id, weight, value}, ...]``, or
    ``kind = "power_law"`` with ``c``, ``alpha`` and ``n_max``.
    """
    kind: str = 'finite'
    atoms: Tuple[dict, ...] = ()
    c: Optional[float] = None
    alpha: Optional[float] = None
    n_max: Optional[int] = None

    def __post_init__(self):
        _require(self.kind in ('finite', 'power_law'), 'kind',
                 'marks kind must be "finite" or "power_law"')
        if self.kind == 'finite':
            _require(len(self.atoms) > 0, 'atoms',
                     'finite marks need at least one atom')
            for atom in self.atoms:
                _require(isinstance(atom, dict)
                         and set(atom) == {'id', 'weight', 'value'}, 'atoms',
                         'atoms need exactly the keys id, weight and value')
                _require(_is_number(atom['weight']) and atom['weight'] >= 0,
                         'atoms', 'atom weights must be finite and >= 0')
        else:
            _require(_is_number(self.c) and self.c > 0, 'c',
                     'power-law marks need c > 0')
            _require(_is_number(self.alpha) and 0 < self.alpha < 2, 'alpha',
                     'alpha must lie in (0, 2)')
            _require(_is_int(self.n_max) and self.n_max >= 1, 'n_max',
                     'n_max must be a positive integer')


@dataclass(frozen=True)
class SemigroupConfig:
    kind: str = 'diagonal'
    eigs: Optional[Tuple[float, ...]] = None
    A: Optional[Tuple[Tuple[float, ...], ...]] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        _require(self.kind in ('diagonal', 'matrix'), 'kind',
                 'semigroup kind must be "diagonal" or "matrix"')
        if self.kind == 'diagonal':
            _require(self.eigs is not None and len(self.eigs) > 0, 'eigs',
                     'a diagonal semigroup needs eigs')
        else:
            _require(self.A is not None, 'A', 'a matrix semigroup needs A')


@dataclass(frozen=True)
class IntegrandConfig:
    family: str = 'constant'
    scale: float = 1.0
    value: Optional[Tuple[float, ...]] = None
    g: Optional[Tuple[Tuple[float, ...], ...]] = None
    drift: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        _require(self.family in ('zero', 'constant', 'mark', 'modulated'),
                 'family', 'unknown integrand family {!r}'.format(self.family))
        _require(_is_number(self.scale) and self.scale > 0, 'scale',
                 'scale must be positive')


@dataclass(frozen=True)
class MonteCarloConfig:
    n_paths: int = 1000
    n_steps: int = 64
    confidence: Optional[float] = None
    check_homogeneity: bool = True

    def __post_init__(self):
        _require(_is_int(self.n_paths) and self.n_paths >= 1, 'n_paths',
                 'n_paths must be a positive integer')
        _require(_is_int(self.n_steps) and self.n_steps >= 1, 'n_steps',
                 'n_steps must be a positive integer')
        _require(self.confidence is None
                 or (_is_number(self.confidence)
                     and 0 < self.confidence < 1), 'confidence',
                 'confidence must lie in (0, 1)')
        _require(isinstance(self.check_homogeneity, bool),
                 'check_homogeneity', 'check_homogeneity must be a boolean')


@dataclass(frozen=True)
class TailConfig:
    lam: Optional[float] = None
    R: Tuple[float, ...] = ()
    n_calibration: int = 4096

    def __post_init__(self):
        _require(_is_number(self.lam) and self.lam > 0, 'lam',
                 'lam must be positive')
        _require(len(self.R) > 0 and all(_is_number(x) and x > 0
                                         for x in self.R), 'R',
                 'R must be a non-empty list of positive radii')


@dataclass(frozen=True)
class ItoConfig:
    test_function: str = 'power_norm'
    param: float = 2.0
    x0: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        _require(self.test_function in ('power_norm', 'exponential_tail'),
                 'test_function',
                 'test_function must be "power_norm" or "exponential_tail"')
        _require(_is_number(self.param) and self.param > 0, 'param',
                 'param must be positive')


_THETA0_KEYS = {
    'zero': (set(), set()),
    'mode': ({'k'}, {'amplitude'}),
    'random': (set(), {'band', 'decay', 'amplitude'}),
}


def _check_theta0(spec):
    _require(isinstance(spec, dict) and spec.get('kind') in _THETA0_KEYS,
             'theta0', 'theta0 kind must be "zero", "mode" or "random"')
    required, optional = _THETA0_KEYS[spec['kind']]
    keys = set(spec) - {'kind'}
    _require(required <= keys, 'theta0', 'theta0 kind {!r} needs {}'.format(
        spec['kind'], sorted(required)
    ))
    unknown = keys - required - optional
    _require(not unknown, 'theta0', 'unknown key {!r} in theta0'.format(
        min(unknown) if unknown else None
    ))
    if 'k' in spec:
        k = spec['k']
        _require(isinstance(k, (list, tuple)) and len(k) == 2
                 and all(_is_int(x) for x in k), 'theta0',
                 'theta0 k must be two integers')
    _require(_is_number(spec.get('amplitude', 1.0)), 'theta0',
             'theta0 amplitude must be a number')
    decay = spec.get('decay', 1.0)
    _require(_is_number(decay) and decay >= 0, 'theta0',
             'theta0 decay must be >= 0')
    _require('band' not in spec
             or (_is_number(spec['band']) and spec['band'] > 0), 'theta0',
             'theta0 band must be positive')


@dataclass(frozen=True)
class QGEConfig:
    """
    ``bundles`` is a list of ``{modes = [[k1, k2], ...], rate = ...}``
    tables with optional ``amplitudes``. ``theta0`` is
    ``{kind = "zero"}``, ``{kind = "mode", k = [k1, k2], amplitude = a}``
    or ``{kind = "random", amplitude = a, decay = d, band = b}``. Other
    keys are rejected.
    """
    n: int = 64
    T: float = 0.5
    dt: float = 1e-3
    s: float = 0.25
    bundles: Tuple[dict, ...] = ()
    target_norm: float = 1.0
    symmetric: bool = True
    theta0: dict = field(default_factory=lambda: {'kind': 'zero'})
    runs: int = 1
    snapshots: int = 5
    refinement: bool = True

    def __post_init__(self):
        _require(_is_int(self.n) and self.n >= 4 and not self.n & (self.n - 1),
                 'n', 'n must be a power of two >= 4')
        _require(_is_number(self.T) and self.T > 0, 'T', 'T must be positive')
        _require(_is_number(self.dt) and 0 < self.dt <= self.T, 'dt',
                 'dt must lie in (0, T]')
        _require(_is_number(self.s) and 0 < self.s < 0.5, 's',
                 's must lie in (0, 1/2)')
        for bundle in self.bundles:
            _require(isinstance(bundle, dict) and 'modes' in bundle
                     and 'rate' in bundle
                     and set(bundle) <= {'modes', 'rate', 'amplitudes'},
                     'bundles', 'bundles need modes and rate, optionally '
                     'amplitudes')
        _require(_is_number(self.target_norm) and self.target_norm > 0,
                 'target_norm', 'target_norm must be positive')
        _check_theta0(self.theta0)
        _require(_is_int(self.runs) and self.runs >= 1, 'runs',
                 'runs must be a positive integer')
        _require(_is_int(self.snapshots) and self.snapshots >= 0, 'snapshots',
                 'snapshots must be a non-negative integer')


@dataclass(frozen=True)
class OutputConfig:
    directory: Optional[str] = None
    formats: Tuple[str, ...] = FORMATS

    def __post_init__(self):
        _require(all(f in FORMATS for f in self.formats), 'formats',
                 'formats must be a subset of {}'.format(list(FORMATS)))


_BLOCKS = {
    'space': SpaceConfig,
    'marks': MarksConfig,
    'semigroup': SemigroupConfig,
    'integrand': IntegrandConfig,
    'mc': MonteCarloConfig,
    'tail': TailConfig,
    'ito': ItoConfig,
    'qge': QGEConfig,
    'output': OutputConfig,
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int = 0
    jobs: Optional[int] = None
    p: float = 2.0
    r: float = 2.0
    T: float = 1.0
    space: Optional[SpaceConfig] = None
    marks: Optional[MarksConfig] = None
    semigroup: Optional[SemigroupConfig] = None
    integrand: Optional[IntegrandConfig] = None
    mc: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    tail: Optional[TailConfig] = None
    ito: Optional[ItoConfig] = None
    qge: Optional[QGEConfig] = None
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        _require(self.kind in KINDS, 'kind', 'unknown experiment kind {!r}, '
                 'use one of {}'.format(self.kind, list(KINDS)))
        _require(_is_int(self.seed) and self.seed >= 0, 'seed',
                 'seed must be a non-negative integer')
        _require(self.jobs is None or (_is_int(self.jobs) and self.jobs >= 1),
                 'jobs', 'jobs must be a positive integer')
        _require(_is_number(self.p) and self.p > 0, 'p', 'p must be positive')
        _require(_is_number(self.r) and 1 < self.r <= 2, 'r',
                 'r must lie in (1,2], got {}'.format(self.r))
        _require(_is_number(self.T) and self.T > 0, 'T', 'T must be positive')

        if self.kind == 'qge':
            _require(self.qge is not None, 'kind', 'qge needs a [qge] table')
            return
        for block in ('space', 'marks', 'integrand'):
            _require(getattr(self, block) is not None, 'kind',
                     '{} needs a [{}] table'.format(self.kind, block))
        if self.kind == 'tail':
            _require(self.tail is not None, 'kind',
                     'tail needs a [tail] table')
        if self.kind.startswith('ito'):
            _require(self.ito is not None, 'kind',
                     '{} needs an [ito] table'.format(self.kind))

    def to_dict(self):
        return asdict(self)

    def content_hash(self):
        """
        SHA-256 of the resolved config without ``jobs`` and ``output``,
        which do not change any result.
        """
        data = self.to_dict()
        data.pop('jobs')
        data.pop('output')
        text = json.dumps(data, sort_keys=True, default=list)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()

    def with_overrides(self, seed=None, jobs=None, directory=None):
        out = self
        if seed is not None:
            out = override(out, seed=seed)
        if jobs is not None:
            out = override(out, jobs=jobs)
        if directory is not None:
            out = override(out, output=override(out.output,
                                                   directory=directory))
        return out


_HEADER = re.compile(r'^\s*\[\[?\s*([A-Za-z0-9_.\-"]+)\s*\]\]?\s*(#.*)?$')


class _Source:
    """Finds the line of a key in the config text."""

    def __init__(self, text):
        self.lines = text.splitlines()

    def line(self, table, key):
        current = None
        pattern = re.compile(r'^\s*"?{}"?\s*='.format(re.escape(key)))
        inline = None
        if table is not None:
            inline = re.compile(r'^\s*{}\s*=\s*\{{.*\b{}\s*='.format(
                re.escape(table), re.escape(key)
            ))
        for number, text in enumerate(self.lines, 1):
            header = _HEADER.match(text)
            if header:
                current = header.group(1)
                continue
            if current == table and pattern.match(text):
                return number
            if current is None and inline is not None and inline.match(text):
                return number
        if table is not None:
            return self.line(None, table)
        return None


def _block(cls, name, data, source):
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ConfigError('{} must be a table'.format(name),
                          source.line(None, name))
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError('unknown key {!r} in [{}]'.format(key, name),
                              source.line(name, key))
    try:
        return cls(**{k: _freeze(v) for k, v in data.items()})
    except _Invalid as e:
        raise ConfigError(str(e), source.line(name, e.key))


def parse_config(text):
    """
    Parse and validate config text.

    Raises:
        ConfigError: with the line of the offending key when known.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r'line (\d+)', str(e))
        raise ConfigError('not valid TOML: {}'.format(e),
                          int(match.group(1)) if match else None)

    source = _Source(text)
    known = {f.name for f in fields(ExperimentConfig)}
    for key in data:
        if key not in known:
            raise ConfigError('unknown key {!r}'.format(key),
                              source.line(None, key))
    if 'kind' not in data:
        raise ConfigError('missing experiment kind', 1)

    values = {k: v for k, v in data.items() if k not in _BLOCKS}
    for name, cls in _BLOCKS.items():
        block = _block(cls, name, data.get(name), source)
        if block is not None:
            values[name] = block
    try:
        return ExperimentConfig(**values)
    except _Invalid as e:
        raise ConfigError(str(e), source.line(None, e.key))


def load_config(path):
    try:
        with open(path, 'rb') as f:
            text = f.read().decode('utf-8')
    except OSError as e:
        raise ConfigError('cannot read config {}: {}'.format(path, e))
    except UnicodeDecodeError as e:
        raise ConfigError('config {} is not UTF-8: {}'.format(path, e))
    return parse_config(text)
