"""
Contains numerical defaults shared by every package; for example, quadrature
node counts, probe sizes and the classical constants the verdicts use.
"""
import math
import os

tool_version = '1.0.0'  #: Version string embedded in every run manifest.

# Quadrature and probing. Can be overridden from the environment.
gauss_legendre_nodes = 32  #: Nodes of the fixed rule for the Taylor remainder
segment_nodes = 32  #: Nodes per segment for pathwise ds-integrals
shell_nodes = 16  #: Nodes per shell for power-law nu-integrals
probe_directions = 512  #: Random unit directions for functional norms
gamma_gaussians = 4096  #: Gaussian samples for gamma-norm estimates

fd_relative_step = 1e-5  #: Finite-difference step, relative to 1+|x|
fd_tolerance = 1e-6  #: Accepted relative error of supplied derivatives
ito_tolerance = 1e-10  #: Pathwise residual allowed per unit of 1 + |lhs|

# Classical constants used for falsifiable verdicts.
doob_constant = 4.0  #: Doob L^2 maximal constant
ladyzhenskaya_constant = 2 ** 0.25  #: |Y|_4 <= c |grad Y|^1/2 |Y|^1/2
ladyzhenskaya_slack = 1e-6  #: Excess over the constant that gets flagged

# Monte Carlo reporting.
n_sigma = 3.0  #: Combined standard errors allowed before a violation
confidence = 0.95  #: Wilson interval confidence for tail probabilities
n_folds = 10  #: Seed folds used for the spread diagnostic
resolution_warning = 0.1  #: Continuous-part variation / sup that warns

# QGE solver.
dealias_fraction = 2.0 / 3.0  #: Fraction of modes kept by the dealias rule
domain_length = 2 * math.pi  #: Side of the periodic torus

jobs = os.cpu_count() or 1  #: Default replica-parallel worker count

output_env = 'LEVYMAX_OUT'  #: Environment variable naming the output root


# Wraps os.environ to provide typed lookups with the backup value
# deciding the type.
def __load_override(key, backup):
    raw = os.environ.get('LEVYMAX_' + key.upper())
    if raw is None:
        return backup

    if isinstance(backup, bool):
        return raw.strip().lower() in ('1', 'true', 'yes', 'on')
    elif isinstance(backup, int):
        return int(raw)
    elif isinstance(backup, float):
        return float(raw)

    return raw


def load_overrides():
    """
    Reload the tunable constants from ``LEVYMAX_*`` environment variables.
    Call this from the entry point; modules read the globals at call time,
    so overrides apply to everything that runs afterwards.
    """
    global gauss_legendre_nodes, segment_nodes, shell_nodes
    global probe_directions, gamma_gaussians, n_sigma, confidence, n_folds
    global resolution_warning, jobs

    gauss_legendre_nodes = __load_override(
        'gauss_legendre_nodes', gauss_legendre_nodes
    )
    segment_nodes = __load_override('segment_nodes', segment_nodes)
    shell_nodes = __load_override('shell_nodes', shell_nodes)

    probe_directions = __load_override('probe_directions', probe_directions)
    gamma_gaussians = __load_override('gamma_gaussians', gamma_gaussians)

    n_sigma = __load_override('n_sigma', n_sigma)
    confidence = __load_override('confidence', confidence)
    n_folds = __load_override('n_folds', n_folds)
    resolution_warning = __load_override(
        'resolution_warning', resolution_warning
    )

    jobs = __load_override('jobs', jobs)
