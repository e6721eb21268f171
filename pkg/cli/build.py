"""
Turns validated config blocks into library objects.
"""
import numpy as np

import norms
import rng
from inequalities import ExperimentSpec, IntegrandFamily
from integrator import diagonal_semigroup, matrix_semigroup, trivial_semigroup
from ito import exponential_tail, power_norm
from point_process import finite_marks, power_law_marks
from qge import SpectralField, qge_noise, random_field, l2_norm


def space(cfg):
    s = cfg.space
    if s.kind == 'lq':
        return norms.lq(s.dim, s.q, s.r)
    return norms.spectral_sobolev(s.n, s.s, s.q, s.r)


def marks(cfg):
    m = cfg.marks
    if m.kind == 'finite':
        return finite_marks(
            (atom['id'], atom['weight'], atom['value']) for atom in m.atoms
        )
    return power_law_marks(m.c, m.alpha, m.n_max)


def semigroup(cfg, dim, default_trivial=False):
    g = cfg.semigroup
    if g is None:
        return trivial_semigroup(dim) if default_trivial else None
    if g.kind == 'diagonal':
        return diagonal_semigroup(g.eigs, g.alpha)
    return matrix_semigroup(g.A, g.alpha)


def family(cfg, dim):
    i = cfg.integrand
    return IntegrandFamily(
        name=i.family, dim=dim, scale=float(i.scale), value=i.value, g=i.g,
        drift=i.drift,
    )


def experiment_spec(cfg, default_trivial=False):
    """
    Build the :class:`ExperimentSpec` of a Monte Carlo config. With
    ``default_trivial`` a missing semigroup becomes the identity.
    """
    sp = space(cfg)
    return ExperimentSpec(
        space=sp, marks=marks(cfg), family=family(cfg, sp.dim),
        p=float(cfg.p), r=float(cfg.r), T=float(cfg.T),
        n_paths=cfg.mc.n_paths, n_steps=cfg.mc.n_steps, seed=cfg.seed,
        semigroup=semigroup(cfg, sp.dim, default_trivial), jobs=cfg.jobs,
        check_homogeneity=cfg.mc.check_homogeneity,
    )


def ito_function(cfg, sp):
    if cfg.ito.test_function == 'power_norm':
        return power_norm(sp, cfg.ito.param)
    return exponential_tail(sp, cfg.ito.param)


def noise(cfg):
    q = cfg.qge
    bundles = [
        (b['modes'], b['amplitudes']) if 'amplitudes' in b else b['modes']
        for b in q.bundles
    ]
    return qge_noise(
        q.n, q.s, bundles, [b['rate'] for b in q.bundles],
        target_norm=q.target_norm, symmetric=q.symmetric,
    )


def theta0(cfg):
    q = cfg.qge
    spec = q.theta0
    if spec['kind'] == 'zero':
        return SpectralField.zeros(q.n)
    if spec['kind'] == 'mode':
        return SpectralField.single_mode(q.n, spec['k'],
                                         spec.get('amplitude', 1.0))

    gen = rng.stream(cfg.seed, rng.QGE, 0)
    field = random_field(q.n, gen, spec.get('band'), spec.get('decay', 1.0))
    size = l2_norm(field)
    if size == 0:
        return field
    return field.scaled(spec.get('amplitude', 1.0) / size)


def as_array(values):
    return None if values is None else np.asarray(values, dtype=float)
