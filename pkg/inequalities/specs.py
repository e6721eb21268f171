"""
Experiment descriptions for the Monte Carlo harness: the space, the noise,
a named integrand family with a scale, and the sampling sizes.
"""
from dataclasses import dataclass, replace
import math
from typing import Optional, Tuple

import numpy as np

from errors import ArgumentError
from integrator import Integrand
from integrator.integrand import (
    constant_jump, mark_jump, constant_factor, constant_drift
)

FAMILIES = ('zero', 'constant', 'mark', 'modulated')


@dataclass(frozen=True)
class IntegrandFamily:
    """
    A deterministic integrand generator. Every part is multiplied by
    ``scale``, so both sides of every inequality are homogeneous in it.

    Attributes:
        name (str): ``'zero'``, ``'constant'`` (:math:`\\xi \\equiv v`),
            ``'mark'`` (:math:`\\xi(t,z) = z`) or ``'modulated'``
            (:math:`\\xi(t,z) = (1 + \\frac12\\sin 2\\pi t)z`).
        dim (int): Dimension of the state space.
        scale (float): Multiplier :math:`c`.
        value: Jump vector of the constant family, default all ones.
        g: ``(dim, k)`` constant Wiener factor, or None.
        drift: Constant drift vector, or None.
    """
    name: str
    dim: int
    scale: float = 1.0
    value: Optional[Tuple[float, ...]] = None
    g: Optional[Tuple[Tuple[float, ...], ...]] = None
    drift: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ArgumentError('unknown integrand family {!r}, use one of {}'
                                .format(self.name, FAMILIES))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ArgumentError('scale must be positive, got {}'.format(
                self.scale
            ))
        if self.value is not None and len(self.value) != self.dim:
            raise ArgumentError('jump vector must have {} entries'.format(
                self.dim
            ))
        if self.g is not None and np.shape(self.g)[0] != self.dim:
            raise ArgumentError('wiener factor must have {} rows'.format(
                self.dim
            ))

    @property
    def k(self):
        return 1 if self.g is None else np.shape(self.g)[1]

    def scaled(self, c):
        return replace(self, scale=self.scale * c)

    def xi(self):
        if self.name == 'zero':
            return constant_jump(0.0, self.dim)
        if self.name == 'constant':
            v = np.ones(self.dim) if self.value is None else self.value
            return constant_jump(v, self.dim)
        if self.name == 'mark':
            return mark_jump(1.0)

        def modulated(t, z):
            t = np.asarray(t, dtype=float)
            return (1.0 + 0.5 * np.sin(2 * np.pi * t))[:, None] \
                * np.asarray(z, dtype=float)
        return modulated

    def integrand(self):
        base = Integrand(
            dim=self.dim, xi=self.xi(),
            g=None if self.g is None else constant_factor(self.g),
            a=None if self.drift is None else constant_drift(
                self.drift, self.dim
            ),
            k=self.k,
        )
        return base if self.scale == 1.0 else base.scaled(self.scale)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Attributes:
        space (NormedSpace): State space and its norm.
        marks (MarkSpace): Noise.
        family (IntegrandFamily): Integrand generator.
        p (float): Moment.
        r (float): Integrability exponent of the jump functional, in
            ``(1, 2]`` and at most the space's martingale type.
        T (float): Horizon.
        n_paths (int): Monte Carlo replicas.
        n_steps (int): Uniform grid steps before jump augmentation.
        seed (int): Experiment seed.
        semigroup (Semigroup): Optional; trivial when None.
        jobs (int): Worker threads, default ``constants.jobs``.
        check_homogeneity (bool): Re-run with the family doubled.
    """
    space: object
    marks: object
    family: IntegrandFamily
    p: float
    r: float
    T: float
    n_paths: int
    n_steps: int
    seed: int = 0
    semigroup: object = None
    jobs: Optional[int] = None
    check_homogeneity: bool = True

    def __post_init__(self):
        if not 1 < self.r <= 2:
            raise ArgumentError('r must lie in (1,2], got {}'.format(self.r))
        if self.r > self.space.smoothness_r:
            raise ArgumentError(
                'r={} exceeds the martingale type {} of the space'.format(
                    self.r, self.space.smoothness_r
                )
            )
        if not self.p > 0:
            raise ArgumentError('p must be positive, got {}'.format(self.p))
        if not self.T > 0:
            raise ArgumentError('horizon must be positive')
        if self.n_paths < 1 or self.n_steps < 1:
            raise ArgumentError('need n_paths >= 1 and n_steps >= 1')
        if self.seed < 0:
            raise ArgumentError('seed must be non-negative')
        if self.family.dim != self.space.dim:
            raise ArgumentError(
                'integrand family has dim {}, space has {}'.format(
                    self.family.dim, self.space.dim
                )
            )
        if self.family.name in ('mark', 'modulated') \
                and self.marks.mark_dim != self.space.dim:
            raise ArgumentError(
                'the {} family needs marks of length {}, got {}'.format(
                    self.family.name, self.space.dim, self.marks.mark_dim
                )
            )
        if self.semigroup is not None and self.semigroup.dim != self.space.dim:
            raise ArgumentError('semigroup dimension does not match the space')

    def with_family(self, family):
        return replace(self, family=family)

    def with_paths(self, n_paths):
        return replace(self, n_paths=n_paths)
