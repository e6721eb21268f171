"""
Splitting solver for the stochastic quasi-geostrophic equation

.. math::
    d\\theta + (\\mathcal{R}\\theta\\cdot\\nabla)\\theta\\,dt
    = \\Delta\\theta\\,dt + \\int\\xi\\,\\tilde N(dt, dz)

on the periodic square. The solution is assembled as
:math:`\\theta(t) = e^{-tA}\\theta_0 + Y(t) + Z(t)` where :math:`Z` is the
jump Ornstein-Uhlenbeck convolution and :math:`Y` solves the random PDE

.. math::
    \\partial_t Y + AY + B(\\mathcal{R}(Y + \\tilde Z), Y + \\tilde Z) = 0,
    \\quad \\tilde Z(t) = Z(t) + e^{-tA}\\theta_0.
"""
from dataclasses import dataclass, field
import math
from typing import Dict

import numpy as np

from errors import ArgumentError, BlowUpError
from log import debug, log
from integrator import uniform_grid
from .fields import (
    SpectralField, dealias_mask, transport_coeffs,
    wavenumber_squared
)
from .diagnostics import energy_diagnostics
from .noise import FieldPath, ou_convolution_z


def heat_path(theta0, times):
    """:math:`e^{-tA}\\theta_0` at each time, exact per mode."""
    kk = wavenumber_squared(theta0.n)
    times = np.asarray(times, dtype=float)
    return np.exp(-kk[None] * times[:, None, None]) * theta0.coeffs[None]


def step_count(T, dt):
    steps = int(round(T / dt))
    if steps < 1 or abs(steps * dt - T) > 1e-9 * T:
        raise ArgumentError('T={} is not a whole number of steps dt={}'
                            .format(T, dt))
    return steps


def solve_y(z, y0, T, dt, background=None):
    """
    Exponential Euler for the :math:`Y` equation,

    .. math::
        \\hat Y_{j+1} = e^{-|k|^2\\Delta t}\\left(\\hat Y_j - \\Delta t\\,
        \\hat B(\\mathcal{R}\\vartheta_j, \\vartheta_j)\\right),
        \\quad \\vartheta_j = Y_j + Z(t_j) + e^{-t_jA}\\theta_0.

    Args:
        z (FieldPath): :math:`Z` on a grid containing every step time.
        y0 (SpectralField): Mean-zero initial value.
        T (float): Horizon.
        dt (float): Step; ``T`` must be a whole number of steps.
        background (SpectralField): :math:`\\theta_0`, or None for zero.

    Returns:
        FieldPath on the step grid.

    Raises:
        ArgumentError: if ``y0`` has a mean or the grids do not match.
        BlowUpError: if the state stops being finite.
    """
    if y0.coeffs[0, 0] != 0:
        raise ArgumentError('Y0 must be mean-zero')
    if y0.n != z.n or (background is not None and background.n != z.n):
        raise ArgumentError('grid sizes do not match')

    times = uniform_grid(T, step_count(T, dt))
    zc = z.restrict(times).coeffs
    if background is not None:
        bg = heat_path(background, times)
        bg[:, 0, 0] = 0.0
        zc = zc + bg

    n = z.n
    mask = dealias_mask(n)
    kk = wavenumber_squared(n)
    out = np.empty((times.size, n, n), dtype=complex)
    out[0] = y0.coeffs
    y = y0.coeffs.copy()

    for j in range(times.size - 1):
        h = times[j + 1] - times[j]
        theta = y + zc[j]
        b = transport_coeffs(theta, theta, mask)
        with np.errstate(over='ignore', invalid='ignore'):
            y = np.exp(-kk * h) * (y - h * b)
        if not np.all(np.isfinite(y)):
            raise BlowUpError('Y stopped being finite', times[j + 1])
        y[0, 0] = 0.0
        out[j + 1] = y

    debug('qge', 'solved Y over {} steps'.format(times.size - 1))
    return FieldPath(times=times, coeffs=out)


def mild_residual(y, theta):
    """
    Largest :math:`L^2` norm over the grid of

    .. math::
        \\theta(t) - e^{-tA}\\theta_0 - Z(t)
        + \\int_0^t e^{-(t-s)A}B(\\mathcal{R}\\theta(s), \\theta(s))ds,

    the integral taken by the trapezoidal rule in :math:`s` with exact heat
    weights.
    """
    n = theta.n
    mask = dealias_mask(n)
    kk = wavenumber_squared(n)
    integral = np.zeros((n, n), dtype=complex)
    b_prev = transport_coeffs(theta.coeffs[0], theta.coeffs[0], mask)
    worst = float(np.sqrt(np.sum(np.abs(y.coeffs[0]) ** 2)))

    for j in range(theta.times.size - 1):
        h = theta.times[j + 1] - theta.times[j]
        decay = np.exp(-kk * h)
        b_next = transport_coeffs(theta.coeffs[j + 1], theta.coeffs[j + 1],
                                  mask)
        integral = decay * integral + 0.5 * h * (decay * b_prev + b_next)
        gap = y.coeffs[j + 1] + integral
        worst = max(worst, float(np.sqrt(np.sum(np.abs(gap) ** 2))))
        b_prev = b_next

    return 2.0 * math.pi * worst


def assemble_theta(theta0, y, z):
    """
    :math:`\\theta(t) = e^{-tA}\\theta_0 + Y(t) + Z(t)` on the grid of
    ``y``, with the mild-solution residual as a diagnostic.

    Returns:
        Tuple ``(theta, residual)`` of a FieldPath and a float.

    Raises:
        ArgumentError: if ``z`` is not sampled at every time of ``y``.
    """
    if theta0.n != y.n or z.n != y.n:
        raise ArgumentError('grid sizes do not match')
    zc = z.restrict(y.times).coeffs
    coeffs = heat_path(theta0, y.times) + y.coeffs + zc
    if theta0.mean_zero:
        coeffs[:, 0, 0] = 0.0
    theta = FieldPath(times=y.times.copy(), coeffs=coeffs)
    return theta, mild_residual(y, theta)


@dataclass(frozen=True, eq=False)
class QGERun:
    """
    Attributes:
        theta0 (SpectralField): Initial temperature.
        T (float): Horizon.
        dt (float): Step.
        z, y, theta (FieldPath): The splitting parts on the step grid.
        mild_residual (float): Quadrature residual of the mild form.
        diagnostics (dict): Filled by :func:`run_qge`.
    """
    theta0: SpectralField
    T: float
    dt: float
    z: FieldPath
    y: FieldPath
    theta: FieldPath
    mild_residual: float
    seed: int = 0
    replicate: int = 0
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def times(self):
        return self.theta.times

    @property
    def background(self):
        """:math:`\\tilde Z = Z + e^{-tA}\\theta_0` on the step grid."""
        coeffs = self.z.restrict(self.times).coeffs \
            + heat_path(self.theta0, self.times)
        coeffs[:, 0, 0] = 0.0
        return FieldPath(times=self.times, coeffs=coeffs)

    def splitting_defect(self):
        """
        Largest relative gap between :math:`\\theta` and the sum of its
        parts, recomputed.
        """
        parts = heat_path(self.theta0, self.times) + self.y.coeffs \
            + self.z.restrict(self.times).coeffs
        if self.theta0.mean_zero:
            parts[:, 0, 0] = 0.0
        scale = max(float(np.max(np.abs(self.theta.coeffs))), 1e-300)
        return float(np.max(np.abs(parts - self.theta.coeffs))) / scale


def simulate(noise, theta0, T, dt, seed, replicate=0):
    """One run of the splitting scheme on the uniform grid of step ``dt``."""
    if theta0.n != noise.n:
        raise ArgumentError('initial field and noise use different grids')
    z_grid = uniform_grid(T, step_count(T, dt))
    z = ou_convolution_z(noise, T, z_grid, seed, replicate)
    y = solve_y(z, SpectralField.zeros(noise.n), T, dt, background=theta0)
    theta, residual = assemble_theta(theta0, y, z)
    return QGERun(
        theta0=theta0, T=float(T), dt=float(dt), z=z, y=y, theta=theta,
        mild_residual=residual, seed=seed, replicate=replicate,
    )


def refinement_gap(noise, theta0, T, dt, seed, replicate=0):
    """
    Relative :math:`L^2` distance at time ``T`` between :math:`Y` computed
    with steps ``dt`` and ``dt/2`` on the same noise path.
    """
    fine = simulate(noise, theta0, T, dt / 2.0, seed, replicate)
    y = solve_y(fine.z, SpectralField.zeros(noise.n), T, dt,
                background=theta0)
    diff = y.coeffs[-1] - fine.y.coeffs[-1]
    scale = float(np.sqrt(np.sum(np.abs(fine.y.coeffs[-1]) ** 2)))
    gap = float(np.sqrt(np.sum(np.abs(diff) ** 2)))
    log('qge', 'refinement gap at dt={:g}: {:.4g}'.format(dt, gap))
    return gap / scale if scale > 0 else gap


def run_qge(noise, theta0, T, dt, seed, replicate=0, ledger=True):
    """
    Simulate and, when ``ledger`` is set, attach the energy ledger as
    ``diagnostics['ledger']``.
    """
    run = simulate(noise, theta0, T, dt, seed, replicate)
    if ledger:
        run.diagnostics['ledger'] = energy_diagnostics(run)
    run.diagnostics['splitting_defect'] = run.splitting_defect()
    run.diagnostics['mild_residual'] = run.mild_residual
    run.diagnostics['assumption_integral'] = noise.assumption_integral(T)
    return run

