"""
Stochastic convolutions :math:`\\int_0^t e^{(t-s)A}\\,dL_s` by the exact
one-step recursion

.. math::
    X_{j} = e^{\\Delta_j A}(X_{j-1} + g(t_{j-1})\\Delta W_j)
            - K_j + \\sum_{\\tau_m = t_j}\\xi(\\tau_m, z_m)

on the jump-augmented grid, where :math:`K_j` is the compensator carried
through the semigroup over the cell. Diagonal semigroups integrate
:math:`K_j` exactly for time-constant rates; dense generators use the
midpoint rule :math:`\\Delta_j e^{\\Delta_j A/2} c(m_j)`.
"""
import numpy as np

from errors import ArgumentError
from .integrals import (
    compensator_rate, check_finite, event_values, wiener_increments
)
from .sample_path import SamplePath, augmented_grid, jumps_at_nodes


def semigroup_compensator(xi, marks, semigroup, times, region=None):
    dt = np.diff(times)
    mids = 0.5 * (times[:-1] + times[1:])
    rate = compensator_rate(xi, marks, mids, region)

    if semigroup.form == 'diagonal':
        comp = semigroup.phi1(dt) * rate
    else:
        comp = np.stack([
            d * semigroup.apply(0.5 * d, c) for d, c in zip(dt, rate)
        ]) if dt.size else rate
    check_finite(comp, times, 'compensator')
    return comp


def _run(semigroup, times, is_jump, steps, jumps, noise=None):
    """
    Propagate the recursion. ``steps`` already holds ``jump - K`` per node,
    ``noise`` the Wiener increments that pass through the semigroup.
    """
    values = np.empty_like(steps)
    x = steps[0].copy()
    values[0] = x
    dt = np.diff(times)

    if semigroup.form == 'diagonal':
        decay = np.exp(semigroup.eigs * dt[:, None])
        for j in range(1, times.size):
            if noise is not None:
                x = x + noise[j - 1]
            x = decay[j - 1] * x + steps[j]
            values[j] = x
    else:
        for j in range(1, times.size):
            if noise is not None:
                x = x + noise[j - 1]
            x = semigroup.apply(dt[j - 1], x) + steps[j]
            values[j] = x

    return SamplePath(
        times=times, values=values, left_limits=values - jumps,
        is_jump=is_jump
    )


def _check_dim(semigroup, dim):
    if semigroup.dim != dim:
        raise ArgumentError(
            'semigroup acts on dimension {}, integrand has {}'.format(
                semigroup.dim, dim
            )
        )


def convolve(xi, path, marks, semigroup, grid, region=None):
    """
    :math:`X_t = \\int_0^t\\int e^{(t-s)A}\\xi(s,z)\\tilde N(ds,dz)`.

    With :math:`A = 0` this adds exactly the same per-node increments in
    the same order as :func:`integrate_compensated`, so both agree to the
    last bit.
    """
    sub = path if region is None else path.restrict(region)
    times, is_jump = augmented_grid(grid, sub.times)
    comp = semigroup_compensator(xi, marks, semigroup, times, region)
    _check_dim(semigroup, comp.shape[1])

    jumps = jumps_at_nodes(times, sub.times, event_values(xi, sub)) \
        if len(sub) else np.zeros((times.size, comp.shape[1]))
    continuous = np.vstack([np.zeros((1, comp.shape[1])), -comp])

    return _run(semigroup, times, is_jump, continuous + jumps, jumps)


def convolve_levy(g, xi, w, path, marks, semigroup, grid, region=None):
    """
    :math:`X_t = \\int_0^t e^{(t-s)A}g_s\\,dW_s
    + \\int_0^t\\int e^{(t-s)A}\\xi(s,z)\\tilde N(ds,dz)`.

    The Wiener path must live on ``grid``; it is refined at the jump times
    by Brownian-bridge sampling. Either factor may be ``None``.

    Raises:
        ArgumentError: if ``w`` is not sampled on ``grid``.
    """
    if g is not None and not np.array_equal(np.asarray(grid), w.times):
        raise ArgumentError('wiener path does not live on the given grid')

    if xi is None or path is None:
        times, is_jump = augmented_grid(grid, ())
        comp = np.zeros((times.size - 1, semigroup.dim))
        jumps = np.zeros((times.size, semigroup.dim))
    else:
        sub = path if region is None else path.restrict(region)
        times, is_jump = augmented_grid(grid, sub.times)
        comp = semigroup_compensator(xi, marks, semigroup, times, region)
        _check_dim(semigroup, comp.shape[1])
        if len(sub):
            jumps = jumps_at_nodes(times, sub.times, event_values(xi, sub))
        else:
            jumps = np.zeros((times.size, comp.shape[1]))
    continuous = np.vstack([np.zeros((1, comp.shape[1])), -comp])

    noise = None
    if g is not None:
        noise = wiener_increments(g, w.refine(times))

    return _run(semigroup, times, is_jump, continuous + jumps, jumps, noise)
