"""
Pathwise stochastic integrals on the jump-augmented grid.

Jumps are applied exactly at their times; continuous parts (compensators,
drifts) use the composite midpoint rule on the augmented grid, which is
exact for integrands that are constant in time.
"""
import numpy as np

from errors import ArgumentError, NumericError
from log import debug
import norms
from .sample_path import augmented_grid, jumps_at_nodes, from_increments


def rows(values, n):
    """Coerce evaluator output to ``(n, d)``."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    return np.broadcast_to(values, (n,) + values.shape[1:])


def output_dim(f, marks):
    probe = rows(f(np.zeros(1), np.zeros((1, marks.mark_dim))), 1)
    return probe.shape[1]


def event_values(f, path):
    """``f(tau_m, z_m)`` for every event of ``path``, as ``(m, d)``."""
    return rows(f(path.times, path.marks), len(path))


def compensator_rate(f, marks, times, region=None):
    """:math:`\\int f(t, z)\\nu(dz)` at each time, as ``(N, d)``."""
    out = marks.expect(f, times, region)
    if out.ndim == 1:
        out = out[:, None]
    return out


def check_finite(values, times, what):
    bad = ~np.all(np.isfinite(values), axis=-1)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise NumericError(
            '{} is not finite'.format(what),
            'on ({:.6g}, {:.6g}]'.format(times[j], times[j + 1])
        )


def midpoint_compensator(f, marks, times, region=None):
    """
    Compensator increments :math:`\\Delta_j \\int f(m_j, z)\\nu(dz)` over
    each cell of ``times``, with ``m_j`` the cell midpoint.
    """
    dt = np.diff(times)
    mids = 0.5 * (times[:-1] + times[1:])
    comp = dt[:, None] * compensator_rate(f, marks, mids, region)
    check_finite(comp, times, 'compensator')
    return comp


def integrate_compensated(xi, path, marks, grid, region=None):
    """
    :math:`u_t = \\sum_{\\tau_m \\le t}\\xi(\\tau_m, z_m)
    - \\int_0^t\\int \\xi(s,z)\\nu(dz)ds` on ``grid`` augmented with the
    event times of ``path`` in ``region``.

    Args:
        xi: Vectorized evaluator ``xi(t, z) -> (n, dim)``.
        path (JumpPath): The point process realization.
        marks (MarkSpace): Mark space the path was drawn from.
        grid: Increasing time nodes from 0 to T.
        region: Region ids the integrand lives on; ``None`` for all.

    Raises:
        NumericError: if the compensator is not finite.
    """
    sub = path if region is None else path.restrict(region)
    times, is_jump = augmented_grid(grid, sub.times)
    comp = midpoint_compensator(xi, marks, times, region)

    jumps = jumps_at_nodes(times, sub.times, event_values(xi, sub)) \
        if len(sub) else np.zeros((times.size, comp.shape[1]))
    continuous = np.vstack([np.zeros((1, comp.shape[1])), -comp])

    return from_increments(times, is_jump, continuous, jumps)


def integrate_counting(f, path, grid, region=None):
    """
    :math:`\\int_0^t\\int f\\,N(ds,dz)`, the running sum of ``f`` over the
    events of ``path`` in ``region``.
    """
    sub = path if region is None else path.restrict(region)
    times, is_jump = augmented_grid(grid, sub.times)

    if len(sub):
        vals = event_values(f, sub)
    else:
        vals = rows(f(np.zeros(1), np.zeros((1, path.marks.shape[1]))), 1)[:0]
    jumps = jumps_at_nodes(times, sub.times, vals)
    return from_increments(times, is_jump, np.zeros_like(jumps), jumps)


def wiener_increments(g, w):
    """Left-point products :math:`g(t_i)\\Delta W_i`, as ``(n, dim)``."""
    left = w.times[:-1]
    factors = np.asarray(g(left), dtype=float)
    if factors.ndim != 3 or factors.shape[2] != w.k:
        raise ArgumentError(
            'wiener factor must be (n, dim, {}), got {}'.format(
                w.k, factors.shape
            )
        )
    return np.einsum('nik,nk->ni', factors, w.increments)


def integrate_wiener(g, w, grid=None):
    """
    Ito integral :math:`\\int_0^t g\\,dW` by left-point Riemann sums on
    the grid of ``w``.

    Raises:
        ArgumentError: if ``grid`` is given and differs from the grid of
            ``w``.
    """
    if grid is not None and not np.array_equal(np.asarray(grid), w.times):
        raise ArgumentError('wiener path does not live on the given grid')

    inc = wiener_increments(g, w)
    steps = np.vstack([np.zeros((1, inc.shape[1])), inc])
    return from_increments(
        w.times, np.zeros(w.times.size, dtype=bool), steps,
        np.zeros_like(steps)
    )


def quadratic_functionals(xi, path, marks, space, r, grid, region=None):
    """
    The counting functional :math:`\\int\\int|\\xi|^r dN` and its
    compensator :math:`\\int\\int|\\xi|^r d\\nu\\,ds`, as scalar paths on
    the same augmented grid.
    """
    def power(t, z):
        return norms.norm(space, rows(xi(t, z), np.shape(t)[0])) ** r

    counting = integrate_counting(power, path, grid, region)
    comp = midpoint_compensator(power, marks, counting.times, region)
    steps = np.vstack([np.zeros((1, 1)), comp])
    meyer = from_increments(
        counting.times, counting.is_jump, steps, np.zeros_like(steps)
    )

    debug('integrator', 'r={} counting={:.6g} meyer={:.6g}'.format(
        r, counting.final[0], meyer.final[0]
    ))
    return counting, meyer
