"""
Construction of a full Levy-type process from an :class:`Integrand`,
keeping the per-cell and per-event pieces it was assembled from.
"""
from dataclasses import dataclass

import numpy as np

from errors import ArgumentError
from .integrals import (
    compensator_rate, check_finite, event_values, rows, wiener_increments
)
from .sample_path import augmented_grid, jumps_at_nodes, from_increments


@dataclass(frozen=True, eq=False)
class ProcessTrace:
    """
    A sample path together with its building blocks.

    Within cell ``j`` (from node ``j`` to node ``j+1``) the continuous part
    moves linearly by ``dt[j] * (drift[j] - comp_rate[j]) + wiener[j]``,
    with the evaluators frozen at the cell midpoint and the Wiener factor
    at the left node.

    Attributes:
        path (SamplePath): The process.
        dt: ``(N-1,)`` cell widths.
        mids: ``(N-1,)`` cell midpoints.
        drift: ``(N-1, dim)`` drift ``a`` at the midpoints.
        comp_rate: ``(N-1, dim)`` :math:`\\int\\xi\\,d\\nu` at the midpoints.
        wiener: ``(N-1, dim)`` increments :math:`g(t_j)\\Delta W_j`.
        g_left: ``(N-1, dim, k)`` Wiener factor at the left nodes, or None.
        event_nodes: ``(m,)`` node index of each applied event.
        event_jumps: ``(m, dim)`` jump vector of each event.
        event_compensated: ``(m,)`` True for xi events, False for eta.
        event_times, event_marks: the events themselves.
    """
    path: object
    dt: np.ndarray
    mids: np.ndarray
    drift: np.ndarray
    comp_rate: np.ndarray
    wiener: np.ndarray
    g_left: object
    event_nodes: np.ndarray
    event_jumps: np.ndarray
    event_compensated: np.ndarray
    event_times: np.ndarray
    event_marks: np.ndarray


def levy_process(integrand, path, marks, grid, w=None, x0=None):
    """
    Build :math:`X_t = X_0 + \\int a\\,ds + \\int g\\,dW
    + \\int\\int\\xi\\,\\tilde N + \\int\\int\\eta\\,N`.

    Args:
        integrand (Integrand): The four parts; missing parts are zero.
        path (JumpPath): Events; ``xi`` acts on the integrand's xi layers
            and ``eta`` on its eta layers. Other events are ignored.
        marks (MarkSpace): The mark space of ``path``.
        grid: Time nodes from 0 to T. When ``g`` is given, ``w`` must be
            sampled on this grid.
        w (WienerPath): Required when the integrand has a Wiener part.
        x0: Initial value, default zero.

    Returns:
        ProcessTrace
    """
    dim = integrand.dim
    xi_region = integrand.xi_region(marks)
    eta_region = integrand.eta_region()

    xi_path = path.restrict(xi_region)
    eta_path = path.restrict(eta_region)
    event_times = np.concatenate([xi_path.times, eta_path.times])
    times, is_jump = augmented_grid(grid, event_times)
    n_cells = times.size - 1
    dt = np.diff(times)
    mids = 0.5 * (times[:-1] + times[1:])

    if integrand.a is not None:
        drift = rows(integrand.a(mids), n_cells).copy()
    else:
        drift = np.zeros((n_cells, dim))

    if integrand.xi is not None:
        comp_rate = compensator_rate(integrand.xi, marks, mids, xi_region)
    else:
        comp_rate = np.zeros((n_cells, dim))
    check_finite(dt[:, None] * comp_rate, times, 'compensator')

    g_left = None
    if integrand.g is not None:
        if w is None:
            raise ArgumentError('a Wiener part needs a Wiener path')
        if not np.array_equal(np.asarray(grid), w.times):
            raise ArgumentError('wiener path does not live on the given grid')
        fine = w.refine(times)
        wiener = wiener_increments(integrand.g, fine)
        g_left = np.asarray(integrand.g(times[:-1]), dtype=float)
    else:
        wiener = np.zeros((n_cells, dim))

    parts = []
    if len(xi_path) and integrand.xi is not None:
        parts.append((xi_path, event_values(integrand.xi, xi_path), True))
    if len(eta_path) and integrand.eta is not None:
        parts.append((eta_path, event_values(integrand.eta, eta_path), False))

    if parts:
        ev_times = np.concatenate([p.times for p, _, _ in parts])
        ev_marks = np.concatenate([p.marks for p, _, _ in parts])
        ev_jumps = np.concatenate([v for _, v, _ in parts])
        ev_comp = np.concatenate([
            np.full(len(p), flag) for p, _, flag in parts
        ])
        order = np.argsort(ev_times, kind='stable')
        ev_times, ev_marks = ev_times[order], ev_marks[order]
        ev_jumps, ev_comp = ev_jumps[order], ev_comp[order]
    else:
        ev_times = np.zeros(0)
        ev_marks = np.zeros((0, marks.mark_dim))
        ev_jumps = np.zeros((0, dim))
        ev_comp = np.zeros(0, dtype=bool)

    jumps = jumps_at_nodes(times, ev_times, ev_jumps)
    continuous = np.vstack([
        np.zeros((1, dim)), dt[:, None] * (drift - comp_rate) + wiener
    ])
    x0 = None if x0 is None else np.asarray(x0, dtype=float)
    sample = from_increments(times, is_jump, continuous, jumps, x0)

    return ProcessTrace(
        path=sample, dt=dt, mids=mids, drift=drift, comp_rate=comp_rate,
        wiener=wiener, g_left=g_left,
        event_nodes=np.searchsorted(times, ev_times),
        event_jumps=ev_jumps, event_compensated=ev_comp,
        event_times=ev_times, event_marks=ev_marks,
    )
