"""
Pathwise evaluation of both Ito formulas for a constructed process.

The continuous part of the path is linear within each grid cell, with the
evaluators frozen at the cell midpoint, so every ``ds`` integral is an
integral along a straight segment. Segments are split where a coordinate
or the norm passes through zero and integrated with fixed Gauss-Legendre
rules. The xi term and the correction term are built from the same node
values, so their sum is the jump sum minus the derivative term exactly.
"""
from dataclasses import dataclass, field
import json
import math
from typing import Dict

import numpy as np

import constants
from errors import ArgumentError, CapabilityError, NumericError
from log import debug
from integrator import levy_process


@dataclass(frozen=True)
class ItoReport:
    """
    Attributes:
        lhs (float): :math:`\\varphi(X_t) - \\varphi(X_0)`.
        rhs_terms (dict): One value per summand of the formula: ``drift``,
            ``wiener``, ``trace``, ``eta_jumps``, ``xi_compensated`` and
            ``correction``. The Wiener and trace entries are present only
            for the formula with a Gaussian part.
        residual (float): ``lhs - sum(rhs_terms)``.
        grid_resolution (float): Largest step of the user grid.
    """
    lhs: float
    rhs_terms: Dict[str, float] = field(default_factory=dict)
    residual: float = 0.0
    grid_resolution: float = 0.0

    @property
    def rhs(self):
        return math.fsum(self.rhs_terms.values())

    def to_dict(self):
        return {
            'lhs': self.lhs,
            'rhs_terms': dict(self.rhs_terms),
            'residual': self.residual,
            'grid_resolution': self.grid_resolution,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def interlace(path, layer):
    """
    Times of the events with marks in :math:`D_n`, the union of the layers
    up to and including region ``layer`` in exhaustion order.

    Raises:
        ArgumentError: if :math:`D_n` has infinite mass, is not covered by
            the simulated layers, or ``layer`` is unknown.
    """
    if not path.layer_weights:
        return path.times[path.layers <= layer].copy()

    ids = [region for region, _ in path.layer_weights]
    if layer not in ids:
        raise ArgumentError('unknown layer {}'.format(layer))
    upto = path.layer_weights[:ids.index(layer) + 1]

    mass = math.fsum(w for _, w in upto)
    if not math.isfinite(mass):
        raise ArgumentError(
            'layer {} has infinite mass; its jump times do not form a '
            'sequence'.format(layer)
        )
    missing = [region for region, _ in upto if region not in path.simulated]
    if missing:
        raise ArgumentError(
            'layers {} were not simulated on this path'.format(missing)
        )

    region = [region for region, _ in upto]
    return path.times[np.isin(path.layers, region)].copy()


def taylor_remainder(tf, x, y, n_nodes=None):
    """
    :math:`R_\\varphi(x,y) = \\int_0^1 (\\varphi'(x+\\theta(y-x))
    - \\varphi'(x))(y-x)\\,d\\theta` by Gauss-Legendre in :math:`\\theta`.
    ``x`` and ``y`` may be single vectors or stacks of rows.
    """
    if n_nodes is None:
        n_nodes = constants.gauss_legendre_nodes
    single = np.ndim(x) == 1
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    d = y - x

    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    theta = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights

    pts = x[:, None, :] + theta[None, :, None] * d[:, None, :]
    grads = tf.grad(pts.reshape(-1, x.shape[1])).reshape(pts.shape)
    along = np.einsum('nqi,ni->nq', grads, d)
    base = np.sum(tf.grad(x) * d, axis=1)
    out = along @ weights - base

    return float(out[0]) if single else out


def _pieces(start, end):
    """
    Split each segment ``start -> end`` at coordinate zero crossings and
    at its closest approach to the origin.

    Returns:
        ``(cell, lo, hi)`` arrays over the pieces, in ``theta`` units.
    """
    d = end - start
    with np.errstate(divide='ignore', invalid='ignore'):
        cross = -start / d
        closest = -np.sum(start * d, axis=1) / np.sum(d * d, axis=1)
    cuts = np.concatenate([
        np.zeros((start.shape[0], 1)), cross, closest[:, None],
        np.ones((start.shape[0], 1))
    ], axis=1)
    cuts = np.where((cuts >= 0) & (cuts <= 1), cuts, np.nan)
    cuts = np.sort(cuts, axis=1)

    lo, hi = cuts[:, :-1], cuts[:, 1:]
    ok = np.isfinite(lo) & np.isfinite(hi) & (hi > lo)
    cell = np.broadcast_to(np.arange(start.shape[0])[:, None], lo.shape)
    return cell[ok], lo[ok], hi[ok]


def _segment_rule(trace, n_nodes):
    """
    Quadrature points along every cell segment.

    Returns:
        Tuple ``(cell, points, weights)``: cell index per point, the path
        value there and the ``ds`` weight.
    """
    path = trace.path
    start = path.values[:-1]
    end = path.left_limits[1:]
    cell, lo, hi = _pieces(start, end)

    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5 * (hi - lo)
    theta = (lo + half)[:, None] + half[:, None] * nodes[None, :]
    w = (half[:, None] * weights[None, :]) * trace.dt[cell][:, None]

    pts = start[cell][:, None, :] + theta[:, :, None] * (
        end[cell] - start[cell]
    )[:, None, :]
    return (
        np.repeat(cell, n_nodes), pts.reshape(-1, start.shape[1]),
        w.reshape(-1)
    )


def _sequential_jumps(trace):
    """Pre- and post-jump states of every event, in application order."""
    left = trace.path.left_limits
    pre = np.empty_like(trace.event_jumps)
    offset = None
    last = -1
    for i, node in enumerate(trace.event_nodes):
        if node != last:
            offset = left[node].copy()
            last = node
        pre[i] = offset
        offset = offset + trace.event_jumps[i]
    return pre, pre + trace.event_jumps


def _check_terms(terms):
    for name, value in terms.items():
        if not math.isfinite(value):
            raise NumericError('Ito term is not finite', name)


def _nu_integral(tf, xi, mids, pts, w, z, zw, block=1 << 18):
    n_z, dim = z.shape[0], pts.shape[1]
    step = max(1, block // n_z)
    parts = []
    for lo in range(0, pts.shape[0], step):
        p, m = pts[lo:lo + step], mids[lo:lo + step]
        n_p = p.shape[0]
        jump = np.asarray(
            xi(np.repeat(m, n_z), np.tile(z, (n_p, 1))), dtype=float
        ).reshape(n_p, n_z, dim)
        shifted = tf.value((p[:, None, :] + jump).reshape(-1, dim))
        diff = shifted.reshape(n_p, n_z) - tf.value(p)[:, None]
        parts.append(w[lo:lo + step] * (diff @ zw))
    return math.fsum(np.concatenate(parts))


def _jump_terms(tf, integrand, marks, trace, n_nodes):
    cell, pts, w = _segment_rule(trace, n_nodes)
    grads = tf.grad(pts) if pts.size else np.zeros((0, trace.path.dim))

    drift = math.fsum(w * np.sum(grads * trace.drift[cell], axis=1))
    comp = math.fsum(w * np.sum(grads * trace.comp_rate[cell], axis=1))

    # nu-integral of phi(X_s + xi) - phi(X_s) along the segments
    nu_phi = 0.0
    if integrand.xi is not None and pts.size:
        z, zw, _ = marks.nodes(integrand.xi_region(marks))
        if z.shape[0]:
            nu_phi = _nu_integral(tf, integrand.xi, trace.mids[cell], pts, w,
                                  z, zw)

    pre, post = _sequential_jumps(trace)
    delta = tf.value(post) - tf.value(pre) if len(pre) else np.zeros(0)
    xi_sum = math.fsum(delta[trace.event_compensated])
    eta_sum = math.fsum(delta[~trace.event_compensated])

    return {
        'drift': drift,
        'eta_jumps': eta_sum,
        'xi_compensated': xi_sum - nu_phi,
        'correction': nu_phi - comp,
    }


def _report(tf, trace, terms, grid):
    values = trace.path.values
    lhs = float(tf.value(values[-1:])[0] - tf.value(values[:1])[0])
    _check_terms(terms)
    if not math.isfinite(lhs):
        raise NumericError('Ito term is not finite', 'lhs')

    residual = lhs - math.fsum(terms.values())
    debug('ito', 'lhs={:.6g} residual={:.3g}'.format(lhs, residual))
    return ItoReport(
        lhs=lhs, rhs_terms=terms, residual=residual,
        grid_resolution=float(np.max(np.diff(np.asarray(grid))))
    )


def ito_residual_jump(tf, integrand, path, marks, grid, x0=None,
                      n_nodes=None):
    """
    Evaluate every term of the Ito formula for processes without a
    Gaussian part and return the residual.

    Args:
        tf (TestFunction): :math:`\\varphi`, at least :math:`C^1`.
        integrand (Integrand): ``a``, ``xi`` and ``eta``; ``g`` must be
            absent.
        path (JumpPath): Events driving the process.
        marks (MarkSpace): Mark space of ``path``.
        grid: Time nodes from 0 to T.

    Raises:
        ArgumentError: if the integrand has a Wiener part.
        NumericError: naming the first non-finite term.
    """
    if integrand.g is not None:
        raise ArgumentError('use ito_residual_levy for a Wiener part')
    if n_nodes is None:
        n_nodes = constants.segment_nodes

    trace = levy_process(integrand, path, marks, grid, x0=x0)
    terms = _jump_terms(tf, integrand, marks, trace, n_nodes)
    return _report(tf, trace, terms, grid)


def ito_residual_levy(tf, integrand, path, w, marks, grid, x0=None,
                      n_nodes=None):
    """
    Ito formula with a Gaussian part: adds the left-point Wiener term
    :math:`\\sum\\varphi'(X_{t_j})(g(t_j)\\Delta W_j)` and the trace term
    :math:`\\frac12\\sum \\operatorname{tr}(g^T\\varphi''(X_{t_j})g)\\Delta_j`
    to the jump formula.

    Raises:
        CapabilityError: if :math:`\\varphi''` is unavailable or the space
            is not Euclidean.
    """
    if tf.hess is None or not tf.space.is_hilbert:
        raise CapabilityError(
            'the trace term needs a second derivative on a Euclidean space'
        )
    if n_nodes is None:
        n_nodes = constants.segment_nodes

    trace = levy_process(integrand, path, marks, grid, w=w, x0=x0)
    terms = _jump_terms(tf, integrand, marks, trace, n_nodes)

    if trace.g_left is not None:
        left = trace.path.values[:-1]
        wiener = math.fsum(np.sum(tf.grad(left) * trace.wiener, axis=1))
        h = tf.hessian(left)
        tr = np.einsum('nik,nij,njk->n', trace.g_left, h, trace.g_left)
        trace_term = 0.5 * math.fsum(tr * trace.dt)
    else:
        wiener, trace_term = 0.0, 0.0

    terms = {
        'drift': terms['drift'],
        'wiener': wiener,
        'trace': trace_term,
        'eta_jumps': terms['eta_jumps'],
        'xi_compensated': terms['xi_compensated'],
        'correction': terms['correction'],
    }
    return _report(tf, trace, terms, grid)
