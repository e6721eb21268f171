"""
Test functions :math:`\\varphi: E \\to \\mathbb{R}` with derivatives,
batched over rows.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

import constants
import norms
import rng
from errors import ArgumentError, CapabilityError


@dataclass(frozen=True)
class TestFunction:
    """
    Attributes:
        kind (str): ``'power_norm'``, ``'exponential_tail'`` or
            ``'smooth_user'``.
        space (NormedSpace): Domain of the function.
        value: ``value(x) -> (n,)`` for ``x`` of shape ``(n, dim)``.
        grad: ``grad(x) -> (n, dim)`` coordinate gradient.
        hess: ``hess(x) -> (n, dim, dim)``, or None if not available.
        param (float): ``p`` for power norms, ``lambda`` for the
            exponential tail function.
    """
    __test__ = False

    kind: str
    space: object
    value: Callable
    grad: Callable
    hess: Optional[Callable] = None
    param: float = 0.0

    def hessian(self, x):
        if self.hess is None:
            raise CapabilityError(
                '{} test function has no second derivative'.format(self.kind)
            )
        return self.hess(x)


def power_norm(space, p):
    """:math:`\\psi_p(x) = |x|^p`, twice differentiable on l^2 only."""
    hess = None
    if space.is_hilbert:
        def hess(x):
            return norms.psi_p_hessian(space, x, p)

    return TestFunction(
        kind='power_norm', space=space,
        value=lambda x: np.atleast_1d(norms.psi_p(space, x, p)),
        grad=lambda x: norms.space.power_gradient(space, x, p),
        hess=hess, param=float(p)
    )


def exponential_tail(space, lam):
    """
    :math:`f_\\lambda(x) = (1+\\lambda|x|^2)^{1/2}` with
    :math:`f_\\lambda'(x) = \\frac{\\lambda}{2f_\\lambda(x)}\\psi_2'(x)`.
    """
    if not lam > 0:
        raise ArgumentError('lambda must be positive, got {}'.format(lam))

    def value(x):
        return np.sqrt(1.0 + lam * np.atleast_1d(norms.psi_p(space, x, 2)))

    def grad(x):
        f = value(x)
        return (lam / (2.0 * f))[:, None] * np.atleast_2d(
            norms.space.power_gradient(space, x, 2)
        )

    hess = None
    if space.is_hilbert:
        def hess(x):
            x = np.atleast_2d(x)
            f = value(x)[:, None, None]
            outer = x[:, :, None] * x[:, None, :]
            return lam * np.eye(space.dim) / f - lam ** 2 * outer / f ** 3

    return TestFunction(
        kind='exponential_tail', space=space, value=value, grad=grad,
        hess=hess, param=float(lam)
    )


def linear(space, v):
    """:math:`\\varphi(x) = \\langle x, v\\rangle`."""
    v = np.asarray(v, dtype=float)
    return smooth_user(
        space,
        lambda x: np.atleast_2d(x) @ v,
        lambda x: np.broadcast_to(v, np.atleast_2d(x).shape),
        lambda x: np.zeros((np.atleast_2d(x).shape[0], space.dim, space.dim)),
        validate=False
    )


def derivative_error(fn, deriv, points):
    """
    Largest relative error between ``deriv`` and central differences of
    ``fn`` at step ``1e-5 * (1 + |x|)``. ``fn`` maps ``(n, dim)`` to
    ``(n, ...)`` and ``deriv`` to ``(n, ..., dim)``.
    """
    points = np.atleast_2d(points)
    exact = np.asarray(deriv(points), dtype=float)
    worst = 0.0
    dim = points.shape[1]
    steps = constants.fd_relative_step * (
        1.0 + np.sqrt(np.sum(points ** 2, axis=1))
    )

    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        shift = steps[:, None] * e
        fd = (np.asarray(fn(points + shift)) - np.asarray(fn(points - shift)))
        fd = fd / (2.0 * steps.reshape((-1,) + (1,) * (fd.ndim - 1)))
        err = np.abs(fd - exact[..., i])
        scale = np.max(np.abs(exact.reshape(exact.shape[0], -1)), axis=1)
        scale = scale.reshape((-1,) + (1,) * (err.ndim - 1))
        worst = max(worst, float(np.max(err / np.maximum(scale, 1e-300))))

    return worst


def check_derivatives(tf, n_points=100, seed=0, radius=2.0):
    """
    Validate ``tf``'s derivatives by finite differences on random points.

    Returns:
        Tuple ``(grad_error, hess_error)``; ``hess_error`` is None without a
        second derivative.
    """
    gen = rng.stream(seed, rng.PROBES, 4)
    points = radius * gen.standard_normal((n_points, tf.space.dim)) \
        / np.sqrt(tf.space.dim)

    grad_error = derivative_error(tf.value, tf.grad, points)
    hess_error = None
    if tf.hess is not None:
        hess_error = derivative_error(tf.grad, tf.hess, points)
    return grad_error, hess_error


def smooth_user(space, phi, dphi, d2phi=None, validate=True):
    """
    A user function with supplied derivatives. Derivatives are checked
    against finite differences on 100 random points and rejected if the
    relative error exceeds ``constants.fd_tolerance``.
    """
    tf = TestFunction(
        kind='smooth_user', space=space,
        value=lambda x: np.asarray(phi(np.atleast_2d(x)), dtype=float),
        grad=lambda x: np.asarray(dphi(np.atleast_2d(x)), dtype=float),
        hess=None if d2phi is None else (
            lambda x: np.asarray(d2phi(np.atleast_2d(x)), dtype=float)
        ),
    )
    if validate:
        grad_error, hess_error = check_derivatives(tf)
        if grad_error > constants.fd_tolerance:
            raise ArgumentError(
                'supplied derivative disagrees with finite differences '
                '(relative error {:.3g})'.format(grad_error)
            )
        if hess_error is not None and hess_error > constants.fd_tolerance:
            raise ArgumentError(
                'supplied second derivative disagrees with finite differences '
                '(relative error {:.3g})'.format(hess_error)
            )
    return tf
