"""
Integrands :math:`(a, g, \\xi, \\eta)` of a Levy-type process

.. math::
    X_t = X_0 + \\int_0^t a\\,ds + \\int_0^t g\\,dW
          + \\int_0^t\\int \\xi\\,\\tilde N(ds,dz)
          + \\int_0^t\\int \\eta\\,N(ds,dz).

All evaluators are vectorized over a batch of ``n`` evaluation points and
must be predictable: they may depend on the path strictly before ``t``
only. Every shipped integrand is a deterministic function of ``(t, z)``.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from errors import ArgumentError


@dataclass(frozen=True)
class Integrand:
    """
    Attributes:
        dim (int): Dimension of the state space.
        xi: ``xi(t, z) -> (n, dim)`` integrated against the compensated
            measure, ``t`` shaped ``(n,)`` and ``z`` shaped ``(n, mark_dim)``.
        eta: ``eta(t, z) -> (n, dim)`` integrated against the counting
            measure.
        g: ``g(t) -> (n, dim, k)`` Wiener factor.
        a: ``a(t) -> (n, dim)`` drift.
        k (int): Dimension of the Wiener factor.
        xi_layers: Region ids carrying ``xi``; ``None`` means every layer
            not listed in ``eta_layers``.
        eta_layers: Region ids carrying ``eta``.
    """
    dim: int
    xi: Optional[Callable] = None
    eta: Optional[Callable] = None
    g: Optional[Callable] = None
    a: Optional[Callable] = None
    k: int = 1
    xi_layers: Optional[Tuple[int, ...]] = None
    eta_layers: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.eta is not None and not self.eta_layers:
            raise ArgumentError('eta needs the layers it lives on')
        if self.xi_layers is not None and set(self.xi_layers) & set(
            self.eta_layers
        ):
            raise ArgumentError(
                'xi and eta must live on disjoint layers, both use {}'.format(
                    sorted(set(self.xi_layers) & set(self.eta_layers))
                )
            )

    def xi_region(self, marks):
        """Region ids of ``marks`` carrying ``xi``."""
        if self.xi is None:
            return ()
        if self.xi_layers is not None:
            return tuple(self.xi_layers)
        return tuple(
            layer.region_id for layer in marks.layers
            if layer.region_id not in self.eta_layers
        )

    def eta_region(self):
        if self.eta is None:
            return ()
        return tuple(self.eta_layers)

    def scaled(self, c):
        """The integrand with every part multiplied by ``c``."""
        def times(f):
            if f is None:
                return None
            return lambda *args: c * np.asarray(f(*args), dtype=float)

        return Integrand(
            dim=self.dim, xi=times(self.xi), eta=times(self.eta),
            g=times(self.g), a=times(self.a), k=self.k,
            xi_layers=self.xi_layers, eta_layers=self.eta_layers
        )


def constant_jump(c, dim=1):
    """:math:`\\xi(t, z) \\equiv c` for a scalar or vector ``c``."""
    c = np.broadcast_to(np.asarray(c, dtype=float), (dim,)).copy()
    return lambda t, z: np.broadcast_to(c, (np.shape(t)[0], dim))


def mark_jump(scale=1.0):
    """:math:`\\xi(t, z) = scale \\cdot z`; the mark is the jump."""
    return lambda t, z: scale * np.asarray(z, dtype=float)


def time_jump(fn, dim=1):
    """:math:`\\xi(t, z) = fn(t)` broadcast over coordinates."""
    def xi(t, z):
        v = np.asarray(fn(np.asarray(t, dtype=float)), dtype=float)
        return np.broadcast_to(v[:, None] if v.ndim == 1 else v,
                               (np.shape(t)[0], dim))
    return xi


def constant_factor(matrix):
    """:math:`g(t) \\equiv G` for a ``(dim, k)`` matrix."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    return lambda t: np.broadcast_to(
        matrix, (np.shape(t)[0],) + matrix.shape
    )


def time_factor(fn, dim=1, k=1):
    """:math:`g(t) = fn(t) I`."""
    eye = np.eye(dim, k)

    def g(t):
        v = np.asarray(fn(np.asarray(t, dtype=float)), dtype=float)
        return v[:, None, None] * eye
    return g


def constant_drift(c, dim=1):
    c = np.broadcast_to(np.asarray(c, dtype=float), (dim,)).copy()
    return lambda t: np.broadcast_to(c, (np.shape(t)[0], dim))
