"""
Finite-dimensional normed spaces and the calculus of the power norm
:math:`\\psi_p(x) = |x|^p`.
"""
from dataclasses import dataclass

import numpy as np

from errors import ArgumentError, CapabilityError, UnsupportedExponentError
from . import spectral


@dataclass(frozen=True)
class GridSpec:
    """An ``n`` x ``n`` periodic grid on the torus of side ``2*pi``."""
    n: int

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise ArgumentError(
                'grid size must be a power of two >= 2, got {}'.format(self.n)
            )


@dataclass(frozen=True)
class NormedSpace:
    """
    A coordinate space :math:`\\mathbb{R}^{dim}` with a smooth norm.

    Attributes:
        dim (int): Number of coordinates. For spectral Sobolev spaces this
            is ``grid.n ** 2`` and vectors are row-major flattened fields.
        kind (str): ``'lq'`` or ``'spectral_sobolev'``.
        q (float): Integrability exponent of the norm.
        smoothness_r (float): Declared martingale type, in ``(1, 2]``.
        s (float): Sobolev order (spectral spaces only).
        grid (GridSpec): The grid (spectral spaces only).
    """
    dim: int
    kind: str
    q: float
    smoothness_r: float
    s: float = 0.0
    grid: GridSpec = None

    def __post_init__(self):
        if self.dim < 1:
            raise ArgumentError('dim must be positive, got {}'
                                .format(self.dim))
        if self.kind not in ('lq', 'spectral_sobolev'):
            raise ArgumentError('unknown norm kind {!r}'.format(self.kind))
        if not self.q >= 1:
            raise ArgumentError('q must be >= 1, got {}'.format(self.q))
        if not 1 < self.smoothness_r <= 2:
            raise ArgumentError(
                'r must lie in (1,2], got {}'.format(self.smoothness_r)
            )
        if self.q < 2 and self.smoothness_r > self.q:
            raise ArgumentError(
                'an l^{} norm is at most {}-smooth, r={} declared'.format(
                    self.q, self.q, self.smoothness_r
                )
            )

        if self.kind == 'spectral_sobolev':
            if self.grid is None:
                raise ArgumentError('spectral_sobolev needs a grid')
            if self.dim != self.grid.n ** 2:
                raise ArgumentError(
                    'dim {} does not match grid {}x{}'.format(
                        self.dim, self.grid.n, self.grid.n
                    )
                )

    @property
    def is_hilbert(self):
        return self.kind == 'lq' and self.q == 2

    def check(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[-1] != self.dim:
            raise ArgumentError(
                'expected vectors of length {}, got shape {}'.format(
                    self.dim, x.shape
                )
            )
        return x

    # Spectral spaces measure |M x|_{L^q} with the self-adjoint Bessel
    # multiplier M; lq spaces use M = I and unit weights.
    def _apply_multiplier(self, x):
        if self.kind == 'lq' or self.s == 0:
            return x

        n = self.grid.n
        fields = x.reshape(x.shape[:-1] + (n, n))
        mult = spectral.bessel_multiplier(n, self.s)
        out = np.fft.ifft2(mult * np.fft.fft2(fields)).real
        return out.reshape(x.shape)

    def _weight(self):
        if self.kind == 'lq':
            return 1.0
        return spectral.cell_area(self.grid.n)


def lq(dim, q, r=None):
    """Shorthand for an :math:`\\ell^q` space with the largest admissible r."""
    if r is None:
        r = min(2.0, float(q))
    return NormedSpace(dim=dim, kind='lq', q=float(q), smoothness_r=float(r))


def spectral_sobolev(n, s, q, r=None):
    if r is None:
        r = min(2.0, float(q))
    return NormedSpace(
        dim=n * n, kind='spectral_sobolev', q=float(q), smoothness_r=float(r),
        s=float(s), grid=GridSpec(n)
    )


def norm(space, x):
    """
    Evaluate :math:`|x|_E`.

    Args:
        space (NormedSpace): The space.
        x: A vector of length ``space.dim``, or an array of them stacked
            along leading axes.

    Returns:
        A float for a single vector, otherwise an array of norms with the
        leading shape of ``x``.
    """
    x = space.check(x)
    y = space._apply_multiplier(x)
    q = space.q
    w = space._weight()

    if q == 2:
        out = np.sqrt(w * np.sum(y * y, axis=-1))
    else:
        out = (w * np.sum(np.abs(y) ** q, axis=-1)) ** (1.0 / q)

    if np.ndim(out) == 0:
        return float(out)
    return out


def psi_p(space, x, p):
    return norm(space, x) ** p


@dataclass(frozen=True)
class PowerNormDerivative:
    """
    The functional :math:`\\psi_p'(x)` represented by its coordinate
    gradient, so ``deriv(h) == gradient @ h``.
    """
    p: float
    gradient: np.ndarray

    def __call__(self, h):
        return np.sum(self.gradient * np.asarray(h, dtype=float), axis=-1)


def _check_exponent(p):
    if not p >= 1:
        raise UnsupportedExponentError(
            'power-norm exponent must be >= 1, got {}'.format(p)
        )


def power_gradient(space, x, p):
    """
    Batched coordinate gradient of :math:`\\psi_p`; rows of ``x`` are
    independent points. Returns an array shaped like ``x``.
    """
    _check_exponent(p)
    x = space.check(x)

    y = space._apply_multiplier(x)
    q = space.q
    w = space._weight()
    ny = norm(space, x)
    ny = np.asarray(ny)[..., None]

    zero = ny == 0
    if p == 1 and np.any(zero):
        raise UnsupportedExponentError(
            'psi_1 is not differentiable at the origin'
        )

    with np.errstate(divide='ignore', invalid='ignore'):
        scale = np.where(zero, 0.0, p * ny ** (p - q))
        if q == 2:
            gy = scale * w * y
        else:
            gy = scale * w * np.abs(y) ** (q - 1) * np.sign(y)
    gy = np.where(zero, 0.0, gy)

    return space._apply_multiplier(gy)


def psi_p_gradient(space, x, p):
    """
    Derivative of :math:`\\psi_p(x)=|x|_E^p`.

    For :math:`\\ell^q` the i-th component is
    :math:`p|x|_q^{p-q}|x_i|^{q-1}\\operatorname{sign}(x_i)`; at the origin
    the zero functional is returned for ``p > 1``.

    Raises:
        UnsupportedExponentError: if ``p < 1``, or ``p == 1`` at ``x = 0``.
    """
    x = space.check(x)
    return PowerNormDerivative(p=float(p),
                               gradient=power_gradient(space, x, p))


def psi_p_hessian(space, x, p):
    """
    Second derivative of :math:`\\psi_p` on :math:`\\ell^2`, as a
    ``(..., dim, dim)`` array:
    :math:`p|x|^{p-2}I + p(p-2)|x|^{p-4}xx^T`.

    Raises:
        CapabilityError: for anything other than a Euclidean space.
    """
    if not space.is_hilbert:
        raise CapabilityError(
            'second derivatives of the power norm are only available on l^2'
        )
    _check_exponent(p)
    x = space.check(x)

    nx = np.sqrt(np.sum(x * x, axis=-1))[..., None, None]
    eye = np.eye(space.dim)
    outer = x[..., :, None] * x[..., None, :]
    zero = nx == 0

    if np.any(zero) and p < 2:
        raise UnsupportedExponentError(
            'psi_{} is not twice differentiable at the origin'.format(p)
        )

    with np.errstate(divide='ignore', invalid='ignore'):
        h = p * nx ** (p - 2) * eye + p * (p - 2) * nx ** (p - 4) * outer
    at_origin = (2.0 * eye) if p == 2 else np.zeros_like(eye)
    return np.where(zero, at_origin, h)


def random_directions(space, count, gen):
    """Gaussian directions scaled to unit norm in ``space``."""
    u = gen.standard_normal((count, space.dim))
    return u / norm(space, u)[:, None]


def dual_norm_estimate(space, functionals, directions):
    """
    Estimate :math:`\\sup_{|h|=1}|f(h)|` per row of ``functionals`` over
    the given unit directions plus each functional's own direction.
    """
    sampled = np.max(np.abs(functionals @ directions.T), axis=-1)

    own = norm(space, functionals)
    with np.errstate(divide='ignore', invalid='ignore'):
        self_dir = np.where(
            own > 0,
            np.sum(functionals * functionals, axis=-1) / own,
            0.0
        )
    return np.maximum(sampled, self_dir)
