"""
Real fields on the periodic square :math:`[0, 2\\pi)^2`, stored as
normalized Fourier coefficients :math:`\\hat f_k` with
:math:`f(x) = \\sum_k \\hat f_k e^{ik\\cdot x}`, in FFT order.

The Nyquist row and column are kept at zero, so the wavevectors in use are
:math:`\\{-n/2+1, \\dots, n/2-1\\}^2` and real fields have exactly Hermitian
coefficients.
"""
from dataclasses import dataclass
import math

import numpy as np

import constants
from errors import ArgumentError
from norms.spectral import bessel_multiplier, cell_area, wavenumbers


def _check_size(n):
    if n < 4 or n & (n - 1):
        raise ArgumentError('grid size must be a power of two >= 4, got {}'
                            .format(n))


def dealias_mask(n):
    """Boolean mask of the modes kept by the two-thirds rule."""
    k1, k2 = wavenumbers(n)
    cut = constants.dealias_fraction * n / 2.0
    return (np.abs(k1) < cut) & (np.abs(k2) < cut)


def nyquist_mask(n):
    k1, k2 = wavenumbers(n)
    return (k1 == -n / 2) | (k2 == -n / 2)


def wavenumber_squared(n):
    k1, k2 = wavenumbers(n)
    return k1 ** 2 + k2 ** 2


def to_physical(coeffs):
    n = coeffs.shape[-1]
    return np.fft.ifft2(coeffs * n ** 2).real


def to_spectral(values):
    n = values.shape[-1]
    coeffs = np.fft.fft2(values) / n ** 2
    coeffs[..., nyquist_mask(n)] = 0.0
    return coeffs


@dataclass(frozen=True, eq=False)
class SpectralField:
    """
    Attributes:
        n (int): Grid size, a power of two.
        coeffs: ``(n, n)`` complex coefficients in FFT order.
        mean_zero (bool): Whether the ``k = 0`` coefficient is pinned to 0.
    """
    n: int
    coeffs: np.ndarray
    mean_zero: bool = True

    def __post_init__(self):
        _check_size(self.n)
        if self.coeffs.shape != (self.n, self.n):
            raise ArgumentError('coefficients must have shape ({0}, {0})'
                                .format(self.n))
        if self.mean_zero and self.coeffs[0, 0] != 0:
            raise ArgumentError('mean-zero field has a nonzero k=0 '
                                'coefficient')

    @property
    def dealias_mask(self):
        return dealias_mask(self.n)

    @classmethod
    def zeros(cls, n):
        return cls(n, np.zeros((n, n), dtype=complex))

    @classmethod
    def from_physical(cls, values, mean_zero=True):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ArgumentError('expected a square grid of values')
        coeffs = to_spectral(values)
        if mean_zero:
            coeffs[0, 0] = 0.0
        return cls(values.shape[0], coeffs, mean_zero)

    @classmethod
    def single_mode(cls, n, k, amplitude=1.0):
        """
        The real field :math:`a e^{ik\\cdot x} + \\bar a e^{-ik\\cdot x}`.
        """
        coeffs = np.zeros((n, n), dtype=complex)
        k1, k2 = int(k[0]), int(k[1])
        if (k1, k2) == (0, 0):
            raise ArgumentError('single modes must have k != 0')
        if max(abs(k1), abs(k2)) >= n // 2:
            raise ArgumentError('mode {} is not resolved on a {} grid'.format(
                (k1, k2), n
            ))
        coeffs[k1 % n, k2 % n] = amplitude
        coeffs[-k1 % n, -k2 % n] = np.conj(amplitude)
        return cls(n, coeffs)

    def physical(self):
        return to_physical(self.coeffs)

    def imaginary_defect(self):
        """Largest imaginary part of the inverse transform, for checks."""
        return float(np.max(np.abs(np.fft.ifft2(self.coeffs * self.n ** 2)
                                   .imag)))

    def __add__(self, other):
        return SpectralField(self.n, self.coeffs + other.coeffs,
                             self.mean_zero and other.mean_zero)

    def scaled(self, c):
        return SpectralField(self.n, c * self.coeffs, self.mean_zero)


def random_field(n, gen, band=None, decay=1.0):
    """
    A random real mean-zero field with modes ``0 < |k_j| < band`` and
    amplitudes decaying like :math:`|k|^{-decay}`. ``band`` defaults to the
    dealiased range.
    """
    _check_size(n)
    k1, k2 = wavenumbers(n)
    cut = constants.dealias_fraction * n / 2.0 if band is None else band
    keep = (np.abs(k1) < cut) & (np.abs(k2) < cut)
    keep[0, 0] = False

    kk = np.sqrt(np.maximum(wavenumber_squared(n), 1.0))
    noise = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    coeffs = np.where(keep, noise * kk ** -decay, 0.0)
    # project onto Hermitian coefficients
    coeffs = to_spectral(to_physical(coeffs))
    coeffs[0, 0] = 0.0
    coeffs[~keep] = 0.0
    return SpectralField(n, coeffs)


def inner(f, g):
    """
    :math:`L^2` inner product :math:`(2\\pi)^2\\mathrm{Re}\\sum_k \\hat f_k
    \\overline{\\hat g_k}`.
    """
    return constants.domain_length ** 2 * float(
        np.real(np.vdot(g.coeffs, f.coeffs))
    )


def l2_norm(f):
    return math.sqrt(max(inner(f, f), 0.0))


def gradient_l2_norm(f):
    """:math:`|\\nabla f|_{L^2}` computed spectrally."""
    return constants.domain_length * math.sqrt(float(np.sum(
        wavenumber_squared(f.n) * np.abs(f.coeffs) ** 2
    )))


def _check_mean_zero(coeffs):
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    if abs(coeffs[0, 0]) > 1e-12 * scale:
        raise ArgumentError('the Riesz multiplier needs a mean-zero field')


def _riesz_multipliers(n):
    k1, k2 = wavenumbers(n)
    kk = np.sqrt(k1 ** 2 + k2 ** 2)
    kk[0, 0] = 1.0
    m1, m2 = k1 / kk, k2 / kk
    m1[0, 0] = m2[0, 0] = 0.0
    return m1, m2


def riesz_velocity(theta):
    """
    Apply the multipliers :math:`\\hat v_1 = -(k_2/|k|)\\hat\\theta` and
    :math:`\\hat v_2 = (k_1/|k|)\\hat\\theta` with the ``k = 0`` coefficient
    set to zero.

    The multipliers are real and odd, so the coefficients returned are
    anti-Hermitian. :func:`transport_velocity` gives the corresponding
    real velocity field.

    Raises:
        ArgumentError: if ``theta`` is not mean-zero.
    """
    _check_mean_zero(theta.coeffs)
    m1, m2 = _riesz_multipliers(theta.n)
    return (
        SpectralField(theta.n, -m2 * theta.coeffs),
        SpectralField(theta.n, m1 * theta.coeffs),
    )


def transport_velocity(theta_hat):
    """
    Physical velocity components whose coefficients are :math:`-i\\hat v`.
    """
    n = theta_hat.shape[-1]
    m1, m2 = _riesz_multipliers(n)
    return to_physical(1j * m2 * theta_hat), to_physical(-1j * m1 * theta_hat)


def transport_coeffs(theta_hat, phi_hat, mask=None):
    """
    Coefficients of :math:`(v\\cdot\\nabla)\\varphi` with
    :math:`v = \\mathcal{R}\\theta`, both inputs and the product truncated
    by the dealias mask. The ``k = 0`` coefficient is zero.
    """
    n = theta_hat.shape[-1]
    if mask is None:
        mask = dealias_mask(n)
    k1, k2 = wavenumbers(n)

    u1, u2 = transport_velocity(mask * theta_hat)
    phi_hat = mask * phi_hat
    dx = to_physical(1j * k1 * phi_hat)
    dy = to_physical(1j * k2 * phi_hat)

    out = mask * to_spectral(u1 * dx + u2 * dy)
    out[0, 0] = 0.0
    return out


def transport_term(theta, phi):
    """:math:`B(\\mathcal{R}\\theta, \\varphi)` as a dealiased field."""
    _check_mean_zero(theta.coeffs)
    return SpectralField(theta.n, transport_coeffs(theta.coeffs, phi.coeffs))


def nonlinear_term(theta):
    """
    :math:`B(\\mathcal{R}\\theta, \\theta) = (v\\cdot\\nabla)\\theta` with
    :math:`v = \\mathcal{R}\\theta`, evaluated pseudo-spectrally and
    dealiased with the two-thirds rule.
    """
    return transport_term(theta, theta)


def sobolev_norm(field, s, q):
    """
    :math:`|(1+|k|^2)^{s/2} f|_{L^q}` with the physical-space norm taken on
    the grid with uniform cell weights.

    Args:
        field (SpectralField): The field.
        s (float): Smoothness, ``|s| < 1``.
        q (int): 2 or 4.
    """
    if q not in (2, 4):
        raise ArgumentError('q must be 2 or 4, got {}'.format(q))
    if not abs(s) < 1:
        raise ArgumentError('|s| must be below 1, got {}'.format(s))

    values = to_physical(bessel_multiplier(field.n, s) * field.coeffs)
    return float((cell_area(field.n) * np.sum(np.abs(values) ** q))
                 ** (1.0 / q))


def lq_norm(values, q):
    """Grid :math:`L^q` norm of physical values, scalar or vector-valued."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 3:
        values = np.sqrt(np.sum(values ** 2, axis=0))
    return float((cell_area(values.shape[-1]) * np.sum(np.abs(values) ** q))
                 ** (1.0 / q))
