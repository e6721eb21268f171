"""
Fourier-multiplier helpers on the periodic square grid. Shared by the
spectral Sobolev norm and the quasi-geostrophic solver.
"""
import numpy as np

import constants


def wavenumbers(n):
    """
    Integer wavevector components for an ``n`` x ``n`` grid.

    Returns:
        Tuple ``(k1, k2)`` of ``(n, n)`` float arrays in FFT order, with
        ``k1`` varying along axis 0.
    """
    k = np.fft.fftfreq(n, 1.0 / n)
    return np.meshgrid(k, k, indexing='ij')


def bessel_multiplier(n, s):
    k1, k2 = wavenumbers(n)
    return (1.0 + k1 ** 2 + k2 ** 2) ** (s / 2.0)


def bessel_potential(field, s):
    """
    Apply :math:`(1+|k|^2)^{s/2}` to a real ``(n, n)`` field and return the
    real result in physical space.
    """
    if s == 0:
        return np.asarray(field, dtype=float)

    n = field.shape[0]
    return np.fft.ifft2(bessel_multiplier(n, s) * np.fft.fft2(field)).real


def cell_area(n):
    return (constants.domain_length / n) ** 2


def grid_lq_norm(field, q):
    """
    Physical-space :math:`L^q` norm with uniform cell weights ``h**2``.
    """
    w = cell_area(field.shape[0])
    return (w * np.sum(np.abs(field) ** q)) ** (1.0 / q)
