import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import norms
from errors import ArgumentError, CapabilityError, UnsupportedExponentError
from norms.spectral import grid_lq_norm

coordinates = st.floats(-10, 10, allow_nan=False, allow_subnormal=False)
vectors = st.lists(coordinates, min_size=3, max_size=3).map(np.array)


def test_lq_norms_match_numpy():
    x = np.array([3.0, -4.0, 1.0])
    assert norms.norm(norms.lq(3, 2), x) == pytest.approx(np.linalg.norm(x))
    assert norms.norm(norms.lq(3, 4), x) == pytest.approx(
        np.linalg.norm(x, 4)
    )
    assert norms.norm(norms.lq(3, 1), x) == pytest.approx(8.0)


def test_batched_norm_keeps_leading_shape():
    x = np.ones((5, 2, 3))
    out = norms.norm(norms.lq(3, 2), x)
    assert out.shape == (5, 2)
    assert np.allclose(out, np.sqrt(3.0))


def test_declared_type_is_validated():
    with pytest.raises(ArgumentError, match=r'r must lie in \(1,2\]'):
        norms.lq(2, 2, r=3)
    with pytest.raises(ArgumentError):
        norms.lq(2, 1.5, r=2)
    with pytest.raises(ArgumentError):
        norms.spectral_sobolev(6, 0.0, 2)


def test_wrong_length_is_rejected():
    with pytest.raises(ArgumentError):
        norms.norm(norms.lq(3, 2), np.ones(4))


@pytest.mark.parametrize('q', [2, 3, 4])
@pytest.mark.parametrize('p', [2, 3, 4])
def test_gradient_matches_finite_differences(p, q):
    space = norms.lq(4, q)
    gen = np.random.default_rng(1)
    h = 1e-6
    for _ in range(100):
        x = gen.standard_normal(4)
        grad = norms.psi_p_gradient(space, x, p).gradient
        fd = np.array([
            (norms.psi_p(space, x + h * e, p)
             - norms.psi_p(space, x - h * e, p)) / (2 * h)
            for e in np.eye(4)
        ])
        assert np.allclose(grad, fd, rtol=1e-6, atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(vectors, st.sampled_from([2.0, 3.0, 4.0]),
       st.sampled_from([2.0, 3.0, 4.0]))
def test_euler_identity(x, p, q):
    space = norms.lq(3, q)
    value = norms.psi_p(space, x, p)
    derivative = norms.psi_p_gradient(space, x, p)
    assert derivative(x) == pytest.approx(p * value, rel=1e-12, abs=1e-12)


def test_gradient_at_origin():
    space = norms.lq(3, 2)
    assert np.all(norms.psi_p_gradient(space, np.zeros(3), 2).gradient == 0)
    with pytest.raises(UnsupportedExponentError):
        norms.psi_p_gradient(space, np.zeros(3), 1)
    with pytest.raises(UnsupportedExponentError):
        norms.psi_p_gradient(space, np.ones(3), 0.5)


def test_hessian_matches_gradient_differences():
    space = norms.lq(3, 2)
    x = np.array([0.3, -1.2, 0.7])
    h = 1e-6
    hess = norms.psi_p_hessian(space, x, 3)
    fd = np.array([
        (norms.psi_p_gradient(space, x + h * e, 3).gradient
         - norms.psi_p_gradient(space, x - h * e, 3).gradient) / (2 * h)
        for e in np.eye(3)
    ])
    assert np.allclose(hess, fd, rtol=1e-6, atol=1e-8)


def test_hessian_needs_a_hilbert_space():
    with pytest.raises(CapabilityError):
        norms.psi_p_hessian(norms.lq(3, 4), np.ones(3), 2)


def test_spectral_norm_of_constant_field():
    # |c|_{L^q} on the torus is |c| (2 pi)^{2/q}
    n = 8
    space = norms.spectral_sobolev(n, 0.0, 4)
    x = np.full(n * n, 2.0)
    assert norms.norm(space, x) == pytest.approx(
        2.0 * (2 * np.pi) ** 0.5, rel=1e-12
    )
    assert grid_lq_norm(np.full((n, n), 2.0), 4) == pytest.approx(
        2.0 * (2 * np.pi) ** 0.5, rel=1e-12
    )


def test_holder_probe_is_stable_in_the_sample_count():
    space = norms.lq(3, 2)
    small = norms.holder_constant_probe(space, 3, 2, 2000, seed=4)
    large = norms.holder_constant_probe(space, 3, 2, 20000, seed=4)
    assert abs(large - small) <= 0.25 * large


def test_holder_probe_arguments():
    space = norms.lq(3, 2)
    with pytest.raises(ArgumentError):
        norms.holder_constant_probe(space, 3, 2, 0, seed=1)
    with pytest.raises(ArgumentError):
        norms.holder_constant_probe(space, 1.5, 2, 10, seed=1)


def test_type_constant_of_hilbert_space():
    # orthogonal increments: E|M_n|^2 equals the sum of E|dM_k|^2
    ratio = norms.type_constant_probe(norms.lq(4, 2), 2, 20000, 8, seed=2)
    assert ratio == pytest.approx(1.0, abs=0.05)


def test_gamma_norm_is_homogeneous():
    space = norms.lq(2, 2)
    g = norms.GammaFactor(np.array([[1.0, 0.0], [0.0, 2.0]]))
    base = norms.gamma_norm(space, g, 4096, seed=3)
    assert norms.gamma_norm(space, 3 * g, 4096, seed=3) == pytest.approx(
        3 * base, rel=1e-12
    )
    # the Hilbert-Schmidt norm is sqrt(5)
    assert base == pytest.approx(np.sqrt(5.0), rel=0.05)
