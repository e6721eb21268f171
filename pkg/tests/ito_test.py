import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

import norms
from errors import ArgumentError, CapabilityError
from integrator import Integrand, uniform_grid
from integrator.integrand import constant_drift, constant_factor, mark_jump
from ito import (
    check_derivatives, exponential_tail, interlace, ito_residual_jump,
    ito_residual_levy, linear, power_norm, smooth_user, taylor_remainder
)
from point_process import (
    finite_marks, jump_path, layered_marks, power_law_marks, sample_jump_path,
    sample_wiener
)


def vector_marks():
    return finite_marks([(0, 2.0, [1.0, -0.5]), (1, 1.0, [0.25, 0.75])])


def modulated(t, z):
    t = np.asarray(t, dtype=float)
    return (1.0 + 0.5 * np.sin(2 * np.pi * t))[:, None] * np.asarray(z)


@pytest.mark.parametrize('q', [2, 3, 4])
@pytest.mark.parametrize('p', [2, 3, 4])
def test_pure_jump_formula_holds_pathwise(p, q):
    space = norms.lq(2, q)
    marks = vector_marks()
    integrand = Integrand(dim=2, xi=modulated, a=constant_drift([0.5, -0.25],
                                                                2))
    tf = power_norm(space, p)
    grid = uniform_grid(1.0, 64)
    for i in range(100):
        path = sample_jump_path(marks, 1.0, 23, replicate=i)
        report = ito_residual_jump(tf, integrand, path, marks, grid,
                                   x0=[0.3, -0.2])
        assert abs(report.residual) <= 1e-10 * (1 + abs(report.lhs))


def test_jump_formula_with_counting_part_and_exponential_tail():
    marks = finite_marks([(0, 1.5, 1.0), (1, 0.5, -2.0)])
    integrand = Integrand(dim=1, xi=mark_jump(), eta=mark_jump(0.5),
                          eta_layers=(1,))
    tf = exponential_tail(norms.lq(1, 2), 0.3)
    for i in range(20):
        path = sample_jump_path(marks, 2.0, 4, replicate=i)
        report = ito_residual_jump(tf, integrand, path, marks,
                                   uniform_grid(2.0, 32))
        assert abs(report.residual) <= 1e-10 * (1 + abs(report.lhs))
        assert set(report.rhs_terms) == {
            'drift', 'eta_jumps', 'xi_compensated', 'correction'
        }


def test_jump_formula_with_power_law_marks():
    marks = power_law_marks(0.5, 0.5, 6)
    integrand = Integrand(dim=1, xi=mark_jump())
    tf = power_norm(norms.lq(1, 2), 3)
    for i in range(10):
        path = sample_jump_path(marks, 1.0, 8, replicate=i)
        report = ito_residual_jump(tf, integrand, path, marks,
                                   uniform_grid(1.0, 16))
        assert abs(report.residual) <= 1e-10 * (1 + abs(report.lhs))


def test_jump_formula_refuses_a_wiener_part():
    integrand = Integrand(dim=1, g=constant_factor([[1.0]]))
    marks = finite_marks([(0, 1.0, 1.0)])
    with pytest.raises(ArgumentError):
        ito_residual_jump(power_norm(norms.lq(1, 2), 2), integrand,
                          sample_jump_path(marks, 1.0, 0), marks,
                          uniform_grid(1.0, 4))


def test_levy_formula_needs_a_second_derivative():
    marks = finite_marks([(0, 1.0, 1.0)])
    integrand = Integrand(dim=1, g=constant_factor([[1.0]]))
    with pytest.raises(CapabilityError):
        ito_residual_levy(power_norm(norms.lq(1, 4), 2), integrand,
                          sample_jump_path(marks, 1.0, 0),
                          sample_wiener(1.0, 4, 1, 0), marks,
                          uniform_grid(1.0, 4))


def _rms_residual(n_steps, n_paths=200):
    marks = finite_marks([(0, 1.0, 0.5)])
    integrand = Integrand(dim=1, xi=mark_jump(), g=constant_factor([[1.0]]))
    tf = power_norm(norms.lq(1, 2), 4)
    grid = uniform_grid(1.0, n_steps)
    squares = []
    for i in range(n_paths):
        path = sample_jump_path(marks, 1.0, 29, replicate=i)
        w = sample_wiener(1.0, n_steps, 1, 29, replicate=i)
        report = ito_residual_levy(tf, integrand, path, w, marks, grid,
                                   x0=[0.5])
        squares.append(report.residual ** 2)
    return math.sqrt(np.mean(squares))


def test_levy_residual_converges_at_half_order():
    steps = np.array([16, 32, 64, 128, 256])
    rms = np.array([_rms_residual(n) for n in steps])
    fit = stats.linregress(np.log(1.0 / steps), np.log(rms))
    assert fit.slope == pytest.approx(0.5, abs=0.15)


def test_linear_functions_have_zero_correction():
    space = norms.lq(2, 2)
    marks = vector_marks()
    integrand = Integrand(dim=2, xi=mark_jump())
    path = sample_jump_path(marks, 1.0, 3)
    report = ito_residual_jump(linear(space, [1.0, 2.0]), integrand, path,
                               marks, uniform_grid(1.0, 8))
    assert report.rhs_terms['correction'] == pytest.approx(0.0, abs=1e-12)
    assert abs(report.residual) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3, allow_subnormal=False), min_size=2,
                max_size=2),
       st.lists(st.floats(-3, 3, allow_subnormal=False), min_size=2,
                max_size=2))
def test_taylor_remainder_of_the_square(x, y):
    # psi_2 has remainder |y - x|^2 exactly
    tf = power_norm(norms.lq(2, 2), 2)
    x, y = np.array(x), np.array(y)
    assert taylor_remainder(tf, x, y) == pytest.approx(
        np.sum((y - x) ** 2), rel=1e-10, abs=1e-12
    )


def test_shipped_derivatives_pass_the_finite_difference_check():
    for tf in (power_norm(norms.lq(3, 2), 3),
               exponential_tail(norms.lq(3, 2), 0.5),
               power_norm(norms.lq(3, 4), 2)):
        grad_error, hess_error = check_derivatives(tf)
        assert grad_error < 1e-6
        assert hess_error is None or hess_error < 1e-6


def test_wrong_user_derivatives_are_rejected():
    space = norms.lq(1, 2)
    with pytest.raises(ArgumentError):
        smooth_user(space, lambda x: np.sin(x[:, 0]),
                    lambda x: np.sin(x))
    ok = smooth_user(space, lambda x: np.sin(x[:, 0]), lambda x: np.cos(x))
    assert ok.kind == 'smooth_user'


def test_interlacing_times():
    marks = power_law_marks(1.0, 0.5, 3)
    path = sample_jump_path(marks, 5.0, 2)
    first = interlace(path, 1)
    assert np.array_equal(first, path.times[path.layers == 1])
    assert np.all(np.diff(interlace(path, 3)) > 0)
    with pytest.raises(ArgumentError):
        interlace(path, 9)


def test_interlacing_needs_finite_mass():
    layers = [(1, 1.0, lambda gen, n: np.ones((n, 1)), [1.0], [1.0]),
              (2, math.inf, lambda gen, n: np.ones((n, 1)), [0.5], [1.0])]
    marks = layered_marks(layers, mark_dim=1, n_max=1)
    path = sample_jump_path(marks, 1.0, 0)
    interlace(path, 1)
    with pytest.raises(ArgumentError, match='infinite mass'):
        interlace(path, 2)


def test_explicit_paths_interlace_by_layer_index():
    path = jump_path(1.0, [0.2, 0.4, 0.6], [[1.0], [1.0], [1.0]],
                     layers=[1, 2, 3])
    assert np.array_equal(interlace(path, 2), [0.2, 0.4])
