import numpy as np
import pytest

from errors import ArgumentError
from integrator import (
    Integrand, convolve, convolve_levy, diagonal_semigroup,
    integrate_compensated, integrate_counting, integrate_wiener, levy_process,
    matrix_semigroup, quadratic_functionals, trivial_semigroup, uniform_grid
)
from integrator.integrand import constant_drift, constant_factor, mark_jump
import norms
from point_process import (
    finite_marks, jump_path, sample_jump_path, sample_wiener
)


def one():
    return lambda t, z: np.ones((np.shape(t)[0], 1))


def marks():
    return finite_marks([(0, 2.0, 1.0)])


def test_compensated_integral_of_a_known_path():
    path = jump_path(1.0, [0.25, 0.6], [[1.0], [1.0]], layers=[0, 0])
    u = integrate_compensated(one(), path, marks(), uniform_grid(1.0, 4))
    # two unit jumps minus the compensator 2 t
    assert u.final[0] == pytest.approx(0.0, abs=1e-14)
    assert u.at(0.25)[0] == pytest.approx(1.0 - 0.5)
    assert u.left_limits[np.searchsorted(u.times, 0.6)][0] == pytest.approx(
        -0.2
    )
    assert np.all(u.is_jump == np.isin(u.times, [0.25, 0.6]))


def test_counting_integral_sums_the_events():
    path = jump_path(1.0, [0.1, 0.2, 0.9], [[1.0], [-2.0], [0.5]],
                     layers=[0, 1, 0])
    n = integrate_counting(mark_jump(), path, uniform_grid(1.0, 2))
    assert n.final[0] == pytest.approx(-0.5)
    only = integrate_counting(mark_jump(), path, uniform_grid(1.0, 2),
                              region=[0])
    assert only.final[0] == pytest.approx(1.5)


def test_compensated_integrals_have_mean_zero():
    m = finite_marks([(0, 1.5, 1.0), (1, 0.5, -2.0)])
    finals = [
        integrate_compensated(mark_jump(), sample_jump_path(m, 1.0, 2, i), m,
                              uniform_grid(1.0, 8)).final[0]
        for i in range(4000)
    ]
    # variance is int int z^2 dnu ds = 3.5
    assert np.mean(finals) == pytest.approx(0.0, abs=4 * np.sqrt(3.5 / 4000))
    assert np.var(finals) == pytest.approx(3.5, rel=0.1)


def test_quadratic_functionals():
    path = jump_path(1.0, [0.3, 0.7], [[1.0], [1.0]], layers=[0, 0])
    counting, meyer = quadratic_functionals(
        mark_jump(3.0), path, marks(), norms.lq(1, 2), 2.0,
        uniform_grid(1.0, 4)
    )
    assert counting.final[0] == pytest.approx(18.0)
    assert meyer.final[0] == pytest.approx(18.0)


def test_ito_isometry_for_wiener_integrals():
    finals = [
        integrate_wiener(constant_factor([[2.0]]),
                         sample_wiener(1.0, 16, 1, 6, i)).final[0]
        for i in range(4000)
    ]
    assert np.var(finals) == pytest.approx(4.0, rel=0.1)


def test_wiener_integral_checks_the_grid():
    w = sample_wiener(1.0, 16, 1, 6)
    with pytest.raises(ArgumentError):
        integrate_wiener(constant_factor([[1.0]]), w, uniform_grid(1.0, 8))


def test_trivial_convolution_matches_the_integral_bit_for_bit():
    m = marks()
    path = sample_jump_path(m, 1.0, 4)
    grid = uniform_grid(1.0, 16)
    u = integrate_compensated(one(), path, m, grid)
    v = convolve(one(), path, m, trivial_semigroup(1), grid)
    assert np.array_equal(u.values, v.values)


def test_convolution_with_decay_solves_the_ode_between_jumps():
    # dX = -X dt - 2 dt, no jumps: X(t) = 2 (e^{-t} - 1)
    m = marks()
    path = sample_jump_path(finite_marks([(0, 0.0, 1.0)]), 1.0, 0)
    v = convolve(one(), path, m, diagonal_semigroup([-1.0]),
                 uniform_grid(1.0, 4))
    assert v.final[0] == pytest.approx(2 * (np.exp(-1.0) - 1), rel=1e-12)


def test_matrix_and_diagonal_semigroups_agree():
    m = finite_marks([(0, 1.0, [1.0, -1.0])])
    path = sample_jump_path(m, 1.0, 8)
    grid = uniform_grid(1.0, 32)
    diag = convolve(mark_jump(), path, m, diagonal_semigroup([-1.0, -2.0]),
                    grid)
    dense = convolve(mark_jump(), path, m,
                     matrix_semigroup(np.diag([-1.0, -2.0])), grid)
    # the midpoint compensator is second order in the step
    assert np.allclose(diag.values, dense.values, atol=1e-3)


def test_semigroup_growth_bounds():
    with pytest.raises(ArgumentError):
        diagonal_semigroup([0.5], alpha=0.1)
    assert diagonal_semigroup([-1.0, 0.5]).growth_alpha == 0.5
    sg = matrix_semigroup([[0.0, 1.0], [-1.0, 0.0]])
    assert sg.growth_alpha == pytest.approx(0.0, abs=1e-12)
    ratio = sg.growth_ratio(norms.lq(2, 2), [0.5, 1.0, 2.0], 64, seed=1)
    assert ratio == pytest.approx(1.0, rel=1e-10)
    assert trivial_semigroup(3).is_trivial


def test_levy_convolution_without_jumps():
    grid = uniform_grid(1.0, 8)
    w = sample_wiener(1.0, 8, 1, 3)
    v = convolve_levy(constant_factor([[1.0]]), None, w, None, marks(),
                      trivial_semigroup(1), grid)
    assert np.allclose(v.values[:, 0], w.values[:, 0])


def test_levy_process_pieces_add_up():
    m = finite_marks([(0, 1.0, 1.0), (1, 2.0, -0.5)])
    integrand = Integrand(dim=1, xi=mark_jump(), eta=mark_jump(2.0),
                          g=constant_factor([[0.5]]),
                          a=constant_drift(1.0), eta_layers=(1,))
    path = sample_jump_path(m, 1.0, 21)
    grid = uniform_grid(1.0, 16)
    w = sample_wiener(1.0, 16, 1, 21)
    trace = levy_process(integrand, path, m, grid, w=w, x0=[0.25])

    expected = 0.25 + np.sum(trace.dt[:, None] * (trace.drift
                                                  - trace.comp_rate))
    expected += np.sum(trace.wiener) + np.sum(trace.event_jumps)
    assert trace.path.final[0] == pytest.approx(expected, abs=1e-12)
    assert np.all(trace.comp_rate == 1.0)
    eta_events = ~trace.event_compensated
    assert np.all(trace.event_jumps[eta_events] == -1.0)


def test_levy_process_needs_a_wiener_path():
    integrand = Integrand(dim=1, g=constant_factor([[1.0]]))
    path = sample_jump_path(marks(), 1.0, 0)
    with pytest.raises(ArgumentError):
        levy_process(integrand, path, marks(), uniform_grid(1.0, 4))


def test_xi_and_eta_layers_must_be_disjoint():
    with pytest.raises(ArgumentError):
        Integrand(dim=1, xi=mark_jump(), eta=mark_jump(), xi_layers=(0,),
                  eta_layers=(0,))
