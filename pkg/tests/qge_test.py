import math

import numpy as np
import pytest

from errors import ArgumentError
from integrator import uniform_grid
from point_process import sample_jump_path
from qge import (
    SpectralField, assemble_theta, gagliardo_nirenberg_constant, inner,
    l2_norm, nonlinear_term, ou_convolution_z, qge_noise, random_field,
    read_snapshots, refinement_gap, riesz_velocity, run_qge, simulate,
    sobolev_norm, solve_y, transport_term, write_snapshots, z_moment
)
from qge.diagnostics import EnergyLedger, LedgerCheck
from qge.fields import lq_norm, wavenumber_squared
from qge.noise import mode_bundle
from qge.snapshots import snapshot_indices
from qge.solver import heat_path, step_count


def fields(n, count, seed=3, **kwargs):
    gen = np.random.default_rng(seed)
    return [random_field(n, gen, **kwargs) for _ in range(count)]


def quiet_noise(n, s=0.25):
    return qge_noise(n, s, [[(1, 0)]], [0.0])


def test_riesz_velocity_is_divergence_free():
    n = 32
    theta, = fields(n, 1)
    v1, v2 = riesz_velocity(theta)
    k = np.fft.fftfreq(n, 1.0 / n)
    k1, k2 = np.meshgrid(k, k, indexing='ij')
    div = k1 * v1.coeffs + k2 * v2.coeffs
    assert np.max(np.abs(div)) <= 1e-13 * np.max(np.abs(theta.coeffs)) * n


def test_riesz_velocity_needs_mean_zero():
    coeffs = np.zeros((8, 8), dtype=complex)
    coeffs[0, 0] = 1.0
    with pytest.raises(ArgumentError):
        riesz_velocity(SpectralField(8, coeffs, mean_zero=False))


@pytest.mark.parametrize('n', [16, 32])
def test_transport_cancels_against_transported_field(n):
    for theta in fields(n, 5, seed=n):
        b = nonlinear_term(theta)
        scale = l2_norm(b) * l2_norm(theta)
        assert abs(inner(b, theta)) <= 1e-10 * scale


def test_transport_is_antisymmetric():
    n = 32
    theta, phi, psi = fields(n, 3, seed=11)
    left = inner(transport_term(theta, phi), psi)
    right = -inner(transport_term(theta, psi), phi)
    scale = l2_norm(transport_term(theta, phi)) * l2_norm(psi)
    assert left == pytest.approx(right, abs=1e-10 * scale)


def test_single_mode_has_no_self_transport():
    theta = SpectralField.single_mode(16, (2, 1), 0.3 - 0.1j)
    assert np.max(np.abs(nonlinear_term(theta).coeffs)) < 1e-14


def test_single_mode_rejects_unresolved_modes():
    with pytest.raises(ArgumentError):
        SpectralField.single_mode(8, (0, 0))
    with pytest.raises(ArgumentError):
        SpectralField.single_mode(8, (4, 1))


def test_grid_size_must_be_power_of_two():
    with pytest.raises(ArgumentError):
        SpectralField.zeros(12)


def test_parseval():
    theta, = fields(16, 1, decay=0.5)
    assert l2_norm(theta) == pytest.approx(lq_norm(theta.physical(), 2),
                                           rel=1e-12)


def test_physical_round_trip_is_real():
    theta, = fields(16, 1)
    back = SpectralField.from_physical(theta.physical())
    assert np.allclose(back.coeffs, theta.coeffs, atol=1e-15)
    assert theta.imaginary_defect() < 1e-14


def test_lq_norm_of_constant():
    values = np.full((8, 8), 3.0)
    assert lq_norm(values, 4) == pytest.approx(3.0 * math.sqrt(2 * math.pi))


def test_sobolev_norm_without_smoothness_is_l2():
    theta, = fields(16, 1)
    assert sobolev_norm(theta, 0.0, 2) == pytest.approx(l2_norm(theta),
                                                        rel=1e-12)


def test_sobolev_norm_decreases_with_negative_smoothness():
    theta, = fields(16, 1)
    assert sobolev_norm(theta, -0.4, 4) < sobolev_norm(theta, 0.0, 4)


def test_sobolev_norm_arguments():
    theta, = fields(8, 1)
    with pytest.raises(ArgumentError):
        sobolev_norm(theta, 0.2, 3)
    with pytest.raises(ArgumentError):
        sobolev_norm(theta, -1.0, 4)


def test_mode_bundle_is_real():
    coeffs = mode_bundle(16, [(1, 2), (-3, 1)], [1.0, 0.5j])
    f = SpectralField(16, coeffs)
    assert f.imaginary_defect() < 1e-14


@pytest.mark.parametrize('modes, amplitudes', [
    ([(0, 0)], None),
    ([(6, 0)], None),
    ([(1, 0)], [1.0, 2.0]),
    ([], None),
])
def test_mode_bundle_rejects(modes, amplitudes):
    with pytest.raises(ArgumentError):
        mode_bundle(16, modes, amplitudes)


def test_noise_bundles_have_target_norm():
    noise = qge_noise(16, 0.25, [[(1, 0), (0, 2)], [(2, 3)]], [2.0, 1.0],
                      target_norm=[0.5, 1.5])
    for coeffs, target in zip(noise.bundles, (0.5, 1.5)):
        assert sobolev_norm(SpectralField(16, coeffs), -0.25, 4) \
            == pytest.approx(target, rel=1e-12)
    assert noise.symmetric
    assert noise.assumption_integral(2.0) == pytest.approx(
        2.0 * (2.0 * 0.25 + 1.0 * 2.25)
    )
    assert not noise.compensator().any()


def test_one_sided_noise_has_compensator():
    noise = qge_noise(16, 0.25, [[(1, 1)]], [3.0], symmetric=False)
    assert not noise.symmetric
    assert np.allclose(noise.compensator(), 3.0 * noise.bundles[0])


@pytest.mark.parametrize('s, rates', [(0.5, [1.0]), (0.2, [1.0, 1.0]),
                                      (0.2, [-1.0]), (0.2, [math.inf])])
def test_noise_arguments(s, rates):
    with pytest.raises(ArgumentError):
        qge_noise(16, s, [[(1, 0)]], rates)


def test_z_vanishes_without_jumps():
    noise = quiet_noise(16)
    z = ou_convolution_z(noise, 1.0, uniform_grid(1.0, 10), seed=4)
    assert not z.coeffs.any()


def test_z_matches_direct_sum_over_jumps():
    noise = qge_noise(16, 0.25, [[(1, 0)], [(1, 2), (3, 1)]], [4.0, 2.0])
    T = 0.5
    grid = uniform_grid(T, 20)
    z = ou_convolution_z(noise, T, grid, seed=8, replicate=1)

    path = sample_jump_path(noise.marks, T, 8, 1)
    assert len(path) > 0
    kk = wavenumber_squared(16)
    for j, t in enumerate(grid):
        expected = np.zeros((16, 16), dtype=complex)
        for tau, mark in zip(path.times, path.marks):
            if tau <= t:
                expected += np.exp(-kk * (t - tau)) * noise.jump(mark)
        assert np.allclose(z.coeffs[j], expected, atol=1e-12)


def test_z_grid_must_span_horizon():
    with pytest.raises(ArgumentError):
        ou_convolution_z(quiet_noise(8), 1.0, [0.0, 0.5], seed=0)


def test_heat_path_decays_each_mode():
    theta0 = SpectralField.single_mode(16, (1, 2), 1.0)
    path = heat_path(theta0, [0.0, 0.1, 0.4])
    for t, coeffs in zip([0.0, 0.1, 0.4], path):
        assert coeffs[1, 2] == pytest.approx(math.exp(-5 * t))
        assert coeffs[-1, -2] == pytest.approx(math.exp(-5 * t))


def test_step_count():
    assert step_count(1.0, 0.125) == 8
    with pytest.raises(ArgumentError):
        step_count(1.0, 0.3)


def test_solve_y_rejects_mean():
    noise = quiet_noise(8)
    z = ou_convolution_z(noise, 0.1, uniform_grid(0.1, 2), seed=0)
    coeffs = np.zeros((8, 8), dtype=complex)
    coeffs[0, 0] = 1.0
    with pytest.raises(ArgumentError):
        solve_y(z, SpectralField(8, coeffs, mean_zero=False), 0.1, 0.05)


def test_single_mode_without_noise_is_pure_heat():
    theta0 = SpectralField.single_mode(16, (2, 1), 0.5)
    run = simulate(quiet_noise(16), theta0, 0.2, 0.02, seed=1)
    assert np.max(np.abs(run.y.coeffs)) < 1e-12
    assert np.allclose(run.theta.coeffs, heat_path(theta0, run.times),
                       atol=1e-14)
    assert run.mild_residual < 1e-10


def test_splitting_parts_add_up():
    theta0, = fields(16, 1, seed=5, decay=2.0)
    noise = qge_noise(16, 0.25, [[(1, 0), (0, 1)]], [10.0])
    run = simulate(noise, theta0, 0.1, 0.01, seed=2)
    assert run.splitting_defect() < 1e-12
    theta, residual = assemble_theta(theta0, run.y, run.z)
    assert np.array_equal(theta.coeffs, run.theta.coeffs)
    assert residual == run.mild_residual


def test_simulation_is_reproducible():
    theta0, = fields(16, 1, seed=5, decay=2.0)
    noise = qge_noise(16, 0.25, [[(1, 0), (0, 1)]], [10.0])
    a = simulate(noise, theta0, 0.1, 0.01, seed=2, replicate=3)
    b = simulate(noise, theta0, 0.1, 0.01, seed=2, replicate=3)
    assert np.array_equal(a.theta.coeffs, b.theta.coeffs)


def test_mild_residual_shrinks_with_step():
    theta0, = fields(16, 1, seed=6, decay=2.0)
    noise = quiet_noise(16)
    coarse = simulate(noise, theta0, 0.2, 0.02, seed=0)
    fine = simulate(noise, theta0, 0.2, 0.01, seed=0)
    assert 0 < fine.mild_residual < coarse.mild_residual


def test_refinement_gap_is_small():
    theta0, = fields(16, 1, seed=7, decay=2.0)
    noise = qge_noise(16, 0.25, [[(1, 1)]], [5.0])
    gap = refinement_gap(noise, theta0, 0.1, 0.01, seed=3)
    assert 0 <= gap < 0.5


def test_energy_ledger_passes():
    theta0, = fields(16, 1, seed=9, decay=2.0)
    noise = qge_noise(16, 0.25, [[(1, 0), (0, 1)], [(2, 1)]], [5.0, 5.0])
    run = run_qge(noise, theta0, 0.1, 0.01, seed=4)
    ledger = run.diagnostics['ledger']
    assert ledger.passed
    assert {c.name for c in ledger.checks} == {
        'energy', 'gronwall', 'dissipation', 'ladyzhenskaya'
    }
    assert not ledger.check('ladyzhenskaya').enforced
    assert len(ledger.csv_rows()) == run.times.size
    assert ledger.constants['ladyzhenskaya'] >= 2 ** 0.25
    assert run.diagnostics['assumption_integral'] == pytest.approx(
        0.1 * 10.0
    )


def test_ladyzhenskaya_excess_does_not_fail_the_ledger():
    checks = (
        LedgerCheck('energy', 1.0, 2.0, True),
        LedgerCheck('ladyzhenskaya', 1.3, 2 ** 0.25, False, enforced=False),
    )
    ledger = EnergyLedger(checks=checks, constants={}, rows=(),
                          flagged=('ladyzhenskaya',))
    assert ledger.passed
    assert ledger.to_dict()['checks'][1] == {
        'name': 'ladyzhenskaya', 'lhs': 1.3, 'rhs': 2 ** 0.25,
        'margin': 2 ** 0.25 - 1.3, 'passed': False, 'enforced': False,
    }

    failing = EnergyLedger(
        checks=(LedgerCheck('energy', 3.0, 2.0, False),) + checks[1:],
        constants={}, rows=(),
    )
    assert not failing.passed


def test_ledger_can_be_skipped():
    theta0, = fields(8, 1)
    run = run_qge(quiet_noise(8), theta0, 0.05, 0.01, seed=0, ledger=False)
    assert 'ledger' not in run.diagnostics
    assert z_moment(run, 0.25) == 0.0


def test_gagliardo_nirenberg_arguments():
    with pytest.raises(ArgumentError):
        gagliardo_nirenberg_constant(fields(8, 1), 1.5)


def test_snapshots_round_trip(tmp_path):
    theta0, = fields(8, 1)
    noise = qge_noise(8, 0.25, [[(1, 0)]], [5.0])
    run = simulate(noise, theta0, 0.1, 0.01, seed=1)
    written = write_snapshots(run, str(tmp_path), count=3)
    assert written[-1].endswith('snapshots.json')

    header, data = read_snapshots(str(tmp_path))
    index = snapshot_indices(run.times.size, 3)
    assert header['shape'] == [3, 8, 8]
    assert header['times'][-1] == pytest.approx(0.1)
    assert np.array_equal(data['theta'], run.theta.coeffs[index])
    assert np.array_equal(data['y'], run.y.coeffs[index])


def test_snapshot_indices():
    assert list(snapshot_indices(11, 3)) == [0, 5, 10]
    assert list(snapshot_indices(2, 5)) == [0, 1]
    with pytest.raises(ArgumentError):
        snapshot_indices(4, 0)
