import csv
import math

import numpy as np
import pytest
from scipy import stats

import rng
from errors import ArgumentError
from point_process import (
    counting_measure, finite_marks, jump_path, layered_marks,
    power_law_marks, sample_jump_path, sample_wiener
)


def two_atoms():
    return finite_marks([(0, 2.0, 1.0), (1, 0.5, -3.0)])


def test_streams_are_reproducible_and_distinct():
    a = rng.stream(7, rng.LAYERS, 0, 3).random(4)
    b = rng.stream(7, rng.LAYERS, 0, 3).random(4)
    c = rng.stream(7, rng.LAYERS, 0, 4).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ArgumentError):
        rng.stream(-1)


def test_counts_are_poisson():
    marks = two_atoms()
    counts = np.array([len(sample_jump_path(marks, 2.0, 5, replicate=i))
                       for i in range(4000)])
    # total intensity 2.5 over T = 2
    assert counts.mean() == pytest.approx(5.0, abs=4 * math.sqrt(5 / 4000))
    assert counts.var() == pytest.approx(5.0, rel=0.1)


def test_merged_layers_match_the_union_layer():
    first = finite_marks([(0, 2.0, 1.0)])
    second = finite_marks([(1, 0.5, -3.0)])
    union = two_atoms()
    n = 10000
    merged = np.array([
        len(sample_jump_path(first, 2.0, 5, replicate=i))
        + len(sample_jump_path(second, 2.0, 6, replicate=i))
        for i in range(n)
    ])
    direct = np.array([len(sample_jump_path(union, 2.0, 7, replicate=i))
                       for i in range(n)])
    assert stats.ks_2samp(merged, direct).pvalue > 0.01
    assert merged.mean() == pytest.approx(direct.mean(),
                                          abs=4 * math.sqrt(2 * 5.0 / n))


def test_event_times_are_uniform_and_sorted():
    marks = finite_marks([(0, 50.0, 1.0)])
    path = sample_jump_path(marks, 1.0, 9)
    assert np.all(np.diff(path.times) > 0)
    assert np.all((path.times > 0) & (path.times <= 1.0))
    assert stats.kstest(path.times, 'uniform').pvalue > 1e-3


def test_restriction_reproduces_the_layer_events():
    marks = two_atoms()
    full = sample_jump_path(marks, 3.0, 11)
    only = sample_jump_path(finite_marks([(0, 2.0, 1.0), (1, 0.0, -3.0)]),
                            3.0, 11)
    restricted = full.restrict([0])
    assert np.array_equal(restricted.times, only.times)
    assert np.all(restricted.marks == 1.0)


def test_zero_weight_layers_produce_no_events():
    marks = finite_marks([(0, 0.0, 1.0)])
    assert len(sample_jump_path(marks, 10.0, 1)) == 0


def test_non_finite_weights_are_rejected():
    with pytest.raises(ArgumentError):
        finite_marks([(0, math.inf, 1.0)])
    with pytest.raises(ArgumentError):
        finite_marks([(0, -1.0, 1.0)])


def test_infinite_layers_cannot_be_sampled():
    marks = layered_marks(
        [(1, 1.0, lambda gen, n: np.ones((n, 1)), [1.0], [1.0]),
         (2, math.inf, lambda gen, n: np.ones((n, 1)), [0.5], [1.0])],
        mark_dim=1,
    )
    with pytest.raises(ArgumentError, match='infinite mass'):
        sample_jump_path(marks, 1.0, 0)
    # only the finite layer is simulated with n_max = 1
    truncated = layered_marks(
        [(1, 1.0, lambda gen, n: np.ones((n, 1)), [1.0], [1.0]),
         (2, math.inf, lambda gen, n: np.ones((n, 1)), [0.5], [1.0])],
        mark_dim=1, n_max=1,
    )
    assert truncated.tail_mass() == math.inf
    sample_jump_path(truncated, 1.0, 0)


def test_power_law_shell_masses():
    c, alpha, n = 0.5, 0.5, 6
    marks = power_law_marks(c, alpha, n)
    exact = 2 * c / alpha * (2 ** (n * alpha) - 1)
    assert marks.simulated_mass() == pytest.approx(exact, rel=1e-12)
    assert marks.total_mass() == math.inf


@pytest.mark.parametrize('r', [1.0, 1.5, 2.0])
def test_power_law_quadrature_and_tail_moment(r):
    c, alpha, n = 1.0, 0.75, 5
    marks = power_law_marks(c, alpha, n)
    inner = marks.expect(lambda t, z: np.abs(z[:, 0]) ** r, [0.0])[0]
    head = 2 * c * (1 - 2 ** (-n * (r - alpha))) / (r - alpha)
    assert inner == pytest.approx(head, rel=1e-8)
    assert marks.tail_moment(r) == pytest.approx(
        2 * c * 2 ** (-n * (r - alpha)) / (r - alpha)
    )
    assert inner + marks.tail_moment(r) == pytest.approx(
        2 * c / (r - alpha)
    )


def test_power_law_samples_stay_in_their_shells():
    marks = power_law_marks(1.0, 1.2, 4)
    path = sample_jump_path(marks, 20.0, 3)
    size = np.abs(path.marks[:, 0])
    assert np.all(size > 2.0 ** -path.layers)
    assert np.all(size <= 2.0 ** -(path.layers - 1))


def test_counting_measure_and_explicit_paths():
    path = jump_path(1.0, [0.5, 0.1, 0.9], [[1.0], [2.0], [3.0]],
                     layers=[0, 1, 0])
    assert np.array_equal(path.times, [0.1, 0.5, 0.9])
    assert counting_measure(path, 0.0, 1.0) == 3
    assert counting_measure(path, 0.1, 0.5) == 1
    assert counting_measure(path, 0.0, 1.0, region=[0]) == 2
    with pytest.raises(ArgumentError):
        counting_measure(path, 0.5, 0.5)
    with pytest.raises(ArgumentError):
        jump_path(1.0, [0.0], [[1.0]])


def test_path_csv(tmp_path):
    path = sample_jump_path(two_atoms(), 2.0, 4)
    target = tmp_path / 'path.csv'
    path.to_csv(target)
    with open(target) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['tau', 'layer', 'mark_0']
    assert len(rows) == len(path) + 1


def test_wiener_increments_have_the_right_variance():
    w = sample_wiener(1.0, 100, 2, seed=3)
    assert w.increments.shape == (100, 2)
    many = np.concatenate([
        sample_wiener(1.0, 10, 1, seed=3, replicate=i).increments
        for i in range(2000)
    ])
    assert np.var(many) == pytest.approx(0.1, rel=0.05)


def test_bridge_refinement_keeps_the_old_nodes():
    w = sample_wiener(1.0, 8, 1, seed=12)
    refined = w.refine([0.05, 0.3, 0.31, 0.999])
    assert refined.times.size == 13
    keep = np.isin(refined.times, w.times)
    assert np.allclose(refined.values[keep], w.values)
    assert w.refine(w.times[1:]) is w


def test_bridge_midpoint_law():
    # W(1/2) given W(0) = 0 and W(1) has mean W(1)/2 and variance 1/4
    mids = []
    for i in range(3000):
        w = sample_wiener(1.0, 1, 1, seed=8, replicate=i)
        refined = w.refine([0.5])
        mids.append(refined.values[1, 0] - 0.5 * w.values[1, 0])
    assert np.mean(mids) == pytest.approx(0.0, abs=0.04)
    assert np.var(mids) == pytest.approx(0.25, rel=0.1)
