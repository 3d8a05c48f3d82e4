"""
Tests for exact t-value computation: the inverse-identity window, the
weight-enumerator path, their agreement with interval counting, and tables.
"""
import numpy as np
import pytest

import tval
from config import settings
from errors import DisagreementError, NetInputError
from net import net_from_matrices, nu_star_array
from oracle import dual_enumerate, inverse_q_polynomial, split_dual_weight_enumerator, t_by_intervals
from poly import top_window_product
from sobol import load_direction_file, sobol_net
from tval import (
    Method,
    TValueReport,
    alg2_window_from_profile,
    compute_t_reports,
    t_table,
    t_value,
    t_value_alg1,
    t_value_alg2,
    t_value_oracle,
)
from verify import random_net
from wep import full_wep, t_from_wep


@pytest.fixture
def vdc():
    """Two-dimensional van der Corput net."""
    return net_from_matrices(2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


@pytest.fixture
def repeated_identity():
    """Both coordinates generated by the 1 x 1 identity."""
    return net_from_matrices(2, [[[1]], [[1]]])


@pytest.fixture(scope="module")
def directions():
    """Shipped Sobol' direction numbers."""
    return load_direction_file()


def test_alg2_repeated_identity(repeated_identity):
    """Q(z) = 1 - 2z + z^2: degree 2, t = 0."""
    report = t_value_alg2(repeated_identity)
    assert report.method is Method.ALG2
    assert report.t == 0
    assert report.deg_q == 2
    assert report.window.low == 2
    assert report.window[2] == 1
    assert report.window[3] == 0
    q = inverse_q_polynomial(dual_enumerate(repeated_identity), 2, 1)
    assert q.trimmed() == (1, -2, 1)


def test_alg2_van_der_corput(vdc):
    report = t_value_alg2(vdc)
    assert report.t == 0
    assert report.deg_q == 3
    q = inverse_q_polynomial(dual_enumerate(vdc), 2, 2)
    assert q.trimmed() == (3, -2, -5, 4)


def test_alg2_trivial_dual():
    """s = 1 with an invertible matrix: Q vanishes and t = 0."""
    net = net_from_matrices(2, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    report = t_value_alg2(net)
    assert report.t == 0
    assert report.deg_q == 0


def test_alg2_needs_square_depth():
    net = net_from_matrices(2, [[[1], [0]]])
    with pytest.raises(NetInputError):
        t_value_alg2(net)
    assert t_value_alg1(net).t == 0


def test_degenerate_net_has_maximal_t():
    """Identical coordinates with zero matrices: t = m."""
    net = net_from_matrices(2, [[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert t_value_alg1(net).t == 2
    assert t_value_alg2(net).t == 2
    assert t_value_oracle(net).t == 2


def test_compute_t_reports_both(vdc):
    reports = compute_t_reports(vdc, "both")
    assert [r.method for r in reports] == [Method.ALG1, Method.ALG2]
    assert {r.t for r in reports} == {0}
    assert t_value(vdc, "both").method is Method.ALG2
    assert t_value(vdc, "oracle").t == 0
    with pytest.raises(NetInputError):
        compute_t_reports(vdc, "alg3")


def test_both_raises_on_disagreement(vdc, monkeypatch):
    """A mismatch between the two computations is reported, not hidden."""
    monkeypatch.setattr(tval, "t_value_alg1", lambda net, ell=None, workers=None: TValueReport(5, Method.ALG1))
    with pytest.raises(DisagreementError):
        compute_t_reports(vdc, "both")


def _random_cases():
    cases = []
    for m in range(1, 7):
        for s in range(1, 5):
            cases.append((2, m, s))
    for m in range(1, 6):
        for s in range(1, 5):
            cases.append((3, m, s))
    return cases


@pytest.mark.parametrize("b,m,s", _random_cases())
def test_algorithms_agree_with_interval_counting(b, m, s):
    """12 random nets per (b, m, s): 528 nets in total."""
    rng = np.random.default_rng(1000 * b + 10 * m + s)
    for _ in range(12):
        net = random_net(rng, b, m, s)
        points = net.point_block()
        expected = t_by_intervals(points, b, m, s)
        assert t_value_alg1(net).t == expected
        assert t_value_alg2(net).t == expected

        full = full_wep(net)
        assert t_from_wep(full, m) == expected
        # the dual of the distinct points has b^(ns) / |P| elements
        distinct = len(np.unique(points.reshape(net.size, -1), axis=0))
        assert sum(full.counts()) * distinct == b ** (m * s)
        if distinct == b**m:
            assert sum(full.counts()) == b ** (m * s - m)
        if b ** (m * (s - 1)) <= 2**20:
            assert full.counts() == split_dual_weight_enumerator(net)


@pytest.mark.parametrize("b,m,s", _random_cases())
def test_results_do_not_depend_on_thread_count(b, m, s, monkeypatch):
    """1, 4 and 8 threads over small chunks give identical reports and enumerators."""
    monkeypatch.setattr(settings, "chunk_size", 7)
    rng = np.random.default_rng(1000 * b + 10 * m + s)
    for _ in range(12):
        net = random_net(rng, b, m, s)
        runs = [
            (t_value_alg1(net, workers=workers), t_value_alg2(net, workers=workers), full_wep(net, workers).scaled)
            for workers in (1, 4, 8)
        ]
        assert runs[0] == runs[1] == runs[2]


@pytest.mark.parametrize("m,s", [(4, 3), (3, 2), (6, 5), (2, 4), (1, 1)])
def test_window_sums_match_per_point_window_products(m, s):
    """The batched window of a mu* block equals the summed per-point reciprocal products."""
    rng = np.random.default_rng(17 * m + s)
    mu_block = rng.integers(0, m + 3, size=(40, s))
    batched = alg2_window_from_profile(mu_block, m)
    top = s * (m + 1)
    per_point = [0] * (m + 2)
    for row in nu_star_array(mu_block, m):
        window = top_window_product([m + 1 - int(v) for v in row], m)
        for j in range(m + 2):
            per_point[j] += window[top - j]
    assert batched == per_point


@pytest.mark.parametrize("b,m,s", [(2, 3, 2), (2, 3, 3), (3, 2, 2)])
def test_window_degree_matches_brute_force_q(b, m, s):
    rng = np.random.default_rng(b + m + s)
    for _ in range(5):
        net = random_net(rng, b, m, s)
        q = inverse_q_polynomial(dual_enumerate(net), b, m)
        assert t_value_alg2(net).deg_q == max(q.degree(), 0)


@pytest.mark.parametrize("workers", [4, 8])
def test_thread_count_does_not_change_t(directions, workers):
    net = sobol_net(directions, 5, 8)
    assert t_value_alg2(net, workers=1) == t_value_alg2(net, workers=workers)


def test_sobol_two_dimensions_is_a_zero_net(directions):
    """The first two Sobol' coordinates give (0, m, 2)-nets."""
    table = t_table(sobol_net(directions, 2, 16), [1, 2], range(1, 17), "both")
    assert set(table.values()) == {0}
    for m in range(1, 9):
        assert t_by_intervals(sobol_net(directions, 2, m).point_block(), 2, m) == 0


def test_sobol_third_coordinate_repeats_the_second(directions):
    """At m = 2 coordinates 2 and 3 share a matrix, so t = 1."""
    assert t_value_alg2(sobol_net(directions, 3, 2)).t == 1
    assert t_value_oracle(sobol_net(directions, 3, 2)).t == 1


def test_table_matches_individual_nets(directions):
    """Each cell equals the t-value of the net built from the leading blocks."""
    net = sobol_net(directions, 6, 8)
    table = t_table(net, range(1, 7), range(1, 9), "both")
    for (s, m), t in table.items():
        assert t == t_value_alg2(sobol_net(directions, s, m)).t
    for s in range(1, 7):
        assert [table[(s, m)] for m in range(1, 9)] == [
            t_by_intervals(sobol_net(directions, s, m).point_block(), 2, m, s) for m in range(1, 9)
        ]


def test_table_is_monotone_in_dimension(directions):
    """Adding a coordinate never lowers t."""
    table = t_table(sobol_net(directions, 8, 10), range(1, 9), range(2, 11), "alg1")
    for m in range(2, 11):
        row = [table[(s, m)] for s in range(1, 9)]
        assert row == sorted(row)


def test_table_argument_checks(directions):
    net = sobol_net(directions, 3, 4)
    with pytest.raises(NetInputError):
        t_table(net, [4], [2])
    with pytest.raises(NetInputError):
        t_table(net, [2], [5])
    with pytest.raises(NetInputError):
        t_table(net, [2], [2], "oracle")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
