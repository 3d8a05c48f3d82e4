"""
Tests for the brute-force validators: dual enumeration, interval counting,
(T, M, s) uniformity and Walsh sums on arbitrary multisets.
"""
import json
from pathlib import Path

import numpy as np
import pytest

from abelian import GroupSpec
from errors import NetInputError, ResourceBoundError
from models import PointSetFile
from net import mu_star_array, net_from_matrices, points_from_digits
from oracle import (
    compositions,
    dual_enumerate,
    dual_weight_enumerator,
    is_TMs_uniform,
    min_nrt,
    nrt_row_weights,
    replicate,
    shift_top_corner,
    t_by_intervals,
    t_by_walsh_sums,
)
from sobol import load_direction_file, sobol_net
from wep import general_lower_bound

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def vdc():
    """Two-dimensional van der Corput net."""
    return net_from_matrices(2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


@pytest.fixture
def shifted_points():
    """32 points of a (0, 5, 2)-net with the top cell collapsed onto its corner."""
    data = json.loads((FIXTURES / "shifted.json").read_text())
    return PointSetFile(**data).to_points()


def test_dual_of_van_der_corput(vdc):
    dual = dual_enumerate(vdc)
    assert len(dual) == 4
    assert min_nrt(dual) == 3
    assert dual_weight_enumerator(dual) == [1, 0, 0, 2, 1]
    assert sorted(k.to_lists() for k in dual.elements) == [
        [[0, 0], [0, 0]],
        [[0, 1], [1, 0]],
        [[1, 0], [0, 1]],
        [[1, 1], [1, 1]],
    ]


def test_dual_is_a_subgroup(vdc):
    elements = dual_enumerate(vdc).elements
    for a in elements:
        for c in elements:
            assert a + c in elements


def test_dual_of_repeated_identity():
    dual = dual_enumerate(net_from_matrices(2, [[[1]], [[1]]]))
    assert len(dual) == 2
    assert min_nrt(dual) == 2
    assert dual_weight_enumerator(dual) == [1, 0, 1]


def test_trivial_dual():
    """An invertible matrix in one dimension: minNRT defaults to ns + 1."""
    dual = dual_enumerate(net_from_matrices(2, [[[1, 0], [0, 1]]]))
    assert len(dual) == 1
    assert min_nrt(dual) == 3


def test_dual_enumeration_bound(vdc):
    with pytest.raises(ResourceBoundError):
        dual_enumerate(vdc, bound=8)


def test_nrt_row_weights():
    residues = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]])[..., None]
    assert nrt_row_weights(residues).tolist() == [2, 1, 0]


def test_compositions():
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(2, 2, largest=1)) == [(1, 1)]
    assert len(list(compositions(4, 3))) == 15


def test_interval_counting(vdc):
    assert t_by_intervals(vdc.point_block(), 2, 2) == 0
    zeros = np.zeros((4, 2, 2, 1), dtype=np.int64)
    assert t_by_intervals(zeros, 2, 2) == 2
    with pytest.raises(NetInputError):
        t_by_intervals(zeros[:3], 2, 2)
    with pytest.raises(ResourceBoundError):
        t_by_intervals(vdc.point_block(), 2, 2, bound=2)


def test_interval_counting_ignores_coordinate_order(vdc):
    points = vdc.point_block()
    assert t_by_intervals(points[:, ::-1], 2, 2) == t_by_intervals(points, 2, 2)


def test_shifted_fixture_is_the_shifted_net(shifted_points):
    """The fixture is the two-dimensional Sobol' net at m = 5 with its top cell shifted."""
    net = sobol_net(load_direction_file(), 2, 5)
    expected = shift_top_corner(net.point_block(), net.spec)
    assert np.array_equal(shifted_points, expected)
    assert np.array_equal(mu_star_array(shifted_points), net.mu_star_block())


def test_lower_bound_is_not_exact_for_point_sets(shifted_points):
    """The shifted set has the net's enumerator but a much larger t."""
    assert general_lower_bound(shifted_points, 2, 5) == 0
    exact = t_by_intervals(shifted_points, 2, 5)
    assert exact >= 3
    assert t_by_walsh_sums(shifted_points, GroupSpec.cyclic(2), 5) == exact


def test_walsh_sums_agree_on_nets(vdc):
    assert t_by_walsh_sums(vdc.point_block(), vdc.spec, 2) == 0
    zeros = np.zeros((4, 2, 2, 1), dtype=np.int64)
    assert t_by_walsh_sums(zeros, GroupSpec.cyclic(2), 2) == 2


def test_tms_uniformity_of_non_power_multiset():
    """{0, 1/2, 1/2} is a (3, 3, 1)-net but not a (1, 3, 1)-net."""
    points = points_from_digits(GroupSpec.cyclic(2), [[[0]], [[1]], [[1]]])
    assert is_TMs_uniform(points, 3, 3, 2)
    assert not is_TMs_uniform(points, 1, 3, 2)
    with pytest.raises(NetInputError):
        is_TMs_uniform(points, 1, 4, 2)


def test_replication(vdc):
    """lambda copies of a (t, m, s)-net form a (lambda b^t, lambda b^m, s)-net."""
    points = vdc.point_block()
    tripled = replicate(points, 3)
    assert tripled.shape == (12, 2, 2, 1)
    assert is_TMs_uniform(points, 1, 4, 2)
    assert is_TMs_uniform(tripled, 3, 12, 2)
    assert not is_TMs_uniform(tripled, 1, 12, 2)
    with pytest.raises(NetInputError):
        replicate(points, 0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
