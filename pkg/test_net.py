"""
Tests for digit matrices, digital net construction and point enumeration.
"""
import numpy as np
import pytest

from abelian import GroupSpec
from errors import NetInputError
from net import (
    DigitMatrix,
    MuProfile,
    as_point_array,
    digit_add,
    enumerate_points,
    index_digits,
    map_chunks,
    mu_star,
    mu_star_array,
    net_from_generators,
    net_from_matrices,
    nu_star_array,
    project,
)


@pytest.fixture
def vdc():
    """Two-dimensional van der Corput net: C_1 = I, C_2 = anti-identity."""
    return net_from_matrices(2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


def test_net_shape(vdc):
    assert (vdc.b, vdc.s, vdc.m, vdc.n) == (2, 2, 2, 2)
    assert vdc.size == 4
    assert vdc.point_block().shape == (4, 2, 2, 1)


def test_points_follow_matrices(vdc):
    """Row i of point l is C_i applied to the digits of l."""
    assert vdc.point(0).is_zero()
    assert vdc.point(1).to_lists() == [[1, 0], [0, 1]]
    assert vdc.point(2).to_lists() == [[0, 1], [1, 0]]
    assert vdc.point(3).to_lists() == [[1, 1], [1, 1]]
    assert vdc.generator(1) == vdc.point(1)


def test_points_form_a_group(vdc):
    """X_l + X_l' = X_(l digit-plus l')."""
    for l in range(4):
        for l2 in range(4):
            assert vdc.point(l) + vdc.point(l2) == vdc.point(digit_add(l, l2, 2, 2))


def test_mu_star_block(vdc):
    assert vdc.mu_star_block().tolist() == [[0, 0], [1, 2], [2, 1], [1, 1]]
    assert vdc.profile(0) == MuProfile(nu=(3, 3), mu_star=(0, 0))
    assert vdc.profile(1).nu == (1, 2)


def test_mu_star_helpers():
    assert mu_star([0, 0, 1]) == 3
    assert mu_star([]) == 0
    assert nu_star_array(np.array([0, 1, 3]), 2).tolist() == [3, 1, 3]


def _digit_count(value: int, b: int) -> int:
    count = 0
    while value:
        value //= b
        count += 1
    return count


@pytest.mark.parametrize("b", [2, 3])
def test_scaled_coordinate_weight_bridge(b):
    """For a row xi_1..xi_m, the integer x * b^m has m + 1 - nu* base-b digits."""
    spec = GroupSpec.cyclic(b)
    for m in range(1, 9):
        rows = index_digits(np.arange(b**m), b, m)
        nu = nu_star_array(mu_star_array(spec.decode_digits(rows)), m)
        places = b ** np.arange(m - 1, -1, -1)
        for row, nu_value in zip(rows, nu):
            scaled = int(row @ places)
            assert _digit_count(scaled, b) == m + 1 - int(nu_value)


def test_index_and_digit_arithmetic():
    assert index_digits(np.array([5]), 2, 3).tolist() == [[1, 0, 1]]
    assert digit_add(1, 3, 2, 2) == 2
    assert digit_add(5, 7, 3, 2) == 0


def test_project(vdc):
    """Projection keeps the chosen coordinate rows."""
    second = project(vdc, [2])
    assert second.s == 1
    assert second.point(1).to_lists() == [[0, 1]]
    with pytest.raises(NetInputError):
        project(vdc, [3])
    with pytest.raises(NetInputError):
        project(vdc, [])


def test_malformed_matrices_rejected():
    with pytest.raises(NetInputError):
        net_from_matrices(2, [[[1, 0], [0, 1]], [[1]]])
    with pytest.raises(NetInputError):
        net_from_matrices(2, [[[1, 2]]])
    with pytest.raises(NetInputError):
        net_from_matrices(3, [[[1]]], GroupSpec.cyclic(2))


def test_generators_over_product_group():
    """Digits of Z_2 x Z_2 add componentwise, not modulo 4."""
    spec = GroupSpec((2, 2))
    net = net_from_generators(spec, [[[1]], [[2]]])
    assert net.b == 4
    assert net.size == 16
    assert net.point(3).to_lists() == [[1]]
    assert net.point(5).to_lists() == [[3]]
    with pytest.raises(NetInputError):
        net_from_generators(spec, [])


def test_enumerate_points_in_order(vdc):
    seen = list(enumerate_points(vdc, chunk_size=3))
    assert [l for l, _ in seen] == [0, 1, 2, 3]
    assert seen[3][1] == DigitMatrix.from_digits(vdc.spec, [[1, 1], [1, 1]])


def test_as_point_array():
    spec = GroupSpec.cyclic(2)
    points = [DigitMatrix.from_digits(spec, [[1]]), DigitMatrix.from_digits(spec, [[0]])]
    assert as_point_array(points).shape == (2, 1, 1, 1)
    with pytest.raises(NetInputError):
        as_point_array([])


def test_map_chunks_preserves_order():
    """Chunk results come back in order for any worker count."""
    expected = [(0, 3), (3, 6), (6, 9), (9, 10)]
    assert map_chunks(lambda lo, hi: (lo, hi), 0, 10, chunk_size=3, workers=1) == expected
    assert map_chunks(lambda lo, hi: (lo, hi), 0, 10, chunk_size=3, workers=4) == expected


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
