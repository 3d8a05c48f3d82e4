"""
Tests for Sobol' direction-number parsing and generating matrices.
"""
import pytest

from config import settings
from errors import NetInputError
from sobol import (
    DEFAULT_DIRECTION_FILE,
    DirectionEntry,
    build_matrices,
    direction_integers,
    load_direction_file,
    parse_direction_file,
    sobol_net,
)

HEADER = "d       s       a       m_i\n"


@pytest.fixture(scope="module")
def directions():
    """Shipped Sobol' direction numbers."""
    return load_direction_file()


def test_parse_single_row():
    entries = parse_direction_file(HEADER + "2 1 0 1\n")
    assert entries == [DirectionEntry(2, 1, 0, (1,))]


def test_parse_header_only():
    assert parse_direction_file(HEADER) == []
    assert parse_direction_file(HEADER + "\n\n") == []


@pytest.mark.parametrize(
    "body",
    [
        "2 1 0 2\n",  # even m_1
        "2 1 0 3\n",  # m_1 >= 2
        "2 2 0 1\n",  # missing m_2
        "2 2 2 1 1\n",  # coefficient bits do not fit
        "3 1 0 1\n",  # dimension 2 skipped
        "2 1 zero 1\n",
    ],
)
def test_parse_rejects_bad_rows(body):
    with pytest.raises(NetInputError, match="line 2"):
        parse_direction_file(HEADER + body)


def test_parse_rejects_missing_header():
    with pytest.raises(NetInputError):
        parse_direction_file("2 1 0 1\n")
    with pytest.raises(NetInputError):
        parse_direction_file("")


def test_load_shipped_table(directions):
    assert DEFAULT_DIRECTION_FILE.exists()
    assert len(directions) == 24
    assert directions[0] == DirectionEntry(2, 1, 0, (1,))
    with pytest.raises(NetInputError):
        load_direction_file(DEFAULT_DIRECTION_FILE.parent / "missing.txt")


def test_direction_integers(directions):
    assert direction_integers(directions[0], 5) == [1, 3, 5, 15, 17]
    assert direction_integers(directions[1], 4) == [1, 3, 3, 9]
    assert direction_integers(directions[1], 1) == [1]


def test_build_matrices_small(directions):
    assert build_matrices(directions, 2, 2) == [[[1, 0], [0, 1]], [[1, 1], [0, 1]]]


def test_matrices_are_unit_upper_triangular(directions):
    for matrix in build_matrices(directions, 25, 10):
        for j in range(10):
            assert matrix[j][j] == 1
            assert not any(matrix[j][:j])


def test_matrices_nest_across_m(directions):
    """The m x m matrices are the top-left blocks of the (m+1) x (m+1) ones."""
    small = build_matrices(directions, 6, 7)
    large = build_matrices(directions, 6, 8)
    for a, c in zip(small, large):
        assert [row[:7] for row in c[:7]] == a


def test_build_matrices_bounds(directions):
    with pytest.raises(NetInputError):
        build_matrices(directions, 26, 4)
    with pytest.raises(NetInputError):
        build_matrices(directions, 0, 4)
    with pytest.raises(NetInputError):
        build_matrices(directions, 2, settings.max_sobol_bits + 1)


def test_sobol_net_shape(directions):
    net = sobol_net(directions, 4, 5)
    assert (net.b, net.s, net.m, net.n) == (2, 4, 5, 5)
    assert net.point(1).to_lists()[0] == [1, 0, 0, 0, 0]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
