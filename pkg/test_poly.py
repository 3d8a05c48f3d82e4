"""
Tests for exact polynomial arithmetic and the enumerator polynomial families.
"""
import numpy as np
import pytest

from errors import InternalComputationError, NetInputError, ResourceBoundError
from poly import (
    IntPoly,
    MultiPoly,
    geometric_factor,
    inverse_p_poly,
    p_poly,
    p_poly_closed_form,
    product_sum,
    top_window_product,
    trunc_mul,
)


def test_intpoly_basics():
    """Trailing zeros are ignored for equality and degree."""
    p = IntPoly((1, 2, 0, 0))
    assert p == IntPoly((1, 2))
    assert p.degree() == 1
    assert IntPoly().degree() == -1
    assert IntPoly().is_zero()
    assert p[5] == 0
    assert p.evaluate(3) == 7


def test_intpoly_arithmetic():
    """Products are exact when uncapped and truncated when capped."""
    p = IntPoly((1, 1))
    assert p * p == IntPoly((1, 2, 1))
    assert (p * p).truncate(1) == IntPoly((1, 2))
    assert IntPoly((1, 1), cap=1) * IntPoly((1, 1)) == IntPoly((1, 2))
    assert p - p == IntPoly()
    assert p * 3 == IntPoly((3, 3))
    assert p.power(3) == IntPoly((1, 3, 3, 1))
    assert p.substitute_scaled(2) == IntPoly((1, 2))


def test_trunc_mul():
    assert trunc_mul(IntPoly((1, 1)), IntPoly((1, 1)), 1) == IntPoly((1, 2))
    with pytest.raises(NetInputError):
        trunc_mul(IntPoly((1,)), IntPoly((1,)), -1)


def test_divide_by_one_minus():
    """Exact division by (1 - Z) and detection of a nonzero remainder."""
    assert IntPoly((1, -1)).divide_by_one_minus() == IntPoly((1,))
    assert IntPoly((1, 0, 0, -1)).divide_by_one_minus() == IntPoly((1, 1, 1))
    with pytest.raises(InternalComputationError):
        IntPoly((1, 1)).divide_by_one_minus()
    # capped polynomials are power series
    assert IntPoly((1, 0, 0), cap=2).divide_by_one_minus() == IntPoly((1, 1, 1))


def test_p_poly_values():
    """p(h;z) for a few hand-expanded cases."""
    assert p_poly(2, 3, 2) == IntPoly((1, 1, -2))
    assert p_poly(1, 3, 2) == IntPoly((1, -1))
    assert p_poly(0, 2, 2) == IntPoly((1, 1, 2))
    assert p_poly(0, 2, 3) == IntPoly((1, 2, 6))
    with pytest.raises(NetInputError):
        p_poly(4, 3, 2)


@pytest.mark.parametrize("b", [2, 3, 4, 5])
def test_p_poly_closed_form_agrees(b):
    """The closed form through Z = bz matches the explicit coefficients for n <= 12."""
    for n in range(1, 13):
        for h in range(n + 1):
            assert p_poly_closed_form(h, n, b) == p_poly(h, n, b)


def test_p_poly_sums_to_zero_or_base_power():
    """p(h;1) = 0 for h > 0 and p(0;1) = b^n."""
    assert p_poly(3, 4, 3).evaluate(1) == 0
    assert p_poly(0, 4, 3).evaluate(1) == 3**4


def test_inverse_p_poly():
    """The inverse-identity family, degree m + 1 - h."""
    assert inverse_p_poly(0, 1, 2) == IntPoly((1, 1, -2))
    assert inverse_p_poly(1, 1, 2) == IntPoly((1, -1))
    assert inverse_p_poly(1, 2, 2) == IntPoly((1, 1, -2))
    assert inverse_p_poly(2, 2, 2) == IntPoly((1, -1))
    assert inverse_p_poly(0, 3, 2).degree() == 4


def test_geometric_factor():
    """((1 - z) / (1 - bz))^s truncated at degree m."""
    assert geometric_factor(2, 2, 1) == IntPoly((1, 1, 2))
    assert geometric_factor(2, 1, 2) == IntPoly((1, 2))
    assert geometric_factor(2, 2, 2) == IntPoly((1, 2, 5))
    # multiplying back by (1 - bz)^s gives (1 - z)^s
    q = geometric_factor(3, 4, 2)
    back = trunc_mul(q, IntPoly((1, -3)).power(2), 4)
    assert back == IntPoly((1, -2, 1))


def test_top_window_product():
    """Top coefficients of prod (z^mu - z^(m+1)) from the reciprocal product."""
    window = top_window_product([1, 1], 1)
    assert window.low == 2
    assert window.coeffs == (1, -2, 1)
    assert window[3] == -2
    assert window[9] == 0
    assert window.degree() == 4
    with pytest.raises(NetInputError):
        top_window_product([], 2)


@pytest.mark.parametrize("b", [2, 3, 5])
def test_geometric_factor_is_a_power_of_the_one_dimensional_factor(b):
    """Q_m for s coordinates equals the truncated s-th power of the s = 1 factor."""
    for m in range(1, 7):
        single = geometric_factor(b, m, 1)
        power = IntPoly((1,))
        for s in range(1, 9):
            power = trunc_mul(power, single, m)
            assert geometric_factor(b, m, s) == power


def _naive_product(mu, m):
    total = IntPoly((1,))
    for value in mu:
        coeffs = [0] * (m + 2)
        coeffs[value] += 1
        coeffs[m + 1] -= 1
        total = total * IntPoly(tuple(coeffs))
    return total


def test_top_window_product_matches_naive_product():
    """Every window coefficient equals the full product's coefficient of the same degree."""
    rng = np.random.default_rng(23)
    for _ in range(60):
        m = int(rng.integers(1, 13))
        s = int(rng.integers(1, 11))
        mu = [int(v) for v in rng.integers(0, m + 2, size=s)]
        window = top_window_product(mu, m)
        full = _naive_product(mu, m)
        assert window.low == (s - 1) * (m + 1)
        for degree in range(window.low, window.high + 1):
            assert window[degree] == full[degree]
        assert full.degree() <= s * (m + 1)


def test_product_sum():
    """Row products of (1 - Y^e) summed exactly."""
    assert product_sum(np.array([[1], [2]]), 3) == [2, -1, -1]
    assert product_sum(np.array([[0], [5]]), 3) == [1, 0, 0]
    assert product_sum(np.array([[1, 1]]), 3) == [1, -2, 1]
    assert product_sum(np.array([[1], [2]]), 3, labels=np.array([0, 1])) == {
        0: [1, -1, 0],
        1: [1, 0, -1],
    }
    assert product_sum(np.zeros((0, 2), dtype=np.int64), 2) == [0, 0]


def test_multipoly_specialize_and_parts():
    """Specialization keeps monomials supported inside the subset."""
    poly = MultiPoly(2, {(1, 0): 1, (0, 1): 2, (1, 1): 3})
    assert poly.specialize([1]) == IntPoly((0, 1))
    assert poly.specialize([1, 2]) == IntPoly((0, 3, 3))
    parts = poly.total_degree_parts()
    assert parts[1] == {(1, 0): 1, (0, 1): 2}
    assert parts[2] == {(1, 1): 3}
    assert MultiPoly.support((0, 2, 1)) == (2, 3)


def test_multipoly_cap_and_products():
    """Terms beyond the total-degree cap are dropped."""
    poly = MultiPoly(2, cap=2)
    poly.add_scaled_product([IntPoly((1, 1)), IntPoly((1, 0, 1))], weight=2)
    assert poly[(0, 0)] == 2
    assert poly[(1, 0)] == 2
    assert poly[(0, 2)] == 2
    assert poly[(1, 2)] == 0
    x = MultiPoly.from_univariate(IntPoly((1, 1)), 0, 2)
    y = MultiPoly.from_univariate(IntPoly((1, 1)), 1, 2)
    assert (x * y)[(1, 1)] == 1
    assert len(x + y) == 3


def test_multipoly_term_bound():
    poly = MultiPoly(3)
    with pytest.raises(ResourceBoundError):
        poly.add_scaled_product([IntPoly((1, 1, 1))] * 3, term_bound=5)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
