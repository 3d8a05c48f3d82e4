"""
Exact integer polynomial arithmetic.

IntPoly is a dense univariate polynomial with arbitrary-precision
coefficients and an optional truncation degree; MultiPoly is a sparse
multivariate polynomial with a total-degree cap. The module also builds the
special families used by the weight enumerator and t-value algorithms.
"""
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from errors import InternalComputationError, NetInputError, ResourceBoundError

logger = logging.getLogger(__name__)


def _min_cap(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class IntPoly:
    """
    Dense polynomial sum_a coeffs[a] * z**a with exact integer coefficients.

    When cap is set, coefficients beyond degree cap are dropped. Trailing
    zeros are allowed; degree() reports the highest nonzero index.
    """
    coeffs: Tuple[int, ...] = (0,)
    cap: Optional[int] = None

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs) or (0,)
        if self.cap is not None:
            if self.cap < 0:
                raise NetInputError(f"truncation degree must be >= 0, got {self.cap}")
            coeffs = coeffs[: self.cap + 1]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def one(cls, cap: Optional[int] = None) -> "IntPoly":
        return cls((1,), cap)

    @classmethod
    def monomial(cls, a: int, c: int = 1, cap: Optional[int] = None) -> "IntPoly":
        return cls((0,) * a + (c,), cap)

    def degree(self) -> int:
        """Highest index with a nonzero coefficient, -1 for the zero polynomial."""
        for a in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[a]:
                return a
        return -1

    def is_zero(self) -> bool:
        return self.degree() < 0

    def trimmed(self) -> Tuple[int, ...]:
        return self.coeffs[: self.degree() + 1]

    def __getitem__(self, a: int) -> int:
        if 0 <= a < len(self.coeffs):
            return self.coeffs[a]
        return 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.trimmed() == other.trimmed()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.trimmed())

    def __repr__(self) -> str:
        return f"IntPoly({list(self.trimmed())}, cap={self.cap})"

    def __add__(self, other: "IntPoly") -> "IntPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(
            tuple(self[a] + other[a] for a in range(size)),
            _min_cap(self.cap, other.cap),
        )

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs), self.cap)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: Union["IntPoly", int]) -> "IntPoly":
        if isinstance(other, IntPoly):
            cap = _min_cap(self.cap, other.cap)
            if cap is None:
                cap = max(self.degree(), 0) + max(other.degree(), 0)
                return IntPoly(trunc_mul(self, other, cap).coeffs)
            return trunc_mul(self, other, cap)
        return IntPoly(tuple(c * other for c in self.coeffs), self.cap)

    __rmul__ = __mul__

    def truncate(self, D: int) -> "IntPoly":
        return IntPoly(self.coeffs, _min_cap(self.cap, D))

    def evaluate(self, z: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * z + c
        return value

    def substitute_scaled(self, c: int) -> "IntPoly":
        """Substitute Z <- c*z, i.e. multiply the coefficient of degree a by c**a."""
        return IntPoly(tuple(coef * c**a for a, coef in enumerate(self.coeffs)), self.cap)

    def divide_by_one_minus(self) -> "IntPoly":
        """
        Exact division by (1 - Z), computed as prefix sums.

        For uncapped polynomials the remainder (the coefficient sum) must
        vanish; capped polynomials are treated as truncated power series.
        """
        quotient = []
        running = 0
        for c in self.coeffs:
            running += c
            quotient.append(running)
        if self.cap is None:
            if quotient[-1] != 0:
                raise InternalComputationError(
                    f"polynomial is not divisible by (1 - Z): remainder {quotient[-1]}"
                )
            quotient = quotient[:-1] or [0]
        return IntPoly(tuple(quotient), self.cap)

    def power(self, k: int, D: Optional[int] = None) -> "IntPoly":
        cap = _min_cap(self.cap, D)
        result = IntPoly.one(cap)
        for _ in range(k):
            result = result * self
        return result

    def window(self, lo: int, hi: int) -> Tuple[int, ...]:
        """Coefficients of degrees lo..hi inclusive."""
        return tuple(self[a] for a in range(lo, hi + 1))


def trunc_mul(p: IntPoly, q: IntPoly, D: int) -> IntPoly:
    """Schoolbook product of p and q modulo z**(D+1)."""
    if D < 0:
        raise NetInputError(f"truncation degree must be >= 0, got {D}")
    out = [0] * (D + 1)
    qc = q.coeffs
    for i, a in enumerate(p.coeffs[: D + 1]):
        if a == 0:
            continue
        for j, c in enumerate(qc[: D + 1 - i]):
            if c:
                out[i + j] += a * c
    return IntPoly(tuple(out), D)


def p_poly(h: int, n: int, b: int) -> IntPoly:
    """
    The per-row polynomial p(h; z) of the MacWilliams identity for n-digit rows.

    p(h;z) = 1 + sum_{a=1}^{h-1} (b^a - b^{a-1}) z^a - b^{h-1} z^h   for h > 0
    p(0;z) = 1 + sum_{a=1}^{n}   (b^a - b^{a-1}) z^a
    """
    if b < 2:
        raise NetInputError(f"base must be >= 2, got {b}")
    if not 0 <= h <= n:
        raise NetInputError(f"p(h;z) needs 0 <= h <= n, got h={h}, n={n}")
    if h == 0:
        return IntPoly((1,) + tuple(b**a - b ** (a - 1) for a in range(1, n + 1)))
    middle = tuple(b**a - b ** (a - 1) for a in range(1, h))
    return IntPoly((1,) + middle + (-(b ** (h - 1)),))


def p_poly_closed_form(h: int, n: int, b: int) -> IntPoly:
    """
    Closed form p(h;z) = (1 - z)(1 - (bz)^h) / (1 - bz) for h > 0 and
    p(0;z) = (1 - z)(1 - (bz)^{n+1}) / (1 - bz) + b^n z^{n+1}.

    The geometric quotient is taken in the variable Z = bz by exact division.
    """
    if not 0 <= h <= n:
        raise NetInputError(f"p(h;z) needs 0 <= h <= n, got h={h}, n={n}")
    top = h if h > 0 else n + 1
    numerator = IntPoly((1,) + (0,) * (top - 1) + (-1,))
    geometric = numerator.divide_by_one_minus().substitute_scaled(b)
    result = IntPoly((1, -1)) * geometric
    if h == 0:
        result = result + IntPoly.monomial(n + 1, b**n)
    return IntPoly(result.trimmed())


def inverse_p_poly(h: int, m: int, b: int) -> IntPoly:
    """
    Per-row polynomial of the inverse identity for m-digit rows:
    1 + sum_{a=1}^{m-h} (b^a - b^{a-1}) z^a - b^{m-h} z^{m+1-h}, of degree m+1-h.
    """
    if not 0 <= h <= m:
        raise NetInputError(f"inverse p(h;z) needs 0 <= h <= m, got h={h}, m={m}")
    middle = tuple(b**a - b ** (a - 1) for a in range(1, m - h + 1))
    return IntPoly((1,) + middle + (-(b ** (m - h)),))


def geometric_factor(b: int, m: int, s: int) -> IntPoly:
    """
    Q_m(z): ((1 - z) / (1 - bz))^s truncated at degree m.

    Expanded as (1 - z)^s * sum_a C(s+a-1, a) b^a z^a.
    """
    if b < 2 or m < 0 or s < 1:
        raise NetInputError(f"geometric factor needs b >= 2, m >= 0, s >= 1 (got {b}, {m}, {s})")
    binomial_side = IntPoly(tuple((-1) ** k * comb(s, k) for k in range(min(s, m) + 1)), m)
    series_side = IntPoly(tuple(comb(s + a - 1, a) * b**a for a in range(m + 1)), m)
    return trunc_mul(binomial_side, series_side, m)


@dataclass(frozen=True)
class CoefficientWindow:
    """coeffs[k] is the coefficient of z**(low + k)."""
    low: int
    coeffs: Tuple[int, ...]

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def __getitem__(self, degree: int) -> int:
        k = degree - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def degree(self) -> Optional[int]:
        """Highest degree with a nonzero coefficient inside the window."""
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k]:
                return self.low + k
        return None


def top_window_product(mu: Sequence[int], m: int) -> CoefficientWindow:
    """
    Top coefficients (degrees (s-1)(m+1) .. s(m+1)) of prod_i (z^{mu_i} - z^{m+1}).

    Computed as the reciprocal product prod_i (-1 + y^{m+1-mu_i}) mod y^{m+2}
    and read backwards; O(s*m) per call.
    """
    s = len(mu)
    if s < 1:
        raise NetInputError("top_window_product needs at least one factor")
    width = m + 2
    acc = [1] + [0] * (width - 1)
    for value in mu:
        if not 0 <= value <= m + 1:
            raise NetInputError(f"mu values must lie in 0..{m + 1}, got {value}")
        d = m + 1 - value
        new = [-c for c in acc]
        for j in range(d, width):
            new[j] += acc[j - d]
        acc = new
    return CoefficientWindow((s - 1) * (m + 1), tuple(reversed(acc)))


def product_sum(
    exponents: np.ndarray,
    width: int,
    labels: Optional[np.ndarray] = None,
) -> Union[List[int], Dict[int, List[int]]]:
    """
    Exact sum over rows of prod_i (1 - Y^{exponents[row, i]}) modulo Y^width.

    Exponents >= width contribute the factor 1 and an exponent 0 the factor 0.
    With labels, one coefficient list per distinct label is returned.
    The per-row coefficient l1-norm is at most 2^s, so int64 is used whenever
    rows * 2^s fits; otherwise the batch falls back to Python integers.
    """
    exponents = np.asarray(exponents, dtype=np.int64)
    if exponents.ndim != 2:
        raise NetInputError(f"exponent block must be 2-dimensional, got shape {exponents.shape}")
    rows, s = exponents.shape
    exact_int64 = rows == 0 or (s + int(rows).bit_length()) < 62
    dtype = np.int64 if exact_int64 else object
    acc = np.zeros((rows, width), dtype=dtype)
    acc[:, 0] = 1
    for i in range(s):
        column = exponents[:, i]
        for h in np.unique(column):
            h = int(h)
            if h >= width:
                continue
            selected = np.nonzero(column == h)[0]
            if h == 0:
                acc[selected] = 0
                continue
            block = acc[selected]
            shifted = block[:, : width - h].copy()
            block[:, h:] -= shifted
            acc[selected] = block

    def _column_sums(part: np.ndarray) -> List[int]:
        if part.shape[0] == 0:
            return [0] * width
        return [int(v) for v in part.sum(axis=0)]

    if labels is None:
        return _column_sums(acc)
    labels = np.asarray(labels)
    return {int(label): _column_sums(acc[labels == label]) for label in np.unique(labels)}


class MultiPoly:
    """
    Sparse multivariate integer polynomial in z_1..z_s.

    Terms map exponent vectors to nonzero coefficients; monomials whose total
    degree exceeds cap are dropped.
    """

    def __init__(
        self,
        nvars: int,
        terms: Optional[Mapping[Tuple[int, ...], int]] = None,
        cap: Optional[int] = None,
    ) -> None:
        self.nvars = nvars
        self.cap = cap
        self.terms: Dict[Tuple[int, ...], int] = {}
        for exps, c in (terms or {}).items():
            self._add_term(tuple(int(e) for e in exps), int(c))

    def _add_term(self, exps: Tuple[int, ...], c: int) -> None:
        if len(exps) != self.nvars:
            raise NetInputError(f"exponent vector {exps} does not have {self.nvars} entries")
        if self.cap is not None and sum(exps) > self.cap:
            return
        value = self.terms.get(exps, 0) + c
        if value:
            self.terms[exps] = value
        else:
            self.terms.pop(exps, None)

    @classmethod
    def one(cls, nvars: int, cap: Optional[int] = None) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: 1}, cap)

    @classmethod
    def from_univariate(cls, poly: IntPoly, var: int, nvars: int, cap: Optional[int] = None) -> "MultiPoly":
        """Embed a univariate polynomial in the variable z_{var+1} (0-based var)."""
        terms = {}
        for a, c in enumerate(poly.coeffs):
            if c:
                exps = [0] * nvars
                exps[var] = a
                terms[tuple(exps)] = c
        return cls(nvars, terms, cap)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> Iterable[Tuple[Tuple[int, ...], int]]:
        return self.terms.items()

    def __getitem__(self, exps: Tuple[int, ...]) -> int:
        return self.terms.get(tuple(exps), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"MultiPoly(nvars={self.nvars}, terms={len(self.terms)}, cap={self.cap})"

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        result = MultiPoly(self.nvars, self.terms, _min_cap(self.cap, other.cap))
        for exps, c in other.terms.items():
            result._add_term(exps, c)
        return result

    def __mul__(self, other: Union["MultiPoly", int]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()}, self.cap)
        cap = _min_cap(self.cap, other.cap)
        result = MultiPoly(self.nvars, cap=cap)
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if cap is not None and d1 + sum(e2) > cap:
                    continue
                result._add_term(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return result

    def add_scaled_product(self, factors: Sequence[IntPoly], weight: int = 1, term_bound: Optional[int] = None) -> None:
        """
        In place: add weight * prod_i factors[i](z_i), respecting the total-degree cap.
        """
        partial: Dict[Tuple[int, ...], int] = {(): weight}
        for poly in factors:
            grown: Dict[Tuple[int, ...], int] = {}
            for exps, c in partial.items():
                used = sum(exps)
                for a, coef in enumerate(poly.coeffs):
                    if not coef:
                        continue
                    if self.cap is not None and used + a > self.cap:
                        break
                    key = exps + (a,)
                    grown[key] = grown.get(key, 0) + c * coef
            partial = grown
            if term_bound is not None and len(partial) > term_bound:
                raise ResourceBoundError(
                    f"generalized enumerator expansion exceeds {term_bound} terms"
                )
        for exps, c in partial.items():
            if c:
                self._add_term(exps, c)

    def total_degree_parts(self) -> Dict[int, Dict[Tuple[int, ...], int]]:
        """Homogeneous parts H_d keyed by total degree d."""
        parts: Dict[int, Dict[Tuple[int, ...], int]] = {}
        for exps, c in self.terms.items():
            parts.setdefault(sum(exps), {})[exps] = c
        return parts

    def specialize(self, subset: Iterable[int]) -> IntPoly:
        """Substitute z_i <- z for i in subset (1-based) and z_i <- 0 otherwise."""
        chosen = set(subset)
        coeffs: Dict[int, int] = {}
        for exps, c in self.terms.items():
            if any(e and (i + 1) not in chosen for i, e in enumerate(exps)):
                continue
            d = sum(exps)
            coeffs[d] = coeffs.get(d, 0) + c
        top = max(coeffs) if coeffs else 0
        return IntPoly(tuple(coeffs.get(a, 0) for a in range(top + 1)), self.cap)

    @staticmethod
    def support(exps: Tuple[int, ...]) -> Tuple[int, ...]:
        """1-based indices of the variables appearing in a monomial."""
        return tuple(i + 1 for i, e in enumerate(exps) if e)
