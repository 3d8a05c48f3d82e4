"""
Weight enumerators of the dual net via the MacWilliams-type identity.

All enumerators are kept scaled by b^m (the sum over points is never
divided by the point count), so every coefficient is an exact integer and
all nonzero tests run on scaled values.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from config import settings
from errors import (
    InternalComputationError,
    NetInputError,
    ProjectionCapError,
    ResourceBoundError,
)
from net import (
    DigitalNet,
    DigitMatrix,
    as_point_array,
    map_chunks,
    mu_star_array,
    nu_star_array,
    project,
)
from poly import IntPoly, MultiPoly, geometric_factor, p_poly, product_sum, trunc_mul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightEnumerator:
    """
    b^m * sum_a N_a z^a as exact integers.

    N_a is exact for a <= valid_to; full enumerators cover all degrees 0..ns.
    """
    scaled: IntPoly
    scale: int
    b: int
    m: int
    s: int
    n: int
    valid_to: int
    full: bool = False

    def scaled_coefficient(self, a: int) -> int:
        return self.scaled[a]

    def count(self, a: int) -> int:
        """N_a; exact division by the scale is checked."""
        quotient, remainder = divmod(self.scaled[a], self.scale)
        if remainder:
            raise InternalComputationError(
                f"scaled coefficient {self.scaled[a]} of degree {a} is not divisible by {self.scale}"
            )
        return quotient

    def counts(self) -> List[int]:
        return [self.count(a) for a in range(self.valid_to + 1)]

    def min_weight(self) -> Optional[int]:
        """Smallest a >= 1 (within valid_to) with a nonzero scaled coefficient."""
        for a in range(1, self.valid_to + 1):
            if self.scaled[a]:
                return a
        return None

    def default_min_weight(self) -> int:
        return self.n * self.s + 1 if self.full else self.valid_to + 1


@dataclass(frozen=True)
class GwPolynomial:
    """b^m times the overline GW polynomial, truncated at total degree cap."""
    poly: MultiPoly
    scale: int
    b: int
    m: int
    n: int
    cap: int

    @property
    def s(self) -> int:
        return self.poly.nvars

    def specialize_all(self) -> IntPoly:
        """z_i <- z for every i."""
        return self.poly.specialize(range(1, self.s + 1))


@dataclass(frozen=True)
class AccumulatorConfig:
    b: int
    s: int
    ell: int


@dataclass(frozen=True)
class Accumulator:
    """Running sum of prod_i (1 - (bz)^{nu*(x_{l,i})}) mod z^{ell+1} over the points seen."""
    config: AccumulatorConfig
    partial: IntPoly
    points_seen: int = 0

    @classmethod
    def empty(cls, b: int, s: int, ell: int) -> "Accumulator":
        if ell < 1:
            raise NetInputError(f"truncation degree must be >= 1, got {ell}")
        return cls(AccumulatorConfig(b, s, ell), IntPoly((0,) * (ell + 1), ell), 0)

    def merge(self, other: "Accumulator") -> "Accumulator":
        if self.config != other.config:
            raise NetInputError(f"accumulator config mismatch: {self.config} vs {other.config}")
        return Accumulator(self.config, self.partial + other.partial, self.points_seen + other.points_seen)

    __add__ = merge


def _profile_sum(mu_block: np.ndarray, b: int, ell: int) -> IntPoly:
    """sum over rows of prod_i (1 - (bz)^{nu*}) mod z^{ell+1} for a mu* block."""
    sums = product_sum(nu_star_array(mu_block, ell), ell + 1)
    return IntPoly(tuple(sums), ell).substitute_scaled(b)


def accumulate_profile(acc: Accumulator, mu_block: np.ndarray) -> Accumulator:
    """Add the points described by a (N, s) block of mu* values."""
    mu_block = np.asarray(mu_block, dtype=np.int64)
    if mu_block.ndim != 2 or mu_block.shape[1] != acc.config.s:
        raise NetInputError(
            f"mu* block of shape {mu_block.shape} does not match s={acc.config.s}"
        )
    if mu_block.shape[0] == 0:
        return acc
    partial = _profile_sum(mu_block, acc.config.b, acc.config.ell)
    return Accumulator(acc.config, acc.partial + partial, acc.points_seen + mu_block.shape[0])


def accumulate(
    acc: Accumulator,
    net: DigitalNet,
    start: int,
    stop: int,
    workers: Optional[int] = None,
) -> Accumulator:
    """Add the enumerated points start..stop-1 of net."""
    config = acc.config
    if net.b != config.b or net.s != config.s:
        raise NetInputError(
            f"net (b={net.b}, s={net.s}) does not match accumulator (b={config.b}, s={config.s})"
        )
    if config.ell > net.n:
        raise NetInputError(f"truncation degree {config.ell} exceeds digit depth n={net.n}")
    if start >= stop:
        return acc
    partials = map_chunks(
        lambda lo, hi: _profile_sum(net.mu_star_block(lo, hi), config.b, config.ell),
        start,
        stop,
        workers=workers,
    )
    total = acc.partial
    for partial in partials:
        total = total + partial
    return Accumulator(config, total, acc.points_seen + (stop - start))


def finalize(acc: Accumulator, m: int, n: Optional[int] = None) -> WeightEnumerator:
    """
    Apply Q_ell to the accumulated sum of the first b^m points.

    n is the digit depth of the points; it defaults to the leading-block
    depth max(m, ell) of a nested table cell.
    """
    config = acc.config
    if acc.points_seen != config.b**m:
        raise NetInputError(
            f"accumulator holds {acc.points_seen} points, finalizing needs b^m = {config.b ** m}"
        )
    n = max(m, config.ell) if n is None else n
    if n < config.ell:
        raise NetInputError(f"truncation degree {config.ell} exceeds digit depth n={n}")
    scaled = trunc_mul(geometric_factor(config.b, config.ell, config.s), acc.partial, config.ell)
    return WeightEnumerator(scaled, config.b**m, config.b, m, config.s, n, config.ell, False)


def truncated_wep(net: DigitalNet, ell: Optional[int] = None, workers: Optional[int] = None) -> WeightEnumerator:
    """
    Coefficients N_0..N_ell of the dual's weight enumerator through
    Q_ell(z) * sum_l prod_i (1 - (bz)^{nu*(x_{l,i})}) mod z^{ell+1}.
    """
    ell = max(net.m, 1) if ell is None else ell
    if not 1 <= ell <= net.n:
        raise NetInputError(f"truncation degree must satisfy 1 <= l <= n={net.n}, got {ell}")
    acc = accumulate(Accumulator.empty(net.b, net.s, ell), net, 0, net.size, workers)
    return finalize(acc, net.m, net.n)


def _full_from_buckets(buckets: Dict[int, List[int]], b: int, n: int, s: int) -> IntPoly:
    """
    Combine zero-row buckets: bucket r holds R_r(Z) = sum prod_{nonzero rows} (1 - Z^{mu*}).

    Each bucket contributes (R_r / (1-Z)^{s-r})(bz) * (1-z)^{s-r} * p(0;z)^r.
    """
    p_zero = p_poly(0, n, b)
    total = IntPoly()
    for r, coeffs in sorted(buckets.items()):
        reduced = IntPoly(tuple(coeffs))
        for _ in range(s - r):
            reduced = reduced.divide_by_one_minus()
        term = reduced.substitute_scaled(b) * IntPoly((1, -1)).power(s - r) * p_zero.power(r)
        total = total + term
    return IntPoly(total.trimmed() or (0,))


def _bucket_sums(mu_block: np.ndarray, n: int) -> Dict[int, List[int]]:
    width = n * mu_block.shape[1] + 1
    zero_rows = (mu_block == 0).sum(axis=1)
    exponents = np.where(mu_block == 0, width, mu_block)
    return product_sum(exponents, width, labels=zero_rows)


def _merge_buckets(parts: Iterable[Dict[int, List[int]]]) -> Dict[int, List[int]]:
    merged: Dict[int, List[int]] = {}
    for part in parts:
        for r, coeffs in part.items():
            if r in merged:
                merged[r] = [a + c for a, c in zip(merged[r], coeffs)]
            else:
                merged[r] = list(coeffs)
    return merged


def full_wep(net: DigitalNet, workers: Optional[int] = None) -> WeightEnumerator:
    """All coefficients N_0..N_{ns} of the dual's weight enumerator."""
    parts = map_chunks(
        lambda lo, hi: _bucket_sums(net.mu_star_block(lo, hi), net.n),
        0,
        net.size,
        workers=workers,
    )
    buckets = _merge_buckets(parts)
    if 0 in buckets:
        logger.debug(f"{len(buckets)} zero-row buckets; 0-bucket holds the points with no zero row")
    scaled = _full_from_buckets(buckets, net.b, net.n, net.s)
    valid_to = net.n * net.s
    return WeightEnumerator(
        IntPoly(scaled.coeffs + (0,) * max(0, valid_to + 1 - len(scaled.coeffs))),
        net.size, net.b, net.m, net.s, net.n, valid_to, True,
    )


def t_from_wep(w: WeightEnumerator, m: int) -> int:
    """t = m + 1 - min{a >= 1 : N_a != 0}, the minimum defaulting per the enumerator's range."""
    if w.m != m or w.scale != w.b**m:
        raise NetInputError(f"enumerator was computed for m={w.m}, asked for m={m}")
    min_weight = w.min_weight()
    if min_weight is None:
        min_weight = w.default_min_weight()
    return m + 1 - min_weight


def _point_set(points, b: int, m: int) -> np.ndarray:
    array = as_point_array(points)
    if array.shape[0] != b**m:
        raise NetInputError(f"point set has {array.shape[0]} points, expected b^m = {b ** m}")
    return array


def general_truncated_wep(points: Union[np.ndarray, Sequence[DigitMatrix]], b: int, m: int) -> WeightEnumerator:
    """Truncated enumerator of the hat-N_a for an arbitrary multiset of b^m points."""
    array = _point_set(points, b, m)
    _, s, n, _ = array.shape
    ell = max(m, 1)
    if ell > n:
        raise NetInputError(f"points carry {n} digits, need at least {ell}")
    acc = accumulate_profile(Accumulator.empty(b, s, ell), mu_star_array(array))
    return finalize(acc, m, n)


def general_full_wep(points: Union[np.ndarray, Sequence[DigitMatrix]], b: int, m: int) -> WeightEnumerator:
    """Whole-range enumerator of the hat-N_a for an arbitrary multiset of b^m points."""
    array = _point_set(points, b, m)
    _, s, n, _ = array.shape
    scaled = _full_from_buckets(_bucket_sums(mu_star_array(array), n), b, n, s)
    valid_to = n * s
    return WeightEnumerator(
        IntPoly(scaled.coeffs + (0,) * max(0, valid_to + 1 - len(scaled.coeffs))),
        b**m, b, m, s, n, valid_to, True,
    )


def general_lower_bound(points: Union[np.ndarray, Sequence[DigitMatrix]], b: int, m: int) -> int:
    """
    Lower bound on the t-value of an arbitrary b^m-point multiset:
    m + 1 - min{a : scaled hat-N_a != 0}. Exact for digital nets.
    """
    return t_from_wep(general_truncated_wep(points, b, m), m)


def overline_gw(
    net: DigitalNet,
    cap: Optional[int] = None,
    dimension_cap: Optional[int] = None,
    term_bound: Optional[int] = None,
) -> GwPolynomial:
    """
    b^m * sum_{K in P-perp} prod_i z_i^{mu(k_i)}, truncated at total degree cap,
    computed as sum_X prod_i p(mu*(x_i); z_i).
    """
    cap = net.m if cap is None else cap
    dimension_cap = dimension_cap or settings.gw_dimension_cap
    term_bound = term_bound or settings.gw_term_bound
    if net.s > dimension_cap:
        raise ResourceBoundError(
            f"generalized enumerator limited to s <= {dimension_cap}, net has s={net.s}"
        )
    if cap < 0:
        raise NetInputError(f"degree cap must be >= 0, got {cap}")
    row_polys = [p_poly(h, net.n, net.b).truncate(cap) for h in range(net.n + 1)]
    poly = MultiPoly(net.s, cap=cap)
    for lo in range(0, net.size, settings.chunk_size):
        hi = min(lo + settings.chunk_size, net.size)
        for mu in net.mu_star_block(lo, hi):
            poly.add_scaled_product([row_polys[h] for h in mu], 1, term_bound)
            if len(poly) > term_bound:
                raise ResourceBoundError(f"generalized enumerator exceeds {term_bound} terms")
    return GwPolynomial(poly, net.size, net.b, net.m, net.n, cap)


def _check_subset(subset: Iterable[int], s: int) -> Tuple[int, ...]:
    chosen = tuple(sorted(set(int(i) for i in subset)))
    if not chosen:
        raise NetInputError("projection needs a nonempty coordinate subset")
    if chosen[0] < 1 or chosen[-1] > s:
        raise NetInputError(f"projection subset {list(chosen)} not within 1..{s}")
    return chosen


def projection_wep(gw: GwPolynomial, subset: Iterable[int]) -> WeightEnumerator:
    """Enumerator of the projection's dual: z_i <- z on the subset, z_i <- 0 elsewhere."""
    chosen = _check_subset(subset, gw.s)
    specialized = gw.poly.specialize(chosen)
    coeffs = specialized.coeffs + (0,) * max(0, gw.cap + 1 - len(specialized.coeffs))
    return WeightEnumerator(
        IntPoly(coeffs, gw.cap), gw.scale, gw.b, gw.m, len(chosen), gw.n, gw.cap, False
    )


def worst_projection(gw: GwPolynomial, max_dims: int) -> Tuple[Tuple[int, ...], int]:
    """
    Largest exact t among projections to at most max_dims coordinates.

    For each total degree d, c_d is the smallest support size among the
    monomials of H_d; d' is the first d >= 1 with c_d <= max_dims and the
    answer is the support of a witnessing monomial with t' = m + 1 - d'.
    """
    if not 1 <= max_dims <= gw.s:
        raise NetInputError(f"projection size must lie in 1..{gw.s}, got {max_dims}")
    parts = gw.poly.total_degree_parts()
    for d in range(1, gw.cap + 1):
        monomials = parts.get(d)
        if not monomials:
            continue
        supports = sorted((len(MultiPoly.support(e)), MultiPoly.support(e)) for e in monomials)
        size, support = supports[0]
        if size <= max_dims:
            return support, gw.m + 1 - d
    raise ProjectionCapError(
        f"no monomial with support <= {max_dims} up to degree {gw.cap}; raise the cap"
    )


def find_worst_projection(
    net: DigitalNet,
    max_dims: int,
    workers: Optional[int] = None,
) -> Tuple[Tuple[int, ...], int]:
    """
    worst_projection on a generalized enumerator of cap m+1, falling back to
    a per-subset search when every qualifying projection has a trivial dual.
    """
    gw = overline_gw(net, cap=net.m + 1)
    try:
        return worst_projection(gw, max_dims)
    except ProjectionCapError as exc:
        logger.warning(f"{exc}; falling back to per-subset search")
    best: Optional[Tuple[Tuple[int, ...], int]] = None
    for size in range(1, max_dims + 1):
        for subset in combinations(range(1, net.s + 1), size):
            t = t_from_wep(truncated_wep(project(net, subset), workers=workers), net.m)
            if best is None or t > best[1]:
                best = (subset, t)
    return best
