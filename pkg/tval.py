"""
Exact t-values of digital nets.

t_value_alg2 reads t off the degree of the inverse-identity polynomial
Q(z) = -p(0;z)^s + b^{sm-m} * sum_l prod_i (z^{mu_i} - z^{m+1}),
materializing only its top m+1 coefficients. t_value dispatches between
that path, the weight-enumerator path and the brute-force oracle, and
t_table computes whole (s, m) grids over the leading blocks of one net.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from errors import DisagreementError, InternalComputationError, NetInputError
from net import DigitalNet, chunk_ranges, map_chunks, nu_star_array
from poly import CoefficientWindow, IntPoly, inverse_p_poly, product_sum
from wep import Accumulator, accumulate_profile, finalize, t_from_wep, truncated_wep

logger = logging.getLogger(__name__)


class Method(str, Enum):
    """Which computation produced a t-value."""
    ALG1 = "alg1"
    ALG2 = "alg2"
    ORACLE = "oracle"


ALGORITHMS = ("alg1", "alg2", "both", "oracle")


@dataclass(frozen=True)
class TValueReport:
    """
    An exact t-value with the scaled coefficients it was read from.

    For alg2, window holds the coefficients of z^a for
    (s-1)(m+1) <= a <= s(m+1)-1 and deg_q = (s-1)(m+1) + t.
    For alg1, window holds the scaled N_1..N_l.
    """
    t: int
    method: Method
    deg_q: Optional[int] = None
    window: Optional[CoefficientWindow] = None


@lru_cache(maxsize=256)
def _p0_power_window(b: int, m: int, s: int) -> Tuple[int, ...]:
    """
    Coefficients of y^0..y^{m+1} of the reciprocal of p(0;z)^s, i.e. the
    coefficients of z^{s(m+1)-j} of p(0;z)^s for j = 0..m+1.
    """
    p0 = inverse_p_poly(0, m, b)
    reciprocal = IntPoly(tuple(reversed(p0.coeffs)), m + 1)
    power = reciprocal.power(s)
    return tuple(power[j] for j in range(m + 2))


def alg2_window_from_profile(mu_block: np.ndarray, m: int) -> List[int]:
    """
    Sum over a (N, s) block of mu* values of the reciprocal products
    prod_i (-1 + y^{nu*_i}) mod y^{m+2}; y^j stands for z^{s(m+1)-j}.
    """
    mu_block = np.asarray(mu_block, dtype=np.int64)
    if mu_block.ndim != 2:
        raise NetInputError(f"mu* block must be 2-dimensional, got shape {mu_block.shape}")
    sign = -1 if mu_block.shape[1] % 2 else 1
    sums = product_sum(nu_star_array(mu_block, m), m + 2)
    return [sign * c for c in sums]


def _sum_windows(parts: Sequence[List[int]], width: int) -> List[int]:
    total = [0] * width
    for part in parts:
        total = [a + c for a, c in zip(total, part)]
    return total


def _alg2_report(window_sum: Sequence[int], b: int, m: int, s: int) -> TValueReport:
    """Combine the point sum with -p(0;z)^s and read t off the window."""
    p0_window = _p0_power_window(b, m, s)
    multiplier = b ** (s * m - m)
    q_rev = [multiplier * c - p for c, p in zip(window_sum, p0_window)]
    if q_rev[0] != 0:
        raise InternalComputationError(
            f"coefficient of z^{s * (m + 1)} in Q(z) is {q_rev[0]}, expected 0"
        )
    low = (s - 1) * (m + 1)
    window = CoefficientWindow(low, tuple(q_rev[j] for j in range(m + 1, 0, -1)))
    for j in range(1, m + 2):
        if q_rev[j]:
            return TValueReport(m + 1 - j, Method.ALG2, s * (m + 1) - j, window)
    if s == 1:
        # trivial dual: Q vanishes and minNRT = ns + 1 = m + 1
        return TValueReport(0, Method.ALG2, 0, window)
    raise InternalComputationError(
        f"top window of Q(z) vanished for s={s}, m={m}; the dual must have minNRT <= m+1"
    )


def t_value_alg2(net: DigitalNet, workers: Optional[int] = None) -> TValueReport:
    """
    Exact t of a net with n = m from the top m+1 coefficients of Q(z).

    Each point contributes prod_i (z^{mu_i} - z^{m+1}) with
    mu_i = m + 1 - nu*(x_{l,i}); the window sum is accumulated over
    chunks of points in index order.
    """
    if net.n != net.m:
        raise NetInputError(f"the inverse identity needs n = m, got n={net.n}, m={net.m}")
    if net.m < 1:
        raise NetInputError("the inverse identity needs m >= 1")
    parts = map_chunks(
        lambda lo, hi: alg2_window_from_profile(net.mu_star_block(lo, hi), net.m),
        0,
        net.size,
        workers=workers,
    )
    report = _alg2_report(_sum_windows(parts, net.m + 2), net.b, net.m, net.s)
    logger.debug(f"alg2: b={net.b} s={net.s} m={net.m} -> t={report.t}, deg Q={report.deg_q}")
    return report


def t_value_alg1(net: DigitalNet, ell: Optional[int] = None, workers: Optional[int] = None) -> TValueReport:
    w = truncated_wep(net, ell, workers)
    window = CoefficientWindow(1, tuple(w.scaled[a] for a in range(1, w.valid_to + 1)))
    return TValueReport(t_from_wep(w, net.m), Method.ALG1, None, window)


def t_value_oracle(net: DigitalNet) -> TValueReport:
    """Direct elementary-interval counting over the enumerated points."""
    from oracle import t_by_intervals

    return TValueReport(t_by_intervals(net.point_block(), net.b, net.m, net.s), Method.ORACLE)


def compute_t_reports(
    net: DigitalNet,
    algorithm: str = "alg2",
    ell: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[TValueReport]:
    """
    Run the selected computation(s). "both" runs alg1 and alg2 and raises
    DisagreementError unless they agree.
    """
    if algorithm not in ALGORITHMS:
        raise NetInputError(f"unknown algorithm {algorithm!r}; choose one of {', '.join(ALGORITHMS)}")
    if algorithm == "alg1":
        return [t_value_alg1(net, ell, workers)]
    if algorithm == "alg2":
        return [t_value_alg2(net, workers)]
    if algorithm == "oracle":
        return [t_value_oracle(net)]
    first = t_value_alg1(net, ell, workers)
    second = t_value_alg2(net, workers)
    if first.t != second.t:
        raise DisagreementError(
            f"alg1 gives t={first.t} but alg2 gives t={second.t} "
            f"(b={net.b}, s={net.s}, m={net.m}); alg1 window {first.window}, alg2 window {second.window}"
        )
    return [first, second]


def t_value(
    net: DigitalNet,
    algorithm: str = "alg2",
    ell: Optional[int] = None,
    workers: Optional[int] = None,
) -> TValueReport:
    """The t-value report of the selected algorithm (alg2's report for "both")."""
    return compute_t_reports(net, algorithm, ell, workers)[-1]


def _segment_bounds(b: int, ms: Sequence[int]) -> List[Tuple[int, int, int]]:
    """(m, lo, hi) with [lo, hi) the indices first used by the m-digit block."""
    bounds = []
    previous = 0
    for m in sorted(set(ms)):
        bounds.append((m, previous, b**m))
        previous = b**m
    return bounds


def t_table(
    net: DigitalNet,
    dims: Sequence[int],
    ms: Sequence[int],
    algorithm: str = "alg2",
    workers: Optional[int] = None,
) -> Dict[Tuple[int, int], int]:
    """
    t-values of the leading blocks of one net: cell (s, m) is the net on
    the first s coordinates and first b^m points with digits cut to m,
    i.e. the net generated by the top-left m x m blocks of the matrices.

    Points are visited once in index order. alg1 keeps one accumulator per
    s with l = max(ms) and finalizes it after each b^m prefix; alg2 adds
    every chunk's window sums at each depth m' whose prefix contains it.
    """
    if algorithm not in ("alg1", "alg2", "both"):
        raise NetInputError(f"table computation supports alg1, alg2 or both, got {algorithm!r}")
    dims = sorted(set(int(s) for s in dims))
    ms = sorted(set(int(m) for m in ms))
    if not dims or not ms:
        raise NetInputError("table needs at least one dimension and one m")
    if dims[0] < 1 or dims[-1] > net.s:
        raise NetInputError(f"dimensions must lie in 1..{net.s}, got {dims[0]}..{dims[-1]}")
    if ms[0] < 1 or ms[-1] > min(net.m, net.n):
        raise NetInputError(f"m must lie in 1..{min(net.m, net.n)}, got {ms[0]}..{ms[-1]}")
    top = ms[-1]
    run_alg1 = algorithm in ("alg1", "both")
    run_alg2 = algorithm in ("alg2", "both")

    accumulators = {s: Accumulator.empty(net.b, s, top) for s in dims}
    windows = {(s, m): [0] * (m + 2) for s in dims for m in ms}
    alg1_t: Dict[Tuple[int, int], int] = {}

    for m, lo, hi in _segment_bounds(net.b, ms):
        deeper = [m2 for m2 in ms if m2 >= m]

        def chunk(lo_: int, hi_: int):
            mu = net.mu_star_block(lo_, hi_)[:, : dims[-1]]
            # first `top` digits only; deeper digits never enter any cell
            mu = np.where(mu > top, 0, mu)
            alg2_parts = {}
            if run_alg2:
                for s in dims:
                    for m2 in deeper:
                        alg2_parts[(s, m2)] = alg2_window_from_profile(mu[:, :s], m2)
            return mu, alg2_parts

        for mu, alg2_parts in map_chunks(chunk, lo, hi, workers=workers):
            if run_alg1:
                for s in dims:
                    accumulators[s] = accumulate_profile(accumulators[s], mu[:, :s])
            for key, part in alg2_parts.items():
                windows[key] = [a + c for a, c in zip(windows[key], part)]
        if run_alg1:
            for s in dims:
                alg1_t[(s, m)] = t_from_wep(finalize(accumulators[s], m, top), m)
        logger.info(f"table: finished m={m} ({hi} points)")

    if not run_alg2:
        return alg1_t
    table = {key: _alg2_report(windows[key], net.b, key[1], key[0]).t for key in windows}
    if run_alg1:
        for key, t in table.items():
            if alg1_t[key] != t:
                raise DisagreementError(
                    f"table cell s={key[0]}, m={key[1]}: alg1 gives {alg1_t[key]}, alg2 gives {t}"
                )
    return table
