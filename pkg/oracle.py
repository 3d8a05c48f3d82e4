"""
Brute-force validators.

Everything here enumerates directly: the dual group by testing every
character matrix against the generators, t by counting points in
elementary intervals, and t of arbitrary multisets from Walsh sums.
These are the ground truth the enumerator algorithms are checked against,
so they are kept simple and guarded by explicit resource bounds.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from abelian import ExponentTally, GroupSpec, char_sum_is_zero, pairing_exponents
from config import settings
from errors import NetInputError, ResourceBoundError
from net import DigitalNet, DigitMatrix, as_point_array, index_digits
from poly import IntPoly, inverse_p_poly

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DualSet:
    """Character-index matrices K with K . X = 1 for every point X; residues (|dual|, s, n, r)."""
    spec: GroupSpec
    s: int
    n: int
    residues: np.ndarray
    complete: bool = True

    @property
    def elements(self) -> List[DigitMatrix]:
        return [DigitMatrix(self.spec, k) for k in self.residues]

    def __len__(self) -> int:
        return self.residues.shape[0]


def _candidate_blocks(spec: GroupSpec, s: int, n: int, chunk_size: int) -> Iterator[np.ndarray]:
    """All of K_n^s in index order as residue blocks (B, s, n, r)."""
    total = spec.order ** (s * n)
    for lo in range(0, total, chunk_size):
        hi = min(lo + chunk_size, total)
        digits = index_digits(np.arange(lo, hi, dtype=np.int64), spec.order, s * n)
        yield spec.decode_digits(digits.reshape(hi - lo, s, n))


def dual_enumerate(net: DigitalNet, bound: Optional[int] = None) -> DualSet:
    """
    The dual net P-perp by exhaustive search.

    By bi-additivity of the pairing a character matrix annihilates every
    point iff it annihilates the m generators.
    """
    bound = bound or settings.dual_enumeration_bound
    candidates = net.b ** (net.s * net.n)
    if candidates > bound:
        raise ResourceBoundError(
            f"dual enumeration needs {candidates} candidates, bound is {bound}"
        )
    members = []
    for block in _candidate_blocks(net.spec, net.s, net.n, settings.chunk_size):
        if net.m:
            exponents = pairing_exponents(block, net.generators, net.spec)
            keep = ~exponents.any(axis=1)
        else:
            keep = np.ones(block.shape[0], dtype=bool)
        members.append(block[keep])
    residues = np.concatenate(members)
    logger.debug(f"dual of (b={net.b}, s={net.s}, m={net.m}, n={net.n}) has {residues.shape[0]} elements")
    return DualSet(net.spec, net.s, net.n, residues, True)


def nrt_row_weights(residues: np.ndarray) -> np.ndarray:
    """mu(k) per row, the index of the last nonzero digit (0 for the zero row); shape (..., s)."""
    nonzero = np.asarray(residues).any(axis=-1)
    n = nonzero.shape[-1]
    if n == 0:
        return np.zeros(nonzero.shape[:-1], dtype=np.int64)
    last = n - np.argmax(nonzero[..., ::-1], axis=-1)
    return np.where(nonzero.any(axis=-1), last, 0).astype(np.int64)


def nrt_weights(residues: np.ndarray) -> np.ndarray:
    """NRT weight mu(K) = sum of row weights for a block of matrices (B, s, n, r)."""
    return nrt_row_weights(residues).sum(axis=-1)


def _require_complete(dual: DualSet) -> None:
    if not dual.complete:
        raise NetInputError("an incomplete dual set cannot give exact weights")


def min_nrt(dual: DualSet, n: Optional[int] = None, s: Optional[int] = None) -> int:
    """Minimum NRT weight over the nonzero dual elements, ns + 1 for the trivial dual."""
    _require_complete(dual)
    n = dual.n if n is None else n
    s = dual.s if s is None else s
    weights = nrt_weights(dual.residues)
    nonzero = weights[weights > 0]
    if nonzero.size == 0:
        return n * s + 1
    return int(nonzero.min())


def dual_weight_enumerator(dual: DualSet) -> List[int]:
    """[N_0, ..., N_{ns}]: dual elements counted by NRT weight."""
    _require_complete(dual)
    weights = nrt_weights(dual.residues)
    counts = np.bincount(weights, minlength=dual.n * dual.s + 1)
    return [int(c) for c in counts]


def _half_histogram(net: DigitalNet, coords: Sequence[int], bound: int) -> dict:
    """{syndrome: counts by NRT weight} over every character matrix on the given coordinates."""
    width = net.n * len(coords) + 1
    if not coords:
        return {(0,) * net.m: np.ones(1, dtype=np.int64)}
    candidates = net.b ** (len(coords) * net.n)
    if candidates > bound:
        raise ResourceBoundError(
            f"split dual enumeration needs {candidates} candidates per half, bound is {bound}"
        )
    generators = net.generators[:, list(coords)]
    histogram: dict = {}
    for block in _candidate_blocks(net.spec, len(coords), net.n, settings.chunk_size):
        if net.m:
            syndromes = pairing_exponents(block, generators, net.spec)
        else:
            syndromes = np.zeros((block.shape[0], 0), dtype=np.int64)
        keyed = np.column_stack([syndromes, nrt_weights(block)])
        rows, counts = np.unique(keyed, axis=0, return_counts=True)
        for row, count in zip(rows, counts):
            key = tuple(int(v) for v in row[:-1])
            if key not in histogram:
                histogram[key] = np.zeros(width, dtype=np.int64)
            histogram[key][row[-1]] += count
    return histogram


def split_dual_weight_enumerator(net: DigitalNet, bound: Optional[int] = None) -> List[int]:
    """
    [N_0, ..., N_{ns}] of the dual by exhaustive search over two halves of
    the coordinates.

    Every character matrix on each half is paired with the generators; a
    full matrix lies in the dual iff the two halves' pairing vectors sum to
    zero mod e, and NRT weights add across the halves. The cost is about
    b^{n * ceil(s/2)} per half instead of b^{ns}.
    """
    bound = bound or settings.dual_enumeration_bound
    half = net.s // 2
    left = _half_histogram(net, range(half), bound)
    right = _half_histogram(net, range(half, net.s), bound)
    e = net.spec.exponent
    total = np.zeros(net.n * net.s + 1, dtype=np.int64)
    for syndrome, left_counts in left.items():
        match = right.get(tuple((-v) % e for v in syndrome))
        if match is None:
            continue
        joined = np.convolve(left_counts, match)
        total[: joined.size] += joined
    return [int(c) for c in total]


def inverse_q_polynomial(dual: DualSet, b: int, m: int) -> IntPoly:
    """Q(z) = sum over nonzero K of prod_i p(mu(k_i); z) for the inverse identity (n = m)."""
    _require_complete(dual)
    if dual.n != m:
        raise NetInputError(f"the inverse identity needs n = m, got n={dual.n}, m={m}")
    row_polys = [inverse_p_poly(h, m, b) for h in range(m + 1)]
    total = IntPoly()
    for row_weights in nrt_row_weights(dual.residues):
        if not row_weights.any():
            continue
        term = IntPoly.one()
        for h in row_weights:
            term = term * row_polys[int(h)]
        total = total + term
    return IntPoly(total.trimmed() or (0,))


def compositions(total: int, parts: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Compositions d_1 + ... + d_parts = total (d_i >= 0, d_i <= largest) in lexicographic order."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        edges = (-1,) + bars + (total + parts - 1,)
        split = tuple(edges[i + 1] - edges[i] - 1 for i in range(parts))
        if largest is None or max(split) <= largest:
            yield split


def _cell_counts(array: np.ndarray, depths: Sequence[int]) -> np.ndarray:
    """Point counts of the occupied elementary cells given by digit prefixes of the given depths."""
    n_points = array.shape[0]
    pieces = [array[:, i, :d].reshape(n_points, -1) for i, d in enumerate(depths) if d]
    if not pieces:
        return np.array([n_points])
    keys = np.concatenate(pieces, axis=1)
    _, counts = np.unique(keys, axis=0, return_counts=True)
    return counts


def _is_uniform(array: np.ndarray, depths: Sequence[int], b: int) -> bool:
    cells = b ** sum(depths)
    n_points = array.shape[0]
    if n_points % cells:
        return False
    counts = _cell_counts(array, depths)
    return counts.size == cells and bool((counts == n_points // cells).all())


def t_by_intervals(
    points: Union[np.ndarray, Sequence[DigitMatrix]],
    b: int,
    m: int,
    s: Optional[int] = None,
    bound: Optional[int] = None,
) -> int:
    """
    Smallest t such that every elementary interval of volume b^{t-m}
    holds exactly b^t points (counted with multiplicity).
    """
    array = as_point_array(points)
    bound = bound or settings.interval_check_bound
    n_points, s_points, n, _ = array.shape
    if s is not None and s != s_points:
        raise NetInputError(f"points have {s_points} coordinates, expected s={s}")
    if n_points != b**m:
        raise NetInputError(f"point set has {n_points} points, expected b^m = {b ** m}")
    if n < m:
        raise NetInputError(f"interval counting needs n >= m digits, got n={n}, m={m}")
    work = n_points * sum(1 for _ in compositions(m, s_points))
    if work > bound:
        raise ResourceBoundError(f"interval check needs {work} point-composition pairs, bound is {bound}")
    for t in range(m + 1):
        if all(_is_uniform(array, d, b) for d in compositions(m - t, s_points)):
            return t
    return m


def is_TMs_uniform(
    points: Union[np.ndarray, Sequence[DigitMatrix]],
    T: int,
    M: int,
    b: int,
) -> bool:
    """
    (T, M, s)-net test: every prefix projection with b^{d_1+...+d_s} <= M/T
    has all b^{d_1+...+d_s} cells equally filled.
    """
    array = as_point_array(points)
    n_points, s, n, _ = array.shape
    if n_points != M:
        raise NetInputError(f"point multiset has {n_points} points, expected M = {M}")
    if T < 1:
        raise NetInputError(f"T must be >= 1, got {T}")
    depth = 0
    while b**depth * T <= M and depth <= s * n:
        for d in compositions(depth, s, largest=n):
            if not _is_uniform(array, d, b):
                logger.debug(f"(T={T}, M={M}) uniformity fails for depths {d}")
                return False
        depth += 1
    return True


def t_by_walsh_sums(
    points: Union[np.ndarray, Sequence[DigitMatrix]],
    spec: GroupSpec,
    m: int,
    bound: Optional[int] = None,
) -> int:
    """
    Exact t of an arbitrary b^m-point multiset: m minus the largest z such
    that every nonzero K with mu(K) <= z has a vanishing character sum.
    """
    array = as_point_array(points)
    bound = bound or settings.walsh_check_bound
    n_points, s, n, _ = array.shape
    if n_points != spec.order**m:
        raise NetInputError(f"point set has {n_points} points, expected b^m = {spec.order ** m}")
    depth = min(n, m)
    candidates = spec.order ** (s * depth)
    if candidates * n_points > bound:
        raise ResourceBoundError(
            f"Walsh check needs {candidates} x {n_points} character values, bound is {bound}"
        )
    e = spec.exponent
    lowest = m + 1
    for block in _candidate_blocks(spec, s, depth, settings.chunk_size):
        padded = np.zeros((block.shape[0], s, n, spec.rank), dtype=np.int64)
        padded[:, :, :depth] = block
        weights = nrt_weights(padded)
        keep = (weights >= 1) & (weights < lowest)
        if not keep.any():
            continue
        exponents = pairing_exponents(padded[keep], array, spec)
        for weight, row in zip(weights[keep], exponents):
            if weight < lowest and not char_sum_is_zero(ExponentTally.from_exponents(row, e), e):
                lowest = int(weight)
    return m + 1 - lowest


def shift_top_corner(points: Union[np.ndarray, Sequence[DigitMatrix]], spec: GroupSpec) -> np.ndarray:
    """
    Move every point of the top cell prod [1 - 1/b, 1) onto its corner
    (1 - 1/b, ..., 1 - 1/b). mu* of every row is unchanged.
    """
    array = as_point_array(points)
    digits = spec.encode_digits(array)
    top = spec.order - 1
    in_corner = (digits[:, :, 0] == top).all(axis=1)
    shifted = digits.copy()
    shifted[in_corner] = 0
    shifted[in_corner, :, 0] = top
    logger.debug(f"shifted {int(in_corner.sum())} points onto the top corner")
    return spec.decode_digits(shifted)


def replicate(points: Union[np.ndarray, Sequence[DigitMatrix]], lam: int) -> np.ndarray:
    """The lam-fold replicated multiset."""
    if lam < 1:
        raise NetInputError(f"replication factor must be >= 1, got {lam}")
    return np.tile(as_point_array(points), (lam, 1, 1, 1))
