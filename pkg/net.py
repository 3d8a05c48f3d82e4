"""
Digital net data model.

A net over a finite abelian group G is given by m generator matrices
X_1..X_m in M_{s,n}(G); point l = sum_r l_r X_{r+1} for the base-b digits
l_r of the index (little-endian). Points are kept as exact residue arrays;
coordinates are never formed as floating-point numbers.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union
import logging

import numpy as np

from abelian import GroupElement, GroupSpec
from config import settings
from errors import NetInputError

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Provenance(Enum):
    """How the generators of a net were supplied."""
    MATRICES = "matrices"
    EXPLICIT = "explicit"


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DigitMatrix:
    """One point (or character index) as an s x n matrix over G, stored as residues (s, n, r)."""
    spec: GroupSpec
    residues: np.ndarray

    def __post_init__(self):
        residues = np.array(self.residues, dtype=np.int64)
        if residues.ndim != 3 or residues.shape[-1] != self.spec.rank:
            raise NetInputError(
                f"digit matrix residues must have shape (s, n, {self.spec.rank}), got {residues.shape}"
            )
        object.__setattr__(self, "residues", _frozen(self.spec.reduce(residues)))

    @classmethod
    def from_digits(cls, spec: GroupSpec, digits: Sequence[Sequence[int]]) -> "DigitMatrix":
        """Build from an s x n matrix of digits in {0..b-1} (mapped through phi)."""
        digits = np.asarray(digits, dtype=np.int64)
        if digits.ndim != 2:
            raise NetInputError(f"digit matrix must be 2-dimensional, got shape {digits.shape}")
        if digits.size and (digits.min() < 0 or digits.max() >= spec.order):
            raise NetInputError(f"digits must lie in 0..{spec.order - 1}")
        return cls(spec, spec.decode_digits(digits))

    @classmethod
    def zero(cls, spec: GroupSpec, s: int, n: int) -> "DigitMatrix":
        return cls(spec, np.zeros((s, n, spec.rank), dtype=np.int64))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.residues.shape[0], self.residues.shape[1]

    def entry(self, i: int, j: int) -> GroupElement:
        """Entry in row i, digit j (0-based)."""
        return GroupElement(tuple(int(a) for a in self.residues[i, j]))

    def row(self, i: int) -> Tuple[GroupElement, ...]:
        return tuple(self.entry(i, j) for j in range(self.shape[1]))

    def digits(self) -> np.ndarray:
        return self.spec.encode_digits(self.residues)

    def to_lists(self) -> List[List[int]]:
        return self.digits().tolist()

    def is_zero(self) -> bool:
        return not self.residues.any()

    def __add__(self, other: "DigitMatrix") -> "DigitMatrix":
        if self.shape != other.shape:
            raise NetInputError(f"shape mismatch: {self.shape} vs {other.shape}")
        return DigitMatrix(self.spec, self.residues + other.residues)

    def __eq__(self, other) -> bool:
        if isinstance(other, DigitMatrix):
            return self.spec == other.spec and np.array_equal(self.residues, other.residues)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.residues.shape, self.residues.tobytes()))

    def __repr__(self) -> str:
        return f"DigitMatrix({self.to_lists()})"


@dataclass(frozen=True)
class MuProfile:
    """mu*(x_i) per coordinate row and the derived nu*(x_i) in {1..m+1}."""
    nu: Tuple[int, ...]
    mu_star: Tuple[int, ...]

    @classmethod
    def from_mu_star(cls, mu_star: Sequence[int], m: int) -> "MuProfile":
        mu_star = tuple(int(v) for v in mu_star)
        return cls(tuple(v if 0 < v <= m else m + 1 for v in mu_star), mu_star)


def mu_star(row: Sequence[Union[GroupElement, int]]) -> int:
    """Index (1-based) of the first nonzero digit of a row, 0 for the zero row."""
    for j, digit in enumerate(row, start=1):
        nonzero = not digit.is_zero() if isinstance(digit, GroupElement) else int(digit) != 0
        if nonzero:
            return j
    return 0


def mu_star_array(residues: np.ndarray) -> np.ndarray:
    """Vectorized mu* over residue arrays of shape (..., n, r) -> (...)."""
    nonzero = np.asarray(residues).any(axis=-1)
    if nonzero.shape[-1] == 0:
        return np.zeros(nonzero.shape[:-1], dtype=np.int64)
    first = np.argmax(nonzero, axis=-1) + 1
    return np.where(nonzero.any(axis=-1), first, 0).astype(np.int64)


def nu_star_array(mu: np.ndarray, depth: int) -> np.ndarray:
    """nu* for a truncation depth: mu* if 0 < mu* <= depth, else depth + 1."""
    mu = np.asarray(mu, dtype=np.int64)
    return np.where((mu > 0) & (mu <= depth), mu, depth + 1)


def index_digits(indices: np.ndarray, b: int, m: int) -> np.ndarray:
    """Little-endian base-b digits l_0..l_{m-1} of each index, shape (N, m)."""
    indices = np.asarray(indices, dtype=np.int64)
    places = b ** np.arange(m, dtype=np.int64)
    return (indices[:, None] // places) % b


def digit_add(l: int, l2: int, b: int, m: int) -> int:
    """Digitwise addition mod b of two indices (the index digit group)."""
    total = 0
    place = 1
    for _ in range(m):
        total += ((l // place + l2 // place) % b) * place
        place *= b
    return total


@dataclass(frozen=True, eq=False)
class DigitalNet:
    """
    A digital net: b^m points in M_{s,n}(G) generated by m matrices.

    generators has shape (m, s, n, r); generators[i] is X_{i+1}, the image
    of the i-th unit digit vector.
    """
    spec: GroupSpec
    s: int
    m: int
    n: int
    generators: np.ndarray
    provenance: Provenance = Provenance.EXPLICIT

    def __post_init__(self):
        if self.s < 1 or self.m < 0 or self.n < 1:
            raise NetInputError(f"invalid net parameters s={self.s}, m={self.m}, n={self.n}")
        generators = np.array(self.generators, dtype=np.int64)
        expected = (self.m, self.s, self.n, self.spec.rank)
        if generators.shape != expected:
            raise NetInputError(f"generators must have shape {expected}, got {generators.shape}")
        object.__setattr__(self, "generators", _frozen(self.spec.reduce(generators)))

    @property
    def b(self) -> int:
        return self.spec.order

    @property
    def size(self) -> int:
        return self.b**self.m

    def generator(self, i: int) -> DigitMatrix:
        """X_i for 1 <= i <= m."""
        return DigitMatrix(self.spec, self.generators[i - 1])

    def point_block(self, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
        """Residues of points lo..hi-1 as an array of shape (hi - lo, s, n, r)."""
        hi = self.size if hi is None else hi
        if not 0 <= lo <= hi <= self.size:
            raise NetInputError(f"point range [{lo}, {hi}) outside [0, {self.size})")
        digits = index_digits(np.arange(lo, hi, dtype=np.int64), self.b, self.m)
        flat = digits @ self.generators.reshape(self.m, self.s * self.n * self.spec.rank)
        block = flat.reshape((hi - lo, self.s, self.n, self.spec.rank))
        return self.spec.reduce(block)

    def point(self, l: int) -> DigitMatrix:
        return DigitMatrix(self.spec, self.point_block(l, l + 1)[0])

    def mu_star_block(self, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
        """mu* of every coordinate row of points lo..hi-1, shape (hi - lo, s)."""
        return mu_star_array(self.point_block(lo, hi))

    def profile(self, l: int) -> MuProfile:
        return MuProfile.from_mu_star(self.mu_star_block(l, l + 1)[0], self.m)


def net_from_matrices(
    b: int,
    matrices: Sequence[Sequence[Sequence[int]]],
    spec: Optional[GroupSpec] = None,
) -> DigitalNet:
    """
    Build a net from s generating matrices C_1..C_s (each n x m, entries in 0..b-1).

    Row j of X_i is the transpose of column i of C_j; digits are mapped into G
    through phi (G defaults to the cyclic group Z_b).
    """
    spec = spec or GroupSpec.cyclic(b)
    if spec.order != b:
        raise NetInputError(f"group order {spec.order} does not match base {b}")
    try:
        stacked = np.asarray(matrices, dtype=np.int64)
    except ValueError as exc:
        raise NetInputError(f"generating matrices have inconsistent shapes: {exc}") from exc
    if stacked.ndim != 3 or stacked.shape[0] < 1:
        raise NetInputError(f"expected s matrices of shape n x m, got array of shape {stacked.shape}")
    if stacked.size and (stacked.min() < 0 or stacked.max() >= b):
        raise NetInputError(f"matrix entries must lie in 0..{b - 1}")
    s, n, m = stacked.shape
    digits = stacked.transpose(2, 0, 1)  # (m, s, n)
    logger.debug(f"net from matrices: b={b}, s={s}, m={m}, n={n}")
    return DigitalNet(spec, s, m, n, spec.decode_digits(digits), Provenance.MATRICES)


def net_from_generators(
    spec: GroupSpec,
    generators: Sequence[Union[DigitMatrix, Sequence[Sequence[int]]]],
) -> DigitalNet:
    """Build a net from explicit generator matrices X_1..X_m (s x n digits or DigitMatrix)."""
    if not generators:
        raise NetInputError("an explicit-generator net needs at least one generator")
    residues = []
    for g in generators:
        if isinstance(g, DigitMatrix):
            residues.append(g.residues)
        else:
            residues.append(DigitMatrix.from_digits(spec, g).residues)
    shapes = {r.shape for r in residues}
    if len(shapes) != 1:
        raise NetInputError(f"generators have inconsistent shapes: {sorted(shapes)}")
    s, n, _ = residues[0].shape
    return DigitalNet(spec, s, len(residues), n, np.stack(residues), Provenance.EXPLICIT)


def enumerate_points(
    net: DigitalNet,
    lo: int = 0,
    hi: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> Iterator[Tuple[int, DigitMatrix]]:
    """Yield (l, X_l) for l in [lo, hi) in increasing order."""
    hi = net.size if hi is None else hi
    chunk_size = chunk_size or settings.chunk_size
    for start in range(lo, hi, chunk_size):
        stop = min(start + chunk_size, hi)
        block = net.point_block(start, stop)
        for offset, residues in enumerate(block):
            yield start + offset, DigitMatrix(net.spec, residues)


def project(net: DigitalNet, subset: Iterable[int]) -> DigitalNet:
    """Restrict the net to the coordinates in subset (1-based indices)."""
    chosen = sorted(set(int(i) for i in subset))
    if not chosen:
        raise NetInputError("projection needs a nonempty coordinate subset")
    if chosen[0] < 1 or chosen[-1] > net.s:
        raise NetInputError(f"projection subset {chosen} not within 1..{net.s}")
    rows = [i - 1 for i in chosen]
    return DigitalNet(net.spec, len(rows), net.m, net.n, net.generators[:, rows], net.provenance)


def as_point_array(points: Union[np.ndarray, Sequence[DigitMatrix]]) -> np.ndarray:
    """Residue array (N, s, n, r) for a list of DigitMatrix values or an existing array."""
    if isinstance(points, np.ndarray):
        if points.ndim != 4:
            raise NetInputError(f"point array must have shape (N, s, n, r), got {points.shape}")
        return points.astype(np.int64, copy=False)
    points = list(points)
    if not points:
        raise NetInputError("point set is empty")
    shapes = {p.residues.shape for p in points}
    if len(shapes) != 1:
        raise NetInputError(f"points have inconsistent shapes: {sorted(shapes)}")
    return np.stack([p.residues for p in points])


def points_from_digits(spec: GroupSpec, digit_matrices: Sequence[Sequence[Sequence[int]]]) -> np.ndarray:
    """Residue array for a list of s x n digit matrices (point-set files)."""
    digits = np.asarray(digit_matrices, dtype=np.int64)
    if digits.ndim != 3:
        raise NetInputError(f"point list must be a list of s x n matrices, got shape {digits.shape}")
    if digits.size and (digits.min() < 0 or digits.max() >= spec.order):
        raise NetInputError(f"point digits must lie in 0..{spec.order - 1}")
    return spec.decode_digits(digits)


def chunk_ranges(start: int, stop: int, chunk_size: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + chunk_size, stop)) for lo in range(start, stop, chunk_size)]


def map_chunks(
    fn: Callable[[int, int], T],
    start: int,
    stop: int,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[T]:
    """
    Apply fn(lo, hi) to consecutive chunks of [start, stop).

    Results come back in chunk order for any worker count.
    """
    chunk_size = chunk_size or settings.chunk_size
    workers = workers or settings.workers
    ranges = chunk_ranges(start, stop, chunk_size)
    if workers <= 1 or len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    logger.debug(f"mapping {len(ranges)} chunks over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda bounds: fn(*bounds), ranges))
