"""
Sobol' direction numbers and the binary generating matrices they define.

Direction-number files use the common published layout: a header line
(`d s a m_i`), then one row per dimension d >= 2 giving the degree s of
its primitive polynomial, the encoded inner coefficients a and the
initial direction integers m_1..m_s. Dimension 1 is the identity matrix.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union
import logging

from config import settings
from errors import NetInputError
from net import DigitalNet, net_from_matrices

logger = logging.getLogger(__name__)

DEFAULT_DIRECTION_FILE = Path(__file__).parent / "fixtures" / "direction_numbers.txt"


@dataclass(frozen=True)
class DirectionEntry:
    """One dimension's primitive polynomial and initial direction integers."""
    dimension: int
    degree: int
    coefficients: int
    initial: Tuple[int, ...]

    def __post_init__(self):
        if self.dimension < 2:
            raise NetInputError(f"direction rows start at dimension 2, got {self.dimension}")
        if self.degree < 1:
            raise NetInputError(f"dimension {self.dimension}: polynomial degree must be >= 1")
        if not 0 <= self.coefficients < 2 ** (self.degree - 1):
            raise NetInputError(
                f"dimension {self.dimension}: coefficient bits {self.coefficients} do not fit degree {self.degree}"
            )
        if len(self.initial) != self.degree:
            raise NetInputError(
                f"dimension {self.dimension}: expected {self.degree} initial integers, got {len(self.initial)}"
            )
        for i, value in enumerate(self.initial, start=1):
            if value % 2 == 0:
                raise NetInputError(f"dimension {self.dimension}: m_{i} = {value} is even")
            if value >= 2**i:
                raise NetInputError(f"dimension {self.dimension}: m_{i} = {value} is not below 2^{i}")


def parse_direction_file(text: str) -> List[DirectionEntry]:
    """Parse a direction-number table; dimension 1 is implicit and not returned."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise NetInputError("direction file needs a header line (d s a m_i)")
    header = lines[0].split()
    if header[:3] != ["d", "s", "a"]:
        raise NetInputError(f"unexpected direction file header: {lines[0].strip()!r}")
    entries: List[DirectionEntry] = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            values = [int(v) for v in line.split()]
        except ValueError as exc:
            raise NetInputError(f"line {number}: {exc}") from exc
        if len(values) < 4:
            raise NetInputError(f"line {number}: expected d s a m_1 .. m_s, got {line.strip()!r}")
        d, degree, a = values[:3]
        try:
            entry = DirectionEntry(d, degree, a, tuple(values[3:]))
        except NetInputError as exc:
            raise NetInputError(f"line {number}: {exc}") from exc
        expected = len(entries) + 2
        if d != expected:
            raise NetInputError(f"line {number}: expected dimension {expected}, got {d}")
        entries.append(entry)
    logger.debug(f"parsed {len(entries)} direction rows")
    return entries


def load_direction_file(path: Optional[Union[str, Path]] = None) -> List[DirectionEntry]:
    path = Path(path) if path else DEFAULT_DIRECTION_FILE
    try:
        text = path.read_text()
    except OSError as exc:
        raise NetInputError(f"cannot read direction file {path}: {exc}") from exc
    return parse_direction_file(text)


def direction_integers(entry: DirectionEntry, m: int) -> List[int]:
    """
    m_1..m_m for one dimension, m_k < 2^k, extended by

        m_k = 2 a_1 m_{k-1} ^ 4 a_2 m_{k-2} ^ ... ^ 2^{s-1} a_{s-1} m_{k-s+1} ^ 2^s m_{k-s} ^ m_{k-s}
    """
    s = entry.degree
    values = list(entry.initial[:m])
    for k in range(s, m):
        value = values[k - s] ^ (values[k - s] << s)
        for i in range(1, s):
            if (entry.coefficients >> (s - 1 - i)) & 1:
                value ^= values[k - i] << i
        values.append(value)
    return values


def _matrix_from_integers(values: Sequence[int], m: int) -> List[List[int]]:
    """Column k holds the bits of m_k, most significant bit in row 1."""
    return [
        [(values[k - 1] >> (k - j)) & 1 if j <= k else 0 for k in range(1, m + 1)]
        for j in range(1, m + 1)
    ]


def build_matrices(entries: Sequence[DirectionEntry], s: int, m: int) -> List[List[List[int]]]:
    """Generating matrices C_1..C_s (each m x m over Z_2) of the first s Sobol' dimensions."""
    if s < 1:
        raise NetInputError(f"need at least one dimension, got s={s}")
    if s > len(entries) + 1:
        raise NetInputError(f"direction table covers {len(entries) + 1} dimensions, asked for {s}")
    if not 1 <= m <= settings.max_sobol_bits:
        raise NetInputError(f"m must lie in 1..{settings.max_sobol_bits}, got {m}")
    identity = [[int(j == k) for k in range(m)] for j in range(m)]
    matrices = [identity]
    for entry in entries[: s - 1]:
        matrices.append(_matrix_from_integers(direction_integers(entry, m), m))
    return matrices


def sobol_net(entries: Sequence[DirectionEntry], s: int, m: int) -> DigitalNet:
    """The 2^m-point digital net of the first s Sobol' dimensions (n = m)."""
    return net_from_matrices(2, build_matrices(entries, s, m))
