"""
Exact arithmetic for finite abelian groups and their character groups.

A group G is a product of cyclic factors Z_{q_1} x ... x Z_{q_r}. Characters
are indexed by elements of G through the fixed pairing

    k(x) = zeta_e ** (sum_i k_i * x_i * (e / q_i))   (e = lcm of the q_i)

so every character value is carried as the exponent j of a primitive e-th
root of unity. Sums of character values are decided by cyclotomic reduction.
"""
from dataclasses import dataclass
from math import lcm, prod
from typing import Iterator, Sequence, Tuple, Union
import logging

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from errors import NetInputError

logger = logging.getLogger(__name__)

_Y = symbols("Y")


@dataclass(frozen=True)
class GroupElement:
    """An element of G as a tuple of residues (a_1, ..., a_r), 0 <= a_i < q_i."""
    residues: Tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.residues)


@dataclass(frozen=True)
class GroupSpec:
    """
    A finite abelian group given by its cyclic factor orders.

    The order b is the product of the factors and the exponent e their lcm;
    every element's order divides e.
    """
    factors: Tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(q) for q in self.factors)
        if not factors:
            raise NetInputError("a group needs at least one cyclic factor")
        if any(q < 2 for q in factors):
            raise NetInputError(f"cyclic factor orders must be >= 2, got {list(factors)}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def cyclic(cls, b: int) -> "GroupSpec":
        """The cyclic group Z_b."""
        return cls((b,))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return lcm(*self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def weights(self) -> Tuple[int, ...]:
        """The multipliers e / q_i of the fixed pairing."""
        e = self.exponent
        return tuple(e // q for q in self.factors)

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank)

    def element(self, residues: Sequence[int]) -> GroupElement:
        """Build an element, reducing each residue modulo its factor order."""
        residues = tuple(int(a) for a in residues)
        if len(residues) != self.rank:
            raise NetInputError(
                f"element {residues} has {len(residues)} residues, group has {self.rank} factors"
            )
        return GroupElement(tuple(a % q for a, q in zip(residues, self.factors)))

    def check(self, g: GroupElement) -> None:
        if len(g.residues) != self.rank:
            raise NetInputError(
                f"element {g.residues} does not match group factors {list(self.factors)}"
            )

    def phi(self, digit: int) -> GroupElement:
        """Map a digit in {0..b-1} to G by little-endian mixed-radix decomposition."""
        if not 0 <= digit < self.order:
            raise NetInputError(f"digit {digit} out of range for a group of order {self.order}")
        residues = []
        for q in self.factors:
            digit, a = divmod(digit, q)
            residues.append(a)
        return GroupElement(tuple(residues))

    def digit_of(self, g: GroupElement) -> int:
        """Inverse of phi."""
        self.check(g)
        digit = 0
        place = 1
        for a, q in zip(g.residues, self.factors):
            digit += a * place
            place *= q
        return digit

    def elements(self) -> Iterator[GroupElement]:
        """All elements of G in digit order."""
        for digit in range(self.order):
            yield self.phi(digit)

    # Vectorized forms of phi / digit_of over numpy arrays.

    def decode_digits(self, digits: np.ndarray) -> np.ndarray:
        """Digits of any shape -> residues with a trailing axis of length r."""
        digits = np.asarray(digits, dtype=np.int64)
        out = np.empty(digits.shape + (self.rank,), dtype=np.int64)
        rest = digits.copy()
        for i, q in enumerate(self.factors):
            out[..., i] = rest % q
            rest //= q
        return out

    def encode_digits(self, residues: np.ndarray) -> np.ndarray:
        """Residue arrays with a trailing axis of length r -> digits."""
        residues = np.asarray(residues, dtype=np.int64)
        places = np.cumprod((1,) + self.factors[:-1]).astype(np.int64)
        return residues @ places

    def reduce(self, residues: np.ndarray) -> np.ndarray:
        """Reduce a residue array modulo the factor orders along its last axis."""
        return np.asarray(residues, dtype=np.int64) % np.asarray(self.factors, dtype=np.int64)


@dataclass(frozen=True)
class ExponentTally:
    """
    counts[j] is the number of summands whose character value is zeta_e ** j.
    """
    counts: Tuple[int, ...]

    @classmethod
    def from_exponents(cls, exponents: Union[Sequence[int], np.ndarray], e: int) -> "ExponentTally":
        exponents = np.asarray(exponents, dtype=np.int64) % e
        counts = np.bincount(exponents.ravel(), minlength=e)
        return cls(tuple(int(c) for c in counts))

    @property
    def total(self) -> int:
        return sum(self.counts)


def group_add(g: GroupElement, h: GroupElement, spec: GroupSpec) -> GroupElement:
    """Componentwise sum modulo the factor orders."""
    spec.check(g)
    spec.check(h)
    return GroupElement(
        tuple((a + c) % q for a, c, q in zip(g.residues, h.residues, spec.factors))
    )


def group_scale(k: int, g: GroupElement, spec: GroupSpec) -> GroupElement:
    """The k-fold sum g + ... + g (k >= 0)."""
    spec.check(g)
    return GroupElement(tuple((k * a) % q for a, q in zip(g.residues, spec.factors)))


def pair_exponent(k: GroupElement, x: GroupElement, spec: GroupSpec) -> int:
    """Exponent j with k(x) = zeta_e ** j, j = sum_i k_i x_i (e / q_i) mod e."""
    spec.check(k)
    spec.check(x)
    e = spec.exponent
    return sum(a * c * w for a, c, w in zip(k.residues, x.residues, spec.weights)) % e


def _residue_array(m) -> np.ndarray:
    return np.asarray(getattr(m, "residues", m), dtype=np.int64)


def bullet_exponent(K, X, spec: GroupSpec) -> int:
    """
    Exponent of K . X = prod_{i,j} kappa_{i,j}(xi_{i,j}) for two s x n digit matrices.

    K and X are DigitMatrix values (or residue arrays of shape (s, n, r)).
    An exponent of 0 means the pairing value is 1.
    """
    k = _residue_array(K)
    x = _residue_array(X)
    if k.shape != x.shape:
        raise NetInputError(f"shape mismatch in pairing: {k.shape[:-1]} vs {x.shape[:-1]}")
    if k.shape[-1] != spec.rank:
        raise NetInputError(f"residue arity {k.shape[-1]} does not match group rank {spec.rank}")
    weights = np.asarray(spec.weights, dtype=np.int64)
    return int((k * x * weights).sum() % spec.exponent)


def pairing_exponents(characters: np.ndarray, points: np.ndarray, spec: GroupSpec) -> np.ndarray:
    """
    All pairing exponents between a block of characters and a block of points.

    characters: (B, ..., r) residues, points: (N, ..., r) residues with the same
    middle shape. Returns a (B, N) array of exponents mod e.
    """
    characters = np.asarray(characters, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64)
    if characters.shape[1:] != points.shape[1:]:
        raise NetInputError(
            f"shape mismatch in pairing: {characters.shape[1:]} vs {points.shape[1:]}"
        )
    weights = np.asarray(spec.weights, dtype=np.int64)
    left = (characters * weights).reshape(characters.shape[0], -1)
    right = points.reshape(points.shape[0], -1)
    return (left @ right.T) % spec.exponent


def char_sum_is_zero(tally: ExponentTally, e: int) -> bool:
    """
    Decide exactly whether sum_j counts[j] * zeta_e ** j vanishes.

    The integer polynomial sum_j counts[j] * Y**j is reduced modulo Y**e - 1
    and then modulo the e-th cyclotomic polynomial; the sum vanishes iff the
    remainder is zero.
    """
    folded = [0] * e
    for j, c in enumerate(tally.counts):
        folded[j % e] += c
    if not any(folded):
        return True
    if e == 1:
        return False
    poly = Poly(list(reversed(folded)), _Y)
    remainder = poly.rem(Poly(cyclotomic_poly(e, _Y), _Y))
    return remainder.is_zero
