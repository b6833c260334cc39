"""Bit-packed GF(2) vectors and matrices.

A vector of length n is stored as a Python int whose bit ``i - 1`` holds
coordinate ``i``; coordinates are 1-based everywhere outside this module.
Span enumeration walks the reflected Gray code, so consecutive elements differ
by exactly one basis row. For up to 64 coordinates the same order is also
available in numpy blocks, which is what the weight scans over 2^20 codewords
use.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, EnumerationBudgetError

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_BUDGET = 28
WORD_BITS = 64
SPAN_CHUNK_ROWS = 16


# =============================================================================
# Packed-int helpers
# =============================================================================


def mask_from_support(support: Iterable[int]) -> int:
    """Pack 1-based coordinates into an int."""
    mask = 0
    for coordinate in support:
        if coordinate < 1:
            raise DimensionError(f"Coordinates are 1-based, got {coordinate}")
        mask |= 1 << (coordinate - 1)
    return mask


def support_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based coordinates of the set bits."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def _check_fits(bits: int, length: int) -> None:
    if bits < 0 or bits >> length:
        raise DimensionError(f"Bits set beyond length {length}")


# =============================================================================
# Vectors
# =============================================================================


@dataclass(frozen=True, slots=True)
class BitVector:
    """A vector of F_2^length."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length <= 0:
            raise DimensionError(f"Length must be positive, got {self.length}")
        _check_fits(self.bits, self.length)

    @classmethod
    def zero(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls(length, (1 << length) - 1)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        return cls(length, mask_from_support(support))

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Parse ``"1100"``; the first character is coordinate 1."""
        text = "".join(text.split())
        if not text or set(text) - {"0", "1"}:
            raise DimensionError(f"Not a binary string: {text!r}")
        bits = 0
        for index, char in enumerate(text):
            if char == "1":
                bits |= 1 << index
        return cls(len(text), bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return support_of(self.bits)

    def __getitem__(self, coordinate: int) -> int:
        if not 1 <= coordinate <= self.length:
            raise IndexError(f"Coordinate {coordinate} outside 1..{self.length}")
        return (self.bits >> (coordinate - 1)) & 1

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: BitVector) -> BitVector:
        return add(self, other)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))


def add(a: BitVector, b: BitVector) -> BitVector:
    """Coordinatewise sum over GF(2)."""
    if a.length != b.length:
        raise DimensionError(f"Length mismatch: {a.length} vs {b.length}")
    return BitVector(a.length, a.bits ^ b.bits)


def dot(a: BitVector, b: BitVector) -> int:
    """Standard inner product: parity of the support overlap."""
    if a.length != b.length:
        raise DimensionError(f"Length mismatch: {a.length} vs {b.length}")
    return (a.bits & b.bits).bit_count() & 1


# =============================================================================
# Matrices
# =============================================================================


@dataclass(frozen=True, slots=True)
class BitMatrix:
    """Rows of packed ints sharing ``ncols`` columns."""

    ncols: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        if self.ncols <= 0:
            raise DimensionError(f"Column count must be positive, got {self.ncols}")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for row in self.rows:
            _check_fits(row, self.ncols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], ncols: int | None = None) -> BitMatrix:
        if ncols is None:
            if not vectors:
                raise DimensionError("Cannot infer column count from an empty row list")
            ncols = vectors[0].length
        for v in vectors:
            if v.length != ncols:
                raise DimensionError(f"Row of length {v.length} in a {ncols}-column matrix")
        return cls(ncols, tuple(v.bits for v in vectors))

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> BitMatrix:
        return cls.from_vectors([BitVector.from_string(line) for line in lines])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row(self, index: int) -> BitVector:
        return BitVector(self.ncols, self.rows[index])

    def vectors(self) -> list[BitVector]:
        return [BitVector(self.ncols, r) for r in self.rows]

    def to_strings(self) -> list[str]:
        return [str(v) for v in self.vectors()]

    def __len__(self) -> int:
        return len(self.rows)


def rref(matrix: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row echelon form, pivoting on the lowest coordinate first.

    Returns the nonzero reduced rows, the rank, and the 1-based pivot columns.
    """
    rows = [r for r in matrix.rows if r]
    pivots: list[int] = []
    rank = 0
    for col in range(matrix.ncols):
        if rank == len(rows):
            break
        bit = 1 << col
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= lead
        pivots.append(col + 1)
        rank += 1
    return BitMatrix(matrix.ncols, tuple(rows[:rank])), rank, pivots


def kernel(matrix: BitMatrix) -> BitMatrix:
    """Basis (in RREF) of the right null space {x : M x = 0}."""
    reduced, _, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(1, matrix.ncols + 1):
        if free in pivot_set:
            continue
        vec = 1 << (free - 1)
        for row, pivot in zip(reduced.rows, pivots):
            if (row >> (free - 1)) & 1:
                vec |= 1 << (pivot - 1)
        basis.append(vec)
    return rref(BitMatrix(matrix.ncols, tuple(basis)))[0]


def reduce_against(vector: int, basis: BitMatrix, pivots: Sequence[int]) -> int:
    """Residue of ``vector`` modulo an RREF basis; zero iff it lies in the span."""
    for row, pivot in zip(basis.rows, pivots):
        if (vector >> (pivot - 1)) & 1:
            vector ^= row
    return vector


# =============================================================================
# Span enumeration
# =============================================================================


def check_budget(dimension: int, budget: int | None) -> None:
    if budget is not None and dimension > budget:
        raise EnumerationBudgetError(
            f"Span of dimension {dimension} exceeds enumeration budget 2^{budget}"
        )


def iter_span(basis: BitMatrix, budget: int | None = DEFAULT_ENUMERATION_BUDGET) -> Iterator[int]:
    """Yield every span element as a packed int in reflected Gray-code order.

    Element ``m`` is the sum of the basis rows selected by ``m ^ (m >> 1)``;
    step ``m`` toggles the row indexed by the lowest set bit of ``m``.
    """
    rows = basis.rows
    check_budget(len(rows), budget)
    current = 0
    yield current
    for m in range(1, 1 << len(rows)):
        current ^= rows[(m & -m).bit_length() - 1]
        yield current


def enumerate_span(
    basis: BitMatrix,
    visitor: Callable[[BitVector], object],
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> None:
    """Call ``visitor`` once for each of the 2^k span elements, in Gray order."""
    n = basis.ncols
    for bits in iter_span(basis, budget):
        visitor(BitVector(n, bits))


def gray_block(rows: Sequence[int]) -> np.ndarray:
    """All sums of ``rows`` as uint64, in the same Gray order as iter_span."""
    block = np.zeros(1, dtype=np.uint64)
    for row in rows:
        block = np.concatenate((block, block[::-1] ^ np.uint64(row)))
    return block


def span_chunks(
    basis: BitMatrix,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
    chunk_rows: int = SPAN_CHUNK_ROWS,
) -> Iterator[np.ndarray]:
    """Yield the span as uint64 arrays whose concatenation is the Gray sequence.

    The low ``chunk_rows`` rows form a fixed block; chunk ``h`` is that block,
    reversed when ``h`` is odd, offset by the Gray-code sum of the high rows.
    """
    if basis.ncols > WORD_BITS:
        raise DimensionError(
            f"Vectorized enumeration supports at most {WORD_BITS} coordinates, got {basis.ncols}"
        )
    rows = basis.rows
    check_budget(len(rows), budget)
    low, high = rows[:chunk_rows], rows[chunk_rows:]
    block = gray_block(low)
    reversed_block = block[::-1]
    offset = 0
    for h in range(1 << len(high)):
        if h:
            offset ^= high[(h & -h).bit_length() - 1]
        base = reversed_block if h & 1 else block
        yield base ^ np.uint64(offset) if offset else base.copy()
