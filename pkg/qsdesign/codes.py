"""Binary linear codes and the invariants used by the search.

Every code is canonicalized to its RREF basis on construction, so two codes
are equal exactly when their bases are equal.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    CodeParseError,
    DimensionError,
    NoSelfDualCodeError,
    PermutationError,
    UndefinedMinimumError,
)
from .f2core import (
    DEFAULT_ENUMERATION_BUDGET,
    BitMatrix,
    BitVector,
    kernel,
    mask_from_support,
    reduce_against,
    rref,
    span_chunks,
)

logger = logging.getLogger(__name__)

RowLike = int | str | BitVector


@dataclass(frozen=True)
class LinearCode:
    """A k-dimensional subspace of F_2^length."""

    length: int
    basis: BitMatrix
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.basis.ncols != self.length:
            raise DimensionError(
                f"Basis has {self.basis.ncols} columns for a code of length {self.length}"
            )
        reduced, _, pivots = rref(self.basis)
        object.__setattr__(self, "basis", reduced)
        object.__setattr__(self, "pivots", tuple(pivots))

    @classmethod
    def from_rows(cls, length: int, rows: Iterable[RowLike]) -> LinearCode:
        packed = []
        for row in rows:
            if isinstance(row, BitVector):
                if row.length != length:
                    raise DimensionError(f"Row of length {row.length} in a length-{length} code")
                packed.append(row.bits)
            elif isinstance(row, str):
                vec = BitVector.from_string(row)
                if vec.length != length:
                    raise DimensionError(f"Row of length {vec.length} in a length-{length} code")
                packed.append(vec.bits)
            else:
                packed.append(int(row))
        return cls(length, BitMatrix(length, tuple(packed)))

    @classmethod
    def zero(cls, length: int) -> LinearCode:
        return cls(length, BitMatrix(length))

    @classmethod
    def full(cls, length: int) -> LinearCode:
        return cls(length, BitMatrix.identity(length))

    @property
    def dimension(self) -> int:
        return self.basis.nrows

    @property
    def rows(self) -> tuple[int, ...]:
        return self.basis.rows

    def contains(self, vector: RowLike) -> bool:
        if isinstance(vector, str):
            vector = BitVector.from_string(vector)
        bits = vector.bits if isinstance(vector, BitVector) else int(vector)
        if bits >> self.length:
            return False
        return reduce_against(bits, self.basis, self.pivots) == 0

    def __contains__(self, vector: RowLike) -> bool:
        return self.contains(vector)

    def __repr__(self) -> str:
        return f"<LinearCode [{self.length},{self.dimension}]>"


# =============================================================================
# Structure
# =============================================================================


def dual(code: LinearCode) -> LinearCode:
    """C^⊥, the kernel of the generator matrix."""
    return LinearCode(code.length, kernel(code.basis))


def is_self_orthogonal(code: LinearCode) -> bool:
    rows = code.rows
    for i, a in enumerate(rows):
        for b in rows[i:]:
            if (a & b).bit_count() & 1:
                return False
    return True


def is_doubly_even(code: LinearCode) -> bool:
    """Basis weights ≡ 0 (mod 4) plus pairwise orthogonality suffice in characteristic 2."""
    if any(r.bit_count() % 4 for r in code.rows):
        return False
    return is_self_orthogonal(code)


def is_self_dual(code: LinearCode) -> bool:
    return 2 * code.dimension == code.length and is_self_orthogonal(code)


def extremal_bound(n: int) -> int:
    """Upper bound 4·floor(n/24) + 4 on the minimum weight of a doubly even self-dual code."""
    if n <= 0 or n % 8:
        raise NoSelfDualCodeError(f"No doubly even self-dual code of length {n}")
    return 4 * (n // 24) + 4


# =============================================================================
# Enumeration-backed invariants
# =============================================================================


def codeword_chunks(
    code: LinearCode, budget: int | None = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[np.ndarray]:
    """All codewords as uint64 blocks in Gray order."""
    return span_chunks(code.basis, budget)


def weight_enumerator(
    code: LinearCode, budget: int | None = DEFAULT_ENUMERATION_BUDGET
) -> list[int]:
    """A[w] = number of codewords of weight w, for w = 0..n."""
    counts = np.zeros(code.length + 1, dtype=np.int64)
    for chunk in codeword_chunks(code, budget):
        counts += np.bincount(np.bitwise_count(chunk), minlength=code.length + 1)
    return [int(c) for c in counts]


def minimum_weight(code: LinearCode, budget: int | None = DEFAULT_ENUMERATION_BUDGET) -> int:
    """Smallest nonzero weight, by full enumeration."""
    if code.dimension == 0:
        raise UndefinedMinimumError("The zero code has no minimum weight")
    best = code.length
    for chunk in codeword_chunks(code, budget):
        weights = np.bitwise_count(chunk)
        nonzero = weights[weights > 0]
        if nonzero.size:
            best = min(best, int(nonzero.min()))
    return best


def codeword_masks_of_weight(
    code: LinearCode,
    w: int,
    required_support: Iterable[int] = (),
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> list[int]:
    """Packed codewords of weight ``w`` whose support covers ``required_support``, sorted."""
    required = np.uint64(mask_from_support(required_support))
    found = []
    for chunk in codeword_chunks(code, budget):
        hits = chunk[(np.bitwise_count(chunk) == w) & ((chunk & required) == required)]
        if hits.size:
            found.append(hits)
    if not found:
        return []
    return [int(x) for x in np.sort(np.concatenate(found))]


def codewords_of_weight(
    code: LinearCode,
    w: int,
    required_support: Iterable[int] = (),
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> list[BitVector]:
    return [
        BitVector(code.length, bits)
        for bits in codeword_masks_of_weight(code, w, required_support, budget)
    ]


# =============================================================================
# Coordinate permutations
# =============================================================================


def _as_permutation(n: int, perm: Sequence[int] | Mapping[int, int]) -> list[int]:
    """Normalize to a list p with p[i-1] = π(i)."""
    if isinstance(perm, Mapping):
        images = [perm.get(i, i) for i in range(1, n + 1)]
    else:
        images = [int(p) for p in perm]
    if len(images) != n or sorted(images) != list(range(1, n + 1)):
        raise PermutationError(f"Not a permutation of 1..{n}: {images}")
    return images


def permute_mask(bits: int, images: Sequence[int]) -> int:
    out = 0
    for index, image in enumerate(images):
        if (bits >> index) & 1:
            out |= 1 << (image - 1)
    return out


def apply_permutation(code: LinearCode, perm: Sequence[int] | Mapping[int, int]) -> LinearCode:
    """Move coordinate i to π(i)."""
    images = _as_permutation(code.length, perm)
    return LinearCode(
        code.length, BitMatrix(code.length, tuple(permute_mask(r, images) for r in code.rows))
    )


def permute_points(points: Iterable[int], perm: Sequence[int] | Mapping[int, int], n: int) -> tuple[int, ...]:
    images = _as_permutation(n, perm)
    return tuple(sorted(images[p - 1] for p in points))


# =============================================================================
# Generator matrix text format
# =============================================================================

_HEADER = re.compile(r"^(\d+)\s+(\d+)$")


def content_lines(text: str) -> Iterator[tuple[int, str]]:
    """Numbered non-empty lines with `#` comments stripped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_generator_matrix(text: str, source: str | None = None) -> LinearCode:
    """Parse ``"n k"`` followed by k rows of n binary characters.

    Whitespace inside rows is ignored; ``#`` starts a comment.
    """
    lines = list(content_lines(text))
    if not lines:
        raise CodeParseError("Missing 'n k' header", line=1, source=source)

    header_line, header = lines[0]
    match = _HEADER.match(header)
    if not match:
        raise CodeParseError(f"Malformed header {header!r}, expected 'n k'", header_line, source)
    n, k = int(match.group(1)), int(match.group(2))
    if n <= 0:
        raise CodeParseError("Length must be positive", header_line, source)
    if k > n:
        raise CodeParseError(f"Dimension {k} exceeds length {n}", header_line, source)

    rows = []
    for number, line in lines[1:]:
        bits = "".join(line.split())
        if set(bits) - {"0", "1"}:
            raise CodeParseError(f"Non-binary character in row {bits!r}", number, source)
        if len(bits) != n:
            raise CodeParseError(f"Row has {len(bits)} entries, expected {n}", number, source)
        rows.append(BitVector.from_string(bits).bits)
    if len(rows) != k:
        last = lines[-1][0]
        raise CodeParseError(f"Header promises {k} rows, found {len(rows)}", last, source)

    code = LinearCode(n, BitMatrix(n, tuple(rows)))
    if code.dimension != k:
        raise CodeParseError(
            f"Rows are linearly dependent (rank {code.dimension} < {k})", header_line, source
        )
    return code


def format_generator_matrix(code: LinearCode) -> str:
    lines = [f"{code.length} {code.dimension}"]
    lines.extend(code.basis.to_strings())
    return "\n".join(lines) + "\n"

