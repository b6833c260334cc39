"""Incidence structures, 2-design arithmetic and the bordered codes C1, C2, C3."""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .codes import LinearCode, content_lines
from .errors import (
    DegenerateDesignError,
    DesignParseError,
    InfeasibleParametersError,
    PreconditionError,
)
from .f2core import BitMatrix, mask_from_support

logger = logging.getLogger(__name__)

SUPPORTED_BORDERS = (0, 1, 3)

_HEADER = re.compile(r"^(\d+)\s+(\d+)$")


@dataclass(frozen=True)
class DesignParams:
    """Parameters of a 2-(v,k,λ) design with derived b and r."""

    v: int
    k: int
    lam: int
    b: int
    r: int
    t: int = 2

    @property
    def dual_bound(self) -> Fraction:
        """(r+λ)/λ = (v-1)/(k-1) + 1."""
        return Fraction(self.r + self.lam, self.lam)

    @property
    def bordered_dual_bound(self) -> Fraction:
        """(b+r)/r = v/k + 1."""
        return Fraction(self.b + self.r, self.r)

    def __str__(self) -> str:
        return f"2-({self.v},{self.k},{self.lam})"


def params_from(v: int, k: int, lam: int) -> DesignParams:
    """Derive r = λ(v-1)/(k-1) and b = vr/k, both exact."""
    if not (2 <= k < v) or lam < 1:
        raise InfeasibleParametersError(f"Need 2 <= k < v and λ >= 1, got v={v} k={k} λ={lam}")
    r, rem = divmod(lam * (v - 1), k - 1)
    if rem:
        raise InfeasibleParametersError(f"r = {lam}·{v - 1}/{k - 1} is not an integer")
    b, rem = divmod(v * r, k)
    if rem:
        raise InfeasibleParametersError(f"b = {v}·{r}/{k} is not an integer")
    return DesignParams(v=v, k=k, lam=lam, b=b, r=r)


@dataclass(frozen=True)
class IncidenceStructure:
    """Points 1..v and an ordered multiset of equal-size blocks."""

    v: int
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.v <= 0:
            raise PreconditionError(f"Need at least one point, got v={self.v}")
        normalized = tuple(tuple(sorted(block)) for block in self.blocks)
        sizes = {len(block) for block in normalized}
        if len(sizes) > 1:
            raise PreconditionError(f"Blocks of unequal sizes {sorted(sizes)}")
        for block in normalized:
            if len(set(block)) != len(block):
                raise PreconditionError(f"Repeated point in block {block}")
            if block and not (1 <= block[0] and block[-1] <= self.v):
                raise PreconditionError(f"Block {block} leaves the point set 1..{self.v}")
        object.__setattr__(self, "blocks", normalized)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int | None:
        return len(self.blocks[0]) if self.blocks else None

    @cached_property
    def block_masks(self) -> tuple[int, ...]:
        return tuple(mask_from_support(block) for block in self.blocks)

    def replication_numbers(self) -> list[int]:
        """Blocks through each point 1..v."""
        counts = Counter(p for block in self.blocks for p in block)
        return [counts.get(p, 0) for p in range(1, self.v + 1)]


# =============================================================================
# Builders
# =============================================================================


FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def fano_plane() -> IncidenceStructure:
    return IncidenceStructure(7, FANO_LINES)


def union_of_copies(design: IncidenceStructure, copies: int) -> IncidenceStructure:
    """``copies`` identical copies of every block, copy by copy."""
    if copies < 1:
        raise PreconditionError("Need at least one copy")
    return IncidenceStructure(design.v, design.blocks * copies)


# =============================================================================
# Properties
# =============================================================================


def pair_counts(design: IncidenceStructure) -> Counter:
    return Counter(pair for block in design.blocks for pair in combinations(block, 2))


def is_2design(design: IncidenceStructure, lam: int) -> bool:
    """Every pair of points lies in exactly λ blocks."""
    counts = pair_counts(design)
    return all(counts.get(pair, 0) == lam for pair in combinations(range(1, design.v + 1), 2))


def pair_balance(design: IncidenceStructure) -> int | None:
    """λ if every pair of points is covered equally often, else None."""
    if design.v < 2:
        return None
    counts = pair_counts(design)
    values = {counts.get(pair, 0) for pair in combinations(range(1, design.v + 1), 2)}
    return values.pop() if len(values) == 1 else None


def intersection_numbers(design: IncidenceStructure) -> list[int]:
    """Sorted distinct |B ∩ B'| over distinct block positions."""
    if design.b < 2:
        raise DegenerateDesignError("Intersection numbers need at least two blocks")
    masks = design.block_masks
    return sorted({(a & b).bit_count() for a, b in combinations(masks, 2)})


def is_quasi_symmetric(design: IncidenceStructure) -> tuple[int, int] | None:
    """(x, y) for a pair-balanced design with exactly two intersection numbers."""
    if design.b < 2 or pair_balance(design) is None:
        return None
    values = intersection_numbers(design)
    if len(values) != 2:
        return None
    return values[0], values[1]


def incidence_matrix(design: IncidenceStructure) -> BitMatrix:
    """b × v block-by-point matrix."""
    return BitMatrix(design.v, design.block_masks)


def bordered_code(design: IncidenceStructure, border: int) -> LinearCode:
    """Row span of A (border 0), [A | 1] (border 1) or [A | 1 1 1] (border 3)."""
    if border not in SUPPORTED_BORDERS:
        raise PreconditionError(f"Border must be one of {SUPPORTED_BORDERS}, got {border}")
    n = design.v + border
    ones = ((1 << border) - 1) << design.v
    return LinearCode(n, BitMatrix(n, tuple(mask | ones for mask in design.block_masks)))


# =============================================================================
# Block graph
# =============================================================================


def block_graph(design: IncidenceStructure, y: int) -> list[int]:
    """Adjacency bitsets over block positions; adjacent when |B ∩ B'| = y."""
    masks = design.block_masks
    adjacency = [0] * len(masks)
    for i, j in combinations(range(len(masks)), 2):
        if (masks[i] & masks[j]).bit_count() == y:
            adjacency[i] |= 1 << j
            adjacency[j] |= 1 << i
    return adjacency


def srg_parameters(adjacency: Sequence[int]) -> tuple[int, int, int, int] | None:
    """(n, k, λ, μ) if the graph is strongly regular, else None."""
    n = len(adjacency)
    if n == 0:
        return None
    degrees = {a.bit_count() for a in adjacency}
    if len(degrees) != 1:
        return None
    common_adjacent = set()
    common_apart = set()
    for i, j in combinations(range(n), 2):
        common = (adjacency[i] & adjacency[j]).bit_count()
        if (adjacency[i] >> j) & 1:
            common_adjacent.add(common)
        else:
            common_apart.add(common)
    if len(common_adjacent) > 1 or len(common_apart) > 1:
        return None
    lam = common_adjacent.pop() if common_adjacent else 0
    mu = common_apart.pop() if common_apart else 0
    return n, degrees.pop(), lam, mu


# =============================================================================
# Design text format
# =============================================================================


def parse_design(text: str, source: str | None = None) -> IncidenceStructure:
    """``"v b"`` then b lines of space-separated 1-based points."""
    lines = list(content_lines(text))
    if not lines:
        raise DesignParseError("Missing 'v b' header", line=1, source=source)
    header_line, header = lines[0]
    match = _HEADER.match(header)
    if not match:
        raise DesignParseError(f"Malformed header {header!r}, expected 'v b'", header_line, source)
    v, b = int(match.group(1)), int(match.group(2))
    if v <= 0:
        raise DesignParseError("Need at least one point", header_line, source)

    blocks = []
    for number, line in lines[1:]:
        try:
            block = tuple(int(token) for token in line.split())
        except ValueError:
            raise DesignParseError(f"Non-integer point in {line!r}", number, source) from None
        if blocks and len(block) != len(blocks[0]):
            raise DesignParseError(
                f"Block has {len(block)} points, expected {len(blocks[0])}", number, source
            )
        if len(set(block)) != len(block):
            raise DesignParseError(f"Repeated point in block {block}", number, source)
        if any(not 1 <= p <= v for p in block):
            raise DesignParseError(f"Point outside 1..{v} in block {block}", number, source)
        blocks.append(block)
    if len(blocks) != b:
        raise DesignParseError(f"Header promises {b} blocks, found {len(blocks)}", lines[-1][0], source)
    return IncidenceStructure(v, tuple(blocks))


def format_design(design: IncidenceStructure) -> str:
    lines = [f"{design.v} {design.b}"]
    lines.extend(" ".join(str(p) for p in block) for block in design.blocks)
    return "\n".join(lines) + "\n"


def load_design(path: str | Path) -> IncidenceStructure:
    path = Path(path)
    return parse_design(path.read_text(encoding="utf-8"), source=str(path))


def save_design(design: IncidenceStructure, path: str | Path) -> None:
    Path(path).write_text(format_design(design), encoding="utf-8")
