"""Doubly even self-dual code construction.

Embedding of doubly even codes into self-dual ones, neighbor steps, the
neighbor-walk sampler that stands in for the classification database, seed
codes, and generator-matrix files.
"""

import logging
import re
from pathlib import Path
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .codes import (
    LinearCode,
    dual,
    extremal_bound,
    format_generator_matrix,
    is_doubly_even,
    is_self_dual,
    minimum_weight,
    parse_generator_matrix,
)
from .errors import (
    DegenerateNeighborError,
    EnumerationBudgetError,
    InternalConsistencyError,
    NoSelfDualCodeError,
    PreconditionError,
    QSDesignError,
    SamplingExhaustedError,
    UnknownSeedError,
)
from .f2core import DEFAULT_ENUMERATION_BUDGET, BitMatrix, BitVector, iter_span

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
CODE_FILE_SUFFIX = ".txt"
MAX_PROPOSAL_TRIES = 64

_SEED_NAME = re.compile(r"^e8(?:_(\d+))?$")


# =============================================================================
# Seed codes
# =============================================================================


def direct_sum(codes: Sequence[LinearCode]) -> LinearCode:
    """Block-diagonal sum; the first code occupies the lowest coordinates."""
    if not codes:
        raise PreconditionError("Direct sum of no codes")
    rows = []
    offset = 0
    for code in codes:
        rows.extend(r << offset for r in code.rows)
        offset += code.length
    return LinearCode(offset, BitMatrix(offset, tuple(rows)))


def seed_code(name: str) -> LinearCode:
    """``e8`` (extended Hamming [8,4,4]) or ``e8_k``, the direct sum of k copies."""
    match = _SEED_NAME.match(name.strip())
    if not match:
        raise UnknownSeedError(f"Unknown seed code {name!r}; expected 'e8' or 'e8_<k>'")
    copies = int(match.group(1) or 1)
    if copies < 1:
        raise UnknownSeedError(f"Seed {name!r} needs at least one copy")
    e8 = load_code(DATA_DIR / "e8.txt")
    return e8 if copies == 1 else direct_sum([e8] * copies)


# =============================================================================
# Embedding and neighbors
# =============================================================================


def _check_self_dual_length(n: int) -> None:
    if n <= 0 or n % 8:
        raise NoSelfDualCodeError(f"No doubly even self-dual code of length {n}")


def _complement_in_dual(code: LinearCode) -> list[int]:
    """Rows of C^⊥ that extend a basis of C to a basis of C^⊥."""
    span = code
    complement = []
    for row in dual(code).rows:
        if row not in span:
            complement.append(row)
            span = LinearCode(code.length, BitMatrix(code.length, span.rows + (row,)))
    return complement


def embed_doubly_even_self_dual(
    code: LinearCode, budget: int | None = DEFAULT_ENUMERATION_BUDGET
) -> LinearCode:
    """A doubly even self-dual code containing ``code``.

    Repeatedly adjoins the first vector of C^⊥ \\ C (Gray order over a
    complement basis) whose weight is divisible by 4. Weight mod 4 is constant
    on each coset of a doubly even code inside its dual, so the coset
    representatives alone decide.
    """
    n = code.length
    _check_self_dual_length(n)
    if not is_doubly_even(code):
        raise PreconditionError("Only doubly even codes embed into doubly even self-dual codes")

    limit = None if budget is None else 1 << budget
    visited = 0
    current = code
    while current.dimension < n // 2:
        complement = _complement_in_dual(current)
        found = None
        for candidate in iter_span(BitMatrix(n, tuple(complement)), budget=None):
            visited += 1
            if limit is not None and visited > limit:
                raise EnumerationBudgetError(
                    f"Embedding search visited more than 2^{budget} coset representatives"
                )
            if candidate and candidate.bit_count() % 4 == 0:
                found = candidate
                break
        if found is None:
            raise InternalConsistencyError(
                f"No doubly even coset above a [{n},{current.dimension}] doubly even code"
            )
        current = LinearCode(n, BitMatrix(n, current.rows + (found,)))
        logger.debug(f"Embedding: dimension {current.dimension}/{n // 2}")
    return current


def neighbor(code: LinearCode, v: BitVector | int) -> LinearCode:
    """The self-dual neighbor <C ∩ v^⊥, v>."""
    bits = v.bits if isinstance(v, BitVector) else int(v)
    if not (is_self_dual(code) and is_doubly_even(code)):
        raise PreconditionError("Neighbor steps start from a doubly even self-dual code")
    if code.contains(bits):
        raise DegenerateNeighborError("Neighbor vector already lies in the code")
    if bits.bit_count() % 4:
        raise PreconditionError(f"Neighbor vector has weight {bits.bit_count()}, not ≡ 0 (mod 4)")

    odd = [r for r in code.rows if (r & bits).bit_count() & 1]
    even = [r for r in code.rows if not (r & bits).bit_count() & 1]
    # C is self-dual and v ∉ C, so at least one basis row meets v oddly
    pivot = odd[0]
    subcode = even + [r ^ pivot for r in odd[1:]]
    return LinearCode(code.length, BitMatrix(code.length, tuple(subcode) + (bits,)))


# =============================================================================
# Neighbor-walk sampling
# =============================================================================


class WalkConfig(BaseModel):
    """Parameters of one neighbor walk."""

    model_config = ConfigDict(frozen=True)

    seed: int = 1
    steps: int = 200
    target_length: int = 40
    target_min_weight: int | None = None
    max_restarts: int = 5
    count: int = 25

    @field_validator("steps", "max_restarts", "count")
    @classmethod
    def check_positive(cls, v, info):
        if v < 1:
            raise ValueError(f"{info.field_name} must be at least 1")
        return v

    @field_validator("target_length")
    @classmethod
    def check_length(cls, v):
        if v <= 0 or v % 8:
            raise ValueError("target_length must be a positive multiple of 8")
        return v

    @property
    def min_weight(self) -> int:
        if self.target_min_weight is not None:
            return self.target_min_weight
        return extremal_bound(self.target_length)


def _random_codeword(code: LinearCode, rng: np.random.Generator) -> int:
    word = 0
    for row, pick in zip(code.rows, rng.integers(0, 2, size=code.dimension)):
        if pick:
            word ^= row
    return word


def propose_vector(code: LinearCode, rng: np.random.Generator) -> int:
    """Sum of 1-3 random codewords plus a random low-weight perturbation."""
    n = code.length
    for _ in range(MAX_PROPOSAL_TRIES):
        v = 0
        for _ in range(int(rng.integers(1, 4))):
            v ^= _random_codeword(code, rng)
        perturbation = int(rng.integers(1, max(1, n // 4) + 1))
        for coordinate in rng.choice(n, size=perturbation, replace=False):
            v ^= 1 << int(coordinate)
        if v.bit_count() % 4 == 0 and not code.contains(v):
            return v
    raise SamplingExhaustedError(f"No valid neighbor proposal in {MAX_PROPOSAL_TRIES} tries")


def sample_codes(
    config: WalkConfig, budget: int | None = DEFAULT_ENUMERATION_BUDGET
) -> list[LinearCode]:
    """Random neighbor walks from e8_(n/8), keeping codes with d >= target.

    Exact duplicates are dropped; equivalent codes are not. Deterministic for a
    given config.
    """
    n = config.target_length
    target = config.min_weight
    rng = np.random.default_rng(config.seed)
    start = seed_code(f"e8_{n // 8}")

    retained: list[LinearCode] = []
    seen: set[BitMatrix] = set()
    for restart in range(config.max_restarts):
        current = start
        for step in range(config.steps):
            current = neighbor(current, propose_vector(current, rng))
            if current.basis in seen:
                continue
            if minimum_weight(current, budget) >= target:
                seen.add(current.basis)
                retained.append(current)
                logger.info(
                    f"Walk {restart + 1} step {step + 1}: retained code #{len(retained)} "
                    f"(d >= {target})"
                )
                if len(retained) >= config.count:
                    return retained
        logger.info(
            f"Walk {restart + 1}/{config.max_restarts} finished with {len(retained)} codes"
        )

    if not retained:
        raise SamplingExhaustedError(
            f"No [{n},{n // 2}] code with d >= {target} in "
            f"{config.steps} steps x {config.max_restarts} walks"
        )
    return retained


def sample_extremal_40(
    config: WalkConfig, budget: int | None = DEFAULT_ENUMERATION_BUDGET
) -> list[LinearCode]:
    if config.target_length != 40:
        raise PreconditionError(f"Expected target_length 40, got {config.target_length}")
    return sample_codes(config, budget)


# =============================================================================
# Files
# =============================================================================


def load_code(path: str | Path) -> LinearCode:
    path = Path(path)
    return parse_generator_matrix(path.read_text(encoding="utf-8"), source=str(path))


def save_code(code: LinearCode, path: str | Path) -> None:
    Path(path).write_text(format_generator_matrix(code), encoding="utf-8")


def save_code_directory(codes: Sequence[LinearCode], out_dir: str | Path) -> list[Path]:
    """Write one file per code, named by index: 00000.txt, 00001.txt, ..."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, code in enumerate(codes):
        path = out_dir / f"{index:05d}{CODE_FILE_SUFFIX}"
        save_code(code, path)
        paths.append(path)
    return paths


def load_code_directory(
    code_dir: str | Path,
) -> tuple[list[tuple[str, LinearCode]], list[tuple[str, str]]]:
    """Load every code file in name order.

    Returns (code_id, code) pairs and (file name, error) pairs for files that
    failed to parse; failures are logged and skipped.
    """
    loaded = []
    failures = []
    for path in sorted(Path(code_dir).glob(f"*{CODE_FILE_SUFFIX}")):
        try:
            loaded.append((path.stem, load_code(path)))
        except (QSDesignError, OSError) as e:
            logger.warning(f"Skipping {path.name}: {e}")
            failures.append((path.name, str(e)))
    return loaded, failures
