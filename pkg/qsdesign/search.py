"""Two-stage clique search over candidate blocks for a fixed code and border triple.

For a code C and an admissible triple T, the candidate blocks X are the
supports minus T of the weight-12 codewords containing T. A design with
blocks drawn from X puts exactly λ blocks through every point pair, pairwise
meeting in one or three points, so each pair graph must contain a λ-clique.
Stage 1 looks for a pair whose graph has none. Stage 2 fixes a base pair,
walks every λ-clique K of its graph, and looks for a pair whose graph,
restricted to blocks compatible with K, has none.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from . import cliques
from .codes import LinearCode, codeword_masks_of_weight
from .errors import InternalConsistencyError, PreconditionError, QSDesignError, Stage2OverflowError
from .f2core import DEFAULT_ENUMERATION_BUDGET, mask_from_support, support_of

logger = logging.getLogger(__name__)

Pair = tuple[int, int]
Triple = tuple[int, int, int]


class SearchConfig(BaseModel):
    """Constants of the search; defaults are those of the 2-(37,9,8) case."""

    model_config = ConfigDict(frozen=True)

    clique_size: int = 8
    adjacent_intersection: int = 3
    compatible_intersections: frozenset[int] = frozenset({1, 3})
    candidate_weight: int = 12
    excluded_weight: int = 8
    clique_cap: int = 10**6
    triple_limit: int | None = None
    record_timings: bool = False

    @field_validator("clique_size", "candidate_weight", "excluded_weight", "clique_cap")
    @classmethod
    def check_positive(cls, v, info):
        if v < 1:
            raise ValueError(f"{info.field_name} must be at least 1")
        return v

    @field_validator("triple_limit")
    @classmethod
    def check_triple_limit(cls, v):
        if v is not None and v < 0:
            raise ValueError("triple_limit must be nonnegative")
        return v

    @model_validator(mode="after")
    def check_weights(self):
        if self.candidate_weight <= 3:
            raise ValueError("candidate_weight must exceed the triple size")
        if self.adjacent_intersection not in self.compatible_intersections:
            raise ValueError("adjacent_intersection must be one of compatible_intersections")
        return self

    @property
    def block_size(self) -> int:
        return self.candidate_weight - 3


# =============================================================================
# Candidate blocks and pair graphs
# =============================================================================


@dataclass(frozen=True)
class CandidateSet:
    """Candidate blocks for one (code, T), as point masks in a fixed order.

    Repeated blocks are allowed; they stay distinct vertices.
    """

    code_id: str
    length: int
    T: Triple
    blocks: tuple[int, ...]

    def __post_init__(self):
        triple = tuple(sorted(self.T))
        if len(set(triple)) != 3 or not all(1 <= p <= self.length for p in triple):
            raise PreconditionError(f"T must be three distinct points of 1..{self.length}, got {self.T}")
        object.__setattr__(self, "T", triple)
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        t_mask = mask_from_support(triple)
        sizes = {b.bit_count() for b in self.blocks}
        if len(sizes) > 1:
            raise PreconditionError(f"Candidate blocks of unequal sizes {sorted(sizes)}")
        if any(b & t_mask or b >> self.length for b in self.blocks):
            raise PreconditionError("Candidate blocks must avoid T and stay inside the coordinates")

    @property
    def size(self) -> int:
        return len(self.blocks)

    @cached_property
    def point_masks(self) -> tuple[int, ...]:
        """Entry p-1 marks (by block index) the blocks containing point p."""
        masks = [0] * self.length
        for index, block in enumerate(self.blocks):
            for p in support_of(block):
                masks[p - 1] |= 1 << index
        return tuple(masks)

    def pairs(self) -> Iterator[Pair]:
        """Distinct pairs outside T, lexicographic."""
        outside = [p for p in range(1, self.length + 1) if p not in self.T]
        return combinations(outside, 2)

    def through(self, i: int, j: int) -> int:
        """Block-index mask of blocks containing both i and j."""
        return self.point_masks[i - 1] & self.point_masks[j - 1]

    def block_points(self, index: int) -> tuple[int, ...]:
        return support_of(self.blocks[index])


def candidates_from_words(
    code_id: str, length: int, T: Iterable[int], words: Sequence[int] | np.ndarray
) -> CandidateSet:
    """Restrict precomputed codewords to those covering T and strip T.

    Order follows ``words``; pass them sorted for a canonical X.
    """
    triple = tuple(sorted(T))
    t_mask = mask_from_support(triple)
    array = np.asarray(words, dtype=np.uint64)
    hits = array[(array & np.uint64(t_mask)) == np.uint64(t_mask)]
    return CandidateSet(code_id, length, triple, tuple(int(w) ^ t_mask for w in hits))


def candidate_blocks(
    code: LinearCode,
    T: Iterable[int],
    code_id: str = "",
    config: SearchConfig | None = None,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> CandidateSet:
    """X = {supp(x) minus T : x in C, wt(x) = candidate_weight, supp(x) ⊇ T}, sorted."""
    config = config or SearchConfig()
    triple = tuple(sorted(T))
    words = codeword_masks_of_weight(code, config.candidate_weight, triple, budget)
    return candidates_from_words(code_id, code.length, triple, words)


@dataclass(frozen=True)
class PairGraph:
    """Blocks through a pair, adjacent when they meet in ``adjacent_intersection`` points.

    ``vertices`` are indices into the candidate set; ``adjacency`` is indexed
    by position in ``vertices``.
    """

    pair: Pair
    vertices: tuple[int, ...]
    adjacency: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.vertices)


def _check_pair(X: CandidateSet, i: int, j: int) -> None:
    if i == j:
        raise PreconditionError(f"Pair needs two distinct points, got ({i}, {j})")
    if i in X.T or j in X.T:
        raise PreconditionError(f"Pair ({i}, {j}) meets T = {X.T}")
    if not (1 <= i <= X.length and 1 <= j <= X.length):
        raise PreconditionError(f"Pair ({i}, {j}) leaves 1..{X.length}")


def _graph_on(X: CandidateSet, pair: Pair, vertex_mask: int, config: SearchConfig) -> PairGraph:
    vertices = tuple(cliques.iter_bits(vertex_mask))
    blocks = [X.blocks[v] for v in vertices]
    adjacency = [0] * len(vertices)
    for a, b in combinations(range(len(vertices)), 2):
        if (blocks[a] & blocks[b]).bit_count() == config.adjacent_intersection:
            adjacency[a] |= 1 << b
            adjacency[b] |= 1 << a
    return PairGraph(pair, vertices, tuple(adjacency))


def pair_graph(X: CandidateSet, i: int, j: int, config: SearchConfig | None = None) -> PairGraph:
    """Γ_ij: blocks of X containing i and j."""
    _check_pair(X, i, j)
    i, j = min(i, j), max(i, j)
    return _graph_on(X, (i, j), X.through(i, j), config or SearchConfig())


def has_clique(G: PairGraph, size: int) -> bool:
    if size < 1:
        raise PreconditionError("Clique size must be at least 1")
    return cliques.has_clique(G.adjacency, size)


# =============================================================================
# Stage 1
# =============================================================================


def _pairs_by_order(X: CandidateSet, vertex_mask: int | None = None) -> list[tuple[int, Pair]]:
    """(|V|, pair) for every pair outside T, ascending by |V| then pair."""
    ordered = []
    for i, j in X.pairs():
        through = X.through(i, j)
        if vertex_mask is not None:
            through &= vertex_mask
        ordered.append((through.bit_count(), (i, j)))
    ordered.sort()
    return ordered


def stage1(X: CandidateSet, config: SearchConfig | None = None) -> Pair | None:
    """A pair whose graph has no λ-clique, or None when every pair has one.

    Pairs are tried by ascending |V|, then lexicographically.
    """
    config = config or SearchConfig()
    size = config.clique_size
    for order, pair in _pairs_by_order(X):
        if order < size:
            return pair
        if not has_clique(_graph_on(X, pair, X.through(*pair), config), size):
            return pair
    return None


def recheck_stage1_witness(X: CandidateSet, pair: Pair, config: SearchConfig | None = None) -> bool:
    """True when the witness pair's graph indeed has no λ-clique."""
    config = config or SearchConfig()
    return not has_clique(pair_graph(X, *pair, config), config.clique_size)


# =============================================================================
# Stage 2
# =============================================================================


def choose_base_pair(X: CandidateSet, config: SearchConfig | None = None) -> tuple[Pair, int]:
    """The pair whose graph has the fewest λ-cliques, with that count.

    Counts above ``clique_cap`` compare as infinite and are reported as
    clique_cap + 1. Ties go to the lexicographically smaller pair.
    """
    config = config or SearchConfig()
    size = config.clique_size
    best_pair = None
    best_count = config.clique_cap + 1
    for pair in X.pairs():
        through = X.through(*pair)
        if through.bit_count() < size:
            count = 0
        else:
            graph = _graph_on(X, pair, through, config)
            # a count equal to the current best cannot win the tie
            limit = min(config.clique_cap, best_count - 1)
            count = cliques.count_cliques(graph.adjacency, size, cap=limit)
        if best_pair is None or count < best_count:
            best_pair, best_count = pair, count
        if best_count == 0:
            break
    if best_pair is None:
        raise PreconditionError("No pair lies outside T")
    return best_pair, best_count


def compatible_mask(
    X: CandidateSet,
    K: Sequence[int],
    config: SearchConfig | None = None,
    rows: dict[int, int] | None = None,
) -> int:
    """Block-index mask of blocks B with |B ∩ B'| compatible for every B' in K other than B.

    ``rows`` caches the per-block compatibility masks across calls.
    """
    config = config or SearchConfig()
    rows = {} if rows is None else rows
    allowed = (1 << X.size) - 1
    for member in K:
        if member not in rows:
            block_of_k = X.blocks[member]
            compatible = 1 << member
            for index, block in enumerate(X.blocks):
                if (block_of_k & block).bit_count() in config.compatible_intersections:
                    compatible |= 1 << index
            rows[member] = compatible
        allowed &= rows[member]
    return allowed


def refined_graph(
    X: CandidateSet, i: int, j: int, K: Sequence[int], config: SearchConfig | None = None
) -> PairGraph:
    """Γ_ij^K: the subgraph of Γ_ij induced by blocks compatible with K."""
    config = config or SearchConfig()
    _check_pair(X, i, j)
    i, j = min(i, j), max(i, j)
    return _graph_on(X, (i, j), X.through(i, j) & compatible_mask(X, K, config), config)


@dataclass(frozen=True)
class Stage2Result:
    base_pair: Pair
    clique_count: int
    survivor: tuple[int, ...] | None

    @property
    def excluded(self) -> bool:
        return self.survivor is None


def _eliminates(X: CandidateSet, allowed: int, config: SearchConfig) -> Pair | None:
    size = config.clique_size
    for order, pair in _pairs_by_order(X, allowed):
        if order < size:
            return pair
        graph = _graph_on(X, pair, X.through(*pair) & allowed, config)
        if not has_clique(graph, size):
            return pair
    return None


def stage2(X: CandidateSet, config: SearchConfig | None = None) -> Stage2Result:
    """Try every λ-clique K of the base pair's graph against all refined graphs.

    Raises Stage2OverflowError when the base graph has more than clique_cap
    λ-cliques and InternalConsistencyError when it has none.
    """
    config = config or SearchConfig()
    size = config.clique_size
    base_pair, count = choose_base_pair(X, config)
    if count == 0:
        raise InternalConsistencyError(
            f"Base pair {base_pair} has no {size}-clique although stage 1 passed"
        )
    if count > config.clique_cap:
        raise Stage2OverflowError(
            f"Every pair graph has more than {config.clique_cap} {size}-cliques"
        )

    base = pair_graph(X, *base_pair, config)
    logger.debug(f"{X.code_id} T={X.T}: base pair {base_pair} with {count} cliques")
    rows: dict[int, int] = {}
    for local in cliques.enumerate_cliques(base.adjacency, size):
        K = tuple(base.vertices[v] for v in local)
        for a, b in combinations(K, 2):
            if (X.blocks[a] & X.blocks[b]).bit_count() != config.adjacent_intersection:
                raise InternalConsistencyError(f"Clique {K} has a non-adjacent pair ({a}, {b})")
        if _eliminates(X, compatible_mask(X, K, config, rows), config) is None:
            logger.warning(f"{X.code_id} T={X.T}: clique {K} passes every refined graph")
            return Stage2Result(base_pair, count, K)
    return Stage2Result(base_pair, count, None)


# =============================================================================
# Verdicts
# =============================================================================


class Outcome(str, Enum):
    EXCLUDED_STAGE1 = "excluded_stage1"
    EXCLUDED_STAGE2 = "excluded_stage2"
    SURVIVOR = "survivor"
    ERROR = "error"


class Verdict(BaseModel):
    """One line of the verdict stream.

    ``stage`` is the stage that decided the outcome. Error verdicts carry 2 when
    stage 2 failed and None for any other failure.
    """

    record: Literal["verdict"] = "verdict"
    code_id: str
    T: Triple | None = None
    outcome: Outcome
    stage: Literal[1, 2] | None = None
    witness: dict[str, list[int]] | None = None
    clique_count: int | None = None
    survivor_blocks: list[list[int]] | None = None
    elapsed_ms: float | None = None
    error: str | None = None

    @model_validator(mode="after")
    def check_witness(self):
        if self.outcome == Outcome.EXCLUDED_STAGE1 and not (self.witness and "pair" in self.witness):
            raise ValueError("Stage-1 exclusions carry a witness pair")
        if self.outcome == Outcome.EXCLUDED_STAGE2 and (
            not (self.witness and "base_pair" in self.witness) or self.clique_count is None
        ):
            raise ValueError("Stage-2 exclusions carry the base pair and clique count")
        return self


def evaluate_triple(X: CandidateSet, config: SearchConfig | None = None) -> Verdict:
    """Stage 1, then stage 2 if needed, for one candidate set.

    Search errors raised by stage 2 (clique-count overflow, inconsistent
    graphs) become error verdicts with ``stage=2``.
    """
    config = config or SearchConfig()
    started = time.perf_counter()

    witness = stage1(X, config)
    if witness is not None:
        verdict = Verdict(
            code_id=X.code_id,
            T=X.T,
            outcome=Outcome.EXCLUDED_STAGE1,
            stage=1,
            witness={"pair": list(witness)},
        )
    else:
        try:
            result = stage2(X, config)
        except QSDesignError as e:
            logger.warning(f"{X.code_id} T={X.T}: stage 2 failed: {type(e).__name__}: {e}")
            verdict = Verdict(
                code_id=X.code_id,
                T=X.T,
                outcome=Outcome.ERROR,
                stage=2,
                error=f"{type(e).__name__}: {e}",
            )
        else:
            verdict = Verdict(
                code_id=X.code_id,
                T=X.T,
                outcome=Outcome.EXCLUDED_STAGE2 if result.excluded else Outcome.SURVIVOR,
                stage=2,
                witness={"base_pair": list(result.base_pair)},
                clique_count=result.clique_count,
                survivor_blocks=(
                    None
                    if result.excluded
                    else [list(X.block_points(index)) for index in result.survivor]
                ),
            )

    if config.record_timings:
        verdict = verdict.model_copy(
            update={"elapsed_ms": round((time.perf_counter() - started) * 1000, 3)}
        )
    return verdict
