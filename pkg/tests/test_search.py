import pytest
from pydantic import ValidationError

from qsdesign.designs import FANO_LINES
from qsdesign.errors import InternalConsistencyError, PreconditionError, Stage2OverflowError
from qsdesign.f2core import mask_from_support
from qsdesign.search import (
    CandidateSet,
    Outcome,
    SearchConfig,
    Verdict,
    candidate_blocks,
    candidates_from_words,
    choose_base_pair,
    compatible_mask,
    evaluate_triple,
    has_clique,
    pair_graph,
    recheck_stage1_witness,
    refined_graph,
    stage1,
    stage2,
)

BORDER_T = (8, 9, 10)


def candidate_set(blocks, length=10, T=BORDER_T, code_id="test") -> CandidateSet:
    return CandidateSet(code_id, length, T, tuple(mask_from_support(b) for b in blocks))


@pytest.fixture
def multiset_config():
    """Repeated lines: a block pair meets in three points and λ = 2."""
    return SearchConfig(
        clique_size=2,
        adjacent_intersection=3,
        compatible_intersections={1, 3},
        candidate_weight=6,
        excluded_weight=4,
    )


@pytest.fixture
def k4_triples():
    """All four 3-subsets of 1..4; any two meet in two points, so no two are compatible."""
    return candidate_set([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)], length=7, T=(5, 6, 7))


# =============================================================================
# Configuration and candidate sets
# =============================================================================


def test_default_config():
    config = SearchConfig()
    assert config.clique_size == 8
    assert config.adjacent_intersection == 3
    assert config.compatible_intersections == frozenset({1, 3})
    assert config.block_size == 9


@pytest.mark.parametrize(
    "overrides",
    [
        {"clique_size": 0},
        {"candidate_weight": 3},
        {"adjacent_intersection": 2},
        {"triple_limit": -1},
        {"clique_cap": 0},
    ],
)
def test_config_validation(overrides):
    with pytest.raises(ValidationError):
        SearchConfig(**overrides)


def test_candidate_set_validation():
    with pytest.raises(PreconditionError):
        candidate_set([(1, 2, 3)], T=(8, 8, 9))
    with pytest.raises(PreconditionError):
        candidate_set([(1, 2, 8)])
    with pytest.raises(PreconditionError):
        candidate_set([(1, 2, 3), (1, 2)])
    with pytest.raises(PreconditionError):
        candidate_set([(1, 2, 3)], T=(8, 9, 11))


def test_candidate_set_indexes_points():
    X = candidate_set(FANO_LINES)
    assert X.size == 7
    assert X.point_masks[0] == 0b0000111
    assert X.through(1, 2) == 0b1
    assert X.block_points(6) == (3, 5, 6)
    assert len(list(X.pairs())) == 21


def test_candidate_blocks_of_bordered_fano(bordered_fano, fano_search_config):
    X = candidate_blocks(bordered_fano, BORDER_T, "fano", fano_search_config)
    assert X.T == BORDER_T
    assert sorted(X.block_points(i) for i in range(X.size)) == sorted(FANO_LINES)
    assert list(X.blocks) == sorted(X.blocks)


def test_candidates_from_words_filters_and_strips():
    words = [mask_from_support((1, 2, 3, 8, 9, 10)), mask_from_support((1, 4, 5, 6, 7, 8))]
    X = candidates_from_words("w", 10, (10, 9, 8), words)
    assert X.T == BORDER_T
    assert X.blocks == (mask_from_support((1, 2, 3)),)


# =============================================================================
# Pair graphs
# =============================================================================


def test_pair_graph(fano2, multiset_config):
    X = candidate_set(fano2.blocks)
    G = pair_graph(X, 2, 1, multiset_config)
    assert G.pair == (1, 2)
    assert G.vertices == (0, 7)
    assert G.adjacency == (0b10, 0b01)
    assert has_clique(G, 2)
    assert not has_clique(G, 3)
    with pytest.raises(PreconditionError):
        has_clique(G, 0)


def test_pair_graph_rejects_bad_pairs():
    X = candidate_set(FANO_LINES)
    with pytest.raises(PreconditionError):
        pair_graph(X, 1, 1)
    with pytest.raises(PreconditionError):
        pair_graph(X, 1, 8)
    with pytest.raises(PreconditionError):
        pair_graph(X, 1, 11)


def test_pair_graph_of_repeated_blocks_is_complete(multiset_config):
    X = candidate_set(FANO_LINES * 3)
    G = pair_graph(X, 4, 5, multiset_config)
    assert G.order == 3
    assert all(row.bit_count() == 2 for row in G.adjacency)


# =============================================================================
# Stage 1
# =============================================================================


def test_stage1_on_empty_candidates():
    X = candidate_set([])
    assert stage1(X) == (1, 2)
    assert recheck_stage1_witness(X, (1, 2))


def test_stage1_finds_uncovered_pair(fano_search_config):
    lines = [line for line in FANO_LINES if line != (3, 5, 6)]
    X = candidate_set(lines)
    assert stage1(X, fano_search_config) == (3, 5)


def test_stage1_passes_on_fano(fano_search_config):
    assert stage1(candidate_set(FANO_LINES), fano_search_config) is None


def test_stage1_clique_check(multiset_config):
    # blocks through (1, 2) pairwise meet in two points, so no 2-clique
    X = candidate_set(FANO_LINES + ((1, 2, 4), (1, 2, 5)))
    witness = stage1(X, multiset_config)
    assert witness is not None
    assert recheck_stage1_witness(X, witness, multiset_config)


# =============================================================================
# Stage 2
# =============================================================================


def test_choose_base_pair(k4_triples, fano_search_config):
    assert choose_base_pair(k4_triples, fano_search_config) == ((1, 2), 2)
    X = candidate_set(FANO_LINES + ((1, 2, 4),))
    assert choose_base_pair(X, fano_search_config) == ((1, 3), 1)


def test_compatible_mask(k4_triples, fano_search_config):
    assert compatible_mask(k4_triples, (0,), fano_search_config) == 0b0001
    assert compatible_mask(k4_triples, (), fano_search_config) == 0b1111
    X = candidate_set(FANO_LINES + ((1, 2, 4),))
    rows = {}
    assert compatible_mask(X, (0,), fano_search_config, rows) == 0b0111_1111
    assert 0 in rows


def test_refined_graph(k4_triples, fano_search_config):
    empty_k = refined_graph(k4_triples, 1, 2, (), fano_search_config)
    assert empty_k.vertices == (0, 1)
    assert refined_graph(k4_triples, 1, 4, (0,), fano_search_config).order == 0


def test_stage2_survivor_on_fano(fano_search_config):
    result = stage2(candidate_set(FANO_LINES), fano_search_config)
    assert result.base_pair == (1, 2)
    assert result.clique_count == 1
    assert result.survivor == (0,)
    assert not result.excluded


def test_stage2_survivor_on_doubled_fano(fano2, multiset_config):
    X = candidate_set(fano2.blocks)
    assert stage1(X, multiset_config) is None
    result = stage2(X, multiset_config)
    assert result.survivor == (0, 7)


def test_stage2_excludes_k4(k4_triples, fano_search_config):
    assert stage1(k4_triples, fano_search_config) is None
    result = stage2(k4_triples, fano_search_config)
    assert result.excluded
    assert (result.base_pair, result.clique_count) == ((1, 2), 2)


def test_stage2_overflow(multiset_config):
    config = multiset_config.model_copy(update={"clique_cap": 2})
    X = candidate_set(FANO_LINES * 3)
    assert stage1(X, config) is None
    with pytest.raises(Stage2OverflowError):
        stage2(X, config)


def test_stage2_on_empty_candidates_is_inconsistent():
    with pytest.raises(InternalConsistencyError):
        stage2(candidate_set([]))


# =============================================================================
# Verdicts
# =============================================================================


def test_evaluate_stage1_exclusion():
    verdict = evaluate_triple(candidate_set([]))
    assert verdict.outcome == Outcome.EXCLUDED_STAGE1
    assert verdict.witness == {"pair": [1, 2]}
    assert verdict.stage == 1
    assert verdict.elapsed_ms is None


def test_evaluate_stage2_exclusion(k4_triples, fano_search_config):
    verdict = evaluate_triple(k4_triples, fano_search_config)
    assert verdict.outcome == Outcome.EXCLUDED_STAGE2
    assert verdict.witness == {"base_pair": [1, 2]}
    assert verdict.clique_count == 2
    assert verdict.survivor_blocks is None
    assert verdict.stage == 2


def test_evaluate_survivor(fano_search_config):
    config = fano_search_config.model_copy(update={"record_timings": True})
    verdict = evaluate_triple(candidate_set(FANO_LINES, code_id="fano"), config)
    assert verdict.outcome == Outcome.SURVIVOR
    assert verdict.survivor_blocks == [[1, 2, 3]]
    assert verdict.elapsed_ms is not None
    assert verdict.model_dump(mode="json")["T"] == [8, 9, 10]


def test_evaluate_turns_stage2_failures_into_error_verdicts(multiset_config):
    config = multiset_config.model_copy(update={"clique_cap": 2})
    verdict = evaluate_triple(candidate_set(FANO_LINES * 3), config)
    assert verdict.outcome == Outcome.ERROR
    assert verdict.stage == 2
    assert verdict.T == BORDER_T
    assert verdict.error.startswith("Stage2OverflowError:")


def test_verdict_requires_witness():
    with pytest.raises(ValidationError):
        Verdict(code_id="a", T=BORDER_T, outcome=Outcome.EXCLUDED_STAGE1)
    with pytest.raises(ValidationError):
        Verdict(code_id="a", T=BORDER_T, outcome=Outcome.EXCLUDED_STAGE2, witness={"base_pair": [1, 2]})
    error = Verdict(code_id="a", outcome=Outcome.ERROR, error="boom")
    assert error.model_dump(mode="json")["outcome"] == "error"
