import io
import json
from math import comb

import numpy as np
import pytest

from qsdesign.codes import LinearCode, apply_permutation, permute_points
from qsdesign.designs import FANO_LINES
from qsdesign.f2core import mask_from_support
from qsdesign.pipeline import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_SURVIVOR,
    PipelineResult,
    _evaluate,
    exit_code,
    run_pipeline,
    search_code,
    write_verdict_stream,
)
from qsdesign.search import CandidateSet, Outcome, SearchConfig, Verdict

HEADER = {"record": "header", "tool": "qsdesign"}


def stream_text(result: PipelineResult) -> str:
    stream = io.StringIO()
    write_verdict_stream(HEADER, result, stream)
    return stream.getvalue()


def test_bordered_fano_run(bordered_fano, fano_search_config):
    result = run_pipeline([("fano", bordered_fano)], fano_search_config)
    # the 28 triples inside complements of lines lie in weight-4 words
    assert len(result.verdicts) == comb(10, 3) - 28
    survivors = [v for v in result.verdicts if v.outcome == Outcome.SURVIVOR]
    assert len(survivors) == 1
    assert survivors[0].T == (8, 9, 10)
    assert survivors[0].survivor_blocks == [[1, 2, 3]]
    assert survivors[0].witness == {"base_pair": [1, 2]}
    assert result.verdicts[-1] is survivors[0]
    assert all(
        v.outcome == Outcome.EXCLUDED_STAGE1 for v in result.verdicts if v is not survivors[0]
    )
    assert exit_code(result) == EXIT_SURVIVOR


def test_summary(bordered_fano, fano_search_config):
    result = run_pipeline([("fano", bordered_fano)], fano_search_config)
    summary = result.summary()
    assert summary["record"] == "summary"
    assert summary["codes"] == 1
    assert summary["survivors"] == 1
    assert summary["codes_needing_stage2"] == 1
    assert summary["codes_excluded_at_stage1"] == 0
    assert summary["outcomes"]["excluded_stage1"] == len(result.verdicts) - 1


def test_triple_limit(bordered_fano, fano_search_config):
    config = fano_search_config.model_copy(update={"triple_limit": 5})
    result = run_pipeline([("fano", bordered_fano)], config)
    assert len(result.verdicts) == 5
    assert [v.T for v in result.verdicts] == sorted(v.T for v in result.verdicts)
    assert exit_code(result) == EXIT_OK


def test_code_without_admissible_triples(e8, fano_search_config):
    result = run_pipeline([("e8", e8)], fano_search_config)
    assert result.verdicts == []
    assert result.codes_without_triples == ["e8"]
    assert result.summary()["codes_excluded_at_stage1"] == 1
    assert exit_code(result) == EXIT_OK


def test_failing_code_becomes_error_verdict(e8):
    # the default excluded weight 8 exceeds the minimum weight of e8
    result = run_pipeline([("e8", e8)])
    assert len(result.verdicts) == 1
    verdict = result.verdicts[0]
    assert verdict.outcome == Outcome.ERROR
    assert verdict.T is None
    assert verdict.error.startswith("PreconditionError:")
    assert exit_code(result) == EXIT_ERROR


def test_overflow_becomes_error_verdict():
    config = SearchConfig(
        clique_size=2,
        adjacent_intersection=3,
        compatible_intersections={1, 3},
        candidate_weight=6,
        clique_cap=2,
    )
    blocks = tuple(mask_from_support(line) for line in FANO_LINES * 3)
    verdict = _evaluate(CandidateSet("fano3", 10, (8, 9, 10), blocks), config)
    assert verdict.outcome == Outcome.ERROR
    assert verdict.T == (8, 9, 10)
    assert verdict.stage == 2
    assert verdict.error.startswith("Stage2OverflowError:")


def test_search_code_keeps_triple_order(bordered_fano, fano_search_config):
    triples = [(8, 9, 10), (1, 2, 3)]
    verdicts = search_code("fano", bordered_fano, triples, fano_search_config)
    assert [v.T for v in verdicts] == triples
    assert [v.outcome for v in verdicts] == [Outcome.SURVIVOR, Outcome.EXCLUDED_STAGE1]


def test_worker_count_does_not_change_the_stream(bordered_fano, fano_search_config):
    codes = [("a", bordered_fano), ("b", bordered_fano)]
    serial = run_pipeline(codes, fano_search_config, workers=1)
    parallel = run_pipeline(codes, fano_search_config, workers=2)
    assert stream_text(serial) == stream_text(parallel)


def test_permuted_code_moves_the_survivor(bordered_fano, fano_search_config):
    reverse = list(range(10, 0, -1))
    permuted = apply_permutation(bordered_fano, reverse)
    original = run_pipeline([("fano", bordered_fano)], fano_search_config)
    moved = run_pipeline([("fano", permuted)], fano_search_config)
    survivors = [v for v in moved.verdicts if v.outcome == Outcome.SURVIVOR]
    assert [v.T for v in survivors] == [(1, 2, 3)]
    assert original.summary()["outcomes"] == moved.summary()["outcomes"]


def test_exit_code_precedence():
    error = Verdict(code_id="a", outcome=Outcome.ERROR, error="x")
    survivor = Verdict(code_id="a", T=(1, 2, 3), outcome=Outcome.SURVIVOR, witness={"base_pair": [4, 5]})
    assert exit_code(PipelineResult()) == EXIT_OK
    assert exit_code(PipelineResult(verdicts=[error])) == EXIT_ERROR
    assert exit_code(PipelineResult(verdicts=[error, survivor])) == EXIT_SURVIVOR


def test_verdict_stream(bordered_fano, fano_search_config):
    config = fano_search_config.model_copy(update={"triple_limit": 3})
    result = run_pipeline([("fano", bordered_fano)], config)
    stream = io.StringIO()
    write_verdict_stream({"record": "header", "tool": "qsdesign"}, result, stream)
    lines = [json.loads(line) for line in stream.getvalue().splitlines()]
    assert lines[0]["record"] == "header"
    assert [line["record"] for line in lines[1:-1]] == ["verdict"] * 3
    assert lines[-1]["record"] == "summary"
    assert lines[1]["code_id"] == "fano"
    assert ": " not in stream.getvalue().splitlines()[1]


def test_zero_code_has_no_candidates():
    result = run_pipeline([("zero", LinearCode.zero(8))], SearchConfig(excluded_weight=4))
    assert len(result.verdicts) == comb(8, 3)
    assert all(v.outcome == Outcome.EXCLUDED_STAGE1 for v in result.verdicts)


def test_stage_two_errors_count_as_needing_stage2():
    overflow = Verdict(code_id="a", T=(1, 2, 3), outcome=Outcome.ERROR, stage=2, error="x")
    early = Verdict(code_id="b", outcome=Outcome.ERROR, error="y")
    summary = PipelineResult(verdicts=[overflow, early], codes=["a", "b"]).summary()
    assert summary["codes_needing_stage2"] == 1
    assert summary["codes_excluded_at_stage1"] == 0


def test_zero_triple_limit_is_not_a_missing_triple(bordered_fano, fano_search_config):
    config = fano_search_config.model_copy(update={"triple_limit": 0})
    result = run_pipeline([("fano", bordered_fano)], config)
    assert result.verdicts == []
    assert result.codes_without_triples == []
    summary = result.summary()
    assert summary["codes_excluded_at_stage1"] == 0
    assert summary["codes_without_admissible_triples"] == []


@pytest.mark.slow
def test_desk_run_on_extremal_codes(extremal_codes):
    codes = [(f"{i:05d}", code) for i, code in enumerate(extremal_codes)]
    serial = run_pipeline(codes, workers=1)
    summary = serial.summary()
    assert summary["codes"] == len(extremal_codes)
    assert summary["survivors"] == 0
    assert summary["errors"] == 0
    assert {v.outcome for v in serial.verdicts} <= {Outcome.EXCLUDED_STAGE1, Outcome.EXCLUDED_STAGE2}
    parallel = run_pipeline(codes, workers=2)
    assert stream_text(serial) == stream_text(parallel)


@pytest.mark.slow
def test_permuted_extremal_code_relabels_verdicts(extremal_codes, rng):
    code = extremal_codes[0]
    perm = [int(p) for p in rng.permutation(np.arange(1, code.length + 1))]
    original = run_pipeline([("c", code)])
    moved = run_pipeline([("c", apply_permutation(code, perm))])

    def keyed(verdicts):
        return {v.T: (v.outcome, v.clique_count) for v in verdicts}

    expected = {
        permute_points(T, perm, code.length): decided for T, decided in keyed(original.verdicts).items()
    }
    assert keyed(moved.verdicts) == expected
    assert original.summary()["outcomes"] == moved.summary()["outcomes"]
