"""Batch search over codes and admissible triples, and the verdict stream.

Tasks are independent; results are merged in (code, T) order so the stream
is the same for any worker count.
"""

import json
import logging
import multiprocessing as mp
from collections import Counter
from contextlib import nullcontext
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import IO, Iterable, Sequence

import numpy as np

from .codes import LinearCode, codeword_masks_of_weight
from .f2core import DEFAULT_ENUMERATION_BUDGET
from .obstruction import admissible_triples
from .search import (
    CandidateSet,
    Outcome,
    SearchConfig,
    Triple,
    Verdict,
    candidates_from_words,
    evaluate_triple,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SURVIVOR = 2


@dataclass
class PipelineResult:
    verdicts: list[Verdict] = field(default_factory=list)
    codes: list[str] = field(default_factory=list)
    codes_without_triples: list[str] = field(default_factory=list)
    failed_inputs: list[tuple[str, str]] = field(default_factory=list)

    def summary(self) -> dict:
        outcomes = Counter(v.outcome.value for v in self.verdicts)
        per_code: dict[str, set[str]] = {}
        for v in self.verdicts:
            per_code.setdefault(v.code_id, set()).add(v.outcome.value)

        stage1_only = [
            code_id
            for code_id in self.codes
            if code_id not in self.codes_without_triples
            and per_code.get(code_id) == {Outcome.EXCLUDED_STAGE1.value}
        ]
        reached_stage2 = {v.code_id for v in self.verdicts if v.stage == 2}
        needing_stage2 = [code_id for code_id in self.codes if code_id in reached_stage2]
        return {
            "record": "summary",
            "codes": len(self.codes),
            "verdicts": len(self.verdicts),
            "outcomes": {o.value: outcomes.get(o.value, 0) for o in Outcome},
            "codes_without_admissible_triples": list(self.codes_without_triples),
            "codes_excluded_at_stage1": len(stage1_only) + len(self.codes_without_triples),
            "codes_needing_stage2": len(needing_stage2),
            "survivors": outcomes.get(Outcome.SURVIVOR.value, 0),
            "errors": outcomes.get(Outcome.ERROR.value, 0),
            "failed_inputs": [{"source": name, "error": error} for name, error in self.failed_inputs],
        }


def _evaluate(X: CandidateSet, config: SearchConfig) -> Verdict:
    """Worker entry point; failures become error verdicts."""
    try:
        return evaluate_triple(X, config)
    except Exception as e:
        logger.exception(f"{X.code_id} T={X.T} failed")
        return Verdict(code_id=X.code_id, T=X.T, outcome=Outcome.ERROR, error=f"{type(e).__name__}: {e}")


def _error_verdict(code_id: str, e: Exception) -> Verdict:
    return Verdict(code_id=code_id, outcome=Outcome.ERROR, error=f"{type(e).__name__}: {e}")


def candidate_sets(
    code_id: str,
    code: LinearCode,
    triples: Iterable[Triple],
    config: SearchConfig,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> list[CandidateSet]:
    """One candidate set per triple, from a single scan for candidate-weight words."""
    words = np.array(
        codeword_masks_of_weight(code, config.candidate_weight, budget=budget), dtype=np.uint64
    )
    return [candidates_from_words(code_id, code.length, T, words) for T in triples]


def _worker_pool(workers: int):
    if workers <= 1:
        return nullcontext()
    return ProcessPoolExecutor(max_workers=workers, mp_context=mp.get_context("spawn"))


def _run_tasks(
    tasks: Sequence[CandidateSet], config: SearchConfig, executor: ProcessPoolExecutor | None
) -> list[Verdict]:
    if executor is None or len(tasks) <= 1:
        return [_evaluate(X, config) for X in tasks]
    # map yields in submission order
    return list(executor.map(partial(_evaluate, config=config), tasks, chunksize=4))


def search_code(
    code_id: str,
    code: LinearCode,
    triples: Iterable[Triple],
    config: SearchConfig | None = None,
    workers: int = 1,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> list[Verdict]:
    """Verdicts for an explicit triple list, in the given order."""
    config = config or SearchConfig()
    tasks = candidate_sets(code_id, code, triples, config, budget)
    with _worker_pool(workers) as executor:
        return _run_tasks(tasks, config, executor)


def run_pipeline(
    codes: Sequence[tuple[str, LinearCode]],
    config: SearchConfig | None = None,
    workers: int = 1,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> PipelineResult:
    """Admissible triples, then stage 1 and stage 2, for every code.

    Codes are processed in the given order and triples lexicographically.
    A code that fails before its triples are known yields one error verdict
    without T.
    """
    config = config or SearchConfig()
    result = PipelineResult()
    with _worker_pool(workers) as executor:
        for code_id, code in codes:
            result.codes.append(code_id)
            try:
                admissible = admissible_triples(code, config.excluded_weight, budget).admissible
                if not admissible:
                    logger.info(f"Code {code_id}: no admissible T")
                    result.codes_without_triples.append(code_id)
                    continue
                triples = admissible[: config.triple_limit]
                tasks = candidate_sets(code_id, code, triples, config, budget)
            except Exception as e:
                logger.exception(f"Code {code_id} failed before search")
                result.verdicts.append(_error_verdict(code_id, e))
                continue

            if not tasks:
                logger.info(f"Code {code_id}: triple limit leaves none of {len(admissible)} admissible T")
                continue

            verdicts = _run_tasks(tasks, config, executor)
            result.verdicts.extend(verdicts)
            split = Counter(v.outcome.value for v in verdicts)
            logger.info(f"Code {code_id}: {len(verdicts)} triples, {dict(sorted(split.items()))}")
    return result


def exit_code(result: PipelineResult) -> int:
    outcomes = {v.outcome for v in result.verdicts}
    if Outcome.SURVIVOR in outcomes:
        return EXIT_SURVIVOR
    if Outcome.ERROR in outcomes:
        return EXIT_ERROR
    return EXIT_OK


def dump_record(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def write_verdict_stream(header: dict, result: PipelineResult, stream: IO[str]) -> None:
    """Header line, one line per verdict, summary line."""
    stream.write(dump_record(header) + "\n")
    for verdict in result.verdicts:
        stream.write(dump_record(verdict.model_dump(mode="json")) + "\n")
    stream.write(dump_record(result.summary()) + "\n")
