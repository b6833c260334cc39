"""Command-line entry point: info, sample, search, design and fetch."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence

from pydantic import ValidationError

from . import __version__
from .codes import (
    is_doubly_even,
    is_self_dual,
    minimum_weight,
    weight_enumerator,
)
from .config import RunConfig, Settings, default_workers, get_settings
from .construct import WalkConfig, load_code, load_code_directory, sample_codes, save_code_directory
from .designs import (
    IncidenceStructure,
    intersection_numbers,
    is_quasi_symmetric,
    load_design,
    pair_balance,
    params_from,
)
from .errors import EnumerationBudgetError, QSDesignError, UndefinedMinimumError
from .f2core import DEFAULT_ENUMERATION_BUDGET
from .obstruction import border_theorem_check, check_C3perp_bound, check_dual_min_weight_bounds
from .pipeline import EXIT_ERROR, EXIT_OK, dump_record, exit_code, run_pipeline, write_verdict_stream
from .search import SearchConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _fmt_set(values: Sequence[int]) -> str:
    return "{" + ", ".join(str(v) for v in values) + "}"


def _prepare_output_file(path: Path) -> Path:
    """Create the parent directory and make sure ``path`` is writable before any work starts."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.is_dir():
        raise IsADirectoryError(f"Report path {path} is a directory")
    path.touch()
    return path


def _write_report(path: Path, records: Iterable[dict]) -> None:
    with path.open("w", encoding="utf-8") as stream:
        for record in records:
            stream.write(dump_record(record) + "\n")


# =============================================================================
# info
# =============================================================================


def cmd_info(args: argparse.Namespace, settings: Settings) -> int:
    run = RunConfig(command="info", enumeration_budget=args.budget, parameters={"code": str(args.code)})
    out = _prepare_output_file(Path(args.out)) if args.out else None

    code = load_code(args.code)
    self_dual, doubly_even = is_self_dual(code), is_doubly_even(code)
    flags = [
        "self-dual" if self_dual else "not-self-dual",
        "doubly-even" if doubly_even else "not-doubly-even",
    ]
    try:
        d = minimum_weight(code, args.budget)
    except UndefinedMinimumError:
        d = None
    print(f"n={code.length} k={code.dimension} {' '.join(flags)} d={'-' if d is None else d}")
    try:
        counts = weight_enumerator(code, args.budget)
        print("A: " + " ".join(f"A{w}={a}" for w, a in enumerate(counts) if a))
    except EnumerationBudgetError as e:
        counts = None
        print(f"weight enumerator: {e}")

    if out is not None:
        record = {
            "record": "code",
            "source": str(args.code),
            "length": code.length,
            "dimension": code.dimension,
            "self_dual": self_dual,
            "doubly_even": doubly_even,
            "minimum_weight": d,
            "weight_enumerator": counts,
        }
        _write_report(out, [run.header(), record])
        print(f"Report -> {out}")
    return EXIT_OK


# =============================================================================
# sample
# =============================================================================


def cmd_sample(args: argparse.Namespace, settings: Settings) -> int:
    walk = WalkConfig(
        seed=args.seed,
        steps=args.steps,
        target_length=args.length,
        max_restarts=args.max_restarts,
        count=args.count,
    )
    run = RunConfig(
        command="sample",
        rng_seed=args.seed,
        enumeration_budget=args.budget,
        parameters=walk.model_dump(exclude={"seed"}),
    )
    out_dir = Path(args.out or settings.codes_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = _prepare_output_file(out_dir / "manifest.json")

    codes = sample_codes(walk, args.budget)
    paths = save_code_directory(codes, out_dir)
    manifest = run.header() | {"files": [p.name for p in paths]}
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"Wrote {len(paths)} codes of length {walk.target_length} to {out_dir} (seed {walk.seed})")
    return EXIT_OK


# =============================================================================
# search
# =============================================================================


def _archive(database_url: str, result, header: dict) -> None:
    from .archive import record_run
    from .database import create_db_engine

    engine = create_db_engine(database_url)
    try:
        run_id = record_run(engine, result, header)
    finally:
        engine.dispose()
    print(f"Archived as run {run_id}")


def cmd_search(args: argparse.Namespace, settings: Settings) -> int:
    search = SearchConfig(
        clique_cap=args.clique_cap,
        triple_limit=args.triple_limit,
        record_timings=args.timings,
    )
    run = RunConfig(
        command="search",
        rng_seed=args.seed,
        workers=args.workers,
        enumeration_budget=args.budget,
        parameters={
            "clique_size": search.clique_size,
            "adjacent_intersection": search.adjacent_intersection,
            "compatible_intersections": _fmt_set(sorted(search.compatible_intersections)),
            "candidate_weight": search.candidate_weight,
            "excluded_weight": search.excluded_weight,
            "clique_cap": search.clique_cap,
            "triple_limit": search.triple_limit,
            "record_timings": search.record_timings,
        },
    )
    code_dir = Path(args.codes or settings.codes_dir)
    if not code_dir.is_dir():
        logger.error(f"Code directory {code_dir} does not exist")
        return EXIT_ERROR

    header = run.header()
    out = _prepare_output_file(
        Path(args.out) if args.out else settings.reports_dir / f"verdicts-{header['config_hash'][:12]}.jsonl"
    )
    database_url = args.db or settings.database_url
    if database_url:
        from .database import upgrade_schema

        upgrade_schema(database_url)

    codes, failures = load_code_directory(code_dir)
    logger.info(f"Loaded {len(codes)} codes from {code_dir} ({len(failures)} skipped)")
    result = run_pipeline(codes, search, workers=run.workers, budget=run.enumeration_budget)
    result.failed_inputs.extend(failures)

    with out.open("w", encoding="utf-8") as stream:
        write_verdict_stream(header, result, stream)

    summary = result.summary()
    outcomes = summary["outcomes"]
    print(f"{summary['codes']} codes, {summary['verdicts']} verdicts -> {out}")
    print(
        f"excluded at stage 1: {outcomes['excluded_stage1']}, "
        f"at stage 2: {outcomes['excluded_stage2']}, "
        f"survivors: {outcomes['survivor']}, errors: {outcomes['error']}"
    )
    print(
        f"codes excluded at stage 1: {summary['codes_excluded_at_stage1']}, "
        f"needing stage 2: {summary['codes_needing_stage2']}"
    )

    if database_url:
        _archive(database_url, result, header)
    return exit_code(result)


# =============================================================================
# design
# =============================================================================


def _describe(design: IncidenceStructure) -> tuple[str, int | None]:
    lam = pair_balance(design)
    values = intersection_numbers(design) if design.b >= 2 else []
    if lam is None or design.k is None:
        return f"not a 2-design, v={design.v}, b={design.b}, intersections {_fmt_set(values)}", None
    params = params_from(design.v, design.k, lam)
    return f"{params}, r={params.r}, b={params.b}, intersections {_fmt_set(values)}", lam


def cmd_design(args: argparse.Namespace, settings: Settings) -> int:
    run = RunConfig(command="design", enumeration_budget=args.budget, parameters={"design": str(args.design)})
    out = _prepare_output_file(Path(args.out)) if args.out else None

    design = load_design(args.design)
    line, lam = _describe(design)
    record = {
        "record": "design",
        "source": str(args.design),
        "v": design.v,
        "b": design.b,
        "k": design.k,
        "lambda": lam,
        "intersections": intersection_numbers(design) if design.b >= 2 else [],
        "quasi_symmetric": None,
    }
    records = [run.header(), record]
    if lam is None:
        print(line)
    else:
        params = params_from(design.v, design.k, lam)
        qs = is_quasi_symmetric(design)
        record["quasi_symmetric"] = list(qs) if qs else None
        print(f"{line}, " + (f"quasi-symmetric, x={qs[0]} y={qs[1]}" if qs else "not quasi-symmetric"))

        bounds = check_dual_min_weight_bounds(design, params, args.budget)
        print(
            f"d(C1^⊥)={bounds.c1_dual_min_weight} vs (r+λ)/λ={bounds.c1_bound}: "
            f"{'holds' if bounds.c1_holds else 'VIOLATED'}"
        )
        print(
            f"d(C2^⊥)={bounds.c2_dual_min_weight} vs (b+r)/r={bounds.c2_bound}: "
            f"{'holds' if bounds.c2_holds else 'VIOLATED'}"
        )
        c3 = check_C3perp_bound(design, params, args.budget)
        print(
            f"C3^⊥ outside border pairs: min weight {c3.min_weight} vs {c3.bound}: "
            f"{'holds' if c3.holds else 'VIOLATED'}"
        )
        records += [
            {"record": "dual_bounds"} | bounds.as_dict(),
            {"record": "bordered_dual_bound"} | c3.as_dict(),
        ]
        if qs:
            report = border_theorem_check(params, *qs)
            print(
                f"border triple: preconditions {'met' if report.preconditions else 'not met'}, "
                f"counting {'feasible' if report.counting_feasible else 'infeasible'}"
            )
            records.append({"record": "border_theorem"} | report.as_dict())

    if out is not None:
        _write_report(out, records)
        print(f"Report -> {out}")
    return EXIT_OK


# =============================================================================
# fetch
# =============================================================================


def cmd_fetch(args: argparse.Namespace, settings: Settings) -> int:
    from .ingest import fetch_code_files

    out_dir = Path(args.out or settings.codes_dir)
    written, failures = fetch_code_files(args.urls, out_dir)
    print(f"Fetched {len(written)} of {len(args.urls)} code files into {out_dir}")
    return EXIT_ERROR if failures else EXIT_OK


COMMAND_HANDLERS: dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "info": cmd_info,
    "sample": cmd_sample,
    "search": cmd_search,
    "design": cmd_design,
    "fetch": cmd_fetch,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsdesign",
        description="Code-based non-existence search for quasi-symmetric 2-designs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_ENUMERATION_BUDGET,
        help="largest dimension enumerated in full (default %(default)s)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", help="parameters and weight enumerator of a code file")
    info.add_argument("code", help="generator matrix file")
    info.add_argument("--out", help="JSON-lines report path")

    sample = sub.add_parser("sample", help="sample doubly even self-dual codes by neighbor walks")
    sample.add_argument("--seed", type=int, default=1)
    sample.add_argument("--steps", type=int, default=200)
    sample.add_argument("--max-restarts", type=int, default=5)
    sample.add_argument("--count", type=int, default=25)
    sample.add_argument("--length", type=int, default=40)
    sample.add_argument("--out", help="output directory (default: codes_dir setting)")

    search = sub.add_parser("search", help="run the two-stage search over a code directory")
    search.add_argument("--codes", help="directory of code files (default: codes_dir setting)")
    search.add_argument("--out", help="verdict stream path (default: under reports_dir)")
    search.add_argument("--seed", type=int, default=1)
    search.add_argument("--workers", type=int, default=default_workers())
    search.add_argument("--clique-cap", type=int, default=10**6)
    search.add_argument("--triple-limit", type=int, default=None)
    search.add_argument("--timings", action="store_true", help="record elapsed_ms per verdict")
    search.add_argument("--db", help="archive database URL (default: database_url setting)")

    design = sub.add_parser("design", help="2-design parameters and weight-bound checks")
    design.add_argument("--design", required=True, help="design file")
    design.add_argument("--out", help="JSON-lines report path")

    fetch = sub.add_parser("fetch", help="download code files")
    fetch.add_argument("urls", nargs="+")
    fetch.add_argument("--out", help="output directory (default: codes_dir setting)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as e:
        _configure_logging("INFO")
        logger.error(f"Invalid environment settings:\n{e}")
        return EXIT_ERROR
    _configure_logging(settings.log_level)

    handler = COMMAND_HANDLERS[args.command]
    try:
        return handler(args, settings)
    except ValidationError as e:
        logger.error(f"Invalid {args.command} options:\n{e}")
        return EXIT_ERROR
    except (QSDesignError, OSError) as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return EXIT_ERROR
