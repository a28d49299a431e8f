"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, frames, normalize, aggregate,
compare, generate, evaluate) plus ``run`` for the whole pipeline. All stages
are deterministic; there is no randomness anywhere.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .aggregate import (
    ALL_SETTINGS_IDS,
    Settings,
    aggregate_corpus,
    compute_all_settings,
    stats_table,
    write_frame_summaries,
    write_stats_csv,
    write_valences_tsv,
)
from .aggregate import read_valences_tsv
from .compare import (
    MatchLevel,
    MatchMode,
    frame_set_report,
    intersect,
    pattern_set_report,
    read_shared_tsv,
    write_frame_report_csv,
    write_pattern_report_csv,
    write_shared_tsv,
)
from .coverage import coverage, write_coverage_csv
from .frames import load_frame_index
from .grammar import (
    derive_grammar,
    emit_abstract_syntax,
    file_digest,
    noncore_categories,
)
from .ingest import (
    Dialect,
    parse_corpus,
    read_sentences_jsonl,
    sentence_to_dict,
    write_sentences_jsonl,
)
from .normalize import (
    load_voice_rules,
    normalize_corpus,
    read_patterns_tsv,
    write_patterns_tsv,
    write_skips_tsv,
)
from .pipeline import PipelineConfig, SideConfig, StageError, run_pipeline

logger = logging.getLogger(__name__)


def _error_record(stage: str, error: Exception) -> str:
    return json.dumps(
        {"stage": stage, "error": type(error).__name__, "message": str(error)},
        ensure_ascii=False,
        sort_keys=True,
    )


def _load_merged_index(paths: list[Path]):
    index = load_frame_index(paths[0])
    for path in paths[1:]:
        index = index.merged(load_frame_index(path))
    return index


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args: argparse.Namespace) -> int:
    dialect = Dialect(args.dialect)
    records = []
    for path in args.paths:
        for s in parse_corpus(Path(path), dialect):
            records.append((str(path), s))
    records.sort(key=lambda pair: (pair[0], pair[1].sentence_id))
    sentences = [s for _, s in records]
    if args.out:
        write_sentences_jsonl(sentences, Path(args.out))
    else:
        for s in sentences:
            sys.stdout.write(json.dumps(sentence_to_dict(s), ensure_ascii=False, sort_keys=True))
            sys.stdout.write("\n")
    logger.info("ingested %d sentences", len(sentences))
    return 0


def cmd_frames(args: argparse.Namespace) -> int:
    index = load_frame_index(Path(args.validate))
    n_core = sum(len(d.core_fes) for d in index.defs.values())
    n_noncore = sum(len(d.noncore_fes) for d in index.defs.values())
    print(f"{len(index.defs)} frames, {n_core} core FEs, {n_noncore} non-core FEs")
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    if not args.jsonl and not args.dialect:
        raise ValueError("--dialect is required when reading corpus XML")
    index = _load_merged_index([Path(p) for p in args.frames])
    rules = load_voice_rules(Path(args.voice_rules) if args.voice_rules else None)
    sentences = []
    for path in args.paths:
        if args.jsonl:
            sentences.extend(read_sentences_jsonl(Path(path)))
        else:
            sentences.extend(parse_corpus(Path(path), Dialect(args.dialect)))
    native = args.types == "native"
    skip_unconsidered = True if not native else args.skip_unconsidered
    patterns, skips = normalize_corpus(
        sentences, index, rules, skip_unconsidered=skip_unconsidered
    )
    write_patterns_tsv(patterns, Path(args.out), native=native)
    if args.skips:
        write_skips_tsv(skips, Path(args.skips))
    logger.info("normalized %d patterns, %d skips", len(patterns), len(skips))
    return 0


def cmd_aggregate(args: argparse.Namespace) -> int:
    in_path = Path(args.in_path)
    is_jsonl = args.in_format == "jsonl" or (
        args.in_format == "auto" and in_path.suffix == ".jsonl"
    )
    if is_jsonl:
        if not args.frames:
            raise ValueError("aggregating from sentences requires --frames")
        index = _load_merged_index([Path(p) for p in args.frames])
        rules = load_voice_rules(Path(args.voice_rules) if args.voice_rules else None)
        sentences = read_sentences_jsonl(in_path)
        patterns, _ = normalize_corpus(sentences, index, rules, skip_unconsidered=False)
    else:
        patterns = read_patterns_tsv(in_path)

    if args.stats_out:
        if not is_jsonl:
            raise ValueError("--stats-out needs the corpus serialization (.jsonl input)")
        per_settings = compute_all_settings(patterns)
        write_stats_csv(stats_table(per_settings), Path(args.stats_out))

    settings = Settings.from_id(args.settings)
    if not settings.generalize_types and not is_jsonl:
        raise ValueError(
            f"settings {settings.id} use corpus-native types; "
            "provide the corpus serialization (.jsonl) as input"
        )
    valences, filtered, _ = aggregate_corpus(patterns, settings)
    if args.out:
        write_valences_tsv(valences, Path(args.out))
    if args.out_patterns:
        write_patterns_tsv(filtered, Path(args.out_patterns))
    if args.summary_dir:
        write_frame_summaries(valences, Path(args.summary_dir))
    logger.info("aggregated %d valence patterns under %s", len(valences), settings.id)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    left = read_valences_tsv(Path(args.left))
    right = read_valences_tsv(Path(args.right))
    level = MatchLevel(args.level)
    mode = MatchMode(args.mode)
    shared = intersect(left, right, level, mode)
    write_shared_tsv(shared, Path(args.out))
    if args.report:
        write_pattern_report_csv([pattern_set_report(shared)], Path(args.report))
    if args.frame_report:
        write_frame_report_csv(frame_set_report(left, right), Path(args.frame_report))
    logger.info(
        "shared set: %d final patterns over %d frames",
        len(shared.patterns), len(shared.final_frames()),
    )
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    shared = read_shared_tsv(Path(args.shared))
    lu_patterns = {
        args.left_name: read_patterns_tsv(Path(args.lu_left)),
        args.right_name: read_patterns_tsv(Path(args.lu_right)),
    }
    digests = [
        ("shared", file_digest(Path(args.shared))),
        (args.left_name, file_digest(Path(args.lu_left))),
        (args.right_name, file_digest(Path(args.lu_right))),
    ]
    extra = []
    if args.include_noncore:
        for patterns in lu_patterns.values():
            extra.extend(noncore_categories(patterns))
    grammar = derive_grammar(
        shared,
        lu_patterns,
        settings_desc=f"{shared.level.value} {shared.mode.value}",
        input_digests=digests,
        extra_categories=extra,
    )
    emit_abstract_syntax(grammar, Path(args.out_dir))
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    shared = read_shared_tsv(Path(args.final))
    if args.level and shared.level.value != args.level:
        raise ValueError(
            f"shared set was built at level {shared.level.value!r}, not {args.level!r}"
        )
    if args.mode and shared.mode.value != args.mode:
        raise ValueError(
            f"shared set was built in mode {shared.mode.value!r}, not {args.mode!r}"
        )
    examples = read_patterns_tsv(Path(args.examples))
    report = coverage(shared, examples)
    write_coverage_csv([(args.side, report)], Path(args.out))
    return 0


def _parse_settings_pair(text: str) -> tuple[str, str]:
    if ":" in text:
        left, right = text.split(":", 1)
    else:
        left = right = text
    for sid in (left, right):
        if sid not in ALL_SETTINGS_IDS:
            raise argparse.ArgumentTypeError(
                f"unknown settings id {sid!r}; expected one of {ALL_SETTINGS_IDS}"
            )
    return left, right


def cmd_run(args: argparse.Namespace) -> int:
    settings_left, settings_right = args.settings
    frames_left = args.frames_left or args.frames
    frames_right = args.frames_right or args.frames
    if not frames_left or not frames_right:
        raise ValueError("run requires --frames (or --frames-left/--frames-right)")
    config = PipelineConfig(
        left=SideConfig(
            name=args.left_name,
            dialect=Dialect(args.left_dialect),
            corpus_paths=[Path(p) for p in args.left],
            frame_index_paths=[Path(p) for p in frames_left],
            settings_id=settings_left,
        ),
        right=SideConfig(
            name=args.right_name,
            dialect=Dialect(args.right_dialect),
            corpus_paths=[Path(p) for p in args.right],
            frame_index_paths=[Path(p) for p in frames_right],
            settings_id=settings_right,
        ),
        out_dir=Path(args.out_dir),
        grammar_level=MatchLevel(args.level),
        grammar_mode=MatchMode(args.mode),
        voice_rules_path=Path(args.voice_rules) if args.voice_rules else None,
    )
    run_pipeline(config)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valgram",
        description=(
            "Extract shared verb valence patterns from two FrameNet-annotated "
            "corpora and generate the abstract syntax of a frame-semantic grammar."
        ),
    )
    parser.add_argument("--version", action="version", version=f"valgram {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse corpus XML into the internal serialization")
    p.add_argument("--dialect", required=True, choices=[d.value for d in Dialect])
    p.add_argument("--out", help="output JSON-lines file (default: stdout)")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("frames", help="validate a frame index file")
    p.add_argument("--validate", required=True, metavar="FILE")
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("normalize", help="convert corpus examples into sentence patterns")
    p.add_argument("--dialect", choices=[d.value for d in Dialect])
    p.add_argument("--frames", required=True, nargs="+", metavar="INDEX_TSV",
                   help="frame index file(s); later files take precedence per frame")
    p.add_argument("--voice-rules", metavar="JSON")
    p.add_argument("--types", choices=["rgl", "native"], default="rgl")
    p.add_argument("--skip-unconsidered", action="store_true",
                   help="with --types native, still skip unmappable examples")
    p.add_argument("--jsonl", action="store_true", help="inputs are ingested JSON-lines")
    p.add_argument("--out", required=True)
    p.add_argument("--skips", help="write skipped sentences with reasons")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("aggregate", help="group sentence patterns into valence patterns")
    p.add_argument("--settings", required=True, choices=ALL_SETTINGS_IDS)
    p.add_argument("--in", dest="in_path", required=True,
                   help="patterns TSV, or sentences JSONL for native-type settings")
    p.add_argument("--in-format", choices=["auto", "tsv", "jsonl"], default="auto")
    p.add_argument("--frames", nargs="+", help="frame index (JSONL input only)")
    p.add_argument("--voice-rules")
    p.add_argument("--out", help="valence TSV output")
    p.add_argument("--out-patterns", help="settings-filtered sentence patterns TSV")
    p.add_argument("--summary-dir", help="per-frame valence summaries")
    p.add_argument("--stats-out", help="statistics table over all settings (JSONL input only)")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("compare", help="intersect two valence pattern sets")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--level", required=True, choices=[l.value for l in MatchLevel])
    p.add_argument("--mode", required=True, choices=[m.value for m in MatchMode])
    p.add_argument("--out", required=True, help="shared pattern set TSV")
    p.add_argument("--report", help="pattern set report CSV")
    p.add_argument("--frame-report", help="frame set report CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate", help="emit the abstract syntax modules")
    p.add_argument("--shared", required=True)
    p.add_argument("--lu-left", required=True, help="left-side sentence patterns TSV")
    p.add_argument("--lu-right", required=True, help="right-side sentence patterns TSV")
    p.add_argument("--left-name", default="bfn")
    p.add_argument("--right-name", default="swefn")
    p.add_argument("--include-noncore", action="store_true",
                   help="also declare Opt_ categories attested in the patterns")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="coverage of examples by a final pattern set")
    p.add_argument("--final", required=True, help="shared pattern set TSV")
    p.add_argument("--examples", required=True, help="sentence patterns TSV")
    p.add_argument("--level", choices=[l.value for l in MatchLevel])
    p.add_argument("--mode", choices=[m.value for m in MatchMode])
    p.add_argument("--side", default="corpus", help="label for the report rows")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="run the whole pipeline")
    p.add_argument("--left", required=True, nargs="+", metavar="CORPUS")
    p.add_argument("--left-dialect", required=True, choices=[d.value for d in Dialect])
    p.add_argument("--left-name", default="bfn")
    p.add_argument("--right", required=True, nargs="+", metavar="CORPUS")
    p.add_argument("--right-dialect", required=True, choices=[d.value for d in Dialect])
    p.add_argument("--right-name", default="swefn")
    p.add_argument("--frames", nargs="+", help="frame index for both sides")
    p.add_argument("--frames-left", nargs="+")
    p.add_argument("--frames-right", nargs="+")
    p.add_argument("--settings", type=_parse_settings_pair, default=("2.B", "2.B"),
                   help="settings id, or LEFT:RIGHT pair (default 2.B)")
    p.add_argument("--level", choices=[l.value for l in MatchLevel], default="semsyn",
                   help="match level feeding the grammar")
    p.add_argument("--mode", choices=[m.value for m in MatchMode], default="fuzzy",
                   help="match mode feeding the grammar")
    p.add_argument("--voice-rules")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("VALGRAM_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(_error_record(exc.stage, exc.error), file=sys.stderr)
        return 1
    except Exception as exc:  # argparse handles usage errors with exit 2
        print(_error_record(args.command, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
