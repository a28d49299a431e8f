#!/usr/bin/env python3
"""Run the whole pipeline on user-supplied full corpora and print the
statistics, comparison and coverage tables in a readable layout.

Intended for licensed full-size corpora that cannot be bundled with the
repository. Voice detection and the subclause test are heuristic and
configurable (see --voice-rules), so pattern counts on real data depend on
those rules; the skip files written next to the tables say exactly what was
excluded and why.

Example:

    python scripts/full_corpus_tables.py \
        --left corpora/bfn/*.xml --left-dialect bfn \
        --right corpora/swefn/*.xml --right-dialect swefn \
        --frames frames.tsv --out-dir tables/
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from valgram.cli import main as valgram_main  # noqa: E402


def _print_csv(path: Path, title: str) -> None:
    print(f"\n== {title} ({path.name})")
    with path.open() as f:
        for row in csv.reader(f):
            print("  " + "  ".join(f"{cell:>10}" for cell in row))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--left", nargs="+", required=True)
    ap.add_argument("--left-dialect", required=True, choices=["bfn", "swefn"])
    ap.add_argument("--left-name", default="bfn")
    ap.add_argument("--right", nargs="+", required=True)
    ap.add_argument("--right-dialect", required=True, choices=["bfn", "swefn"])
    ap.add_argument("--right-name", default="swefn")
    ap.add_argument("--frames", nargs="+", required=True)
    ap.add_argument("--settings", default="2.B", help="settings id or LEFT:RIGHT pair")
    ap.add_argument("--voice-rules")
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args()

    run_args = [
        "run",
        "--left", *args.left, "--left-dialect", args.left_dialect,
        "--left-name", args.left_name,
        "--right", *args.right, "--right-dialect", args.right_dialect,
        "--right-name", args.right_name,
        "--frames", *args.frames,
        "--settings", args.settings,
        "--out-dir", args.out_dir,
    ]
    if args.voice_rules:
        run_args += ["--voice-rules", args.voice_rules]
    status = valgram_main(run_args)
    if status != 0:
        return status

    out = Path(args.out_dir)
    _print_csv(out / f"{args.left_name}.stats.csv", f"extraction statistics: {args.left_name}")
    _print_csv(out / f"{args.right_name}.stats.csv", f"extraction statistics: {args.right_name}")
    _print_csv(out / "frame-report.csv", "frame set comparison")
    _print_csv(out / "pattern-report.csv", "valence pattern comparison")
    _print_csv(out / "coverage.csv", "example coverage by the final shared sets")
    skip_counts = []
    for name in (args.left_name, args.right_name):
        n = sum(1 for _ in (out / f"{name}.skips.tsv").open())
        skip_counts.append(f"{name}: {n} skipped examples ({name}.skips.tsv)")
    print("\nSkips are heuristic-dependent; review before comparing counts:")
    for line in skip_counts:
        print("  " + line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
