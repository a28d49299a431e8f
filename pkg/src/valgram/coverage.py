"""Coverage of corpus examples by a final shared pattern set.

An example counts as covered when its frame belongs to the final set's frames
and some final pattern subsumes its reduced pattern. Subsumption is used even
when the final set was built by exact matching, because a frame function
accepts empty phrases for unexpressed FEs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .compare import MatchLevel, SharedPatternSet
from .frames import Coreness
from .normalize import SentencePattern


@dataclass(frozen=True)
class CoverageReport:
    level: str
    mode: str
    covered: int
    in_shared_frames: int
    total: int

    @property
    def pct_of_shared(self) -> float:
        return self.covered / self.in_shared_frames if self.in_shared_frames else 0.0

    @property
    def pct_of_all(self) -> float:
        return self.covered / self.total if self.total else 0.0

    @property
    def frame_level_covered(self) -> int:
        # An example passes the frame-level check as soon as its frame is in
        # the final set, regardless of its pattern.
        return self.in_shared_frames

    @property
    def frame_level_pct(self) -> float:
        return self.in_shared_frames / self.total if self.total else 0.0


def reduce_example(p: SentencePattern, level: MatchLevel) -> frozenset[str]:
    """Reduced pattern of one example: non-core FEs dropped, word order and
    prepositions ignored, repeats collapsed by the set representation."""
    core = [r for r in p.realizations if r.coreness is not Coreness.NONCORE]
    if level is MatchLevel.SEMANTIC:
        return frozenset(r.fe_name for r in core)
    return frozenset(
        f"{r.fe_name}_{r.rgl_type.value}" for r in core if r.rgl_type is not None
    )


def coverage(final: SharedPatternSet, examples: Sequence[SentencePattern]) -> CoverageReport:
    level = final.level
    frames = final.final_frames()
    by_group: dict[tuple[str, str | None], list[frozenset[str]]] = {}
    for sp in final.patterns:
        by_group.setdefault((sp.frame, sp.voice), []).append(sp.fes)

    covered = 0
    in_shared = 0
    for p in examples:
        if p.frame not in frames:
            continue
        in_shared += 1
        voice = p.voice.value if level is MatchLevel.SEMANTIC_SYNTACTIC else None
        reduced = reduce_example(p, level)
        candidates = by_group.get((p.frame, voice), ())
        if any(reduced <= fes for fes in candidates):
            covered += 1

    return CoverageReport(
        level=level.value,
        mode=final.mode.value,
        covered=covered,
        in_shared_frames=in_shared,
        total=len(examples),
    )


COVERAGE_COLUMNS = [
    "side", "level", "mode",
    "covered", "in_shared_frames", "total",
    "pct_of_shared", "pct_of_all",
    "frame_level_covered", "frame_level_pct",
]


def write_coverage_csv(rows: Iterable[tuple[str, CoverageReport]], path: Path) -> None:
    """Rows are (side label, report) pairs."""
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(COVERAGE_COLUMNS)
        for side, r in rows:
            writer.writerow([
                side, r.level, r.mode,
                r.covered, r.in_shared_frames, r.total,
                f"{r.pct_of_shared * 100:.1f}", f"{r.pct_of_all * 100:.1f}",
                r.frame_level_covered, f"{r.frame_level_pct * 100:.1f}",
            ])
