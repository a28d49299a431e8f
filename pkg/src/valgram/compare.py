"""Cross-framenet comparison of frame sets and valence-pattern sets.

Patterns are compared at two granularities (FE names only, or FE names plus
interlingual types with matching voice) and in two modes. Exact mode
intersects pattern keys. Fuzzy mode admits a pattern whenever some pattern on
the other side subsumes it, in either direction. In both modes the final set
then drops members subsumed by other members, leaving the maximal patterns;
the grammar built from them covers the removed ones through empty arguments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .aggregate import FeKey, ValencePattern, fe_key_token
from .frames import Coreness
from .normalize import SynFunction, parse_fe_token



class MatchLevel(str, Enum):
    SEMANTIC = "sem"
    SEMANTIC_SYNTACTIC = "semsyn"


class MatchMode(str, Enum):
    EXACT = "exact"
    FUZZY = "fuzzy"


# (frame, voice or None, FE tokens at the level's granularity)
PatternKey = tuple[str, str | None, frozenset[str]]


def _level_fes(fes: Sequence[FeKey], level: MatchLevel) -> frozenset[str]:
    if level is MatchLevel.SEMANTIC:
        return frozenset(("Opt_" if noncore else "") + fe for fe, _, _, noncore in fes)
    return frozenset(
        ("Opt_" if noncore else "") + f"{fe}_{typ}" for fe, typ, _, noncore in fes
    )


def pattern_key(vp: ValencePattern, level: MatchLevel) -> PatternKey:
    voice = vp.voice.value if level is MatchLevel.SEMANTIC_SYNTACTIC else None
    return (vp.frame, voice, _level_fes(vp.fes, level))


def subsumes_key(a: PatternKey, b: PatternKey) -> bool:
    return a[0] == b[0] and a[1] == b[1] and b[2] <= a[2]


def subsumes(a: ValencePattern, b: ValencePattern, level: MatchLevel) -> bool:
    """True iff the patterns share a frame (and voice, when syntactic types
    are compared) and b's FE set is a subset of a's at the level's key."""
    return subsumes_key(pattern_key(a, level), pattern_key(b, level))


# ---------------------------------------------------------------------------
# Frame sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameSetReport:
    left_total: int
    right_total: int
    left_only: int
    right_only: int
    union: int
    intersection: int

    @property
    def left_only_pct(self) -> float:
        return self.left_only / self.left_total if self.left_total else 0.0

    @property
    def right_only_pct(self) -> float:
        return self.right_only / self.right_total if self.right_total else 0.0

    @property
    def intersection_pct(self) -> float:
        return self.intersection / self.union if self.union else 0.0


def frame_set_report(
    left: Iterable[ValencePattern], right: Iterable[ValencePattern]
) -> FrameSetReport:
    a = {v.frame for v in left}
    b = {v.frame for v in right}
    return FrameSetReport(
        left_total=len(a),
        right_total=len(b),
        left_only=len(a - b),
        right_only=len(b - a),
        union=len(a | b),
        intersection=len(a & b),
    )


# ---------------------------------------------------------------------------
# Pattern intersection
# ---------------------------------------------------------------------------

@dataclass
class SharedPattern:
    frame: str
    voice: str | None
    fes: frozenset[str]
    sides: tuple[str, ...]
    left_count: int
    right_count: int
    # side -> FE-set strings of the other-side patterns that subsume this one
    subsumed_by: dict[str, list[str]] = field(default_factory=dict)
    # side -> [(full FE keys with syntactic functions, count), ...]
    syn_variants: dict[str, list[tuple[tuple[FeKey, ...], int]]] = field(default_factory=dict)

    @property
    def combined_count(self) -> int:
        return self.left_count + self.right_count

    def fes_sorted(self) -> list[str]:
        return sorted(self.fes)

    def sort_key(self) -> tuple:
        return (self.frame, self.voice or "", tuple(self.fes_sorted()))


@dataclass
class SharedPatternSet:
    level: MatchLevel
    mode: MatchMode
    patterns: list[SharedPattern]  # final set: no member subsumed by another
    shared_frames: set[str]  # frames with patterns on both sides
    left_total: int
    right_total: int
    union_total: int
    intersection_total: int  # admitted patterns (before in-set pruning)
    left_only: int
    right_only: int

    def final_frames(self) -> set[str]:
        return {p.frame for p in self.patterns}


@dataclass
class _Side:
    count: int = 0
    variants: dict[tuple[FeKey, ...], int] = field(default_factory=dict)


def _project(
    valences: Iterable[ValencePattern], level: MatchLevel
) -> dict[PatternKey, _Side]:
    proj: dict[PatternKey, _Side] = {}
    for vp in valences:
        key = pattern_key(vp, level)
        side = proj.setdefault(key, _Side())
        side.count += vp.count
        side.variants[vp.fes] = side.variants.get(vp.fes, 0) + vp.count
    return proj


def intersect(
    left: Iterable[ValencePattern],
    right: Iterable[ValencePattern],
    level: MatchLevel,
    mode: MatchMode,
) -> SharedPatternSet:
    """Compute the shared pattern set over the shared frames.

    Exact mode admits keys present on both sides. Fuzzy mode admits any
    pattern subsumed by some pattern of the other side (checked in both
    directions, so either framenet can contribute the more specific pattern).
    The final set keeps only patterns not subsumed by another member.
    """
    left = list(left)
    right = list(right)
    shared_frames = {v.frame for v in left} & {v.frame for v in right}
    left_proj = _project((v for v in left if v.frame in shared_frames), level)
    right_proj = _project((v for v in right if v.frame in shared_frames), level)

    by_frame_right: dict[str, list[PatternKey]] = {}
    for k in right_proj:
        by_frame_right.setdefault(k[0], []).append(k)
    by_frame_left: dict[str, list[PatternKey]] = {}
    for k in left_proj:
        by_frame_left.setdefault(k[0], []).append(k)

    admitted: dict[PatternKey, SharedPattern] = {}

    def admit(key: PatternKey, side: str, subsumers: list[PatternKey]) -> None:
        sp = admitted.get(key)
        if sp is None:
            sp = SharedPattern(
                frame=key[0],
                voice=key[1],
                fes=key[2],
                sides=(),
                left_count=left_proj[key].count if key in left_proj else 0,
                right_count=right_proj[key].count if key in right_proj else 0,
            )
            admitted[key] = sp
        if side not in sp.sides:
            sp.sides = tuple(sorted(set(sp.sides) | {side}))
        strict = [", ".join(sorted(s[2])) for s in subsumers if s != key]
        if strict:
            sp.subsumed_by.setdefault(side, [])
            for s in strict:
                if s not in sp.subsumed_by[side]:
                    sp.subsumed_by[side].append(s)
        own = left_proj if side == "left" else right_proj
        sp.syn_variants.setdefault(side, [])
        for fes, count in sorted(own[key].variants.items()):
            if (fes, count) not in sp.syn_variants[side]:
                sp.syn_variants[side].append((fes, count))

    if mode is MatchMode.EXACT:
        for key in left_proj:
            if key in right_proj:
                admit(key, "left", [key])
                admit(key, "right", [key])
    else:
        for key in left_proj:
            subsumers = [k for k in by_frame_right.get(key[0], ()) if subsumes_key(k, key)]
            if subsumers:
                admit(key, "left", subsumers)
        for key in right_proj:
            subsumers = [k for k in by_frame_left.get(key[0], ()) if subsumes_key(k, key)]
            if subsumers:
                admit(key, "right", subsumers)

    admitted_keys = list(admitted)
    by_frame_admitted: dict[str, list[PatternKey]] = {}
    for k in admitted_keys:
        by_frame_admitted.setdefault(k[0], []).append(k)
    final: list[SharedPattern] = []
    for key, sp in admitted.items():
        if any(
            other != key and subsumes_key(other, key)
            for other in by_frame_admitted[key[0]]
        ):
            continue
        final.append(sp)
    final.sort(key=lambda sp: sp.sort_key())

    n_admitted_left = sum(1 for k in left_proj if k in admitted)
    n_admitted_right = sum(1 for k in right_proj if k in admitted)

    return SharedPatternSet(
        level=level,
        mode=mode,
        patterns=final,
        shared_frames=shared_frames,
        left_total=len(left_proj),
        right_total=len(right_proj),
        union_total=len(set(left_proj) | set(right_proj)),
        intersection_total=len(admitted),
        left_only=len(left_proj) - n_admitted_left,
        right_only=len(right_proj) - n_admitted_right,
    )


# ---------------------------------------------------------------------------
# Pattern set report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternSetReport:
    level: str
    mode: str
    left_total: int
    right_total: int
    left_only: int
    right_only: int
    union: int
    intersection: int
    final_patterns: int
    final_frames: int

    @property
    def left_only_pct(self) -> float:
        return self.left_only / self.left_total if self.left_total else 0.0

    @property
    def right_only_pct(self) -> float:
        return self.right_only / self.right_total if self.right_total else 0.0

    @property
    def intersection_pct(self) -> float:
        return self.intersection / self.union if self.union else 0.0


def pattern_set_report(shared: SharedPatternSet) -> PatternSetReport:
    return PatternSetReport(
        level=shared.level.value,
        mode=shared.mode.value,
        left_total=shared.left_total,
        right_total=shared.right_total,
        left_only=shared.left_only,
        right_only=shared.right_only,
        union=shared.union_total,
        intersection=shared.intersection_total,
        final_patterns=len(shared.patterns),
        final_frames=len(shared.final_frames()),
    )


FRAME_REPORT_COLUMNS = [
    "left_frames", "right_frames",
    "left_only", "left_only_pct", "right_only", "right_only_pct",
    "union", "intersection", "intersection_pct",
]

PATTERN_REPORT_COLUMNS = [
    "level", "mode", "left_patterns", "right_patterns",
    "left_only", "left_only_pct", "right_only", "right_only_pct",
    "union", "intersection", "intersection_pct",
    "final_patterns", "final_frames",
]


def write_frame_report_csv(report: FrameSetReport, path: Path) -> None:
    import csv

    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(FRAME_REPORT_COLUMNS)
        writer.writerow([
            report.left_total, report.right_total,
            report.left_only, f"{report.left_only_pct * 100:.1f}",
            report.right_only, f"{report.right_only_pct * 100:.1f}",
            report.union, report.intersection,
            f"{report.intersection_pct * 100:.1f}",
        ])


def write_pattern_report_csv(reports: Sequence[PatternSetReport], path: Path) -> None:
    import csv

    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(PATTERN_REPORT_COLUMNS)
        for r in reports:
            writer.writerow([
                r.level, r.mode, r.left_total, r.right_total,
                r.left_only, f"{r.left_only_pct * 100:.1f}",
                r.right_only, f"{r.right_only_pct * 100:.1f}",
                r.union, r.intersection, f"{r.intersection_pct * 100:.1f}",
                r.final_patterns, r.final_frames,
            ])


# ---------------------------------------------------------------------------
# Shared set TSV
# ---------------------------------------------------------------------------

def write_shared_tsv(shared: SharedPatternSet, path: Path) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(f"# level={shared.level.value} mode={shared.mode.value}\n")
        for sp in shared.patterns:
            meta = {
                "sides": list(sp.sides),
                "subsumed_by": sp.subsumed_by,
                "syn": {
                    side: [
                        [[fe_key_token(k) for k in fes], count]
                        for fes, count in variants
                    ]
                    for side, variants in sorted(sp.syn_variants.items())
                },
            }
            f.write("\t".join([
                sp.frame,
                sp.voice or "-",
                ",".join(sp.fes_sorted()),
                str(sp.combined_count),
                json.dumps(meta, ensure_ascii=False, sort_keys=True),
            ]))
            f.write("\n")


def _parse_syn_tokens(tokens: Sequence[str]) -> tuple[FeKey, ...]:
    keys = []
    for token in tokens:
        r = parse_fe_token(token)
        syn = r.syn_function.value if r.syn_function is not SynFunction.NONE else ""
        keys.append((r.fe_name, r.rgl_type.value, syn, r.coreness is Coreness.NONCORE))
    return tuple(sorted(keys))


def read_shared_tsv(path: Path) -> SharedPatternSet:
    level = MatchLevel.SEMANTIC_SYNTACTIC
    mode = MatchMode.FUZZY
    patterns: list[SharedPattern] = []
    with path.open("r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                for part in line[1:].split():
                    if part.startswith("level="):
                        level = MatchLevel(part.split("=", 1)[1])
                    elif part.startswith("mode="):
                        mode = MatchMode(part.split("=", 1)[1])
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
            frame, voice, fes_field, _count, meta_field = parts
            meta = json.loads(meta_field)
            syn_variants = {
                side: [(_parse_syn_tokens(tokens), int(n)) for tokens, n in variants]
                for side, variants in meta.get("syn", {}).items()
            }
            patterns.append(SharedPattern(
                frame=frame,
                voice=None if voice == "-" else voice,
                fes=frozenset(t for t in fes_field.split(",") if t),
                sides=tuple(meta.get("sides", [])),
                left_count=sum(n for _, n in syn_variants.get("left", [])),
                right_count=sum(n for _, n in syn_variants.get("right", [])),
                subsumed_by=meta.get("subsumed_by", {}),
                syn_variants=syn_variants,
            ))
    return SharedPatternSet(
        level=level,
        mode=mode,
        patterns=patterns,
        shared_frames={p.frame for p in patterns},
        left_total=0,
        right_total=0,
        union_total=0,
        intersection_total=len(patterns),
        left_only=0,
        right_only=0,
    )
