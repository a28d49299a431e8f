"""Registry of frames with their core and non-core frame element sets.

The canonical on-disk format is a neutral TSV so the pipeline does not depend
on any framenet's native frame-definition layout:

    frame<TAB>core<TAB>fe1,fe2,...
    frame<TAB>noncore<TAB>fe1,fe2,...

Lines starting with ``#`` are comments. Repeated rows for a frame are merged
by set union.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Mapping


class FrameIndexError(ValueError):
    """Inconsistent or incomplete frame index data."""


class Coreness(str, Enum):
    CORE = "Core"
    NONCORE = "NonCore"


@dataclass(frozen=True)
class FrameDef:
    frame: str
    core_fes: frozenset[str]
    noncore_fes: frozenset[str]


@dataclass(frozen=True)
class FrameIndex:
    defs: Mapping[str, FrameDef]

    def __contains__(self, frame: str) -> bool:
        return frame in self.defs

    def frames(self) -> list[str]:
        return sorted(self.defs)

    def coreness(self, frame: str, fe: str) -> Coreness:
        """Classify an FE; unknown frame or FE is an error, never a guess."""
        fdef = self.defs.get(frame)
        if fdef is None:
            raise FrameIndexError(f"unknown frame {frame!r}")
        if fe in fdef.core_fes:
            return Coreness.CORE
        if fe in fdef.noncore_fes:
            return Coreness.NONCORE
        raise FrameIndexError(f"unknown FE {fe!r} for frame {frame!r}")

    def merged(self, override: "FrameIndex") -> "FrameIndex":
        """Overlay another index; its definitions win frame by frame."""
        defs = dict(self.defs)
        defs.update(override.defs)
        return FrameIndex(defs=defs)


def _read_text(source: bytes | str | Path | IO[bytes]) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str):
        return source
    return source.read().decode("utf-8")


def load_frame_index(source: bytes | str | Path | IO[bytes]) -> FrameIndex:
    """Load the TSV format, merging repeated rows per frame."""
    core: dict[str, set[str]] = {}
    noncore: dict[str, set[str]] = {}
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FrameIndexError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        frame, kind, fes_field = parts
        fes = {fe.strip() for fe in fes_field.split(",") if fe.strip()}
        if kind == "core":
            core.setdefault(frame, set()).update(fes)
        elif kind == "noncore":
            noncore.setdefault(frame, set()).update(fes)
        else:
            raise FrameIndexError(f"line {lineno}: unknown coreness kind {kind!r}")

    defs: dict[str, FrameDef] = {}
    for frame in sorted(set(core) | set(noncore)):
        core_fes = frozenset(core.get(frame, ()))
        noncore_fes = frozenset(noncore.get(frame, ()))
        clash = core_fes & noncore_fes
        if clash:
            raise FrameIndexError(
                f"frame {frame!r} lists {sorted(clash)} as both core and non-core"
            )
        defs[frame] = FrameDef(frame=frame, core_fes=core_fes, noncore_fes=noncore_fes)
    return FrameIndex(defs=defs)


def emit_frame_index(index: FrameIndex) -> str:
    """Canonical TSV emission: frames sorted, FEs sorted, core row first."""
    lines: list[str] = []
    for frame in index.frames():
        fdef = index.defs[frame]
        if fdef.core_fes:
            lines.append(f"{frame}\tcore\t{','.join(sorted(fdef.core_fes))}")
        if fdef.noncore_fes:
            lines.append(f"{frame}\tnoncore\t{','.join(sorted(fdef.noncore_fes))}")
    return "\n".join(lines) + ("\n" if lines else "")
