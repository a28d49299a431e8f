"""End-to-end pipeline: ingest, normalize, aggregate, compare, generate,
evaluate, with every intermediate artifact persisted as plain text.

A manifest written next to the outputs records the configuration, input
digests and tool version; reruns with identical inputs produce byte-identical
artifact trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .aggregate import (
    Settings,
    aggregate_corpus,
    compute_all_settings,
    stats_table,
    write_frame_summaries,
    write_stats_csv,
    write_valences_tsv,
)
from .compare import (
    MatchLevel,
    MatchMode,
    frame_set_report,
    intersect,
    pattern_set_report,
    write_frame_report_csv,
    write_pattern_report_csv,
    write_shared_tsv,
)
from .coverage import coverage, write_coverage_csv
from .frames import FrameIndex, load_frame_index
from .grammar import derive_grammar, emit_abstract_syntax, file_digest
from .ingest import Dialect, parse_corpus, write_sentences_jsonl
from .normalize import (
    load_voice_rules,
    normalize_corpus,
    promote_unconsidered_skips,
    write_patterns_tsv,
    write_skips_tsv,
)



class StageError(RuntimeError):
    def __init__(self, stage: str, error: Exception):
        self.stage = stage
        self.error = error
        super().__init__(f"stage {stage!r} failed: {error}")


@dataclass
class SideConfig:
    name: str
    dialect: Dialect
    corpus_paths: list[Path]
    frame_index_paths: list[Path]
    settings_id: str = "2.B"


@dataclass
class PipelineConfig:
    left: SideConfig
    right: SideConfig
    out_dir: Path
    grammar_level: MatchLevel = MatchLevel.SEMANTIC_SYNTACTIC
    grammar_mode: MatchMode = MatchMode.FUZZY
    voice_rules_path: Path | None = None
    log_level: str = "WARNING"

    def to_dict(self) -> dict:
        def side(s: SideConfig) -> dict:
            return {
                "name": s.name,
                "dialect": s.dialect.value,
                "corpus_paths": [str(p) for p in s.corpus_paths],
                "frame_index_paths": [str(p) for p in s.frame_index_paths],
                "settings": s.settings_id,
            }

        return {
            "left": side(self.left),
            "right": side(self.right),
            "out_dir": str(self.out_dir),
            "grammar_level": self.grammar_level.value,
            "grammar_mode": self.grammar_mode.value,
            "voice_rules_path": str(self.voice_rules_path) if self.voice_rules_path else None,
            "log_level": self.log_level,
        }


def _load_index(paths: list[Path]) -> FrameIndex:
    index = load_frame_index(paths[0])
    for path in paths[1:]:
        index = index.merged(load_frame_index(path))
    return index


def run_pipeline(config: PipelineConfig) -> Path:
    """Execute all stages; returns the output directory.

    Any stage failure is wrapped in a :class:`StageError` naming the stage.
    """
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)

    stage = "configure"
    try:
        rules = load_voice_rules(config.voice_rules_path)
        sides = {}

        for side_cfg in (config.left, config.right):
            name = side_cfg.name
            stage = f"frames[{name}]"
            index = _load_index(side_cfg.frame_index_paths)

            stage = f"ingest[{name}]"
            sentences = []
            for path in sorted(side_cfg.corpus_paths):
                parsed = parse_corpus(path, side_cfg.dialect)
                sentences.extend((str(path), s) for s in parsed)
            sentences.sort(key=lambda pair: (pair[0], pair[1].sentence_id))
            sentences = [s for _, s in sentences]
            write_sentences_jsonl(sentences, out / f"{name}.sentences.jsonl")

            stage = f"normalize[{name}]"
            # Single non-promoting pass: examples with unmappable FEs are kept
            # for the baseline settings of the statistics table, and the
            # interlingual pattern file is the promoted subset of it.
            all_patterns, hard_skips = normalize_corpus(
                sentences, index, rules, skip_unconsidered=False
            )
            patterns, promoted = promote_unconsidered_skips(all_patterns)
            skips = sorted(hard_skips + promoted, key=lambda sk: sk.sentence_id)
            write_patterns_tsv(patterns, out / f"{name}.patterns.tsv")
            write_skips_tsv(skips, out / f"{name}.skips.tsv")

            stage = f"aggregate[{name}]"
            per_settings = compute_all_settings(all_patterns)
            write_stats_csv(stats_table(per_settings), out / f"{name}.stats.csv")

            settings = Settings.from_id(side_cfg.settings_id)
            valences, filtered, _ = aggregate_corpus(all_patterns, settings)
            write_valences_tsv(valences, out / f"{name}.valences.tsv")
            write_patterns_tsv(filtered, out / f"{name}.filtered-patterns.tsv")
            write_frame_summaries(valences, out / "summaries" / name)

            sides[name] = {
                "valences": valences,
                "patterns": patterns,
                "filtered": filtered,
            }

        left = sides[config.left.name]
        right = sides[config.right.name]

        stage = "compare"
        write_frame_report_csv(
            frame_set_report(left["valences"], right["valences"]),
            out / "frame-report.csv",
        )
        shared_dir = out / "shared"
        shared_dir.mkdir(exist_ok=True)
        shared_sets = {}
        reports = []
        for level in (MatchLevel.SEMANTIC, MatchLevel.SEMANTIC_SYNTACTIC):
            for mode in (MatchMode.EXACT, MatchMode.FUZZY):
                shared = intersect(left["valences"], right["valences"], level, mode)
                shared_sets[(level, mode)] = shared
                reports.append(pattern_set_report(shared))
                write_shared_tsv(shared, shared_dir / f"{level.value}-{mode.value}.tsv")
        write_pattern_report_csv(reports, out / "pattern-report.csv")

        stage = "generate"
        grammar_shared = shared_sets[(config.grammar_level, config.grammar_mode)]
        settings_desc = (
            f"{config.left.settings_id}:{config.right.settings_id} "
            f"{config.grammar_level.value} {config.grammar_mode.value}"
        )
        digests = [
            (f"{config.left.name}.valences", file_digest(out / f"{config.left.name}.valences.tsv")),
            (f"{config.right.name}.valences", file_digest(out / f"{config.right.name}.valences.tsv")),
        ]
        grammar = derive_grammar(
            grammar_shared,
            {
                config.left.name: left["filtered"],
                config.right.name: right["filtered"],
            },
            settings_desc=settings_desc,
            input_digests=digests,
        )
        emit_abstract_syntax(grammar, out / "grammar")

        stage = "evaluate"
        rows = []
        for side_cfg, data in ((config.left, left), (config.right, right)):
            for level in (MatchLevel.SEMANTIC, MatchLevel.SEMANTIC_SYNTACTIC):
                for mode in (MatchMode.EXACT, MatchMode.FUZZY):
                    report = coverage(shared_sets[(level, mode)], data["patterns"])
                    rows.append((side_cfg.name, report))
        write_coverage_csv(rows, out / "coverage.csv")

        stage = "manifest"
        inputs = {}
        for side_cfg in (config.left, config.right):
            for path in sorted(side_cfg.corpus_paths) + sorted(side_cfg.frame_index_paths):
                inputs[str(path)] = file_digest(Path(path))
        if config.voice_rules_path:
            inputs[str(config.voice_rules_path)] = file_digest(config.voice_rules_path)
        manifest = {
            "tool": "valgram",
            "version": __version__,
            "config": config.to_dict(),
            "inputs": inputs,
        }
        (out / "manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc
    return out
