import json
import subprocess
import sys
from pathlib import Path

import pytest

from valgram.cli import main

REPO = Path(__file__).resolve().parents[1]


def run_cli(*args):
    return main([str(a) for a in args])


def test_ingest_writes_sorted_jsonl(tmp_path, bfn_mini):
    out = tmp_path / "sentences.jsonl"
    assert run_cli("ingest", "--dialect", "bfn", "--out", out, bfn_mini) == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    ids = [r["sentence_id"] for r in records]
    assert ids == sorted(ids) and len(ids) == 7


def test_frames_validate(capsys, frames_tsv):
    assert run_cli("frames", "--validate", frames_tsv) == 0
    assert "2 frames" in capsys.readouterr().out


def test_frames_validate_error(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("Desiring\tcore\tEvent\nDesiring\tnoncore\tEvent\n")
    assert run_cli("frames", "--validate", bad) == 1
    err = capsys.readouterr().err
    record = json.loads(err)
    assert record["stage"] == "frames"
    assert "Desiring" in record["message"]


def test_normalize_command(tmp_path, bfn_mini, frames_tsv):
    out = tmp_path / "patterns.tsv"
    skips = tmp_path / "skips.tsv"
    assert run_cli(
        "normalize", "--dialect", "bfn", "--frames", frames_tsv,
        "--out", out, "--skips", skips, bfn_mini,
    ) == 0
    lines = [l for l in out.read_text().splitlines() if l]
    assert len(lines) == 7
    assert lines[0].split("\t")[:3] == ["Desiring", "Act", "Event_NP.Obj Experiencer_NP.Subj"]
    assert skips.read_text() == ""


def test_normalize_native_types(tmp_path, bfn_mini, frames_tsv):
    out = tmp_path / "native.tsv"
    assert run_cli(
        "normalize", "--dialect", "bfn", "--frames", frames_tsv,
        "--types", "native", "--out", out, bfn_mini,
    ) == 0
    first = out.read_text().splitlines()[0]
    assert "Event_NP.Obj" in first and "Experiencer_NP.Ext" in first


def test_aggregate_command(tmp_path, bfn_mini, frames_tsv):
    patterns = tmp_path / "patterns.tsv"
    run_cli("normalize", "--dialect", "bfn", "--frames", frames_tsv, "--out", patterns, bfn_mini)
    valences = tmp_path / "valences.tsv"
    filtered = tmp_path / "filtered.tsv"
    summaries = tmp_path / "summaries"
    assert run_cli(
        "aggregate", "--settings", "2.B", "--in", patterns,
        "--out", valences, "--out-patterns", filtered, "--summary-dir", summaries,
    ) == 0
    assert len(valences.read_text().splitlines()) == 5
    assert (summaries / "Desiring.txt").exists()
    assert len(filtered.read_text().splitlines()) == 7


def test_aggregate_stats_needs_jsonl(tmp_path, bfn_mini, frames_tsv):
    patterns = tmp_path / "patterns.tsv"
    run_cli("normalize", "--dialect", "bfn", "--frames", frames_tsv, "--out", patterns, bfn_mini)
    assert run_cli(
        "aggregate", "--settings", "2.B", "--in", patterns, "--stats-out", tmp_path / "s.csv",
    ) == 1


def test_aggregate_stats_from_jsonl(tmp_path, bfn_mini, frames_tsv):
    sentences = tmp_path / "sentences.jsonl"
    run_cli("ingest", "--dialect", "bfn", "--out", sentences, bfn_mini)
    stats = tmp_path / "stats.csv"
    assert run_cli(
        "aggregate", "--settings", "2.B", "--in", sentences, "--frames", frames_tsv,
        "--stats-out", stats, "--out", tmp_path / "v.tsv",
    ) == 0
    rows = stats.read_text().splitlines()
    assert rows[0].startswith("settings,frames,valence_patterns")
    assert len(rows) == 11  # header + ten settings


def test_native_settings_require_jsonl(tmp_path, bfn_mini, frames_tsv):
    patterns = tmp_path / "patterns.tsv"
    run_cli("normalize", "--dialect", "bfn", "--frames", frames_tsv, "--out", patterns, bfn_mini)
    assert run_cli(
        "aggregate", "--settings", "1.A", "--in", patterns, "--out", tmp_path / "v.tsv",
    ) == 1


def test_compare_and_generate_round_trip(tmp_path, data_dir):
    shared = tmp_path / "shared.tsv"
    report = tmp_path / "report.csv"
    assert run_cli(
        "compare",
        "--left", data_dir / "desiring_bfn_valences_voiced.tsv",
        "--right", data_dir / "desiring_swefn_valences_voiced.tsv",
        "--level", "semsyn", "--mode", "fuzzy",
        "--out", shared, "--report", report,
    ) == 0
    assert run_cli(
        "generate", "--shared", shared,
        "--lu-left", data_dir / "desiring_bfn_patterns.tsv",
        "--lu-right", data_dir / "desiring_swefn_patterns.tsv",
        "--out-dir", tmp_path / "grammar",
    ) == 0
    golden_dir = data_dir / "golden" / "desiring"
    for name in ("FrameFE.gf-abs.txt", "Frames.gf-abs.txt",
                 "LU_bfn.gf-abs.txt", "LU_swefn.gf-abs.txt"):
        assert (tmp_path / "grammar" / name).read_bytes() == (golden_dir / name).read_bytes()


def test_evaluate_command(tmp_path, data_dir, bfn_mini, frames_tsv):
    shared = tmp_path / "shared.tsv"
    run_cli(
        "compare",
        "--left", data_dir / "desiring_bfn_valences.tsv",
        "--right", data_dir / "desiring_swefn_valences.tsv",
        "--level", "semsyn", "--mode", "fuzzy", "--out", shared,
    )
    patterns = tmp_path / "patterns.tsv"
    run_cli("normalize", "--dialect", "bfn", "--frames", frames_tsv, "--out", patterns, bfn_mini)
    coverage_csv = tmp_path / "coverage.csv"
    assert run_cli(
        "evaluate", "--final", shared, "--examples", patterns,
        "--side", "bfn", "--out", coverage_csv,
    ) == 0
    rows = coverage_csv.read_text().splitlines()
    assert rows[0].split(",")[:3] == ["side", "level", "mode"]
    assert rows[1].startswith("bfn,semsyn,fuzzy")


def test_evaluate_level_mismatch_fails(tmp_path, data_dir, bfn_mini, frames_tsv):
    shared = tmp_path / "shared.tsv"
    run_cli(
        "compare",
        "--left", data_dir / "desiring_bfn_valences.tsv",
        "--right", data_dir / "desiring_swefn_valences.tsv",
        "--level", "semsyn", "--mode", "fuzzy", "--out", shared,
    )
    patterns = tmp_path / "patterns.tsv"
    run_cli("normalize", "--dialect", "bfn", "--frames", frames_tsv, "--out", patterns, bfn_mini)
    assert run_cli(
        "evaluate", "--final", shared, "--examples", patterns,
        "--level", "sem", "--out", tmp_path / "c.csv",
    ) == 1


def test_unknown_settings_id_is_usage_error(tmp_path, bfn_mini, swefn_mini, frames_tsv):
    with pytest.raises(SystemExit) as excinfo:
        run_cli(
            "run", "--left", bfn_mini, "--left-dialect", "bfn",
            "--right", swefn_mini, "--right-dialect", "swefn",
            "--frames", frames_tsv, "--settings", "9.Z",
            "--out-dir", tmp_path / "out",
        )
    assert excinfo.value.code == 2


def test_run_produces_expected_artifacts(tmp_path, bfn_mini, swefn_mini, frames_tsv):
    out = tmp_path / "out"
    assert run_cli(
        "run", "--left", bfn_mini, "--left-dialect", "bfn",
        "--right", swefn_mini, "--right-dialect", "swefn",
        "--frames", frames_tsv, "--out-dir", out,
    ) == 0
    expected = [
        "manifest.json", "frame-report.csv", "pattern-report.csv", "coverage.csv",
        "bfn.sentences.jsonl", "bfn.patterns.tsv", "bfn.skips.tsv",
        "bfn.stats.csv", "bfn.valences.tsv", "bfn.filtered-patterns.tsv",
        "swefn.sentences.jsonl", "swefn.patterns.tsv", "swefn.skips.tsv",
        "swefn.stats.csv", "swefn.valences.tsv", "swefn.filtered-patterns.tsv",
        "grammar/FrameFE.gf-abs.txt", "grammar/Frames.gf-abs.txt",
        "grammar/LU_bfn.gf-abs.txt", "grammar/LU_swefn.gf-abs.txt",
        "shared/sem-exact.tsv", "shared/sem-fuzzy.tsv",
        "shared/semsyn-exact.tsv", "shared/semsyn-fuzzy.tsv",
        "summaries/bfn/Desiring.txt", "summaries/swefn/Desiring.txt",
        "summaries/swefn/Motion.txt",
    ]
    for rel in expected:
        assert (out / rel).exists(), rel
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["tool"] == "valgram"
    assert set(manifest["inputs"]) == {
        str(bfn_mini), str(swefn_mini), str(frames_tsv),
    }


def test_run_grammar_matches_goldens(tmp_path, bfn_mini, swefn_mini, frames_tsv, data_dir):
    out = tmp_path / "out"
    run_cli(
        "run", "--left", bfn_mini, "--left-dialect", "bfn",
        "--right", swefn_mini, "--right-dialect", "swefn",
        "--frames", frames_tsv, "--out-dir", out,
    )
    golden_dir = data_dir / "golden" / "run_grammar"
    for name in ("FrameFE.gf-abs.txt", "Frames.gf-abs.txt",
                 "LU_bfn.gf-abs.txt", "LU_swefn.gf-abs.txt"):
        assert (out / "grammar" / name).read_bytes() == (golden_dir / name).read_bytes(), name


def test_stage_error_record_on_missing_input(tmp_path, capsys, frames_tsv):
    status = run_cli(
        "run", "--left", tmp_path / "missing.xml", "--left-dialect", "bfn",
        "--right", tmp_path / "missing2.xml", "--right-dialect", "swefn",
        "--frames", frames_tsv, "--out-dir", tmp_path / "out",
    )
    assert status == 1
    record = json.loads(capsys.readouterr().err)
    assert record["stage"].startswith("ingest")


def test_console_script_entry_point(bfn_mini):
    proc = subprocess.run(
        [sys.executable, "-m", "valgram.cli", "ingest", "--dialect", "bfn", str(bfn_mini)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 7


def test_run_with_per_side_settings_pair(tmp_path, bfn_mini, swefn_mini, frames_tsv):
    out = tmp_path / "out"
    assert run_cli(
        "run", "--left", bfn_mini, "--left-dialect", "bfn",
        "--right", swefn_mini, "--right-dialect", "swefn",
        "--frames", frames_tsv, "--settings", "3.B:2.B",
        "--out-dir", out,
    ) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["left"]["settings"] == "3.B"
    assert manifest["config"]["right"]["settings"] == "2.B"
    # under 3.B only the left corpus's reused valence patterns survive
    left_rows = (out / "bfn.valences.tsv").read_text().splitlines()
    assert all(int(row.split("\t")[3]) > 1 for row in left_rows if row)
