import subprocess
import sys

import pytest

from contours.cli import build_parser, load_schemas, main
from contours.suites import (
    Record, SuiteConfig, format_records, format_text, parse_records, run_suite,
)

FAST = ["--suite", "rank-laws", "image-formula", "--format", "records"]


def test_record_round_trip():
    r = Record("rank-laws", "x", "fail", "w", {"n": 1, "a": [1, 2]})
    line = r.to_json()
    assert Record.from_json(line) == r
    assert line.index('"detail"') < line.index('"instance"') < line.index('"suite"')
    assert ": " not in line


def test_records_output_parses(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(FAST + ["--out", str(out)]) == 0
    records, footer = parse_records(out.read_text())
    assert footer["summary"]["fail"] == 0 and footer["seed"] == 0
    assert footer["suites"] == ["rank-laws", "image-formula"]
    assert records == sorted(records, key=Record.key)
    assert {r.verdict for r in records} == {"pass"}


def test_same_seed_same_bytes():
    cfg = SuiteConfig(("image-formula", "interpolation", "base-refinement"), seed=3)
    assert format_records(run_suite(cfg), cfg) == format_records(run_suite(cfg), cfg)
    other = SuiteConfig(cfg.suites, seed=4)
    assert format_records(run_suite(other), other) != format_records(run_suite(cfg), cfg)


def test_failing_suite_exits_one(capsys):
    assert main(["--suite", "thm31-level-law"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "literal" in out and out.rstrip().endswith("inconclusive")


def test_empty_suite_list(capsys):
    assert main(["--suite", "--format", "records"]) == 0
    assert capsys.readouterr().out.strip() == '{"seed":0,"suites":[],"summary":{"fail":0,"inconclusive":0,"pass":0}}'


@pytest.mark.parametrize("argv", [["--suite", "nope"], ["--width", "0"], ["--budget", "-1"],
                                  ["--schemas", "/nonexistent/file"]])
def test_config_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("contours: ")


def test_bad_argument_type():
    with pytest.raises(SystemExit) as e:
        build_parser().parse_args(["--seed", "x"])
    assert e.value.code == 2


def test_schema_file(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("# two schemas\n(complete rank 2)\n\n(seq ((leaf)) (repeat (complete rank 1)))\n")
    assert len(load_schemas(str(good))) == 2
    assert main(["--suite", "contour-oracle", "--budget", "30", "--schemas", str(good)]) == 0
    assert "2 pass" in capsys.readouterr().out
    bad = tmp_path / "bad.txt"
    bad.write_text("(complete rank 2)\n  (seq ((leaf)) (rep (leaf)))\n")
    assert main(["--schemas", str(bad)]) == 2
    err = capsys.readouterr().err
    assert f"{bad}:2:" in err


def test_text_format_lists_every_record():
    cfg = SuiteConfig(("rank-sum-bounded",))
    recs = run_suite(cfg)
    text = format_text(recs, cfg)
    assert text.count("PASS") == len(recs) == 10


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "contours", "--suite", "rank-laws"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "130 pass" in p.stdout
