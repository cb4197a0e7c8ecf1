"""One check per acceptance criterion; each prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import time

import pytest

from contours.generators import schema_family
from contours.suites import SUITES, SuiteConfig, format_records, run_suite

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = []

ALL = tuple(SUITES)
_cache: dict = {}


def _run(name):
    if name not in _cache:
        t = time.perf_counter()
        recs = run_suite(SuiteConfig((name,)))
        _cache[name] = (recs, time.perf_counter() - t)
    return _cache[name]


def _report(k, ok, text):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _suite_ok(k, name, limit=None, extra=""):
    recs, secs = _run(name)
    fails = [r for r in recs if r.verdict != "pass"]
    ok = not fails and (limit is None or secs <= limit)
    text = f"{name}: {len(recs) - len(fails)}/{len(recs)} pass in {secs:.1f}s{extra}"
    if fails:
        text += f"; first: {fails[0].instance} [{fails[0].witness}]"
    return _report(k, ok, text)


def test_criterion_01_oracle_equivalence():
    recs, _ = _run("contour-oracle")
    assert len(recs) >= 40 and len(schema_family(3)) >= 40
    assert all(r.detail["sets"] >= 1000 for r in recs)
    inc = sum(r.detail["inconclusive"] for r in recs)
    total = sum(r.detail["sets"] for r in recs)
    assert _suite_ok(1, "contour-oracle", 300, f", inconclusive {inc}/{total}")


def test_criterion_02_level_law_as_stated():
    # The literal strict-inequality form of the law; see the corrected check below.
    recs, secs = _run("thm31-level-law")
    lit = [r for r in recs if r.instance.endswith("literal")]
    bad = sum(r.detail["mismatches"] for r in lit)
    ok = bad == 0 and secs <= 60
    _report(2, ok, f"literal level law: {bad} mismatches over {len(lit)} (n, i) pairs in {secs:.1f}s")
    assert ok


def test_level_law_corrected_form():
    recs, _ = _run("thm31-level-law")
    cor = [r for r in recs if r.instance.endswith("corrected")]
    assert cor and all(r.verdict == "pass" for r in cor)


def test_criterion_03_rank_laws():
    assert _suite_ok(3, "rank-laws")


def test_criterion_04_residual_duality():
    assert _suite_ok(4, "residual-duality")


def test_criterion_05_image_formula():
    recs, _ = _run("image-formula")
    assert len(recs) >= 50
    assert _suite_ok(5, "image-formula")


def test_criterion_06_decrease_monotone():
    assert _suite_ok(6, "decrease-monotone")


def test_criterion_07_interpolation():
    recs, _ = _run("interpolation")
    assert len(recs) == 50
    assert _suite_ok(7, "interpolation")


def test_criterion_08_base_refinement():
    recs, _ = _run("base-refinement")
    assert len(recs) == 100
    assert _suite_ok(8, "base-refinement")


def test_criterion_09_rank_sum_bounded():
    recs, _ = _run("rank-sum-bounded")
    assert len(recs) == 10
    assert all("within budget" in r.detail["result"] for r in recs)
    assert _suite_ok(9, "rank-sum-bounded", 300)


@pytest.mark.slow
def test_criterion_10_full_run_deterministic():
    cfg = SuiteConfig(ALL)
    t = time.perf_counter()
    first = format_records(run_suite(cfg), cfg)
    secs = time.perf_counter() - t
    second = format_records(run_suite(cfg), cfg)
    same = first == second
    ok = same and secs <= 900
    _report(10, ok, f"full run {'byte-identical' if same else 'DIFFERS'} across two runs, "
                    f"{first.count(chr(10))} lines, {secs:.1f}s per run")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
