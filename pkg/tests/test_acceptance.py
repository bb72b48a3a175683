"""Acceptance criteria AC1-AC8, one printed pass/fail line each.

All checks are exact (zero tolerance); each criterion also has a wall-clock bound.
"""

import io
import time

import pytest

from conicres.cli import main
from conicres.selftest import run_suite

PRIMES = (3, 5, 7, 11, 13)


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail, elapsed, bound):
        within = bound is None or elapsed <= bound
        limit = "no time bound" if bound is None else f"bound {bound}s"
        line = f"{tag} {'PASS' if ok and within else 'FAIL'}: {detail} ({elapsed:.1f}s, {limit})"
        with capsys.disabled():
            print("\n" + line)
    return emit


def run_many(jobs):
    """jobs: (suite, p, trials, names). Returns (all ok, passed count, failures, elapsed)."""
    start = time.perf_counter()
    passed, bad = 0, []
    for suite, p, trials, names in jobs:
        summary = run_suite(suite, p, trials=trials, seed=0, only=names)
        assert {r.name for r in summary.results} == set(names)
        for r in summary.results:
            passed += r.passed
            if not r.ok:
                bad.append((p, r.name, r.failed, r.counterexample, r.error))
    return not bad, passed, bad, time.perf_counter() - start


def test_ac1_main_lemma(report):
    ok, n, bad, dt = run_many([("lemma", p, 10_000, ["main-lemma"]) for p in PRIMES])
    report("AC1", ok, f"main lemma, {n} pairs over p in {PRIMES}", dt, 30)
    assert ok, bad
    assert n >= 5 * 9_900
    assert dt <= 30


def test_ac2_oracle_triangulation(report):
    jobs = [("symbols", p, 10_000, ["oracle-agreement"]) for p in PRIMES]
    jobs += [("cocycles", p, 10_000, ["obstruction-consistency-t"]) for p in PRIMES]
    ok, n, bad, dt = run_many(jobs)
    report("AC2", ok, f"tame = conic and obstruction parity, {n} cases", dt, 60)
    assert ok, bad
    assert dt <= 60


def test_ac3_theorem(report):
    names = ["theorem", "even-tau-trivial", "tau-one-cover"]
    ok, n, bad, dt = run_many([("bundles", p, 1_000, names) for p in (3, 5, 7)])
    report("AC3", ok, f"bundle verdicts, even tau, tau = 1 consistency, {n} bundles", dt, 120)
    assert ok, bad
    assert dt <= 120


def test_ac4_symbol_algebra(report):
    names = ["bilinearity", "symmetry", "steinberg", "square-invariance"]
    ok, n, bad, dt = run_many([("symbols", p, 1_000, names) for p in PRIMES])
    report("AC4", ok, f"bilinearity, symmetry, Steinberg, square invariance, {n} trials", dt, 30)
    assert ok, bad
    assert dt <= 30


def test_ac5_norm_parity(report):
    ok, n, bad, dt = run_many([("cocycles", 7, 10_000, ["norm-even"]),
                               ("cocycles", 7, 100, ["cocycle-scalar"])])
    report("AC5", ok, f"even norm valuations and cocycle scalars, {n} trials", dt, 10)
    assert ok, bad
    assert dt <= 10


def test_ac6_reciprocity(report):
    ok, n, bad, dt = run_many([("bundles", p, 1_000, ["reciprocity"]) for p in PRIMES])
    report("AC6", ok, f"product formula over all places, {n} pairs", dt, 60)
    assert ok, bad
    assert dt <= 60


def test_ac7_exhaustive(report):
    names = ["square-tables", "square-class-pairs", "degenerate-fibers"]
    ok, n, bad, dt = run_many([("symbols", p, 1, names) for p in (3, 5)])
    report("AC7", ok, "square tables, 16 class pairs, fiber verdicts over F_3 and F_5", dt, 5)
    assert ok, bad
    assert dt <= 5


def test_ac8_determinism(report):
    start = time.perf_counter()
    reports = [run_suite("all", 5, trials=10, seed=123).dumps() for _ in range(2)]
    outputs = []
    for _ in range(2):
        out = io.StringIO()
        main(["bundle", "--p", "7", "--a", "t^2+3", "--b", "t^3+t", "--format", "json", "--seed", "5"], out)
        main(["selftest", "--p", "3", "--trials", "5", "--suite", "lemma", "--format", "json"], out)
        outputs.append(out.getvalue().encode())
    dt = time.perf_counter() - start
    ok = reports[0].encode() == reports[1].encode() and outputs[0] == outputs[1]
    report("AC8", ok, "repeated runs give byte-identical JSON", dt, None)
    assert ok
