"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from rips_critical import analysis, harness, minima, oracles
from rips_critical.metric_core import circle_sample, ladder_space, random_planar, witness_triangle, from_points
from rips_critical.persistence import a1_sequence_check, compute_barcode, merge_scales, rank_at
from rips_critical.rips_complex import Convention, build_filtration

RESULTS = {}


def report(key, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} {key}" + (f": {detail}" if detail else "")
    RESULTS[key] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def suite():
    t0 = time.perf_counter()
    summary = harness.run_suite(trials=200, seed=7)
    return summary, time.perf_counter() - t0


def _random_spaces(count, seed, n_lo, n_hi):
    for s in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.default_rng(s)
        yield random_planar(int(rng.integers(n_lo, n_hi + 1)), rng)


def test_01_criterion_oracle_equivalence(suite):
    summary, secs = suite
    s = summary["criterion"]
    report("01 criterion", s["violations"] == 0 and s["checks"] > 0 and secs < 60,
           f"{s['checks']} verdicts on {s['instances']} spaces, {s['violations']} disagreements, suite {secs:.1f}s")


def test_02_spectrum_containment(suite):
    s = suite[0]["spectrum_containment"]
    report("02 containment", s["violations"] == 0 and s["checks"] > 0,
           f"{s['checks']} scales checked, {s['violations']} violations")


def test_03_square_barcode():
    B = compute_barcode(build_filtration(from_points([(0, 0), (1, 0), (1, 1), (0, 1)])))
    h1 = B.in_dim(1)
    h0 = sorted((b.birth, b.death) for b in B.in_dim(0))
    ok = (len(h1) == 1 and abs(h1[0].birth - 1) <= 1e-12 and abs(h1[0].death - math.sqrt(2)) <= 1e-12
          and len(h0) == 4 and h0[-1] == (0.0, math.inf)
          and all(b == 0 and abs(d - 1) <= 1e-12 for b, d in h0[:3]))
    report("03 square", ok, f"H1={[(b.birth, b.death) for b in h1]} H0={h0}")


def test_04_ladder_rank_growth():
    got = {}
    for k in range(2, 9):
        X = ladder_space(k, 0.04, 1)
        fast = rank_at(compute_barcode(build_filtration(X)), 1, 1.02)
        brute = oracles.brute_betti(X, 1.02)[1]
        got[k] = (fast, brute)
    report("04 ladder", all(f == b == k - 1 for k, (f, b) in got.items()), f"rank by k: {got}")


def test_05_selective_detection():
    X = witness_triangle(1, 0.3)
    plain = compute_barcode(build_filtration(X)).in_dim(1)
    sel = compute_barcode(build_filtration(X, Convention.SELECTIVE, lam=0.4)).in_dim(1)
    death = math.sqrt(0.34) / 0.4
    ok = (not plain and len(sel) == 1 and abs(sel[0].birth - 1) <= 1e-12
          and abs(sel[0].death - death) <= 1e-12)
    # brute cover enumeration on either side of both endpoints
    brute = {r: oracles.brute_betti(X, r, "selective", 0.4)[1]
             for r in (0.99, 1 + 1e-9, 0.5 * (1 + death), death * (1 - 1e-9), death * (1 + 1e-9))}
    ok = ok and list(brute.values()) == [0, 1, 1, 1, 0]
    report("05 selective", ok, f"plain H1={len(plain)}, selective={[(b.birth, b.death) for b in sel]}, brute b1={brute}")


def test_06_bound_ledger(suite):
    summary = suite[0]
    loc, glob = summary["bound_local"], summary["bound_global"]
    X = from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    eps = minima.harness_epsilon(X)
    recs = minima.eps_local_minima(X, eps, window=eps)
    ledger = analysis.bound_check(X, compute_barcode(build_filtration(X)), recs, eps)
    sq = next(r.slack for r in ledger.rows if r.c == 1.0)
    ok = loc["violations"] == 0 and glob["violations"] == 0 and sq == 0
    report("06 bounds", ok, f"local min slack {loc.get('min_slack')}, global min slack {glob.get('min_slack')}, "
                            f"square slack at 1 = {sq}")


def test_07_reconstruction():
    t0 = time.perf_counter()
    X = circle_sample(200, 1)
    F = build_filtration(X, max_value=0.5)
    B = compute_barcode(F)
    scales = np.linspace(0.1, 0.5, 52)[1:-1]
    ranks = {(rank_at(B, 0, r), rank_at(B, 1, r)) for r in scales}
    secs = time.perf_counter() - t0
    report("07 reconstruction", ranks == {(1, 1)} and secs < 30,
           f"(H0, H1) over 50 scales: {sorted(ranks)}, {secs:.1f}s")


def test_08_homology_oracle():
    rng = np.random.default_rng(8)
    bad, checks = [], 0
    for X in _random_spaces(50, 8, 3, 7):
        B = compute_barcode(build_filtration(X))
        exact = np.unique(X.pair_values())
        scales = list(rng.uniform(0, exact.max() * 1.1, 10)) + list(rng.choice(exact, 10))
        for r in scales:
            checks += 1
            want = oracles.brute_betti(X, float(r))
            got = (rank_at(B, 0, float(r)), rank_at(B, 1, float(r)))
            if want != got:
                bad.append((X.n, float(r), want, got))
    report("08 homology oracle", not bad and checks == 1000, f"{checks} comparisons, {len(bad)} mismatches")


def _descent_problems(X, nu):
    D, bad = X.dist, 0
    for i in range(X.n):
        for j in range(i + 1, X.n):
            if D[i, j] <= 0:
                continue
            _, trace = minima.descend(X, (i, j), nu)
            steps = list(zip(trace, trace[1:]))
            if (any(D[q] >= D[p] for p, q in steps)
                    or any(D[p[0], q[0]] > nu or D[p[1], q[1]] > nu for p, q in steps)
                    or len(steps) > X.n ** 2):
                bad += 1
    return bad


def test_09_descent():
    spaces = [(fx.space, fx.nu or harness._default_nu(fx.space)) for fx in harness.fixtures()]
    spaces += [(X, harness._default_nu(X)) for X in _random_spaces(50, 9, 5, 30)]
    bad = sum(_descent_problems(X, nu) for X, nu in spaces)
    C = circle_sample(12, 1)
    end, _ = minima.descend(C, (0, 6), 0.6)
    report("09 descent", bad == 0 and C.dist[end] == 0,
           f"{len(spaces)} spaces, {bad} bad traces, antipodal end distance {C.dist[end]}")


def test_10_a1_sequence():
    spaces = [fx.space for fx in harness.fixtures()] + list(_random_spaces(50, 10, 5, 30))
    checks, bad = 0, 0
    for X in spaces:
        F = build_filtration(X)
        m = sorted(set(merge_scales(F)))
        for a1, nxt in zip(m, m[1:]):
            checks += 1
            bad += not a1_sequence_check(F, a1, nxt)
    report("10 a1 sequence", bad == 0 and checks > 0, f"{checks} consecutive pairs, {bad} failures")
