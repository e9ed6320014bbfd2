"""Check-by-check verification over fixtures and seeded random instances.

Each check compares the fast pipeline with an independent route (a direct
witness scan, a brute-force rank computation, an enumeration of minima)
and counts disagreements. :func:`run_suite` aggregates them into a summary
``{check id: {instances, checks, violations, worst_case}}``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import analysis, minima, oracles
from .metric_core import (
    FiniteMetricSpace,
    circle_sample,
    cluster_sample,
    from_points,
    ladder_space,
    random_planar,
    witness_triangle,
)
from .persistence import a1_sequence_check, compute_barcode, merge_scales, rank_at
from .rips_complex import Convention, build_filtration

log = logging.getLogger(__name__)

LAMBDAS = (0.3, 0.5, 1.0)
CHECKS = (
    "criterion",
    "spectrum_containment",
    "bound_local",
    "bound_global",
    "a1_sequence",
    "descent",
    "homology_oracle",
)


@dataclass
class Fixture:
    name: str
    space: FiniteMetricSpace
    model_b1: int = 0
    nu: Optional[float] = None


def fixtures() -> list[Fixture]:
    return [
        Fixture("two_points", from_points([(0, 0), (1, 0)])),
        Fixture("collinear", from_points([(0,), (1,), (1.2,)])),
        Fixture("square", from_points([(0, 0), (1, 0), (1, 1), (0, 1)])),
        Fixture("witness_triangle", witness_triangle(1, 0.3)),
        Fixture("ladder6", ladder_space(6, 0.04, 1), nu=0.05),
        Fixture("circle12", circle_sample(12, 1), model_b1=1, nu=0.6),
        Fixture("clusters3", cluster_sample([((0, 0), 5, 0.1), ((3, 0), 5, 0.1), ((0, 3), 5, 0.1)], seed=3)),
        Fixture("two_clusters", from_points([(0, 0), (1, 0), (2.2, 0)])),
    ]


@dataclass
class Outcome:
    checks: dict = field(default_factory=lambda: {k: 0 for k in CHECKS})
    violations: dict = field(default_factory=lambda: {k: [] for k in CHECKS})
    slack: dict = field(default_factory=dict)


def _default_nu(X: FiniteMetricSpace) -> float:
    D = X.dist + np.diag(np.full(X.n, np.inf))
    return float(D.min(axis=1).max())


def check_space(X: FiniteMetricSpace, model_b1: int = 0, nu: Optional[float] = None,
                lams=LAMBDAS, oracle_scales: int = 20, oracle_max_n: int = 7,
                rng: Optional[np.random.Generator] = None) -> Outcome:
    """Run every check on one space using the harness choice of epsilon."""
    out = Outcome()
    eps = minima.harness_epsilon(X)
    window = eps
    records = minima.eps_local_minima(X, eps, window=window)
    F_open = build_filtration(X, Convention.OPEN)
    B_open = compute_barcode(F_open)

    verdicts = analysis.criterion_verdicts(X, records, window, B_open)
    out.checks["criterion"] += len(verdicts)
    out.violations["criterion"] += [
        {"pair": v.pair, "c": v.c, "predicted": v.predicted_in_spectrum, "observed": v.observed_in_spectrum}
        for v in verdicts if not v.agree
    ]

    barcodes = {"open": B_open}
    for lam in lams:
        barcodes[f"selective:{lam:g}"] = compute_barcode(build_filtration(X, Convention.SELECTIVE, lam=lam))
    rep = analysis.verify_spectrum_containment(X, eps, lams, records=records, barcodes=barcodes)
    out.checks["spectrum_containment"] += sum(rep["filtrations"].values())
    out.violations["spectrum_containment"] += rep["violations"]

    ledger = analysis.bound_check(X, B_open, records, window, model_b1=model_b1)
    out.checks["bound_local"] += len(ledger.rows)
    out.violations["bound_local"] += [{"c": r.c, "slack": r.slack} for r in ledger.rows if r.slack < 0]
    out.checks["bound_global"] += len(ledger.global_rows)
    out.violations["bound_global"] += [{"r": r.r, "slack": r.slack} for r in ledger.global_rows if r.slack < 0]
    out.slack = {"bound_local": ledger.min_slack, "bound_global": ledger.min_global_slack}

    merges = sorted(set(merge_scales(F_open)))
    for k, a1 in enumerate(merges):
        nxt = merges[k + 1] if k + 1 < len(merges) else a1 + 1.0
        for r in {0.5 * (a1 + nxt), nxt}:
            if not a1 < r:
                continue
            out.checks["a1_sequence"] += 1
            if not a1_sequence_check(F_open, a1, r):
                out.violations["a1_sequence"].append({"a1": a1, "r": r})

    nu = _default_nu(X) if nu is None else nu
    values = np.array([r.value for r in records])
    D = X.dist
    for i in range(X.n):
        for j in range(i + 1, X.n):
            if D[i, j] <= 0:
                continue
            out.checks["descent"] += 1
            end, trace = minima.descend(X, (i, j), nu)
            start = D[i, j]
            bad = []
            if any(D[a, b] >= start for a, b in trace[1:]):
                bad.append("no strict decrease")
            if any(D[a, a2] > nu or D[b, b2] > nu for (a, b), (a2, b2) in zip(trace, trace[1:])):
                bad.append("step longer than nu")
            if len(trace) - 1 > X.n ** 2:
                bad.append("too many steps")
            final = D[end]
            if nu >= eps and final > 0 and not analysis._contains(values, final):
                bad.append("end value is not a local minimum")
            if bad:
                out.violations["descent"].append({"pair": (i, j), "problems": bad})

    if X.n <= oracle_max_n:
        rng = rng or np.random.default_rng(0)
        top = float(D.max()) * 1.1
        conventions = [("open", 1.0, B_open)] + [
            ("selective", lam, barcodes[f"selective:{lam:g}"]) for lam in lams
        ]
        # half the scales exactly at distance values, where ties decide membership
        exact = np.unique(X.pair_values())
        for conv, lam, B in conventions:
            scales = list(rng.uniform(0, top, oracle_scales // 2))
            scales += list(rng.choice(exact, oracle_scales - len(scales)))
            scales += [float(v) / lam * (1 + s * 1e-9) for v in rng.choice(exact, 2) for s in (-1, 1)]
            for r in scales:
                out.checks["homology_oracle"] += 1
                want = oracles.brute_betti(X, float(r), conv, lam)
                got = (rank_at(B, 0, float(r)), rank_at(B, 1, float(r)))
                if want != got:
                    out.violations["homology_oracle"].append(
                        {"convention": conv, "lambda": lam, "r": float(r), "expected": want, "got": got})
    return out


def _random_space(seed_seq: np.random.SeedSequence, n_range=(5, 30)) -> FiniteMetricSpace:
    rng = np.random.default_rng(seed_seq)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    return random_planar(n, rng)


def _trial(args):
    seed_seq, n_range, oracle_max_n = args
    X = _random_space(seed_seq, n_range)
    return X.n, check_space(X, oracle_max_n=oracle_max_n, rng=np.random.default_rng(seed_seq.spawn(1)[0]))


def random_outcomes(trials: int, seed: int, n_range=(5, 30), jobs: int = 1, oracle_max_n: int = 7):
    seqs = np.random.SeedSequence(seed).spawn(trials)
    args = [(s, n_range, oracle_max_n) for s in seqs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_trial, args))
    return [_trial(a) for a in args]


def summarize(named_outcomes) -> dict:
    """Aggregate ``[(instance name, Outcome)]`` into the summary dictionary."""
    summary = {k: {"instances": 0, "checks": 0, "violations": 0, "worst_case": None} for k in CHECKS}
    for name, o in named_outcomes:
        for k in CHECKS:
            if o.checks[k] == 0:
                continue
            s = summary[k]
            s["instances"] += 1
            s["checks"] += o.checks[k]
            s["violations"] += len(o.violations[k])
            if o.violations[k] and s["worst_case"] is None:
                s["worst_case"] = {"instance": name, "detail": o.violations[k][0]}
            slack = o.slack.get(k)
            if slack is not None and ("min_slack" not in s or slack < s["min_slack"]):
                s["min_slack"] = slack
                if not s["violations"]:
                    s["worst_case"] = {"instance": name, "min_slack": slack}
    return summary


def run_suite(trials: int = 200, seed: int = 7, jobs: int = 1, include_fixtures: bool = True,
              n_range=(5, 30), progress: Optional[Callable[[int], None]] = None) -> dict:
    named = []
    if include_fixtures:
        for fx in fixtures():
            named.append((fx.name, check_space(fx.space, model_b1=fx.model_b1, nu=fx.nu)))
    for t, (n, o) in enumerate(random_outcomes(trials, seed, n_range, jobs)):
        named.append((f"random[{t}] n={n}", o))
        if progress:
            progress(t)
    summary = summarize(named)
    summary["_meta"] = {
        "trials": trials,
        "seed": seed,
        "n_range": list(n_range),
        "lambdas": list(LAMBDAS),
        "epsilon_rule": "half the smallest gap between distinct pairwise distances (0 included)",
        "rank_note": analysis.RANK_NOTE,
    }
    return summary


def total_violations(summary: dict) -> int:
    return sum(v["violations"] for k, v in summary.items() if not k.startswith("_"))
