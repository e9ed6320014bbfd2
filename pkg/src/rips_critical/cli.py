"""Command-line front end: ``rips-critical {generate,persistence,analyze,verify}``.

Every result is written to files under ``--out``. Exit codes: 0 success,
1 invalid input, 2 constraint violation (bad parameters or unmet
hypotheses), 3 a verification check reported violations.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import analysis, harness, minima
from .diagram import diagram_svg
from .metric_core import (
    MetricError,
    MetricKind,
    circle_sample,
    cluster_sample,
    ladder_space,
    read_matrix_csv,
    read_points_csv,
    witness_triangle,
    write_matrix_csv,
    write_points_csv,
)
from .persistence import compute_barcode
from .rips_complex import Convention, build_filtration, write_filtration_csv

log = logging.getLogger("rips_critical")

EXIT_INPUT, EXIT_CONSTRAINT, EXIT_VIOLATION = 1, 2, 3


class ConstraintError(Exception):
    pass


@dataclass
class RunConfig:
    input: Optional[Path]
    format: str
    metric: str
    convention: str
    lam: Optional[float]
    epsilon: Optional[float]
    tau: float
    max_value: Optional[float]
    out: Path
    seed: int
    trials: int
    jobs: int
    summary: bool

    @classmethod
    def from_args(cls, a) -> "RunConfig":
        cfg = cls(
            input=Path(a.input) if a.input else None,
            format=a.format,
            metric=a.metric,
            convention=a.convention,
            lam=a.lam,
            epsilon=a.epsilon,
            tau=a.tau,
            max_value=a.max_value,
            out=Path(a.out),
            seed=a.seed,
            trials=a.trials,
            jobs=a.jobs,
            summary=a.summary,
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.convention == "selective" and self.lam is None:
            raise ConstraintError("--lambda is required with --convention selective")
        if self.lam is not None and not 0 < self.lam <= 1:
            raise ConstraintError("--lambda must lie in (0, 1]")
        for name in ("epsilon", "max_value"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConstraintError(f"--{name.replace('_', '-')} must be positive")
        if self.tau < 0:
            raise ConstraintError("--tau must be non-negative")
        if self.trials < 0 or self.jobs < 1:
            raise ConstraintError("--trials must be >= 0 and --jobs >= 1")


def _load(cfg: RunConfig):
    if cfg.input is None:
        raise MetricError("--input is required")
    if not cfg.input.exists():
        raise MetricError(f"{cfg.input}: no such file")
    if cfg.format == "matrix":
        return read_matrix_csv(cfg.input)
    return read_points_csv(cfg.input, MetricKind(cfg.metric))


def _filtration(X, cfg: RunConfig):
    convention, lam = cfg.convention, cfg.lam
    if convention != "selective":
        if lam not in (None, 1.0):
            log.warning("--lambda ignored for the %s convention", convention)
        lam = None
    return build_filtration(X, Convention(convention), max_value=cfg.max_value, lam=lam)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_generate(a) -> int:
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if a.fixture == "circle":
            X = circle_sample(a.n, a.radius)
        elif a.fixture == "ladder":
            X = ladder_space(a.k, a.gap, a.height)
        elif a.fixture == "witness-triangle":
            X = witness_triangle(a.c, a.h)
        else:
            specs = []
            for block in a.clusters.split(";"):
                center, count, spread = block.split(":")
                specs.append(([float(v) for v in center.split(",")], int(count), float(spread)))
            X = cluster_sample(specs, seed=a.seed)
    except (MetricError, ValueError) as exc:
        raise ConstraintError(str(exc)) from exc
    write_points_csv(X, out / "points.csv")
    write_matrix_csv(X, out / "matrix.csv")
    log.info("wrote %d points (%s metric) to %s", X.n, X.kind.value, out)
    if a.summary:
        print(f"{a.fixture}: {X.n} points, metric={X.kind.value}")
    return 0


def cmd_persistence(a) -> int:
    cfg = RunConfig.from_args(a)
    X = _load(cfg)
    F = _filtration(X, cfg)
    B = compute_barcode(F)
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write(cfg.out / "barcode.json", B.to_json() + "\n")
    B.write_csv(cfg.out / "barcode.csv")
    write_filtration_csv(F, cfg.out / "filtration.csv")
    title = f"{cfg.convention} Rips" + (f", lambda={cfg.lam:g}" if cfg.convention == "selective" else "")
    _write(cfg.out / "diagram.svg", diagram_svg(B, title))
    if cfg.summary:
        h0, h1 = len(B.in_dim(0)), len(B.in_dim(1))
        print(f"{X.n} points, {len(F)} simplices, {h0} H0 bars, {h1} H1 bars")
    return 0


def cmd_analyze(a) -> int:
    cfg = RunConfig.from_args(a)
    if cfg.input is None and cfg.trials:
        return _suite(cfg)
    X = _load(cfg)
    eps = cfg.epsilon
    if eps is None:
        eps = minima.harness_epsilon(X)
        log.info("no --epsilon given; using half the smallest distance gap, %.6g", eps)
    window = eps
    records = minima.eps_local_minima(X, eps, tau=cfg.tau, window=window)
    B = compute_barcode(build_filtration(X, Convention.OPEN, max_value=cfg.max_value))
    cfg.out.mkdir(parents=True, exist_ok=True)
    minima.write_records_csv(records, cfg.out / "minima.csv")

    verdicts = analysis.criterion_verdicts(X, records, window, B, tau=cfg.tau)
    _write(cfg.out / "verdicts.json", analysis.dumps({"epsilon": eps, "window": window, "verdicts": verdicts}) + "\n")

    try:
        ledger = analysis.bound_check(X, B, records, window, tau=cfg.tau)
    except analysis.HypothesisError as exc:
        raise ConstraintError(str(exc)) from exc
    _write(cfg.out / "bounds.json", analysis.dumps(ledger.to_dict()) + "\n")

    lams = [cfg.lam] if cfg.lam is not None else []
    containment = analysis.verify_spectrum_containment(X, eps, lams, records=records)
    _write(cfg.out / "containment.json", analysis.dumps(containment) + "\n")

    detections = []
    if cfg.lam is not None:
        detections = analysis.selective_detection(X, records, cfg.lam, tau=cfg.tau)
        _write(cfg.out / "selective.json", analysis.dumps(
            {"lambda": cfg.lam, "records": [dict(asdict(d), detected=d.detected) for d in detections]}
        ) + "\n")

    disagreements = sum(1 for v in verdicts if not v.agree)
    problems = disagreements + len(containment["violations"]) + (0 if ledger.ok() else 1)
    if cfg.summary:
        print(
            f"{len(records)} minima, {len(verdicts)} verdicts ({disagreements} disagree), "
            f"{len(containment['violations'])} containment violations, "
            f"min slack {ledger.min_slack}, detected {sum(d.detected for d in detections)}"
        )
    if problems:
        log.error("analysis found %d violation(s)", problems)
        return EXIT_VIOLATION
    return 0


def _suite(cfg: RunConfig) -> int:
    summary = harness.run_suite(trials=cfg.trials, seed=cfg.seed, jobs=cfg.jobs)
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write(cfg.out / "summary.json", analysis.dumps(summary) + "\n")
    bad = harness.total_violations(summary)
    if cfg.summary:
        print(f"trials={cfg.trials} seed={cfg.seed} violations={bad}")
    if bad:
        log.error("verification found %d violation(s)", bad)
        return EXIT_VIOLATION
    return 0


def cmd_verify(a) -> int:
    return _suite(RunConfig.from_args(a))


def _common(p: argparse.ArgumentParser, trials_default: int = 0):
    p.add_argument("--input", help="CSV of points or of a distance matrix")
    p.add_argument("--format", choices=["points", "matrix"], default="points")
    p.add_argument("--metric", choices=["euclidean", "manhattan"], default="euclidean")
    p.add_argument("--convention", choices=["open", "closed", "selective"], default="open")
    p.add_argument("--lambda", dest="lam", type=float, help="selective thinness ratio r2(r) = lambda*r")
    p.add_argument("--epsilon", type=float, help="neighbourhood radius for local minima")
    p.add_argument("--tau", type=float, default=minima.DEFAULT_TAU, help="tie tolerance for grouping minima")
    p.add_argument("--max-value", type=float, help="drop simplices above this scale")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--summary", action="store_true", help="print a one-line digest to stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rips-critical", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a fixture space to points.csv and matrix.csv")
    g.add_argument("fixture", choices=["circle", "clusters", "ladder", "witness-triangle"])
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--k", type=int, default=6)
    g.add_argument("--gap", type=float, default=0.04)
    g.add_argument("--height", type=float, default=1.0)
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("--h", type=float, default=0.3)
    g.add_argument("--clusters", default="0,0:5:0.1;3,0:5:0.1;0,3:5:0.1",
                   help="clusters as 'x,y:count:spread;...'")
    g.add_argument("--out", default="out")
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--summary", action="store_true")
    g.set_defaults(func=cmd_generate)

    for name, func, helptext, trials in (
        ("persistence", cmd_persistence, "barcode, filtration and diagram of one space", 0),
        ("analyze", cmd_analyze, "minima, criterion verdicts, bounds, containment", 0),
        ("verify", cmd_verify, "full check suite over fixtures and random spaces", 200),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p, trials)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.func(args)
    except (MetricError, OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (ConstraintError, analysis.HypothesisError) as exc:
        log.error("%s", exc)
        return EXIT_CONSTRAINT


if __name__ == "__main__":
    sys.exit(main())
