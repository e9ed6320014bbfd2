"""Decision procedures and bound checks for critical edges.

All ranks are dimensions over Z/2; over a field the minimal number of
generators of H1 equals its rank, so the generator-count bounds are
checked as rank bounds.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .metric_core import FiniteMetricSpace
from .minima import DEFAULT_TAU, group_mc, is_isolated, mc_size
from .persistence import (
    Barcode,
    compute_barcode,
    extract_spectra,
    rank_at,
    rank_just_above,
    rank_just_below,
)
from .rips_complex import Convention, Filtration, build_filtration

MATCH_TOL = 1e-9
RANK_NOTE = "ranks over Z/2; generator counts of H1 coincide with ranks over a field"


class HypothesisError(ValueError):
    """Inputs fall outside the hypotheses a prediction depends on."""


def _contains(values, c: float, tol: float = MATCH_TOL) -> bool:
    v = np.asarray(values, dtype=float)
    return bool(v.size) and bool(np.any(np.abs(v - c) <= tol))


# ------------------------------------------------------------- criterion


@dataclass(frozen=True)
class CriterionVerdict:
    pair: tuple
    c: float
    witness: Optional[int]
    predicted_in_spectrum: bool
    observed_in_spectrum: Optional[bool] = None
    agree: Optional[bool] = None


def find_witness(X: FiniteMetricSpace, pair, c: float) -> Optional[int]:
    """Smallest z outside the pair with d(z, x) <= c and d(z, y) <= c."""
    i, j = pair
    D = X.dist
    hits = np.flatnonzero((D[i] <= c) & (D[j] <= c))
    hits = hits[(hits != i) & (hits != j)]
    return int(hits[0]) if len(hits) else None


def converse_criterion(
    X: FiniteMetricSpace,
    c: float,
    pair,
    records,
    window: float,
    tau: float = DEFAULT_TAU,
) -> CriterionVerdict:
    """Predict whether the unique minimum pair at ``c`` changes H0 or creates H1.

    The prediction is only sound when ``pair`` is a recorded local minimum
    of value ``c``, ``c`` is isolated among record values within
    ``window`` and ``|M_c| = 1``; otherwise :class:`HypothesisError`.
    """
    pair = tuple(sorted(int(p) for p in pair))
    if not any(tuple(sorted(r.pair)) == pair and abs(r.value - c) <= tau for r in records):
        raise HypothesisError(f"{pair} is not a recorded local minimum of value {c}")
    m = mc_size(records, c, tau)
    if m != 1:
        raise HypothesisError(f"|M_c| = {m} at c = {c}, need exactly 1")
    if not is_isolated(records, c, window, tau):
        raise HypothesisError(f"c = {c} is not isolated within window {window}")
    z = find_witness(X, pair, c)
    return CriterionVerdict(pair, float(c), z, z is None)


def verify_criterion(X: FiniteMetricSpace, verdicts, barcode: Barcode) -> list[CriterionVerdict]:
    """Fill in whether each verdict's ``c`` is an H0 merge scale or an H1 birth scale."""
    spectra = extract_spectra(barcode)
    events = spectra.h0_merge_scales + spectra.h1_birth_scales
    out = []
    for v in verdicts:
        obs = _contains(events, v.c)
        out.append(replace(v, observed_in_spectrum=obs, agree=obs == v.predicted_in_spectrum))
    return out


def criterion_verdicts(X: FiniteMetricSpace, records, window: float, barcode: Optional[Barcode] = None,
                       tau: float = DEFAULT_TAU) -> list[CriterionVerdict]:
    """Run the criterion on every record meeting its hypotheses."""
    groups = group_mc(records, tau)
    verdicts = []
    for c, pairs in groups.items():
        if len(pairs) != 1 or not is_isolated(records, c, window, tau):
            continue
        verdicts.append(converse_criterion(X, c, next(iter(pairs)), records, window, tau))
    if barcode is None:
        barcode = compute_barcode(build_filtration(X, Convention.OPEN))
    return verify_criterion(X, verdicts, barcode)


# ------------------------------------------------------------ crossing number


def crossing_number(F: Filtration, chain, A, B, r: Optional[float] = None) -> int:
    """Mod-2 count of chain edges running between vertex sets ``A`` and ``B``.

    ``chain`` is a sequence of ``((u, v), coefficient)``; orientation does
    not matter over Z/2. With ``r`` given, every edge must be present in
    the complex at that scale.
    """
    A, B = set(A), set(B)
    if A & B:
        raise ValueError("vertex sets must be disjoint")
    index = F.edge_index()
    total = 0
    for (u, v), coef in chain:
        key = (min(u, v), max(u, v))
        k = index.get(key)
        if k is None:
            raise ValueError(f"edge {key} is not in the filtration")
        if r is not None and not F.present(F.edge_values[k:k + 1], r)[0]:
            raise ValueError(f"edge {key} is not present at scale {r}")
        if (u in A and v in B) or (u in B and v in A):
            total += int(coef)
    return total % 2


def cycle_chain(vertices) -> list:
    """Closed edge path through ``vertices`` as a chain with unit coefficients."""
    vs = list(vertices)
    return [((a, b), 1) for a, b in zip(vs, vs[1:] + vs[:1])]


def triangle_boundary(t) -> list:
    a, b, c = t
    return [((a, b), 1), ((b, c), 1), ((a, c), 1)]


def certify_nontrivial(F: Filtration, cycle, A, B, r: float) -> bool:
    """Crossing-number certificate that ``cycle`` is not a boundary at scale ``r``.

    Every 2-chain boundary is a sum of triangle boundaries, so if each
    triangle present at ``r`` crosses between ``A`` and ``B`` an even number
    of times while the cycle crosses an odd number, the cycle cannot bound.
    """
    if crossing_number(F, cycle, A, B, r) != 1:
        return False
    present = F.triangles[F.present(F.triangle_values, r)]
    return all(crossing_number(F, triangle_boundary(tuple(int(v) for v in t)), A, B) == 0 for t in present)


# -------------------------------------------------------------- bound ledger


@dataclass(frozen=True)
class BoundRow:
    c: float
    mc: int
    delta_h1: int
    delta_h0_drop: int

    @property
    def slack(self) -> int:
        return self.mc - self.delta_h1 - self.delta_h0_drop


@dataclass(frozen=True)
class GlobalBoundRow:
    r: float
    h1_rank: int
    bound: int

    @property
    def slack(self) -> int:
        return self.bound - self.h1_rank


@dataclass
class BoundLedger:
    rows: list
    global_rows: list
    model_b1: int
    note: str = RANK_NOTE

    @property
    def min_slack(self) -> Optional[int]:
        return min((r.slack for r in self.rows), default=None)

    @property
    def min_global_slack(self) -> Optional[int]:
        return min((r.slack for r in self.global_rows), default=None)

    def ok(self) -> bool:
        return all(r.slack >= 0 for r in self.rows) and all(r.slack >= 0 for r in self.global_rows)

    def to_dict(self) -> dict:
        return {
            "note": self.note,
            "model_b1": self.model_b1,
            "rows": [dict(asdict(r), slack=r.slack) for r in self.rows],
            "global": [dict(asdict(r), slack=r.slack) for r in self.global_rows],
        }


def bound_check(X: FiniteMetricSpace, barcode: Barcode, records, windows, model_b1: int = 0,
                tau: float = DEFAULT_TAU) -> BoundLedger:
    """Per-scale and cumulative H1 rank bounds in terms of ``|M_c|``.

    ``windows`` is one isolation window for all minimum values or a dict
    mapping a value to its window. For each checked ``c`` the row compares
    ``|M_c|`` with the H1 increase plus the H0 drop across ``c``. The global
    rows check, just below and just above every event scale ``r``, that
    ``rank H1 <= model_b1 + sum of |M_c| over c < r``.
    """
    groups = group_mc(records, tau)
    rows = []
    for c, pairs in groups.items():
        if isinstance(windows, dict):
            w = next((w for k, w in windows.items() if abs(k - c) <= tau), None)
            if w is None:
                continue
        else:
            w = windows
        if not is_isolated(records, c, w, tau):
            raise HypothesisError(f"scale {c} is not isolated within window {w}")
        rows.append(BoundRow(
            float(c), len(pairs),
            rank_just_above(barcode, 1, c) - rank_just_below(barcode, 1, c),
            rank_just_below(barcode, 0, c) - rank_just_above(barcode, 0, c),
        ))

    vals = np.array(sorted(r.value for r in records))
    scales = sorted({b.birth for b in barcode.bars if b.birth > 0}
                    | {b.death for b in barcode.bars if b.finite})
    global_rows = []
    for s in scales:
        below = int(np.searchsorted(vals, s - tau, side="left"))
        upto = int(np.searchsorted(vals, s + tau, side="right"))
        global_rows.append(GlobalBoundRow(float(s), rank_just_below(barcode, 1, s), model_b1 + below))
        global_rows.append(GlobalBoundRow(float(s), rank_just_above(barcode, 1, s), model_b1 + upto))
    return BoundLedger(rows, global_rows, model_b1)


# ------------------------------------------------------------ reconstruction


def reconstruction_ranks(X: FiniteMetricSpace, r_window, samples: int = 50):
    """H0 and H1 ranks at ``samples`` evenly spaced scales strictly inside the window."""
    lo, hi = r_window
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    F = build_filtration(X, Convention.OPEN, max_value=hi)
    B = compute_barcode(F)
    rs = np.linspace(lo, hi, samples + 2)[1:-1]
    return [(float(r), rank_at(B, 0, r), rank_at(B, 1, r)) for r in rs]


def reconstruction_check(X: FiniteMetricSpace, expected_b1: int, r_window, samples: int = 50,
                         expected_b0: Optional[int] = None) -> bool:
    """True iff H1 has rank ``expected_b1`` throughout the window.

    The filtration is truncated at the top of the window, which leaves
    every complex inside the window unchanged.
    """
    ranks = reconstruction_ranks(X, r_window, samples)
    ok = all(b1 == expected_b1 for _, _, b1 in ranks)
    if expected_b0 is not None:
        ok = ok and all(b0 == expected_b0 for _, b0, _ in ranks)
    return ok


# ------------------------------------------------------ selective detection


@dataclass(frozen=True)
class Detection:
    c: float
    pairs: tuple
    h0_merge: bool
    h1_birth: bool

    @property
    def detected(self) -> bool:
        return self.h0_merge or self.h1_birth


def selective_detection(X: FiniteMetricSpace, records, lam: float, tau: float = DEFAULT_TAU,
                        barcode: Optional[Barcode] = None) -> list[Detection]:
    """Which minimum values show up as events of the selective filtration."""
    if barcode is None:
        barcode = compute_barcode(build_filtration(X, Convention.SELECTIVE, lam=lam))
    spectra = extract_spectra(barcode)
    return [
        Detection(float(c), tuple(sorted(pairs)), _contains(spectra.h0_merge_scales, c),
                  _contains(spectra.h1_birth_scales, c))
        for c, pairs in group_mc(records, tau).items()
    ]


# ------------------------------------------------------ spectrum containment


def verify_spectrum_containment(X: FiniteMetricSpace, epsilon: float, lams=(), records=None,
                                barcodes: Optional[dict] = None) -> dict:
    """Check every H0 merge scale and H1 birth scale against minimum values.

    Runs on the open filtration and on the selective filtration for each
    ``lam`` in ``lams``. Returns a report with a list of violations.
    """
    from .minima import eps_local_minima

    if records is None:
        records = eps_local_minima(X, epsilon)
    values = np.array([r.value for r in records])
    barcodes = dict(barcodes or {})
    report = {"epsilon": float(epsilon), "minimum_values": len(np.unique(values)),
              "filtrations": {}, "violations": []}
    for key in ["open"] + [f"selective:{lam:g}" for lam in lams]:
        if key not in barcodes:
            if key == "open":
                F = build_filtration(X, Convention.OPEN)
            else:
                F = build_filtration(X, Convention.SELECTIVE, lam=float(key.split(":")[1]))
            barcodes[key] = compute_barcode(F)
        spectra = extract_spectra(barcodes[key])
        checked = 0
        for kind, scales in (("h0_merge", spectra.h0_merge_scales), ("h1_birth", spectra.h1_birth_scales)):
            for s in scales:
                checked += 1
                if not _contains(values, s):
                    report["violations"].append({"filtration": key, "kind": kind, "scale": s})
        report["filtrations"][key] = checked
    return report


def dumps(obj) -> str:
    """JSON with dataclasses flattened and infinities as null."""
    def conv(o):
        if hasattr(o, "__dataclass_fields__"):
            return conv(asdict(o))
        if isinstance(o, dict):
            return {str(k): conv(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [conv(v) for v in o]
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (float, np.floating)):
            return None if not np.isfinite(o) else float(o)
        return o
    return json.dumps(conv(obj), indent=1, sort_keys=True)
