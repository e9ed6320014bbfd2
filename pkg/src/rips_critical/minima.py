"""Local minima of the distance function on a finite sample, and descent.

On a finite set every pair is trivially a local minimum in the discrete
topology, so minima are taken with respect to a fixed neighbourhood
radius ``epsilon``: the pair ``(i, j)`` is an epsilon-local minimum when no
pair of distinct points ``(i', j')`` with ``d(i, i') < epsilon`` and
``d(j, j') < epsilon`` is strictly closer than ``d(i, j)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .metric_core import FiniteMetricSpace

DEFAULT_TAU = 1e-9


@dataclass(frozen=True)
class LocalMinimumRecord:
    pair: tuple
    value: float
    epsilon: float
    isolated: Optional[bool] = None
    mc_group: Optional[int] = None


def eps_local_minima(
    X: FiniteMetricSpace,
    epsilon: float,
    tau: float = DEFAULT_TAU,
    window: Optional[float] = None,
) -> list[LocalMinimumRecord]:
    """All epsilon-local minima ``(i, j)``, ``i < j``, sorted by value.

    Records carry their group id from :func:`group_mc` (tolerance ``tau``)
    and, when ``window`` is given, their isolation flag.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    D = X.dist
    near = [np.flatnonzero(D[i] < epsilon) for i in range(X.n)]
    found = []
    for i in range(X.n):
        for j in range(i + 1, X.n):
            c = D[i, j]
            if c <= 0:
                continue
            bi, bj = near[i], near[j]
            if len(bi) == 1 and len(bj) == 1:
                found.append(((i, j), float(c)))
                continue
            block = D[np.ix_(bi, bj)]
            # perturbed pairs must stay pairs of distinct points
            block = np.where(bi[:, None] == bj[None, :], np.inf, block)
            if block.min() >= c:
                found.append(((i, j), float(c)))
    found.sort(key=lambda t: (t[1], t[0]))
    records = [LocalMinimumRecord(p, v, float(epsilon)) for p, v in found]
    return annotate(records, tau=tau, window=window)


def _group_ids(values: list[float], tau: float) -> list[int]:
    ids, gid, prev = [], -1, None
    for v in values:
        if prev is None or v - prev > tau:
            gid += 1
        ids.append(gid)
        prev = v
    return ids


def annotate(records, tau: float = DEFAULT_TAU, window: Optional[float] = None):
    """Fill ``mc_group`` (and ``isolated`` when ``window`` is given)."""
    records = sorted(records, key=lambda r: (r.value, r.pair))
    ids = _group_ids([r.value for r in records], tau)
    out = [replace(r, mc_group=g) for r, g in zip(records, ids)]
    if window is not None:
        if window <= 0:
            raise ValueError("window must be positive")
        v = np.array([r.value for r in out])
        flags = []
        for r in out:
            lo = np.searchsorted(v, r.value - window, side="right")
            hi = np.searchsorted(v, r.value + window, side="left")
            near = v[lo:hi]
            flags.append(bool(np.all(np.abs(near - r.value) <= tau)))
        out = [replace(r, isolated=f) for r, f in zip(out, flags)]
    return out


def group_mc(records, tau: float = DEFAULT_TAU) -> dict[float, set]:
    """Cluster records by value (single linkage with tolerance ``tau``).

    Keys are the smallest value in each cluster; values are the sets of
    unordered pairs realising it, so ``len(result[c])`` is ``|M_c|``.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    records = sorted(records, key=lambda r: (r.value, r.pair))
    groups: dict[float, set] = {}
    first: dict[int, float] = {}
    for r, g in zip(records, _group_ids([r.value for r in records], tau)):
        key = first.setdefault(g, r.value)
        groups.setdefault(key, set()).add(tuple(sorted(r.pair)))
    return groups


def mc_size(records, c: float, tau: float = DEFAULT_TAU) -> int:
    """``|M_c|`` for the group holding a record of value ``c`` (0 if none does)."""
    records = sorted(records, key=lambda r: (r.value, r.pair))
    ids = _group_ids([r.value for r in records], tau)
    hit = {g for r, g in zip(records, ids) if abs(r.value - c) <= tau}
    return len({tuple(sorted(r.pair)) for r, g in zip(records, ids) if g in hit})


def is_isolated(records, c: float, window: float, tau: float = DEFAULT_TAU) -> bool:
    """True iff no record value other than ``c`` lies in ``(c - window, c + window)``."""
    if window <= 0:
        raise ValueError("window must be positive")
    values = [r.value for r in records]
    if not any(abs(v - c) <= tau for v in values):
        raise ValueError(f"{c} is not the value of any record")
    return not any(abs(v - c) > tau and abs(v - c) < window for v in values)


def descend(X: FiniteMetricSpace, pair, nu: float):
    """Greedy nu-descent of a pair of points.

    At each step both points may move by at most ``nu``; the move chosen is
    the one reaching the smallest distance strictly below the current one
    (ties broken by the lexicographically smallest new pair). Returns the
    final pair and the trace of visited pairs, starting pair included.
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    i, j = (int(p) for p in pair)
    D = X.dist
    if D[i, j] <= 0:
        raise ValueError("descent needs a pair at positive distance")
    steps = [np.flatnonzero(D[k] <= nu) for k in range(X.n)]
    trace = [(i, j)]
    while True:
        cur = D[i, j]
        bi, bj = steps[i], steps[j]
        block = D[np.ix_(bi, bj)]
        best = block.min()
        if not best < cur:
            break
        a, b = np.argwhere(block == best)[0]  # row-major, so lexicographic
        i, j = int(bi[a]), int(bj[b])
        trace.append((i, j))
    return (i, j), trace


def harness_epsilon(X: FiniteMetricSpace) -> float:
    """Half the smallest gap between distinct pairwise distances, 0 included."""
    vals = np.unique(np.concatenate([[0.0], X.pair_values()]))
    if len(vals) < 2:
        raise ValueError("space has no positive distances")
    return float(np.diff(vals).min() / 2)


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "value", "epsilon", "mc_group", "isolated"])
        for r in records:
            w.writerow([r.pair[0], r.pair[1], format(r.value, ".17g"), format(r.epsilon, ".17g"),
                        "" if r.mc_group is None else r.mc_group,
                        "" if r.isolated is None else str(r.isolated).lower()])
