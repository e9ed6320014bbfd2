"""Barcodes in dimensions 0 and 1 over the two-element field.

H0 comes from union-find over edges in filtration order; H1 from the
standard column reduction of the triangle boundary matrix, with columns
stored as Python integers used as bit sets (bit ``k`` = edge ``k`` in
filtration order, pivot = highest set bit).
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .rips_complex import Filtration

INF = math.inf


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for v in range(len(self.parent)):
            out.setdefault(self.find(v), []).append(v)
        return sorted(out.values())


class Bar(NamedTuple):
    dim: int
    birth: float
    death: float

    @property
    def finite(self) -> bool:
        return self.death != INF


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars plus the endpoint convention.

    With ``strict=True`` (open and selective filtrations) a bar is the
    half-open interval ``(birth, death]``; with ``strict=False`` (closed
    filtrations) it is ``[birth, death)``.
    """

    bars: tuple
    strict: bool = True

    def in_dim(self, dim: int) -> list[Bar]:
        return [b for b in self.bars if b.dim == dim]

    def __len__(self):
        return len(self.bars)

    def to_json(self) -> str:
        rows = [
            {"dim": b.dim, "birth": b.birth, "death": None if b.death == INF else b.death}
            for b in self.bars
        ]
        return json.dumps(rows, indent=1)

    @classmethod
    def from_json(cls, text: str, strict: bool = True) -> "Barcode":
        rows = json.loads(text)
        bars = tuple(
            Bar(int(r["dim"]), float(r["birth"]), INF if r["death"] is None else float(r["death"]))
            for r in rows
        )
        return cls(bars, strict)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["dim", "birth", "death"])
            for b in self.bars:
                w.writerow([b.dim, format(b.birth, ".17g"), "inf" if b.death == INF else format(b.death, ".17g")])


class ScaleDelta(NamedTuple):
    scale: float
    components: int
    h1_rank: int


@dataclass(frozen=True)
class SpectrumReport:
    h0_merge_scales: list
    h1_birth_scales: list
    deltas: list = field(default_factory=list)

    def events(self) -> list[float]:
        return sorted(set(self.h0_merge_scales) | set(self.h1_birth_scales))


def _merge_events(F: Filtration):
    """(edge position, value) of every edge that joins two components."""
    uf = UnionFind(F.n_vertices)
    merges = []
    for k, (a, b) in enumerate(F.edges):
        if uf.union(int(a), int(b)):
            merges.append((k, float(F.edge_values[k])))
    return merges, uf


def _triangle_columns(F: Filtration) -> list[int]:
    n = F.n_vertices
    pos = np.full((n, n), -1, dtype=np.int64)
    if len(F.edges):
        pos[F.edges[:, 0], F.edges[:, 1]] = np.arange(len(F.edges))
    T = F.triangles
    if not len(T):
        return []
    cols = np.column_stack([pos[T[:, 0], T[:, 1]], pos[T[:, 0], T[:, 2]], pos[T[:, 1], T[:, 2]]])
    if (cols < 0).any():
        raise ValueError("filtration has a triangle whose edge is missing")
    return [(1 << int(p)) | (1 << int(q)) | (1 << int(s)) for p, q, s in cols]


def reduce_h1(F: Filtration) -> tuple[list[tuple[int, int]], set[int]]:
    """Persistence pairs ``(edge position, triangle position)`` and the negative edges.

    Negative edges are the ones that merge components; every other edge
    creates a 1-cycle.
    """
    merges, _ = _merge_events(F)
    negative = {k for k, _ in merges}
    pivots: dict[int, int] = {}
    pairs = []
    for t, col in enumerate(_triangle_columns(F)):
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                pairs.append((low, t))
                break
            col ^= other
    return pairs, negative


def compute_barcode(F: Filtration) -> Barcode:
    ev, tv = F.edge_values, F.triangle_values
    merges, uf = _merge_events(F)
    bars = [Bar(0, 0.0, INF) for _ in range(uf.count)]
    bars += [Bar(0, 0.0, v) for _, v in merges]

    pairs, negative = reduce_h1(F)
    killed = set()
    for e, t in pairs:
        killed.add(e)
        b, d = float(ev[e]), float(tv[t])
        if b < d:
            bars.append(Bar(1, b, d))
    for e in range(len(ev)):
        if e not in negative and e not in killed:
            bars.append(Bar(1, float(ev[e]), INF))
    bars.sort(key=lambda b: (b.dim, b.birth, b.death))
    return Barcode(tuple(bars), strict=F.strict)


def components_at(F: Filtration, r: float) -> list[list[int]]:
    """Connected components of the complex at scale ``r`` (vertex partition)."""
    uf = UnionFind(F.n_vertices)
    for (a, b) in F.edges[F.present(F.edge_values, r)]:
        uf.union(int(a), int(b))
    return uf.groups()


def _alive(b: Bar, r: float, strict: bool) -> bool:
    if strict:
        return b.birth < r <= b.death
    return b.birth <= r < b.death


def rank_at(B: Barcode, dim: int, r: float) -> int:
    """Number of bars of dimension ``dim`` alive at scale ``r``."""
    if r < 0:
        raise ValueError("scale must be non-negative")
    return sum(1 for b in B.bars if b.dim == dim and _alive(b, r, B.strict))


def rank_just_above(B: Barcode, dim: int, c: float) -> int:
    """Rank at scales slightly above ``c`` (before the next event)."""
    return sum(1 for b in B.bars if b.dim == dim and b.birth <= c < b.death)


def rank_just_below(B: Barcode, dim: int, c: float) -> int:
    """Rank at scales slightly below ``c`` (after the previous event)."""
    return sum(1 for b in B.bars if b.dim == dim and b.birth < c <= b.death)


def extract_spectra(B: Barcode) -> SpectrumReport:
    h0 = sorted(b.death for b in B.in_dim(0) if b.finite)
    h1 = sorted(b.birth for b in B.in_dim(1))
    h1_deaths = Counter(b.death for b in B.in_dim(1) if b.finite)
    h0c, h1c = Counter(h0), Counter(h1)
    deltas = [
        ScaleDelta(s, -h0c[s], h1c[s] - h1_deaths[s])
        for s in sorted(set(h0) | set(h1) | set(h1_deaths))
    ]
    return SpectrumReport(h0, h1, deltas)


def merge_scales(F: Filtration) -> list[float]:
    return [v for _, v in _merge_events(F)[0]]


def a1_sequence_check(F: Filtration, a1: float, r: float) -> bool:
    """Compare strict-``r`` components with non-strict ``a1`` components.

    ``a1`` must be the largest merge scale below ``r``.
    """
    below = [v for v in merge_scales(F) if v < r]
    if not below or max(below) != a1:
        raise ValueError(f"a1={a1} is not the largest merge scale below r={r}")
    uf_r, uf_a = UnionFind(F.n_vertices), UnionFind(F.n_vertices)
    for (a, b), v in zip(F.edges, F.edge_values):
        if v < r:
            uf_r.union(int(a), int(b))
        if v <= a1:
            uf_a.union(int(a), int(b))
    return uf_r.groups() == uf_a.groups()
