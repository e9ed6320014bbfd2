"""Filtered 2-skeleta of open, closed and selective Rips filtrations."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .metric_core import FiniteMetricSpace


class Convention(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    SELECTIVE = "selective"


class FilteredSimplex(NamedTuple):
    vertices: tuple
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def sort_key(self):
        return (self.value, len(self.vertices), self.vertices)


@dataclass(frozen=True)
class SelectiveParams:
    """Selective Rips with ``n = 1`` and thinness scale ``r2(r) = lam * r``."""

    lam: float
    n_param: int = 1

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise ValueError(f"selective parameter lambda must lie in (0, 1], got {self.lam}")
        if self.n_param != 1:
            raise ValueError("only n = 1 selective complexes are supported")

    def r2(self, r: float) -> float:
        return self.lam * r


def selective_entry_value(X: FiniteMetricSpace, triangle, lam: float) -> float:
    """Scale above which a triangle belongs to the selective filtration.

    A 3-point set splits into two pieces of diameter < r2 iff its shortest
    side is < r2, so the triangle is present at r iff ``diam < r`` and
    ``min_side < lam * r``.
    """
    a, b, c = triangle
    if len({a, b, c}) != 3:
        raise ValueError(f"degenerate triangle {triangle}")
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    sides = (X.d(a, b), X.d(a, c), X.d(b, c))
    return max(max(sides), min(sides) / lam)


@dataclass(frozen=True, eq=False)
class Filtration:
    """Filtered 2-skeleton stored as per-dimension arrays.

    Edges and triangles are each sorted by ``(value, vertices)``; the
    combined order of :attr:`simplices` is ``(value, dim, vertices)``.
    Under the open and selective conventions a simplex of value ``v`` is in
    the complex at scale ``r`` iff ``v < r``; under the closed one iff
    ``v <= r``.
    """

    space: FiniteMetricSpace
    convention: Convention
    edges: np.ndarray
    edge_values: np.ndarray
    triangles: np.ndarray
    triangle_values: np.ndarray
    lam: float = 1.0
    max_value: Optional[float] = None

    @property
    def n_vertices(self) -> int:
        return self.space.n

    @property
    def strict(self) -> bool:
        return self.convention is not Convention.CLOSED

    def present(self, values: np.ndarray, r: float) -> np.ndarray:
        return values < r if self.strict else values <= r

    def __iter__(self) -> Iterator[FilteredSimplex]:
        return iter(self.simplices)

    def __len__(self):
        return self.n_vertices + len(self.edges) + len(self.triangles)

    @property
    def simplices(self) -> list[FilteredSimplex]:
        out = [FilteredSimplex((i,), 0.0) for i in range(self.n_vertices)]
        out += [FilteredSimplex(tuple(map(int, e)), float(v)) for e, v in zip(self.edges, self.edge_values)]
        out += [
            FilteredSimplex(tuple(map(int, t)), float(v))
            for t, v in zip(self.triangles, self.triangle_values)
        ]
        out.sort(key=FilteredSimplex.sort_key)
        return out

    def edge_index(self) -> dict:
        """Map ``(a, b)`` with ``a < b`` to the edge's position in filtration order."""
        return {(int(a), int(b)): k for k, (a, b) in enumerate(self.edges)}


def _sorted_by_value(simplices: np.ndarray, values: np.ndarray):
    if len(values) == 0:
        return simplices, values
    keys = [simplices[:, c] for c in range(simplices.shape[1] - 1, -1, -1)] + [values]
    order = np.lexsort(keys)
    return simplices[order], values[order]


def _enumerate_triangles(D: np.ndarray, bound: Optional[float]):
    """All i<j<k, with diameter <= bound when given."""
    n = D.shape[0]
    tris = []
    for i in range(n - 2):
        nbrs = np.arange(i + 1, n)
        if bound is not None:
            nbrs = nbrs[D[i, nbrs] <= bound]
        if len(nbrs) < 2:
            continue
        sub = D[np.ix_(nbrs, nbrs)]
        a, b = np.triu_indices(len(nbrs), k=1)
        if bound is not None:
            keep = sub[a, b] <= bound
            a, b = a[keep], b[keep]
        if len(a):
            tris.append(np.column_stack([np.full(len(a), i), nbrs[a], nbrs[b]]))
    if not tris:
        return np.zeros((0, 3), dtype=np.int64)
    return np.vstack(tris).astype(np.int64)


def build_filtration(
    X: FiniteMetricSpace,
    convention: Convention | str = Convention.OPEN,
    max_value: Optional[float] = None,
    lam: Optional[float] = None,
) -> Filtration:
    """Enumerate vertices, edges and triangles with their entry values.

    ``max_value`` drops simplices whose value exceeds it, so the complexes
    (and hence ranks) are exact for every scale ``r <= max_value``.
    """
    convention = Convention(convention)
    if convention is Convention.SELECTIVE:
        if lam is None:
            raise ValueError("selective convention needs lambda")
        lam = SelectiveParams(lam).lam
    else:
        if lam not in (None, 1, 1.0):
            raise ValueError("lambda only applies to the selective convention")
        lam = 1.0
    D = X.dist
    n = X.n

    iu, ju = np.triu_indices(n, k=1)
    ev = D[iu, ju]
    edges = np.column_stack([iu, ju]).astype(np.int64)
    if max_value is not None:
        keep = ev <= max_value
        edges, ev = edges[keep], ev[keep]

    tris = _enumerate_triangles(D, max_value)
    if len(tris):
        s = np.column_stack([D[tris[:, 0], tris[:, 1]], D[tris[:, 0], tris[:, 2]], D[tris[:, 1], tris[:, 2]]])
        tv = s.max(axis=1)
        if convention is Convention.SELECTIVE:
            tv = np.maximum(tv, s.min(axis=1) / lam)
            if max_value is not None:
                keep = tv <= max_value
                tris, tv = tris[keep], tv[keep]
    else:
        tv = np.zeros(0)

    edges, ev = _sorted_by_value(edges, ev)
    tris, tv = _sorted_by_value(tris, tv)
    for arr in (edges, ev, tris, tv):
        arr.setflags(write=False)
    return Filtration(X, convention, edges, ev, tris, tv, lam=lam, max_value=max_value)


def complex_at(F: Filtration, r: float) -> list[FilteredSimplex]:
    """The simplices of the complex at scale ``r``, in filtration order."""
    if r < 0:
        raise ValueError("scale must be non-negative")
    vertex_in = 0.0 < r if F.strict else 0.0 <= r
    out = [FilteredSimplex((i,), 0.0) for i in range(F.n_vertices)] if vertex_in else []
    em = F.present(F.edge_values, r)
    out += [FilteredSimplex(tuple(map(int, e)), float(v)) for e, v in zip(F.edges[em], F.edge_values[em])]
    tm = F.present(F.triangle_values, r)
    out += [
        FilteredSimplex(tuple(map(int, t)), float(v))
        for t, v in zip(F.triangles[tm], F.triangle_values[tm])
    ]
    out.sort(key=FilteredSimplex.sort_key)
    return out


def write_filtration_csv(F: Filtration, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dim", "v0", "v1", "v2", "value"])
        for s in F.simplices:
            v = list(s.vertices) + [""] * (3 - len(s.vertices))
            w.writerow([s.dim, *v, format(s.value, ".17g")])
