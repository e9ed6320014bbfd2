"""Finite metric spaces: construction, validation, balls, generators and CSV I/O."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

SYMMETRY_TOL = 1e-12
TRIANGLE_TOL = 1e-9


class MetricError(ValueError):
    """Raised when input cannot form a valid finite metric space."""


class MetricKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A finite set of points with a symmetric distance matrix.

    ``coords`` and ``labels`` are metadata; every algorithm in the package
    reads ``dist`` only.
    """

    dist: np.ndarray
    labels: Optional[tuple] = None
    coords: Optional[np.ndarray] = None
    kind: MetricKind = MetricKind.EXPLICIT

    def __post_init__(self):
        self.dist.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self):
        return self.n

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def diameter(self, idx: Sequence[int] | None = None) -> float:
        if idx is None:
            return float(self.dist.max()) if self.n else 0.0
        idx = list(idx)
        if len(idx) < 2:
            return 0.0
        return float(self.dist[np.ix_(idx, idx)].max())

    def pair_values(self) -> np.ndarray:
        """Distances of all unordered pairs i < j, in row-major order."""
        iu = np.triu_indices(self.n, k=1)
        return self.dist[iu]

    def triangle_violations(self, tol: float = TRIANGLE_TOL) -> list[tuple[int, int, int, float]]:
        """Triples (i, j, k, excess) with d(i,k) > d(i,j) + d(j,k) + tol."""
        D = self.dist
        out = []
        for j in range(self.n):
            excess = D - (D[:, j][:, None] + D[j, :][None, :])
            bad = np.argwhere(excess > tol)
            for i, k in bad:
                out.append((int(i), j, int(k), float(excess[i, k])))
        return out


def _check_matrix(m: np.ndarray) -> np.ndarray:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {m.shape}")
    if m.shape[0] == 0:
        raise MetricError("empty distance matrix")
    if not np.all(np.isfinite(m)):
        raise MetricError("distance matrix has non-finite entries")
    if np.any(np.diag(m) != 0):
        raise MetricError("distance matrix has a nonzero diagonal entry")
    if np.any(m < 0):
        raise MetricError("distance matrix has a negative entry")
    asym = np.abs(m - m.T).max()
    if asym > SYMMETRY_TOL:
        raise MetricError(f"distance matrix is asymmetric (max |d_ij - d_ji| = {asym:g})")
    return (m + m.T) / 2.0


def from_matrix(matrix, validate_triangle: bool = False, labels=None) -> FiniteMetricSpace:
    m = _check_matrix(np.array(matrix, dtype=np.float64))
    X = FiniteMetricSpace(m, labels=tuple(labels) if labels is not None else None)
    if validate_triangle:
        bad = X.triangle_violations()
        if bad:
            i, j, k, e = bad[0]
            raise MetricError(
                f"triangle inequality violated at ({i}, {j}, {k}) by {e:g} "
                f"({len(bad)} violating triples)"
            )
    return X


def _pairwise(pts: np.ndarray, kind: MetricKind) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    if kind is MetricKind.EUCLIDEAN:
        return np.sqrt((diff * diff).sum(axis=-1))
    if kind is MetricKind.MANHATTAN:
        return np.abs(diff).sum(axis=-1)
    raise MetricError(f"cannot compute distances for metric kind {kind}")


def from_points(points, kind: MetricKind | str = MetricKind.EUCLIDEAN, labels=None) -> FiniteMetricSpace:
    kind = MetricKind(kind)
    if kind is MetricKind.EXPLICIT:
        raise MetricError("explicit metric needs a matrix, use from_matrix")
    rows = [list(map(float, p)) for p in points]
    if not rows:
        raise MetricError("empty point set")
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise MetricError(f"points have mismatched dimensions {sorted(dims)}")
    pts = np.array(rows, dtype=np.float64)
    if pts.shape[1] == 0:
        raise MetricError("points have dimension 0")
    D = _pairwise(pts, kind)
    # hypot-style rounding can leave |d_ij - d_ji| at 1 ulp
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return FiniteMetricSpace(
        D, labels=tuple(labels) if labels is not None else None, coords=pts, kind=kind
    )


def ball(X: FiniteMetricSpace, i: int, r: float, closed: bool = False) -> set[int]:
    """Indices within distance < r of point i (<= r when ``closed``)."""
    if not 0 <= i < X.n:
        raise IndexError(f"point index {i} out of range for {X.n} points")
    row = X.dist[i]
    hits = row <= r if closed else row < r
    return set(np.flatnonzero(hits).tolist())


# ---------------------------------------------------------------- generators


def circle_sample(n: int, radius: float = 1.0) -> FiniteMetricSpace:
    """``n`` equally spaced points on a circle, chord metric."""
    if n < 3:
        raise MetricError("circle_sample needs n >= 3")
    if radius <= 0:
        raise MetricError("radius must be positive")
    t = 2 * np.pi * np.arange(n) / n
    pts = np.column_stack([radius * np.cos(t), radius * np.sin(t)])
    X = from_points(pts, MetricKind.EUCLIDEAN)
    # Replace coordinate round-off with exact chords so rotational ties are exact.
    k = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    k = np.minimum(k, n - k)
    D = 2 * radius * np.sin(np.pi * k / n)
    np.fill_diagonal(D, 0.0)
    return FiniteMetricSpace(D, coords=X.coords.copy(), kind=MetricKind.EUCLIDEAN)


def ladder_space(k: int, gap: float, height: float) -> FiniteMetricSpace:
    """Two parallel rows of ``k`` points under the Manhattan metric.

    Lower points ``x_j = (gap*j, 0)`` get indices ``0..k-1``; upper points
    ``y_j = (gap*j, height)`` get ``k..2k-1``. Rungs ``(x_j, y_j)`` sit at
    distance ``height`` and every other cross pair at ``height + gap*|j-m|``,
    so for scales in ``(height, height + gap]`` only the rungs join the rows.
    """
    if k < 2:
        raise MetricError("ladder_space needs k >= 2")
    if not (gap > 0 and height > 0 and gap * (k - 1) < height):
        raise MetricError(
            f"ladder_space needs 0 < gap*(k-1) < height, got gap={gap}, k={k}, height={height}"
        )
    xs = gap * np.arange(k)
    pts = np.vstack(
        [np.column_stack([xs, np.zeros(k)]), np.column_stack([xs, np.full(k, float(height))])]
    )
    labels = [f"x{j}" for j in range(k)] + [f"y{j}" for j in range(k)]
    return from_points(pts, MetricKind.MANHATTAN, labels=labels)


def witness_triangle(c: float, h: float) -> FiniteMetricSpace:
    """x=(0,0), y=(c,0), z=(c/2,h): z lies within c of both x and y."""
    if not (c > 0 and h > 0):
        raise MetricError("witness_triangle needs c > 0 and h > 0")
    if not math.hypot(c / 2, h) < c:
        raise MetricError(f"apex too high: d(x,z) = {math.hypot(c / 2, h):g} >= c = {c:g}")
    pts = [(0.0, 0.0), (float(c), 0.0), (c / 2, float(h))]
    return from_points(pts, MetricKind.EUCLIDEAN, labels=["x", "y", "z"])


def cluster_sample(specs, seed: int = 0) -> FiniteMetricSpace:
    """Random points around given centers.

    ``specs`` is a sequence of ``(center, count, spread)``; each point lies
    within ``spread`` of its center. Output is a pure function of
    ``(specs, seed)``.
    """
    rng = np.random.default_rng(seed)
    blocks, labels = [], []
    dim = None
    for ci, (center, count, spread) in enumerate(specs):
        center = np.asarray(center, dtype=np.float64)
        if dim is None:
            dim = center.size
        elif center.size != dim:
            raise MetricError("cluster centers have mismatched dimensions")
        if count < 1 or spread < 0:
            raise MetricError("cluster counts must be >= 1 and spreads >= 0")
        direction = rng.normal(size=(count, dim))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        radii = spread * rng.random((count, 1)) ** (1.0 / dim)
        blocks.append(center + direction / norms * radii)
        labels += [f"c{ci}_{m}" for m in range(count)]
    if not blocks:
        raise MetricError("cluster_sample needs at least one cluster")
    return from_points(np.vstack(blocks), MetricKind.EUCLIDEAN, labels=labels)


def random_planar(n: int, rng: np.random.Generator, min_gap: float = 1e-9,
                  max_tries: int = 1000) -> FiniteMetricSpace:
    """Uniform points in the unit square, resampled until pairwise distances are distinct."""
    for _ in range(max_tries):
        X = from_points(rng.random((n, 2)), MetricKind.EUCLIDEAN)
        v = np.sort(X.pair_values())
        if v[0] > min_gap and np.all(np.diff(v) > min_gap):
            return X
    raise RuntimeError("could not draw a point set in general position")


# ---------------------------------------------------------------- file I/O


def _rows(text: str) -> list[list[str]]:
    rows = [
        [c.strip() for c in row if c.strip() != ""]
        for row in csv.reader(io.StringIO(text))
    ]
    return [r for r in rows if r and not r[0].startswith("#")]


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_points_csv(path, kind: MetricKind | str = MetricKind.EUCLIDEAN) -> FiniteMetricSpace:
    rows = _rows(Path(path).read_text())
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise MetricError(f"{path}: no points")
    return from_points([[float(c) for c in r] for r in rows], kind)


def read_matrix_csv(path, validate_triangle: bool = False) -> FiniteMetricSpace:
    """Read a full square or lower-triangular (diagonal included) matrix."""
    rows = _rows(Path(path).read_text())
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise MetricError(f"{path}: empty matrix")
    n = len(rows)
    lengths = [len(r) for r in rows]
    vals = [[float(c) for c in r] for r in rows]
    if all(L == n for L in lengths):
        m = np.array(vals)
    elif lengths == list(range(1, n + 1)):
        m = np.zeros((n, n))
        for i, r in enumerate(vals):
            m[i, : i + 1] = r
        m = m + np.tril(m, -1).T
    else:
        raise MetricError(f"{path}: rows are neither square nor lower-triangular")
    return from_matrix(m, validate_triangle=validate_triangle)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_points_csv(X: FiniteMetricSpace, path) -> None:
    if X.coords is None:
        raise MetricError("space has no coordinates to write")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{k}" for k in range(X.coords.shape[1])])
        for p in X.coords:
            w.writerow([_fmt(v) for v in p])


def write_matrix_csv(X: FiniteMetricSpace, path, lower: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i in range(X.n):
            row = X.dist[i, : i + 1] if lower else X.dist[i]
            w.writerow([_fmt(v) for v in row])
