"""Brute-force reference computations.

Nothing here touches the filtration or reduction code: complexes are
enumerated straight from the definitions and ranks come from dense
Gaussian elimination over Z/2.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .metric_core import FiniteMetricSpace


def gf2_rank(M) -> int:
    A = np.array(M, dtype=np.uint8) & 1
    if A.size == 0:
        return 0
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        hits = np.flatnonzero(A[rank:, c]) + rank
        if not len(hits):
            continue
        p = hits[0]
        if p != rank:
            A[[rank, p]] = A[[p, rank]]
        others = np.flatnonzero(A[:, c])
        others = others[others != rank]
        A[others] ^= A[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _diam(D, s) -> float:
    return max((D[a, b] for a, b in combinations(s, 2)), default=0.0)


def _thin(D, s, bound) -> bool:
    """Is ``s`` covered by two subsets of diameter < bound?"""
    for colours in product((0, 1), repeat=len(s)):
        u0 = [v for v, k in zip(s, colours) if k == 0]
        u1 = [v for v, k in zip(s, colours) if k == 1]
        if _diam(D, u0) < bound and _diam(D, u1) < bound:
            return True
    return False


def is_simplex(X: FiniteMetricSpace, s, r: float, convention: str = "open", lam: float = 1.0) -> bool:
    """Membership of the vertex set ``s`` in the complex at scale ``r``, from the definitions."""
    D = X.dist
    d = _diam(D, s)
    if convention == "closed":
        return d <= r
    if not d < r:
        return False
    if convention == "selective":
        return _thin(D, s, lam * r)
    return True


def brute_complex(X: FiniteMetricSpace, r: float, convention: str = "open", lam: float = 1.0):
    return {
        k: [s for s in combinations(range(X.n), k + 1) if is_simplex(X, s, r, convention, lam)]
        for k in range(3)
    }


def boundary_matrix(lower, upper) -> np.ndarray:
    index = {s: i for i, s in enumerate(lower)}
    M = np.zeros((len(lower), len(upper)), dtype=np.uint8)
    for j, s in enumerate(upper):
        for face in combinations(s, len(s) - 1):
            M[index[face], j] = 1
    return M


def brute_betti(X: FiniteMetricSpace, r: float, convention: str = "open", lam: float = 1.0):
    """(rank H0, rank H1) of the complex at scale ``r`` by full-matrix elimination."""
    K = brute_complex(X, r, convention, lam)
    r1 = gf2_rank(boundary_matrix(K[0], K[1])) if K[1] else 0
    r2 = gf2_rank(boundary_matrix(K[1], K[2])) if K[2] else 0
    return len(K[0]) - r1, len(K[1]) - r1 - r2
