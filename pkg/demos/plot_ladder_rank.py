"""
Rank growth on a ladder
=======================

Two rows of k points, close together along each row and far apart
between rows, in the Manhattan metric. Just above the rung length every
rung closes a square with its neighbour, and each square is a loop that
survives for a while: H1 has rank k - 1, so it grows without bound as the
ladder gets longer.
"""

from rips_critical import ladder_space, oracles
from rips_critical.persistence import compute_barcode, rank_at
from rips_critical.rips_complex import build_filtration

for k in range(2, 9):
    X = ladder_space(k, 0.04, 1)
    fast = rank_at(compute_barcode(build_filtration(X)), 1, 1.02)
    slow = oracles.brute_betti(X, 1.02)[1]
    print(f"k={k}  rank H1 at 1.02: {fast} (brute force {slow})")

###############################################################################
# The loops are born at the rung length 1 and die once the short diagonals
# of each cell appear, at 1.04.

B = compute_barcode(build_filtration(ladder_space(5, 0.04, 1)))
print(sorted({(b.birth, round(b.death, 12)) for b in B.in_dim(1)}))
