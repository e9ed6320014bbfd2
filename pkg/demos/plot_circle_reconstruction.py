"""
Recovering a circle from 200 samples
====================================

Dense enough samples of a circle see exactly one component and one loop
over a whole range of scales, well before the filtration fills the disk.
"""

import numpy as np

from rips_critical import analysis, circle_sample
from rips_critical.persistence import compute_barcode
from rips_critical.rips_complex import build_filtration

X = circle_sample(200, 1)
ok = analysis.reconstruction_check(X, expected_b1=1, r_window=(0.1, 0.5), samples=50, expected_b0=1)
print("ranks constant at (1, 1):", ok)

###############################################################################
# The loop is born at the chord between neighbours and lives until the
# inscribed triangles can fill it.

B = compute_barcode(build_filtration(X, max_value=1.8))
long_bars = [b for b in B.in_dim(1) if b.death - b.birth > 0.1]
print(long_bars)
print("neighbour chord:", 2 * np.sin(np.pi / 200))
