"""
A square, a thin triangle and the selective filtration
======================================================

Four corners of a unit square carry one loop that is born when the sides
appear and dies when the diagonals fill it in. A thin isosceles triangle
carries none under the ordinary Rips filtration, yet its short base is a
critical distance. The selective filtration refuses triangles that are
not thin and so gives that base a bar of its own.
"""

import math

from rips_critical import from_points, witness_triangle
from rips_critical.diagram import diagram_svg
from rips_critical.persistence import compute_barcode
from rips_critical.rips_complex import Convention, build_filtration

square = from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
B = compute_barcode(build_filtration(square))
for bar in B.bars:
    print(bar)

###############################################################################
# The base of the triangle has length 1 and the apex sits 0.3 above its
# midpoint, so both legs are sqrt(0.34) < 1 and the apex is a witness.

X = witness_triangle(1, 0.3)
plain = compute_barcode(build_filtration(X))
print("plain H1 bars:", plain.in_dim(1))

lam = 0.4
sel = compute_barcode(build_filtration(X, Convention.SELECTIVE, lam=lam))
print("selective H1 bars:", sel.in_dim(1))
print("expected death:", math.sqrt(0.34) / lam)

# the triangle only enters once its shortest side is below lam * r
with open("witness_selective.svg", "w") as fh:
    fh.write(diagram_svg(sel, "witness triangle, lambda=0.4"))
