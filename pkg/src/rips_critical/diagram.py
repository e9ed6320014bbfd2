"""Hand-rolled SVG persistence diagrams."""

from __future__ import annotations

from .persistence import Barcode

SIZE = 800
MARGIN = 70
COLORS = {0: "#1f77b4", 1: "#d62728"}


def diagram_svg(B: Barcode, title: str = "persistence diagram") -> str:
    """Render ``B`` as an 800x800 SVG.

    Axes run from 0 to 1.05 times the largest finite endpoint. Bars with
    infinite death are drawn on a rail along the top edge.
    """
    finite = [v for b in B.bars for v in (b.birth, b.death) if v != float("inf")]
    top = max(finite, default=1.0) * 1.05 or 1.0
    span = SIZE - 2 * MARGIN
    rail = MARGIN - 25

    def sx(v):
        return MARGIN + span * v / top

    def sy(v):
        return SIZE - MARGIN - span * v / top

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<text x="{SIZE / 2}" y="20" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(top):.3f}" y2="{sy(0):.3f}" stroke="black"/>',
        f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(0):.3f}" y2="{sy(top):.3f}" stroke="black"/>',
        f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(top):.3f}" y2="{sy(top):.3f}" '
        'stroke="gray" stroke-dasharray="6,4"/>',
        f'<line x1="{sx(0):.3f}" y1="{rail}" x2="{sx(top):.3f}" y2="{rail}" stroke="gray" '
        'stroke-dasharray="2,3"/>',
        f'<text x="{sx(0) - 8:.3f}" y="{rail + 4}" text-anchor="end" font-size="12">inf</text>',
    ]
    for k in range(6):
        v = top * k / 5
        out.append(f'<text x="{sx(v):.3f}" y="{sy(0) + 18:.3f}" text-anchor="middle" font-size="11">{v:.3g}</text>')
        out.append(f'<text x="{sx(0) - 8:.3f}" y="{sy(v) + 4:.3f}" text-anchor="end" font-size="11">{v:.3g}</text>')
    out.append(f'<text x="{SIZE / 2}" y="{SIZE - 20}" text-anchor="middle" font-size="14">birth</text>')
    out.append(
        f'<text x="18" y="{SIZE / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {SIZE / 2})">death</text>'
    )
    for b in B.bars:
        y = rail if b.death == float("inf") else sy(b.death)
        out.append(
            f'<circle cx="{sx(b.birth):.3f}" cy="{y:.3f}" r="4" fill="{COLORS.get(b.dim, "black")}" '
            f'fill-opacity="0.7"><title>H{b.dim} ({b.birth:.6g}, {b.death:.6g}]</title></circle>'
        )
    for dim, color in COLORS.items():
        y = SIZE - MARGIN + 40 + 16 * dim
        out.append(f'<circle cx="{SIZE - 150}" cy="{y}" r="4" fill="{color}"/>')
        out.append(f'<text x="{SIZE - 140}" y="{y + 4}" font-size="12">H{dim}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
