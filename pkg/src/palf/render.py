"""Deterministic SVG drawings of fibers with their cycles and of Kirby
diagrams.  Output is plain text assembled in a fixed order, so identical
inputs give byte-identical files."""
from __future__ import annotations

from typing import Sequence

from .builder import Palf, right_offset
from .fiber import BaseArc, SurfaceCurve
from .gridlink import GridDiagram, grid_to_link
from .kirby import KirbyDiagram

PALETTE = (
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)
BASE_FILL = "#c8c8c8"
BAND_FILL = "#6e6e6e"


class _Canvas:
    def __init__(self, width: int, height: int, margin: int) -> None:
        self.w, self.h, self.margin = width, height, margin
        self.items: list[str] = []

    def y(self, y: int) -> int:
        return self.h - y

    def rect(self, x0: int, y0: int, x1: int, y1: int, fill: str, stroke: str = "none") -> None:
        lo, hi = min(y0, y1), max(y0, y1)
        self.items.append(
            f'<rect x="{min(x0, x1)}" y="{self.y(hi)}" width="{abs(x1 - x0)}" height="{hi - lo}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def polyline(self, pts: Sequence[tuple[int, int]], color: str, width: int, closed: bool,
                 dash: str = "") -> None:
        coords = " ".join(f"{x},{self.y(y)}" for x, y in pts)
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<{tag} points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"'
            f' stroke-linejoin="round"{extra}/>'
        )

    def line(self, p: tuple[int, int], q: tuple[int, int], color: str, width: int) -> None:
        self.items.append(
            f'<line x1="{p[0]}" y1="{self.y(p[1])}" x2="{q[0]}" y2="{self.y(q[1])}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def text(self, x: int, y: int, s: str, size: int, color: str = "#000000") -> None:
        self.items.append(
            f'<text x="{x}" y="{self.y(y)}" font-family="monospace" font-size="{size}" fill="{color}">{s}</text>'
        )

    def svg(self) -> str:
        m = self.margin
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-m} {-m} {self.w + 2 * m} {self.h + 2 * m}" '
            f'width="{(self.w + 2 * m) // 2}" height="{(self.h + 2 * m) // 2}">'
        )
        return "\n".join([head, '<rect x="-100%" y="-100%" width="300%" height="300%" fill="#ffffff"/>']
                         + self.items + ["</svg>"]) + "\n"


def cycle_polyline(c: SurfaceCurve) -> list[tuple[int, int]]:
    """Closed planar trace: base arcs joined by straight runs along bands."""
    pts: list[tuple[int, int]] = []
    for s in c.steps:
        if isinstance(s, BaseArc):
            for p in s.points:
                if not pts or pts[-1] != p:
                    pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    return pts


def render_fiber(p: Palf, g: GridDiagram) -> str:
    """Base region as a comb (one tooth per grid row, spine on the right),
    bands as dark strips over their columns, cycles colored by position in
    the factorization, hole markers as white squares."""
    link = grid_to_link(g)
    u = p.unit
    n = p.meta.n
    spine0 = n * u - u // 8
    spine1 = n * u + right_offset(u) + u // 4
    width = spine1 + u // 2
    height = (n + 1) * u
    cv = _Canvas(width, height, u // 2)
    half = u // 8
    for r in range(1, n + 1):
        lo = link.horizontal(r).lo
        cv.rect(lo * u - half, r * u - half, spine0, r * u + half, BASE_FILL)
    cv.rect(spine0, u - half, spine1, n * u + half, BASE_FILL)
    strip = u // 16
    for b in p.fiber.bands:
        (x0, y0), (x1, y1) = b.anchors
        if b.origin == "handle":
            cv.rect(x0 - strip, min(y0, y1) - strip, x0 + strip, max(y0, y1) + strip, BAND_FILL)
            continue
        cv.rect(x0 - strip, min(y0, y1), x0 + strip, max(y0, y1), BAND_FILL)
        cv.text(x0 - strip, max(y0, y1) + strip + u // 16, b.id, u // 6)
    order = {cid: i for i, cid in enumerate(p.factorization.ids)}
    for c in sorted(p.cycles, key=lambda c: order.get(c.id, len(order))):
        pts = cycle_polyline(c)
        if len(pts) < 2:
            continue
        color = PALETTE[order.get(c.id, 0) % len(PALETTE)]
        cv.polyline(pts, color, max(1, u // 40), closed=True)
    for x, y in p.hole_markers:
        cv.rect(x - u // 10, y - u // 10, x + u // 10, y + u // 10, "#ffffff", "#000000")
    legend_y = height
    for i, cid in enumerate(p.factorization.ids):
        cv.text(u // 4 + i * (u // 2), legend_y, cid, u // 6, PALETTE[i % len(PALETTE)])
    return cv.svg()


def render_kirby(kd: KirbyDiagram) -> str:
    """Attaching circles with a framing legend, dotted circles dashed, and a
    gap in the lower strand at every crossing."""
    pts_all = [p for c in kd.attaching + kd.dotted for p in c.points]
    xmin = min(x for x, _ in pts_all)
    ymin = min(y for _, y in pts_all)
    shift = lambda p: (p[0] - xmin, p[1] - ymin)  # noqa: E731
    width = max(x for x, _ in pts_all) - xmin
    height = max(y for _, y in pts_all) - ymin
    scale = max(width, height, 1)
    lw = max(1, scale // 400)
    size = max(1, scale // 40)
    labels = [(f"KD({kd.stage})", "#000000")] + [(f"{c.name}:{c.framing}", "") for c in kd.attaching]
    per_row = max(1, width // (6 * size))
    rows = -(-len(labels) // per_row)
    cv = _Canvas(width, height, max(scale // 20, (2 * rows + 2) * size))
    colors = {}
    for i, c in enumerate(kd.attaching):
        colors[c.name] = PALETTE[i % len(PALETTE)]
    for c in kd.dotted:
        colors[c.name] = "#000000"
        cv.polyline([shift(p) for p in c.points], "#000000", lw, closed=True, dash=f"{3 * lw},{2 * lw}")
        x, y = shift(max(c.points))
        cv.text(x + lw * 2, y, "&#8226;", scale // 40)
    for c in kd.attaching:
        cv.polyline([shift(p) for p in c.points], colors[c.name], lw, closed=True)
    gap = max(2, scale // 150)
    for r in kd.crossings:
        x, y = shift(r.point)
        over = kd.circle(r.over).points
        a, b = over[r.over_seg], over[(r.over_seg + 1) % len(over)]
        if a[0] == b[0]:
            cv.line((x - gap, y), (x + gap, y), "#ffffff", 3 * lw)
            cv.line((x, y - gap), (x, y + gap), colors[r.over], lw)
        else:
            cv.line((x, y - gap), (x, y + gap), "#ffffff", 3 * lw)
            cv.line((x - gap, y), (x + gap, y), colors[r.over], lw)
    for i, (text, color) in enumerate(labels):
        row, col = divmod(i, per_row)
        name = text.split(":")[0]
        cv.text(col * 6 * size, -(2 * row + 2) * size, text, size, color or colors[name])
    return cv.svg()
