"""Kirby diagrams KD(j) of the sweep stages, the cancelling-pair move, and
integer homology of the resulting handlebodies.

Every circle is a closed axis-parallel polyline in the lane units of the
builder.  Linking numbers and writhes are computed from signed crossings of
that planar arrangement.  Over/under is decided as follows:

* component circles among themselves: vertical over horizontal (grid rule);
* a dotted circle passes over a strand along its top edge and under along
  its bottom edge, so it links exactly the strands it encircles;
* crossings pinned by a lift template (the NE curl and clasp);
* everything else by vertical order, higher circle over.  A pair of closed
  curves with a consistent over/under has linking number zero.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .builder import Slit, SweepState, lane_unit, right_offset
from .gridlink import CornerTable, GridLink, corner_table
from .intmat import Matrix, SnfResult, smith_normal_form
from .planar import Point, direction, find_crossings, crossing_sign

__all__ = [
    "KCircle",
    "CrossingRecord",
    "KirbyDiagram",
    "ExtendedLinkingMatrix",
    "SnfResult",
    "KirbyError",
    "phi_state_to_kd",
    "psi_move",
    "framings_of",
    "extended_linking_matrix",
    "h1_presentation",
    "smith_normal_form",
    "kd_chain",
    "linking",
    "writhe",
]


class KirbyError(ValueError):
    pass


@dataclass(frozen=True)
class KCircle:
    name: str
    kind: str  # "attaching" or "dotted"
    points: tuple[Point, ...]  # closed polyline, first point not repeated
    framing: int | None = None
    tag: str = ""  # "component", "NW", "NE" for attaching circles; band id for dotted


@dataclass(frozen=True)
class CrossingRecord:
    over: str
    over_seg: int
    under: str
    under_seg: int
    point: Point
    sign: int


@dataclass(frozen=True)
class KirbyDiagram:
    stage: int
    dotted: tuple[KCircle, ...]
    attaching: tuple[KCircle, ...]
    vertical_order: tuple[str, ...]  # attaching circle names, top to bottom
    crossings: tuple[CrossingRecord, ...]
    pinned: tuple[tuple[Point, str, int], ...] = ()  # template crossings: point, over circle, over segment

    def circle(self, name: str) -> KCircle:
        for c in self.attaching + self.dotted:
            if c.name == name:
                return c
        raise KirbyError(f"no circle named {name!r}")

    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.attaching + self.dotted)


@dataclass(frozen=True)
class ExtendedLinkingMatrix:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------- geometry

def component_polyline(link: GridLink, comp: int, unit: int) -> tuple[Point, ...]:
    """Corners of a component in traversal order (vertical start, end, ...)."""
    out = []
    for seg in link.components[comp]:
        if seg.kind == "v":
            out.append((seg.index * unit, seg.start * unit))
            out.append((seg.index * unit, seg.end * unit))
    return tuple(out)


def dotted_square(j: int, top_row: int, unit: int) -> tuple[Point, ...]:
    x0, x1 = j * unit - unit // 8, j * unit + unit // 8
    y0, y1 = top_row * unit - 13 * unit // 16, top_row * unit - 11 * unit // 16
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def dotted_slit(s: Slit, unit: int) -> tuple[Point, ...]:
    y = s.y(unit)
    x0, x1 = min(s.strands) * unit - unit // 8, max(s.strands) * unit + unit // 8
    y0, y1 = y - unit // 8, y + unit // 8
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def added_polyline(link: GridLink, corners: CornerTable, j: int, unit: int) -> tuple[Point, ...]:
    """C-bar_j: down column j beside the lifted strand, through the dotted
    circle, back along the row tracks and a right portion on track j.
    The NE version carries a curl whose loop clasps the strand."""
    n = link.n
    info = corners[j]
    top = info.top_row * unit - j
    bot = info.bottom_row * unit + j
    xr = n * unit + right_offset(unit) + j
    xj = j * unit
    if info.top == "NW":
        x0 = xj + unit // 16
        pts = [(x0, top), (x0, bot), (xr, bot), (xr, top)]
    else:
        y1 = info.top_row * unit - unit // 4
        y3 = info.top_row * unit - 3 * unit // 8
        y2 = info.top_row * unit - unit // 2
        xa, xb = xj + unit // 16, xj + unit // 32
        pts = [
            (xa, top), (xa, y1), (xj - unit // 4, y1), (xj - unit // 4, y2),
            (xj + unit // 8, y2), (xj + unit // 8, y3), (xb, y3), (xb, bot),
            (xr, bot), (xr, top),
        ]
    seg = link.vertical(j)
    if seg.end > seg.start:  # strand runs upward: follow it
        pts = [pts[0]] + pts[1:][::-1]
    return tuple(pts)


def _template_points(link: GridLink, corners: CornerTable, j: int, unit: int) -> tuple[Point, Point, Point]:
    """Clasp crossings (two) and the curl crossing of the NE template."""
    info = corners[j]
    xj = j * unit
    y1 = info.top_row * unit - unit // 4
    y2 = info.top_row * unit - unit // 2
    return (xj, y1), (xj, y2), (xj + unit // 32, y2)


# ---------------------------------------------------------------- assembly

def _segments(points: Sequence[Point]) -> list[tuple[Point, Point]]:
    k = len(points)
    return [(points[i], points[(i + 1) % k]) for i in range(k)]


def _resolve(circles: Sequence[KCircle], order: Sequence[str],
             pinned: dict[Point, tuple[str, int]]) -> list[CrossingRecord]:
    pts = [c.points for c in circles]
    segs = [_segments(p) for p in pts]
    rank = {name: i for i, name in enumerate(order)}
    out = []
    for x in find_crossings(pts, [True] * len(pts)):
        vc, vs = x.vertical.curve, x.vertical.seg
        hc, hs = x.horizontal.curve, x.horizontal.seg
        a, b = circles[vc], circles[hc]
        v_over: bool
        if x.point in pinned:
            name, seg = pinned[x.point]
            v_over = (a.name == name and vs == seg)
            if not v_over and not (b.name == name and hs == seg):
                raise KirbyError(f"pinned crossing at {x.point} does not match {name}")
        elif a.tag == "component" and b.tag == "component":
            v_over = True
        elif b.kind == "dotted":
            p, q = segs[hc][hs]
            v_over = p[1] != max(y for _, y in b.points)  # under the top edge
        elif a.kind == "dotted":
            v_over = True
        else:
            v_over = rank[a.name] < rank[b.name]
        pv, qv = segs[vc][vs]
        ph, qh = segs[hc][hs]
        if v_over:
            sign = crossing_sign(direction(pv, qv), direction(ph, qh))
            out.append(CrossingRecord(a.name, vs, b.name, hs, x.point, sign))
        else:
            sign = crossing_sign(direction(ph, qh), direction(pv, qv))
            out.append(CrossingRecord(b.name, hs, a.name, vs, x.point, sign))
    return out


def _lk_from(records: Sequence[CrossingRecord], a: str, b: str) -> int:
    total = sum(r.sign for r in records if {r.over, r.under} == {a, b} and r.over != r.under)
    if total % 2:
        raise KirbyError(f"odd crossing sum between {a} and {b}")
    return total // 2


def _assemble(stage: int, link: GridLink, corners: CornerTable, slits: Sequence[Slit],
              lifted: Sequence[int], comp_framings: Sequence[int] | None,
              added_framings: dict[int, int] | None, unit: int) -> KirbyDiagram:
    """Lay out KD geometry.  Framing arguments of None mean: derive them
    from the geometry by the stage formulas."""
    m = link.m
    comps = [
        KCircle(link.component_name(k), "attaching", component_polyline(link, k, unit), None, "component")
        for k in range(m)
    ]
    lifted = sorted(lifted)
    added = [
        KCircle(f"C{j}", "attaching", added_polyline(link, corners, j, unit), None, corners.kind(j))
        for j in lifted
    ]
    dotted = [KCircle(f"D{s.index}h", "dotted", dotted_slit(s, unit), None, s.band_id) for s in slits]
    dotted += [KCircle(f"D{j}", "dotted", dotted_square(j, corners[j].top_row, unit), None, f"b{j}") for j in lifted]
    order = tuple(c.name for c in reversed(comps)) + tuple(c.name for c in reversed(added))
    circles = comps + added + dotted
    ne = [j for j in lifted if corners.kind(j) == "NE"]
    pinned: dict[Point, tuple[str, int]] = {}
    # first pass without clasp decisions, to read s and t off the dotted circles
    for j in ne:
        clasp1, clasp2, curl = _template_points(link, corners, j, unit)
        owner = link.component_name(link.owner(j))
        pinned[clasp1] = (owner, _seg_at(comps[link.owner(j)].points, clasp1, vertical=True))
        pinned[clasp2] = (owner, _seg_at(comps[link.owner(j)].points, clasp2, vertical=True))
        pinned[curl] = (f"C{j}", _seg_at(_named(added, f"C{j}").points, curl, vertical=True))
    records = _resolve(circles, order, pinned)
    for j in ne:
        clasp1, clasp2, curl = _template_points(link, corners, j, unit)
        owner = link.component_name(link.owner(j))
        cj = f"C{j}"
        s = _lk_from(records, owner, f"D{j}")
        t = _lk_from(records, cj, f"D{j}")
        cpts = _named(added, cj).points
        owner_seg = pinned[clasp1][1]
        options = [
            {clasp1: (owner, owner_seg), clasp2: (cj, _seg_at(cpts, clasp2, vertical=False))},
            {clasp1: (cj, _seg_at(cpts, clasp1, vertical=False)), clasp2: (owner, owner_seg)},
        ]
        for opt in options:
            trial = dict(pinned)
            trial.update(opt)
            recs = [r for r in _resolve(circles, order, trial) if r.point in (clasp1, clasp2)]
            if sum(r.sign for r in recs) == -2 * s * t:
                pinned.update(opt)
                break
        else:
            raise KirbyError(f"no clasp choice realizes the NE template at column {j}")
        for over_vertical in (True, False):
            trial = dict(pinned)
            trial[curl] = (cj, _seg_at(cpts, curl, vertical=over_vertical))
            recs = [r for r in _resolve(circles, order, trial) if r.point == curl]
            if recs and recs[0].sign == -1:
                pinned[curl] = trial[curl]
                break
    records = _resolve(circles, order, pinned)
    # framings
    table = corners
    out_comps = []
    for k, c in enumerate(comps):
        if comp_framings is None:
            w = sum(r.sign for r in records if r.over == c.name and r.under == c.name)
            lam = sum(
                1 for col in range(stage + 1, link.n)
                if link.owner(col) == k and table.kind(col) == "NW" and col not in lifted
            )
            f = w - lam - 1
        else:
            f = comp_framings[k]
        out_comps.append(replace(c, framing=f))
    out_added = []
    for c in added:
        j = int(c.name[1:])
        if added_framings is None:
            w = sum(r.sign for r in records if r.over == c.name and r.under == c.name)
            f = w - 1
        else:
            f = added_framings[j]
        out_added.append(replace(c, framing=f))
    pins = tuple(sorted((p, name, seg) for p, (name, seg) in pinned.items()))
    return KirbyDiagram(stage, tuple(dotted), tuple(out_comps + out_added), order, tuple(records), pins)


def _named(circles: Sequence[KCircle], name: str) -> KCircle:
    for c in circles:
        if c.name == name:
            return c
    raise KirbyError(name)


def _seg_at(points: Sequence[Point], p: Point, vertical: bool) -> int:
    for i, (a, b) in enumerate(_segments(points)):
        if vertical and a[0] == b[0] == p[0] and min(a[1], b[1]) < p[1] < max(a[1], b[1]):
            return i
        if not vertical and a[1] == b[1] == p[1] and min(a[0], b[0]) < p[0] < max(a[0], b[0]):
            return i
    raise KirbyError(f"no {'vertical' if vertical else 'horizontal'} segment through {p}")


# ---------------------------------------------------------------- public ops

def phi_state_to_kd(st: SweepState) -> KirbyDiagram:
    return _assemble(st.stage, st.link, st.corners, st.slits, sorted(st.lifted()), None, None, st.unit)


def psi_move(kd: KirbyDiagram, j: int, corner: str, st: SweepState) -> KirbyDiagram:
    """Cancelling 1-handle/2-handle pair at column j.

    ``st`` supplies the grid geometry (any sweep state of the same input).
    Framings follow the move: NW raises the owner's framing by one and
    frames the new circle -1; NE leaves the owner alone and frames it -2.
    """
    if corner not in ("NW", "NE"):
        raise KirbyError(f"unknown corner kind {corner!r}")
    names = {c.name for c in kd.attaching}
    if f"C{j}" in names or any(c.name == f"D{j}" for c in kd.dotted):
        raise KirbyError(f"column {j} already processed")
    link = st.link
    owner = link.owner(j)
    comp_fr = [c.framing for c in kd.attaching if c.tag == "component"]
    added_fr = {int(c.name[1:]): c.framing for c in kd.attaching if c.tag != "component"}
    if corner == "NW":
        comp_fr[owner] += 1
        added_fr[j] = -1
    else:
        added_fr[j] = -2
    lifted = sorted(added_fr)
    return _assemble(j, link, st.corners, st.slits, lifted, comp_fr, added_fr, st.unit)


def framings_of(kd: KirbyDiagram) -> tuple[int, ...]:
    """Components C01..C0m, then added circles by increasing index."""
    comps = [c for c in kd.attaching if c.tag == "component"]
    added = sorted((c for c in kd.attaching if c.tag != "component"), key=lambda c: int(c.name[1:]))
    return tuple(c.framing for c in comps + added)


def linking(kd: KirbyDiagram, a: str, b: str) -> int:
    return _lk_from(kd.crossings, a, b)


def writhe(kd: KirbyDiagram, name: str) -> int:
    return sum(r.sign for r in kd.crossings if r.over == name and r.under == name)


def extended_linking_matrix(kd: KirbyDiagram) -> ExtendedLinkingMatrix:
    att = {c.name: c for c in kd.attaching}
    labels = tuple(kd.vertical_order) + tuple(c.name for c in kd.dotted)
    framing = {name: att[name].framing for name in kd.vertical_order}
    for c in kd.dotted:
        framing[c.name] = 0
    if any(v is None for v in framing.values()):
        raise KirbyError("missing framing data")
    pair: dict[frozenset, int] = {}
    for r in kd.crossings:
        if r.over != r.under:
            key = frozenset((r.over, r.under))
            pair[key] = pair.get(key, 0) + r.sign
    rows = []
    for a in labels:
        row = []
        for b in labels:
            if a == b:
                row.append(framing[a])
            else:
                v = pair.get(frozenset((a, b)), 0)
                if v % 2:
                    raise KirbyError(f"odd crossing sum between {a} and {b}")
                row.append(v // 2)
        rows.append(tuple(row))
    return ExtendedLinkingMatrix(labels, tuple(rows))


def h1_presentation(kd: KirbyDiagram) -> Matrix:
    """Rows: dotted circles.  Columns: attaching circles (vertical order).
    Entry: signed number of passes, i.e. the linking number."""
    return [[linking(kd, a, d.name) for a in kd.vertical_order] for d in kd.dotted]


def boundary_homology(kd: KirbyDiagram) -> SnfResult:
    elm = extended_linking_matrix(kd)
    k = len(elm.labels)
    return smith_normal_form([list(r) for r in elm.matrix], k, k)


def handlebody_homology(kd: KirbyDiagram) -> SnfResult:
    return smith_normal_form(h1_presentation(kd), len(kd.dotted), len(kd.attaching))


def kd_chain(states: Sequence[SweepState]) -> tuple[list[KirbyDiagram], list[KirbyDiagram]]:
    """KD(0..n-1) via phi on each sweep state, plus the psi-derived
    diagrams KD'(j-1) for j = 1..n-1 (for cross-checking)."""
    phi = [phi_state_to_kd(st) for st in states]
    psi = []
    for j in range(1, len(states)):
        st = states[j]
        prev = phi[j - 1]
        if j in st.holes:
            psi.append(replace(prev, stage=j))
        else:
            psi.append(psi_move(prev, j, st.corners.kind(j), st))
    return phi, psi


def reversed_orientation(kd: KirbyDiagram, names: Sequence[str]) -> KirbyDiagram:
    """Same diagram with the listed circles traversed backwards.  Only
    crossing signs change; segment indices are remapped accordingly."""
    flip = set(names)
    seg_count = {c.name: len(c.points) for c in kd.attaching + kd.dotted}

    def rev(c: KCircle) -> KCircle:
        if c.name not in flip:
            return c
        return replace(c, points=(c.points[0],) + tuple(reversed(c.points[1:])))

    def seg(name: str, i: int) -> int:
        if name not in flip:
            return i
        return (seg_count[name] - 1 - i) % seg_count[name]

    recs = []
    for r in kd.crossings:
        s = r.sign
        if (r.over in flip) != (r.under in flip):
            s = -s
        recs.append(replace(r, over_seg=seg(r.over, r.over_seg), under_seg=seg(r.under, r.under_seg), sign=s))
    return replace(
        kd,
        attaching=tuple(rev(c) for c in kd.attaching),
        dotted=tuple(rev(c) for c in kd.dotted),
        crossings=tuple(recs),
    )


def unit_for(link: GridLink) -> int:
    return lane_unit(link.n)


def corners_for(link: GridLink) -> CornerTable:
    return corner_table(link)
