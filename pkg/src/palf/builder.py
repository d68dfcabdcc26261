"""Column sweep turning a grid-position link into a Lefschetz fibration.

Geometry is drawn in integer lane units: grid point (c, r) sits at
(c * U, r * U) with ``U = lane_unit(n)``, leaving room for parallel tracks
between grid lines.

Fiber layout.  The base disk is a comb: one tooth per row, attached to a
spine along column n.  A band for column j is attached at the two ends of
that column's vertical segment.  Walking the disk boundary counterclockwise
visits the rows from top to bottom; within a row, the foot at the right end
of the row's horizontal (on the tooth's upper edge) comes before the foot
at its left end (the tooth's tip).  A 1-handle is a band whose two feet are
adjacent on the boundary: a slit running from the hole out to the boundary
at a half-integer height.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .fiber import (
    BandPass,
    BaseArc,
    Band,
    FiberSurface,
    Foot,
    MonodromyFactorization,
    SurfaceCurve,
    boundary_count,
    euler_char,
    homology_class,
    is_simple,
    self_crossings,
)
from .gridlink import CornerTable, GridDiagram, GridError, GridLink, corner_table, grid_to_link
from .planar import Point, find_crossings


class BuildError(GridError):
    """Input that the construction cannot process."""


class InvariantError(RuntimeError):
    """A construction invariant failed; signals a bug rather than bad input."""


def lane_unit(n: int) -> int:
    return 16 * (n + 2)


def right_offset(unit: int) -> int:
    """Distance from column n to the innermost right-portion track."""
    return unit // 4


@dataclass(frozen=True)
class Slit:
    """Placement of a 1-handle: its strand columns and the half-integer row
    (stored doubled, so 2r+1) at which every strand crosses the slit."""

    index: int
    strands: tuple[int, ...]
    height2: int

    @property
    def band_id(self) -> str:
        return f"h{self.index}"

    def y(self, unit: int) -> int:
        return self.height2 * unit // 2


@dataclass(frozen=True)
class SweepState:
    stage: int
    link: GridLink
    corners: CornerTable
    holes: tuple[int, ...]
    slits: tuple[Slit, ...]
    surface: FiberSurface
    curves: tuple[SurfaceCurve, ...]  # components first, then added curves by index
    added: tuple[int, ...]  # columns that received an added curve so far
    lift: tuple[str, ...]  # per column 1..n-1: pending / lifted / skipped
    feet: tuple[tuple[tuple[int, int, int], Foot], ...]  # sort key -> foot
    unit: int

    @property
    def n(self) -> int:
        return self.link.n

    def curve_map(self) -> dict[str, SurfaceCurve]:
        return {c.id: c for c in self.curves}

    def lifted(self) -> frozenset[int]:
        return frozenset(j for j in range(1, self.n) if self.lift[j - 1] == "lifted")


@dataclass(frozen=True)
class PalfMeta:
    ell: int
    m: int
    n: int
    grid_size: int


@dataclass(frozen=True)
class Palf:
    fiber: FiberSurface
    cycles: tuple[SurfaceCurve, ...]
    factorization: MonodromyFactorization
    meta: PalfMeta
    hole_markers: tuple[Point, ...] = ()
    unit: int = 1

    def cycle_map(self) -> dict[str, SurfaceCurve]:
        return {c.id: c for c in self.cycles}


# ---------------------------------------------------------------- Step 0

def insert_negative_kink(g: GridDiagram, r: int) -> GridDiagram:
    """Insert a small negative curl into the horizontal segment of row r.

    Two new columns go right after the segment's left end and two new rows
    sit directly above and below r.  The curl adds one negative crossing and
    one NW corner.
    """
    n = g.size
    o_c, x_c = g.o_col(r), g.x_col(r)
    a, b = sorted((o_c, x_c))
    east = x_c > o_c

    def row(y: int) -> int:
        return y if y < r else (y + 1 if y == r else y + 2)

    def col(c: int) -> int:
        return c if c <= a else c + 2

    xs = [0] * (n + 2)
    os_ = [0] * (n + 2)
    for c in range(1, n + 1):
        xs[col(c) - 1] = row(g.x(c))
        os_[col(c) - 1] = row(g.o(c))
    v, rr, u = r, r + 1, r + 2
    q, p = a + 1, a + 2
    if east:
        xs[col(b) - 1] = u
        xs[p - 1], os_[p - 1] = rr, v
        xs[q - 1], os_[q - 1] = v, u
    else:
        os_[col(b) - 1] = u
        xs[p - 1], os_[p - 1] = v, rr
        xs[q - 1], os_[q - 1] = u, v
    holes = tuple(col(c) for c in g.hole_columns)
    handles = tuple(tuple(col(c) for c in h) for h in g.dotted_handles)
    return GridDiagram(n + 2, tuple(xs), tuple(os_), holes, handles)


def apply_step0(g: GridDiagram) -> GridDiagram:
    """Add one negative kink for every strand through every dotted circle.

    The kink goes on a horizontal segment of the strand's component whose
    left end lies left of the hole columns; the lowest such row whose kink
    keeps the hole columns NE-topped and crossing-free is used.
    """
    if not g.dotted_handles:
        return g
    for h_idx in range(len(g.dotted_handles)):
        for s_idx in range(len(g.dotted_handles[h_idx])):
            c = g.dotted_handles[h_idx][s_idx]
            link = grid_to_link(g)
            comp = link.owner(c)
            limit = min(g.hole_columns)
            rows = [
                r for r in range(1, g.size + 1)
                if link.row_owner[r - 1] == comp and link.horizontal(r).lo < limit
            ]
            for r in rows:
                trial = insert_negative_kink(g, r)
                tl = grid_to_link(trial)
                try:
                    _validate_holes(tl, corner_table(tl), trial.hole_columns, trial.dotted_handles)
                except BuildError:
                    continue
                g = trial
                break
            else:
                raise BuildError(
                    f"cannot place the kink for strand column {c}: no horizontal segment of its "
                    f"component starts left of column {limit} and keeps the holes valid"
                )
    return g


# ---------------------------------------------------------------- init

def _validate_holes(link: GridLink, corners: CornerTable, holes: Sequence[int],
                    handles: Sequence[Sequence[int]]) -> tuple[Slit, ...]:
    n = link.n
    ell = len(holes)
    if len(handles) != ell:
        raise BuildError(f"{ell} hole column(s) but {len(handles)} handle descriptor(s)")
    if ell == 0:
        return ()
    expected = set(range(n - ell, n))
    if set(holes) != expected:
        raise BuildError(
            f"hole columns must be the {ell} column(s) just left of column {n}, "
            f"i.e. {sorted(expected)}; got {sorted(holes)}"
        )
    crossing_cols = {x.column for x in link.crossings}
    for c in holes:
        if corners.kind(c) != "NE":
            raise BuildError(f"hole column {c} must have an NE top corner")
        if c in crossing_cols:
            raise BuildError(f"hole column {c} must not carry crossings")
    allowed = set(holes) | {n}
    used: set[int] = set()
    slits = []
    taken: set[int] = set()
    for i, strands in enumerate(handles, start=1):
        for c in strands:
            if c not in allowed:
                raise BuildError(f"handle {i}: strand column {c} is not a hole column or column {n}")
            if c in used:
                raise BuildError(f"strand column {c} appears in two handles")
            used.add(c)
        lo_c, hi_c = min(strands), max(strands)
        height = None
        for r in range(1, n):
            if r in taken:
                continue
            spans = [link.vertical(c).lo <= r and r + 1 <= link.vertical(c).hi for c in strands]
            others = [
                link.vertical(c).lo <= r and r + 1 <= link.vertical(c).hi
                for c in range(lo_c + 1, hi_c) if c not in strands
            ]
            if all(spans) and not any(others):
                height = r
                break
        if height is None:
            raise BuildError(f"handle {i}: strands {list(strands)} share no free height for the dotted circle")
        taken.add(height)
        slits.append(Slit(i, tuple(sorted(strands)), 2 * height + 1))
    return tuple(slits)


def _column_foot_key(link: GridLink, j: int, r: int) -> tuple[int, int, int]:
    h = link.horizontal(r)
    kind = 1 if j == h.lo else 0  # tooth tip after the upper edge
    return (-2 * r, kind, 0)


def init_state(link: GridLink, holes: Sequence[int] | None = None,
               handles: Sequence[Sequence[int]] | None = None) -> SweepState:
    g = link.grid
    holes = tuple(g.hole_columns if holes is None else holes)
    handles = tuple(tuple(h) for h in (g.dotted_handles if handles is None else handles))
    corners = corner_table(link)
    slits = _validate_holes(link, corners, holes, handles)
    unit = lane_unit(link.n)
    bands = []
    feet = []
    for s in slits:
        y = s.y(unit)
        xs = [c * unit for c in s.strands]
        bands.append(Band(s.band_id, "handle", s.index, ((min(xs) - unit // 2, y + 1), (min(xs) - unit // 2, y - 1))))
        feet.append(((-s.height2, 0, 0), Foot(s.band_id, 0)))
        feet.append(((-s.height2, 0, 1), Foot(s.band_id, 1)))
    feet.sort(key=lambda kv: kv[0])
    surface = FiberSurface(tuple(bands), tuple(f for _, f in feet))
    lift = tuple("pending" for _ in range(link.n - 1))
    st = SweepState(0, link, corners, holes, slits, surface, (), (), lift, tuple(feet), unit)
    return replace(st, curves=_component_curves(st, frozenset()))


# ---------------------------------------------------------------- curves

def _clean(points: list[Point]) -> tuple[Point, ...]:
    out: list[Point] = []
    for p in points:
        if out and out[-1] == p:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            if (a[0] == b[0] == p[0]) or (a[1] == b[1] == p[1]):
                out[-1] = p
                continue
        out.append(p)
    return tuple(out)


def _component_curves(st: SweepState, lifted: frozenset[int]) -> tuple[SurfaceCurve, ...]:
    link, unit = st.link, st.unit
    slit_of = {c: s for s in st.slits for c in s.strands}
    gap = unit // 16
    out = []
    for k, segs in enumerate(link.components):
        events: list = []
        for seg in segs:
            if seg.kind == "h":
                events.append(("pt", (seg.start * unit, seg.index * unit)))
                events.append(("pt", (seg.end * unit, seg.index * unit)))
                continue
            c = seg.index
            down = seg.end < seg.start
            x = c * unit
            if c in lifted:
                events.append(("pass", BandPass(f"b{c}", 1 if down else -1)))
                continue
            events.append(("pt", (x, seg.start * unit)))
            if c in slit_of:
                s = slit_of[c]
                y = s.y(unit)
                sgn = 1 if down else -1
                events.append(("pt", (x, y + sgn * gap)))
                events.append(("pass", BandPass(s.band_id, 1 if down else -1)))
                events.append(("pt", (x, y - sgn * gap)))
            events.append(("pt", (x, seg.end * unit)))
        out.append(SurfaceCurve(link.component_name(k), _group(events)))
    return tuple(out)


def _group(events: list) -> tuple:
    passes = [i for i, e in enumerate(events) if e[0] == "pass"]
    if not passes:
        pts = list(_clean([p for _, p in events]))
        if pts[0] == pts[-1]:
            pts.pop()
        while len(pts) > 4:  # drop a collinear corner left at the seam
            a, b, c = pts[-1], pts[0], pts[1]
            if (a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1]):
                pts.pop(0)
            else:
                break
        return (BaseArc(tuple(pts + [pts[0]])),)
    i0 = passes[0]
    events = events[i0 + 1:] + events[:i0 + 1]
    steps: list = []
    buf: list[Point] = []
    for kind, val in events:
        if kind == "pt":
            buf.append(val)
        else:
            if buf:
                steps.append(BaseArc(_clean(buf)))
                buf = []
            steps.append(val)
    if buf:
        steps.append(BaseArc(_clean(buf)))
    return tuple(steps)


def _added_curve(st: SweepState, j: int) -> SurfaceCurve:
    """C_j: one pass over band j (parallel to the lifted strand), back along
    row tracks and a right portion on track j beside column n."""
    link, unit = st.link, st.unit
    info = st.corners[j]
    seg = link.vertical(j)
    down = seg.end < seg.start
    n = link.n
    xr = n * unit + right_offset(unit) + j
    x0 = j * unit + unit // 16
    top = info.top_row * unit - j
    bot = info.bottom_row * unit + j
    loop = [(x0, bot), (xr, bot), (xr, top), (x0, top)]  # bottom foot back to top foot
    if down:
        steps = (BandPass(f"b{j}", 1), BaseArc(tuple(loop)))
    else:
        steps = (BandPass(f"b{j}", -1), BaseArc(tuple(reversed(loop))))
    return SurfaceCurve(f"C{j}", steps)


# ---------------------------------------------------------------- sweep

def theta_step(st: SweepState) -> SweepState:
    j = st.stage + 1
    n = st.n
    if j > n - 1:
        raise BuildError(f"sweep already finished at stage {st.stage}")
    lift = list(st.lift)
    if j in st.holes:
        lift[j - 1] = "skipped"
        return replace(st, stage=j, lift=tuple(lift))
    lift[j - 1] = "lifted"
    info = st.corners[j]
    unit = st.unit
    band = Band(f"b{j}", "column", j, ((j * unit, info.top_row * unit), (j * unit, info.bottom_row * unit)))
    feet = list(st.feet)
    feet.append((_column_foot_key(st.link, j, info.top_row), Foot(band.id, 0)))
    feet.append((_column_foot_key(st.link, j, info.bottom_row), Foot(band.id, 1)))
    feet.sort(key=lambda kv: kv[0])
    surface = FiberSurface(st.surface.bands + (band,), tuple(f for _, f in feet))
    nxt = replace(st, stage=j, lift=tuple(lift), surface=surface, feet=tuple(feet), added=st.added + (j,))
    comps = _component_curves(nxt, nxt.lifted())
    added = tuple(c for c in st.curves[len(comps):]) + (_added_curve(nxt, j),)
    nxt = replace(nxt, curves=comps + added)
    _check_stage(nxt)
    return nxt


def _check_stage(st: SweepState) -> None:
    if euler_char(st.surface) != 1 - len(st.surface.bands):
        raise InvariantError("Euler characteristic bookkeeping broke")
    limit = st.stage * st.unit
    for c in st.curves:
        bad = [p for p in self_crossings(c) if p[0] <= limit]
        if bad:
            raise InvariantError(f"stage {st.stage}: {c.id} still crosses itself at {bad[0]}")
    comps = [c for c in st.curves if c.id.startswith("C0")]
    pieces = [a.points for c in comps for a in c.arcs() if len(a.points) > 1]
    for x in find_crossings(pieces, [False] * len(pieces)):
        if x.point[0] <= limit:
            raise InvariantError(f"stage {st.stage}: components still cross at {x.point}")


def run_sweep(st0: SweepState) -> SweepState:
    if st0.stage != 0:
        raise BuildError("run_sweep expects a stage-0 state")
    st = st0
    while st.stage < st.n - 1:
        st = theta_step(st)
    return st


def factorization_order(st: SweepState) -> tuple[str, ...]:
    m = st.link.m
    comps = tuple(st.link.component_name(k) for k in reversed(range(m)))
    return comps + tuple(f"C{j}" for j in sorted(st.added, reverse=True))


def assemble_palf(st: SweepState) -> Palf:
    if st.stage != st.n - 1:
        raise BuildError(f"sweep incomplete: stage {st.stage} of {st.n - 1}")
    s = st.surface
    for c in st.curves:
        if not is_simple(s, c):
            raise InvariantError(f"cycle {c.id} is not simple")
        if homology_class(s, c).is_zero():
            raise InvariantError(f"cycle {c.id} is null-homologous")
    if boundary_count(s) < 1:
        raise InvariantError("fiber has no boundary")
    meta = PalfMeta(len(st.holes), st.link.m, st.n, st.link.grid.size)
    unit = st.unit
    markers = tuple((min(sl.strands) * unit - unit // 2, sl.y(unit)) for sl in st.slits)
    return Palf(s, st.curves, MonodromyFactorization(factorization_order(st)), meta, markers, unit)


def normalize_right_portions(p: Palf) -> Palf:
    """Move hole markers next to column n and renumber right-portion tracks
    consecutively.  Only planar positions change."""
    unit = p.unit
    xn = p.meta.n * unit
    base = xn + right_offset(unit)
    added = sorted(
        (int(c.id[1:]) for c in p.cycles if not c.id.startswith("C0")),
    )
    track = {j: i + 1 for i, j in enumerate(added)}
    cycles = []
    for c in p.cycles:
        if c.id.startswith("C0"):
            cycles.append(c)
            continue
        j = int(c.id[1:])
        steps = []
        for s in c.steps:
            if isinstance(s, BaseArc):
                pts = tuple((base + track[j], y) if x >= base else (x, y) for x, y in s.points)
                steps.append(BaseArc(pts))
            else:
                steps.append(s)
        cycles.append(SurfaceCurve(c.id, tuple(steps)))
    markers = tuple((xn + unit // 8, y) for _, y in p.hole_markers)
    return replace(p, cycles=tuple(cycles), hole_markers=markers)


def build(g: GridDiagram, step0: bool = False) -> tuple[SweepState, Palf]:
    """Full pipeline from a grid to the final sweep state and its PALF."""
    if step0:
        g = apply_step0(g)
    link = grid_to_link(g)
    st = run_sweep(init_state(link))
    return st, assemble_palf(st)


def sweep_states(g: GridDiagram) -> list[SweepState]:
    st = init_state(grid_to_link(g))
    out = [st]
    while st.stage < st.n - 1:
        st = theta_step(st)
        out.append(st)
    return out
