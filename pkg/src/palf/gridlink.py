"""Grid diagrams, the rectilinear links they carry, and Legendrian data.

Conventions: columns and rows are numbered 1..n, rows bottom to top.
Horizontal segments run O -> X, vertical segments run X -> O, and at every
crossing the vertical strand passes over.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class GridError(ValueError):
    """Raised for malformed grid or front input."""


@dataclass(frozen=True)
class GridDiagram:
    """An n x n grid.  ``x_row[c-1]`` is the row of the X in column c."""

    size: int
    x_row: tuple[int, ...]
    o_row: tuple[int, ...]
    hole_columns: tuple[int, ...] = ()
    dotted_handles: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        n = self.size
        if n < 2:
            raise GridError(f"grid size must be at least 2, got {n}")
        for name, perm in (("X", self.x_row), ("O", self.o_row)):
            if len(perm) != n:
                raise GridError(f"{name} marks: expected {n} entries, got {len(perm)}")
            if sorted(perm) != list(range(1, n + 1)):
                raise GridError(f"{name} marks must occupy every row exactly once: {list(perm)}")
        for c in range(1, n + 1):
            if self.x_row[c - 1] == self.o_row[c - 1]:
                raise GridError(f"column {c} has X and O in the same cell (row {self.x_row[c - 1]})")
        holes = self.hole_columns
        if len(set(holes)) != len(holes):
            raise GridError(f"duplicate hole columns: {list(holes)}")
        for c in holes:
            if not 1 <= c <= n - 1:
                raise GridError(f"hole column {c} outside 1..{n - 1}")
        if len(self.dotted_handles) != len(holes):
            raise GridError(
                f"{len(holes)} hole column(s) but {len(self.dotted_handles)} handle descriptor(s)"
            )
        for h in self.dotted_handles:
            if not h:
                raise GridError("handle descriptor without strands")
            if len(set(h)) != len(h):
                raise GridError(f"handle descriptor repeats a column: {list(h)}")
            for c in h:
                if not 1 <= c <= n:
                    raise GridError(f"handle strand column {c} outside 1..{n}")

    @property
    def n(self) -> int:
        return self.size

    def x(self, c: int) -> int:
        return self.x_row[c - 1]

    def o(self, c: int) -> int:
        return self.o_row[c - 1]

    def x_col(self, r: int) -> int:
        return self.x_row.index(r) + 1

    def o_col(self, r: int) -> int:
        return self.o_row.index(r) + 1

    def with_annotations(self, holes: Sequence[int], handles: Sequence[Sequence[int]]) -> GridDiagram:
        return GridDiagram(self.size, self.x_row, self.o_row, tuple(holes), tuple(tuple(h) for h in handles))


@dataclass(frozen=True)
class Segment:
    """A directed segment.  For a vertical, ``index`` is the column and
    ``start``/``end`` are rows; for a horizontal the roles swap."""

    kind: str  # 'v' or 'h'
    index: int
    start: int
    end: int

    @property
    def lo(self) -> int:
        return min(self.start, self.end)

    @property
    def hi(self) -> int:
        return max(self.start, self.end)

    @property
    def direction(self) -> int:
        return 1 if self.end > self.start else -1


@dataclass(frozen=True)
class Crossing:
    column: int
    row: int
    sign: int
    over: int  # component owning the vertical strand
    under: int  # component owning the horizontal strand


@dataclass(frozen=True)
class GridLink:
    grid: GridDiagram
    components: tuple[tuple[Segment, ...], ...]
    crossings: tuple[Crossing, ...]
    column_owner: tuple[int, ...]
    row_owner: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.grid.size

    @property
    def m(self) -> int:
        return len(self.components)

    def owner(self, c: int) -> int:
        return self.column_owner[c - 1]

    def vertical(self, c: int) -> Segment:
        g = self.grid
        return Segment("v", c, g.x(c), g.o(c))

    def horizontal(self, r: int) -> Segment:
        g = self.grid
        return Segment("h", r, g.o_col(r), g.x_col(r))

    def columns_of(self, comp: int) -> list[int]:
        return [c for c in range(1, self.n + 1) if self.column_owner[c - 1] == comp]

    def component_name(self, comp: int) -> str:
        return "C0" if self.m == 1 else f"C0{comp + 1}"


@dataclass(frozen=True)
class CornerInfo:
    column: int
    top_row: int
    bottom_row: int
    top: str  # 'NW' or 'NE'
    bottom: str  # 'SW' or 'SE'
    owner: int


@dataclass(frozen=True)
class CornerTable:
    columns: tuple[CornerInfo, ...]

    def __getitem__(self, c: int) -> CornerInfo:
        return self.columns[c - 1]

    def kind(self, c: int) -> str:
        return self.columns[c - 1].top


# ---------------------------------------------------------------- parsing

def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError as exc:
        raise GridError(f"{what}: expected integers, got {text.strip()!r}") from exc


def parse_grid(text: str) -> GridDiagram:
    """Parse the text grid format (matrix or permutation-pair encoding)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GridError("empty grid file")
    m = re.fullmatch(r"n\s*=\s*(\d+)", lines[0])
    if not m:
        raise GridError(f"first line must be 'n=<int>', got {lines[0]!r}")
    n = int(m.group(1))
    if n < 2:
        raise GridError(f"grid size must be at least 2, got {n}")
    x_row: list[int] | None = None
    o_row: list[int] | None = None
    holes: list[int] = []
    handles: list[tuple[int, ...]] = []
    matrix: list[str] = []
    for ln in lines[1:]:
        key, sep, rest = ln.partition(":")
        key = key.strip().lower()
        if sep and key in ("x", "o"):
            vals = _ints(rest, f"{key.upper()} line")
            if key == "x":
                x_row = vals
            else:
                o_row = vals
        elif sep and key == "holes":
            holes.extend(_ints(rest, "holes line"))
        elif sep and key == "handle":
            h = _ints(rest, "handle line")
            if len(h) < 1:
                raise GridError("handle line needs at least one strand column")
            handles.append(tuple(h))
        elif sep:
            raise GridError(f"unknown directive {key!r}")
        else:
            matrix.append(ln.replace(" ", ""))
    if matrix:
        if x_row is not None or o_row is not None:
            raise GridError("grid file mixes matrix rows with X:/O: lines")
        if len(matrix) != n:
            raise GridError(f"expected {n} matrix rows, got {len(matrix)}")
        xs: dict[int, list[int]] = {c: [] for c in range(1, n + 1)}
        os_: dict[int, list[int]] = {c: [] for c in range(1, n + 1)}
        for i, ln in enumerate(matrix):
            r = n - i  # first line is the top row
            if len(ln) != n:
                raise GridError(f"matrix row {i + 1} has length {len(ln)}, expected {n}")
            for c, ch in enumerate(ln, start=1):
                if ch in "Xx":
                    xs[c].append(r)
                elif ch in "Oo":
                    os_[c].append(r)
                elif ch != ".":
                    raise GridError(f"bad character {ch!r} in matrix row {i + 1}")
        for c in range(1, n + 1):
            if len(xs[c]) != 1 or len(os_[c]) != 1:
                raise GridError(f"column {c} must hold exactly one X and one O")
        x_row = [xs[c][0] for c in range(1, n + 1)]
        o_row = [os_[c][0] for c in range(1, n + 1)]
    if x_row is None or o_row is None:
        raise GridError("grid file needs either matrix rows or both X: and O: lines")
    return GridDiagram(n, tuple(x_row), tuple(o_row), tuple(holes), tuple(handles))


def load_grid(path: str | Path) -> GridDiagram:
    return parse_grid(Path(path).read_text())


def load_input(path: str | Path) -> GridDiagram:
    """Grid file, or a front word when the suffix is ``.front``."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise GridError(f"cannot read {p}: {exc.strerror or exc}") from exc
    if p.suffix == ".front":
        return front_to_grid(parse_front(text))
    return parse_grid(text)


def format_grid(g: GridDiagram) -> str:
    out = [f"n={g.size}", "X: " + " ".join(map(str, g.x_row)), "O: " + " ".join(map(str, g.o_row))]
    if g.hole_columns:
        out.append("holes: " + " ".join(map(str, g.hole_columns)))
    for h in g.dotted_handles:
        out.append("handle: " + " ".join(map(str, h)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- link data

def grid_to_link(g: GridDiagram) -> GridLink:
    n = g.size
    x_col = [0] * (n + 1)
    for c in range(1, n + 1):
        x_col[g.x(c)] = c
    column_owner = [-1] * n
    row_owner = [-1] * n
    comps: list[tuple[Segment, ...]] = []
    for start in range(1, n + 1):
        if column_owner[start - 1] >= 0:
            continue
        k = len(comps)
        segs: list[Segment] = []
        c = start
        while column_owner[c - 1] < 0:
            column_owner[c - 1] = k
            segs.append(Segment("v", c, g.x(c), g.o(c)))
            r = g.o(c)
            row_owner[r - 1] = k
            nxt = x_col[r]
            segs.append(Segment("h", r, c, nxt))
            c = nxt
        comps.append(tuple(segs))
    crossings = []
    for c in range(1, n + 1):
        v = Segment("v", c, g.x(c), g.o(c))
        for r in range(v.lo + 1, v.hi):
            a, b = sorted((g.o_col(r), x_col[r]))
            if a < c < b:
                h = 1 if x_col[r] > g.o_col(r) else -1
                crossings.append(Crossing(c, r, -v.direction * h, column_owner[c - 1], row_owner[r - 1]))
    return GridLink(g, tuple(comps), tuple(crossings), tuple(column_owner), tuple(row_owner))


def corner_table(link: GridLink) -> CornerTable:
    g = link.grid
    infos = []
    for c in range(1, g.size + 1):
        top, bot = max(g.x(c), g.o(c)), min(g.x(c), g.o(c))
        h_top = link.horizontal(top)
        h_bot = link.horizontal(bot)
        east_top = h_top.hi > c
        east_bot = h_bot.hi > c
        infos.append(
            CornerInfo(c, top, bot, "NW" if east_top else "NE", "SW" if east_bot else "SE", link.owner(c))
        )
    return CornerTable(tuple(infos))


def _check_comp(link: GridLink, comp: int) -> None:
    if not 0 <= comp < link.m:
        raise GridError(f"unknown component {comp}; link has {link.m}")


def self_writhe(link: GridLink, comp: int) -> int:
    _check_comp(link, comp)
    return sum(x.sign for x in link.crossings if x.over == comp and x.under == comp)


def nw_count(link: GridLink, comp: int, columns: Iterable[int] | None = None) -> int:
    _check_comp(link, comp)
    table = corner_table(link)
    cols = range(1, link.n + 1) if columns is None else columns
    return sum(1 for c in cols if link.owner(c) == comp and table.kind(c) == "NW")


def thurston_bennequin(link: GridLink, comp: int) -> int:
    return self_writhe(link, comp) - nw_count(link, comp)


def stein_framings(link: GridLink) -> tuple[int, ...]:
    return tuple(thurston_bennequin(link, k) - 1 for k in range(link.m))


def linking_number(link: GridLink, a: int, b: int) -> int:
    _check_comp(link, a)
    _check_comp(link, b)
    if a == b:
        raise GridError("linking number needs two distinct components")
    total = sum(x.sign for x in link.crossings if {x.over, x.under} == {a, b})
    assert total % 2 == 0
    return total // 2


def linking_matrix(link: GridLink) -> list[list[int]]:
    """Stein framings on the diagonal, pairwise linking numbers elsewhere."""
    fr = stein_framings(link)
    m = link.m
    return [[fr[i] if i == j else linking_number(link, i, j) for j in range(m)] for i in range(m)]


def random_grid(n: int, rng) -> GridDiagram:
    """Uniform over pairs of permutations, rejecting coincident marks."""
    while True:
        xs = list(range(1, n + 1))
        os_ = list(range(1, n + 1))
        rng.shuffle(xs)
        rng.shuffle(os_)
        if all(a != b for a, b in zip(xs, os_)):
            return GridDiagram(n, tuple(xs), tuple(os_))


# ---------------------------------------------------------------- fronts

@dataclass(frozen=True)
class FrontWord:
    """Left-to-right events: ('b', k) left cusp creating strands k, k+1;
    ('d', k) right cusp joining strands k, k+1; ('x', k) crossing of strands
    k and k+1.  Strands are numbered from the top, starting at 1."""

    events: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        count = 0
        for i, (kind, k) in enumerate(self.events):
            if kind == "b":
                if not 1 <= k <= count + 1:
                    raise GridError(f"event {i + 1}: birth position {k} outside 1..{count + 1}")
                count += 2
            elif kind in ("d", "x"):
                if not 1 <= k <= count - 1:
                    raise GridError(f"event {i + 1}: {kind}{k} needs strands {k},{k + 1} of {count}")
                if kind == "d":
                    count -= 2
            else:
                raise GridError(f"event {i + 1}: unknown kind {kind!r}")
        if count:
            raise GridError(f"front is not closed: {count} strands survive")
        if not self.events:
            raise GridError("empty front")


def parse_front(text: str) -> FrontWord:
    events = []
    for tok in text.replace(";", " ").split():
        m = re.fullmatch(r"([bdx])(\d+)", tok.strip().lower())
        if not m:
            m2 = re.fullmatch(r"(birth|death|cross)\((\d+)\)", tok.strip().lower())
            if not m2:
                raise GridError(f"bad front token {tok!r}")
            events.append((m2.group(1)[0].replace("c", "x"), int(m2.group(2))))
            continue
        events.append((m.group(1), int(m.group(2))))
    return FrontWord(tuple(events))


def _front_strands(f: FrontWord):
    """Trace strands: returns per-event strand ids and the strand graph."""
    slots: list[int] = []  # strand ids top to bottom
    next_id = 0
    ends: dict[int, list] = {}  # strand id -> [left end, right end] descriptors
    crossings = []  # (upper strand id, lower strand id) at the time of crossing
    for i, (kind, k) in enumerate(f.events):
        if kind == "b":
            a, b = next_id, next_id + 1
            next_id += 2
            slots[k - 1:k - 1] = [a, b]
            ends[a] = [("cusp", i), None]
            ends[b] = [("cusp", i), None]
        elif kind == "d":
            a, b = slots[k - 1], slots[k]
            ends[a][1] = ("cusp", i)
            ends[b][1] = ("cusp", i)
            del slots[k - 1:k + 1]
        else:
            a, b = slots[k - 1], slots[k]
            crossings.append((a, b))
            slots[k - 1], slots[k] = b, a
    return ends, crossings


def front_writhe(f: FrontWord) -> int:
    """Writhe of the front, from strand orientations induced by each closed
    component.  A crossing is positive iff both strands run the same way."""
    ends, crossings = _front_strands(f)
    # strands meet at cusps; orient each component by walking strands.
    by_cusp: dict[tuple, list[int]] = {}
    for s, (left, right) in ends.items():
        by_cusp.setdefault(("L",) + left, []).append(s)
        by_cusp.setdefault(("R",) + right, []).append(s)
    orient: dict[int, int] = {}
    for s0 in sorted(ends):
        if s0 in orient:
            continue
        s, d = s0, 1  # +1 means left to right
        while s not in orient:
            orient[s] = d
            cusp = ("R",) + ends[s][1] if d == 1 else ("L",) + ends[s][0]
            a, b = by_cusp[cusp]
            s = b if a == s else a
            d = -d
    return sum(1 if orient[a] == orient[b] else -1 for a, b in crossings)


def left_cusps(f: FrontWord) -> int:
    return sum(1 for kind, _ in f.events if kind == "b")


def front_to_grid(f: FrontWord) -> GridDiagram:
    """Staircase conversion of a front into a grid.

    Each strand becomes a staircase of east and south steps (slope +1 and
    -1 in the front), so the front's x axis runs south-east in the grid.
    Left cusps become NW corners and right cusps SE corners.  Coordinates
    are generic and then compressed to ranks; length-one steps whose
    removal only drops NE/SW corners are simplified away.
    """
    L = 32  # slot length in front time
    gap = 8  # height spacing between adjacent strands
    paths: dict[int, list[tuple[int, int]]] = {}  # strand id -> grid points
    joins: list[tuple[int, int, str]] = []  # strands joined at cusps
    slots: list[int] = []
    next_id = 0

    def pt(t: int, h: int) -> tuple[int, int]:
        return (t + h, h - t)

    def heights(count: int) -> list[int]:
        return [-gap * (p + 1) for p in range(count)]

    t = 0
    for kind, k in f.events:
        before = heights(len(slots))
        if kind == "b":
            a, b = next_id, next_id + 1
            next_id += 2
            new = slots[:k - 1] + [a, b] + slots[k - 1:]
        elif kind == "d":
            a, b = slots[k - 1], slots[k]
            new = slots[:k - 1] + slots[k + 1:]
        else:
            a, b = slots[k - 1], slots[k]
            new = list(slots)
            new[k - 1], new[k] = b, a
        after = heights(len(new))
        t1 = t + L
        for p, s in enumerate(slots):
            if kind == "d" and s in (a, b):
                continue
            sy = pt(t, before[p])[1]
            ex, ey = pt(t1, after[new.index(s)])
            paths[s].extend([(ex, sy), (ex, ey)])
        if kind == "b":
            # the cusp sits halfway between the neighbouring strands
            h_c = -gap * (k - 1) - gap // 2
            cx, cy = pt(t, h_c)
            ux, uy = pt(t1, after[k - 1])
            lx, ly = pt(t1, after[k])
            paths[a] = [(cx, cy), (ux, cy), (ux, uy)]
            y1 = cy - gap // 4
            paths[b] = [(cx, cy), (cx, y1), (lx, y1), (lx, ly)]
            joins.append((a, b, "start"))
        elif kind == "d":
            # upper strand arrives from the north, lower one from the west
            sx_a, sy_a = pt(t, before[k - 1])
            sx_b, sy_b = pt(t, before[k])
            dx, dy = sx_a + 1, sy_b - 1
            paths[a].extend([(dx, sy_a), (dx, dy)])
            paths[b].extend([(sx_b, dy), (dx, dy)])
            joins.append((a, b, "end"))
        slots = new
        t = t1
    return _polylines_to_grid(paths, joins)


def _polylines_to_grid(paths, joins) -> GridDiagram:
    # Join strands into closed rectilinear cycles.
    start_join = {}
    end_join = {}
    for a, b, where in joins:
        (start_join if where == "start" else end_join)[a] = b
        (start_join if where == "start" else end_join)[b] = a
    cycles = []
    seen = set()
    for s0 in sorted(paths):
        if s0 in seen:
            continue
        pts: list[tuple[int, int]] = []
        s, forward = s0, True
        while s not in seen:
            seen.add(s)
            seq = paths[s] if forward else paths[s][::-1]
            pts.extend(seq)
            if forward:
                s = end_join[s]
                forward = False
            else:
                s = start_join[s]
                forward = True
        cycles.append(_clean_cycle(pts))
    segs_v = []  # (x, y0, y1, cycle id) directed
    segs_h = []
    for cid, cyc in enumerate(cycles):
        for i in range(len(cyc)):
            p, q = cyc[i], cyc[(i + 1) % len(cyc)]
            if p[0] == q[0]:
                segs_v.append((p[0], p[1], q[1]))
            else:
                segs_h.append((p[1], p[0], q[0]))
    # ranks; ties broken by segment order, which is safe because tied
    # segments are disjoint in the other coordinate.
    xs = sorted(range(len(segs_v)), key=lambda i: (segs_v[i][0], i))
    ys = sorted(range(len(segs_h)), key=lambda i: (segs_h[i][0], i))
    n = len(segs_v)
    assert n == len(segs_h)
    col_of = {i: rank + 1 for rank, i in enumerate(xs)}
    row_of = {i: rank + 1 for rank, i in enumerate(ys)}
    # A vertical's X sits at its start, O at its end.  Identify rows by
    # matching endpoints with horizontals sharing the corner point.
    corner_row: dict[tuple[int, int], int] = {}
    for i, (y, x0, x1) in enumerate(segs_h):
        corner_row[(x0, y)] = row_of[i]
        corner_row[(x1, y)] = row_of[i]
    x_row = [0] * n
    o_row = [0] * n
    for i, (x, y0, y1) in enumerate(segs_v):
        c = col_of[i]
        x_row[c - 1] = corner_row[(x, y0)]
        o_row[c - 1] = corner_row[(x, y1)]
    g = GridDiagram(n, tuple(x_row), tuple(o_row))
    return _simplify_steps(g)


def _clean_cycle(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for p in pts:
        if out and out[-1] == p:
            continue
        out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed:
        changed = False
        k = len(out)
        for i in range(k):
            a, b, c = out[i - 1], out[i], out[(i + 1) % k]
            if (a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1]):
                del out[i]
                changed = True
                break
    return out


def _simplify_steps(g: GridDiagram) -> GridDiagram:
    """Remove length-one stairs whose two corners are NE and SW."""
    while True:
        step = _find_step(g)
        if step is None:
            return g
        g = step


def _find_step(g: GridDiagram) -> GridDiagram | None:
    n = g.size
    if n <= 2:
        return None
    link = grid_to_link(g)
    for c in range(1, n + 1):
        lo, hi = sorted((g.x(c), g.o(c)))
        if hi - lo != 1:
            continue
        top, bot = link.horizontal(hi), link.horizontal(lo)
        if top.hi == c and bot.lo == c:  # top extends west (NE), bottom east (SW)
            return _merge(g, drop_col=c, keep_row=lo, drop_row=hi)
    for r in range(1, n + 1):
        a, b = sorted((g.o_col(r), g.x_col(r)))
        if b - a != 1:
            continue
        va, vb = link.vertical(a), link.vertical(b)
        # column a goes up from r (SW corner) and column b goes down (NE)
        if va.lo == r and vb.hi == r:
            return _merge_cols(g, drop_row=r, keep_col=a, drop_col=b)
    return None


def _merge(g: GridDiagram, drop_col: int, keep_row: int, drop_row: int) -> GridDiagram:
    n = g.size
    xs, os_ = [], []
    for c in range(1, n + 1):
        if c == drop_col:
            continue
        xr, orr = g.x(c), g.o(c)
        xr = keep_row if xr == drop_row else xr
        orr = keep_row if orr == drop_row else orr
        xs.append(xr)
        os_.append(orr)
    squeeze = lambda r: r - 1 if r > drop_row else r  # noqa: E731
    return GridDiagram(n - 1, tuple(map(squeeze, xs)), tuple(map(squeeze, os_)))


def _merge_cols(g: GridDiagram, drop_row: int, keep_col: int, drop_col: int) -> GridDiagram:
    n = g.size
    xs = list(g.x_row)
    os_ = list(g.o_row)
    # marks of the dropped row sit in keep_col and drop_col; the merged
    # column keeps the far ends of both verticals.
    xa, oa = xs[keep_col - 1], os_[keep_col - 1]
    xb, ob = xs[drop_col - 1], os_[drop_col - 1]
    new_x = xa if xa != drop_row else xb
    new_o = oa if oa != drop_row else ob
    xs[keep_col - 1], os_[keep_col - 1] = new_x, new_o
    del xs[drop_col - 1]
    del os_[drop_col - 1]
    squeeze = lambda r: r - 1 if r > drop_row else r  # noqa: E731
    return GridDiagram(n - 1, tuple(map(squeeze, xs)), tuple(map(squeeze, os_)))
