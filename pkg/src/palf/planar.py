"""Crossing detection for axis-parallel polylines with integer coordinates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

Point = tuple[int, int]


@dataclass(frozen=True)
class SegRef:
    curve: int
    seg: int


@dataclass(frozen=True)
class PlanarCrossing:
    """Proper crossing of a vertical and a horizontal segment."""

    vertical: SegRef
    horizontal: SegRef
    point: Point


def segments(points: Sequence[Point], closed: bool) -> list[tuple[Point, Point]]:
    k = len(points)
    last = k if closed else k - 1
    out = []
    for i in range(last):
        p, q = points[i], points[(i + 1) % k]
        if p[0] != q[0] and p[1] != q[1]:
            raise ValueError(f"segment {p}->{q} is not axis-parallel")
        if p == q:
            raise ValueError(f"degenerate segment at {p}")
        out.append((p, q))
    return out


def _tables(curves: Sequence[Sequence[Point]], closed: Sequence[bool]):
    vs, hs = [], []
    for ci, (pts, cl) in enumerate(zip(curves, closed)):
        for si, (p, q) in enumerate(segments(pts, cl)):
            if p[0] == q[0]:
                vs.append((p[0], min(p[1], q[1]), max(p[1], q[1]), ci, si))
            else:
                hs.append((p[1], min(p[0], q[0]), max(p[0], q[0]), ci, si))
    v = np.array(vs, dtype=np.int64).reshape(-1, 5)
    h = np.array(hs, dtype=np.int64).reshape(-1, 5)
    return v, h


def find_crossings(curves: Sequence[Sequence[Point]], closed: Sequence[bool]) -> list[PlanarCrossing]:
    v, h = _tables(curves, closed)
    if not len(v) or not len(h):
        return []
    x = v[:, 0][:, None]
    y = h[:, 0][None, :]
    mask = (h[:, 1][None, :] < x) & (x < h[:, 2][None, :]) & (v[:, 1][:, None] < y) & (y < v[:, 2][:, None])
    out = []
    for i, j in zip(*np.nonzero(mask)):
        out.append(
            PlanarCrossing(
                SegRef(int(v[i, 3]), int(v[i, 4])),
                SegRef(int(h[j, 3]), int(h[j, 4])),
                (int(v[i, 0]), int(h[j, 0])),
            )
        )
    out.sort(key=lambda c: (c.point, c.vertical.curve, c.horizontal.curve))
    return out


def find_contacts(curves: Sequence[Sequence[Point]], closed: Sequence[bool]) -> list[str]:
    """Non-generic contacts: touching or overlapping segments other than
    consecutive segments of one curve meeting at their shared corner."""
    v, h = _tables(curves, closed)
    seg_counts = [len(segments(p, c)) for p, c in zip(curves, closed)]

    def adjacent(c1: int, s1: int, c2: int, s2: int) -> bool:
        if c1 != c2:
            return False
        k = seg_counts[c1]
        if abs(s1 - s2) == 1:
            return True
        return closed[c1] and k > 2 and {s1, s2} == {0, k - 1}

    problems = []
    for a in range(len(v)):
        for b in range(len(h)):
            x, y0, y1 = v[a, 0], v[a, 1], v[a, 2]
            y, x0, x1 = h[b, 0], h[b, 1], h[b, 2]
            touch = x0 <= x <= x1 and y0 <= y <= y1
            proper = x0 < x < x1 and y0 < y < y1
            if touch and not proper and not adjacent(v[a, 3], v[a, 4], h[b, 3], h[b, 4]):
                problems.append(f"touch at {(int(x), int(y))}")
    for arr, name in ((v, "vertical"), (h, "horizontal")):
        for a in range(len(arr)):
            for b in range(a + 1, len(arr)):
                if arr[a, 0] == arr[b, 0] and max(arr[a, 1], arr[b, 1]) <= min(arr[a, 2], arr[b, 2]):
                    if not adjacent(arr[a, 3], arr[a, 4], arr[b, 3], arr[b, 4]):
                        problems.append(f"{name} overlap on line {int(arr[a, 0])}")
    return problems


def direction(p: Point, q: Point) -> tuple[int, int]:
    return ((q[0] > p[0]) - (q[0] < p[0]), (q[1] > p[1]) - (q[1] < p[1]))


def crossing_sign(over: tuple[int, int], under: tuple[int, int]) -> int:
    """+1 for a positive (right-handed) crossing."""
    s = over[0] * under[1] - over[1] * under[0]
    return 1 if s > 0 else -1
