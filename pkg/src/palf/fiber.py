"""Disk-with-bands fiber surfaces, curves on them, and their homology."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .intmat import Matrix, identity, matmul
from .planar import Point, find_contacts, find_crossings


class FiberError(ValueError):
    """Raised for inconsistent surface or curve data."""


@dataclass(frozen=True)
class Foot:
    """One attaching interval of a band.  The band core runs from the
    foot with ``end == 0`` to the foot with ``end == 1``."""

    band: str
    end: int


@dataclass(frozen=True)
class Band:
    id: str
    origin: str  # "column" or "handle"
    index: int  # construction column, or 1-handle number
    anchors: tuple[Point, Point] = ((0, 0), (0, 0))  # planar spots of the two feet


@dataclass(frozen=True)
class FiberSurface:
    """Base disk plus untwisted bands; ``boundary_word`` lists the feet in
    counterclockwise order along the disk boundary."""

    bands: tuple[Band, ...]
    boundary_word: tuple[Foot, ...]

    def __post_init__(self) -> None:
        ids = [b.id for b in self.bands]
        if len(set(ids)) != len(ids):
            raise FiberError(f"duplicate band ids: {ids}")
        seen: dict[str, set[int]] = {i: set() for i in ids}
        for f in self.boundary_word:
            if f.band not in seen:
                raise FiberError(f"foot references unknown band {f.band!r}")
            if f.end in seen[f.band]:
                raise FiberError(f"band {f.band!r} has two feet with end {f.end}")
            seen[f.band].add(f.end)
        for i, ends in seen.items():
            if ends != {0, 1}:
                raise FiberError(f"band {i!r} needs exactly two feet, has {sorted(ends)}")

    @property
    def band_ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.bands)

    def band(self, band_id: str) -> Band:
        for b in self.bands:
            if b.id == band_id:
                return b
        raise FiberError(f"unknown band {band_id!r}")

    def positions(self) -> dict[str, tuple[int, int]]:
        """Boundary-word positions of (end 0, end 1) for every band."""
        pos: dict[str, list[int]] = {b.id: [0, 0] for b in self.bands}
        for i, f in enumerate(self.boundary_word):
            pos[f.band][f.end] = i
        return {k: (v[0], v[1]) for k, v in pos.items()}


@dataclass(frozen=True)
class BaseArc:
    """Rectilinear path in the base disk, in lane units (see builder)."""

    points: tuple[Point, ...]


@dataclass(frozen=True)
class BandPass:
    band: str
    direction: int  # +1: from the end-0 foot to the end-1 foot


Step = Union[BaseArc, BandPass]


@dataclass(frozen=True)
class SurfaceCurve:
    id: str
    steps: tuple[Step, ...]

    def passes(self) -> list[BandPass]:
        return [s for s in self.steps if isinstance(s, BandPass)]

    def arcs(self) -> list[BaseArc]:
        return [s for s in self.steps if isinstance(s, BaseArc)]


@dataclass(frozen=True)
class HomologyClass:
    basis: tuple[str, ...]
    coefficients: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coefficients)


@dataclass(frozen=True)
class MonodromyFactorization:
    """Curve ids; the leftmost twist acts first."""

    ids: tuple[str, ...]


def euler_char(s: FiberSurface) -> int:
    return 1 - len(s.bands)


def boundary_count(s: FiberSurface) -> int:
    """Number of boundary circles by the ribbon walk.

    The disk boundary is cut by the feet into gaps; gap i sits after foot i.
    Leaving gap i we run along a band side from foot i+1 to its partner foot
    and continue in the gap after that partner.
    """
    word = s.boundary_word
    k = len(word)
    if k == 0:
        return 1
    partner = {}
    pos = s.positions()
    for i, f in enumerate(word):
        partner[i] = pos[f.band][1 - f.end]
    seen = [False] * k
    count = 0
    for g0 in range(k):
        if seen[g0]:
            continue
        count += 1
        g = g0
        while not seen[g]:
            seen[g] = True
            g = partner[(g + 1) % k]
    return count


def genus(s: FiberSurface) -> int:
    twice = 2 - boundary_count(s) - euler_char(s)
    if twice % 2 or twice < 0:
        raise FiberError(f"genus parity violated: 2 - b - chi = {twice}")
    return twice // 2


def homology_class(s: FiberSurface, c: SurfaceCurve) -> HomologyClass:
    ids = s.band_ids
    index = {b: i for i, b in enumerate(ids)}
    coeffs = [0] * len(ids)
    for p in c.passes():
        if p.band not in index:
            raise FiberError(f"curve {c.id} traverses missing band {p.band!r}")
        coeffs[index[p.band]] += p.direction
    return HomologyClass(ids, tuple(coeffs))


def intersection_form(s: FiberSurface) -> Matrix:
    """Algebraic intersection of band cores, read off the foot order."""
    ids = s.band_ids
    pos = s.positions()
    k = len(ids)
    q = [[0] * k for _ in range(k)]
    for a in range(k):
        pa0, pa1 = pos[ids[a]]
        ea = 1 if pa0 < pa1 else -1
        la, ha = sorted((pa0, pa1))
        for b in range(k):
            if a == b:
                continue
            pb0, pb1 = pos[ids[b]]
            eb = 1 if pb0 < pb1 else -1
            lb, hb = sorted((pb0, pb1))
            if la < lb < ha < hb:
                q[a][b] = ea * eb
            elif lb < la < hb < ha:
                q[a][b] = -ea * eb
    return q


def pairing(q: Matrix, x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * q[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if q[i][j])


def transvection_matrix(q: Matrix, h: Sequence[int]) -> Matrix:
    """Matrix of x -> x + <x, h> h acting on column vectors."""
    k = len(h)
    qh = [sum(q[i][j] * h[j] for j in range(k)) for i in range(k)]
    return [[int(i == j) + h[i] * qh[j] for j in range(k)] for i in range(k)]


def transvection(s: FiberSurface, c: SurfaceCurve) -> Matrix:
    return transvection_matrix(intersection_form(s), homology_class(s, c).coefficients)


def monodromy_matrix(
    s: FiberSurface, f: MonodromyFactorization, curves: dict[str, SurfaceCurve]
) -> Matrix:
    """Product of the twists, the first id acting first."""
    q = intersection_form(s)
    m = identity(len(s.bands))
    for cid in f.ids:
        if cid not in curves:
            raise FiberError(f"factorization names unknown curve {cid!r}")
        t = transvection_matrix(q, homology_class(s, curves[cid]).coefficients)
        m = matmul(t, m)
    return m


def is_simple(s: FiberSurface, c: SurfaceCurve) -> bool:
    """True iff the base arcs have no crossings or contacts among themselves.

    Band traversals are parallel lanes inside untwisted bands, so they never
    meet each other.
    """
    for p in c.passes():
        s.band(p.band)  # raises on a missing band
    arcs, flags = _planar_pieces(c)
    if not arcs:
        return True
    if find_crossings(arcs, flags):
        return False
    return not find_contacts(arcs, flags)


def self_crossings(c: SurfaceCurve) -> list[Point]:
    arcs, flags = _planar_pieces(c)
    return [x.point for x in find_crossings(arcs, flags)]


def _planar_pieces(c: SurfaceCurve) -> tuple[list[tuple[Point, ...]], list[bool]]:
    arcs = [a.points for a in c.arcs() if len(a.points) > 1]
    if not c.passes() and len(arcs) == 1:
        pts = arcs[0]
        if pts[0] == pts[-1]:
            pts = pts[:-1]
        return [pts], [True]
    return arcs, [False] * len(arcs)
