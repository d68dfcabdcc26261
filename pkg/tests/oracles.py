"""Independent reference computations used only by the tests."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

import networkx as nx


def det(m: list[list[int]]) -> int:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in m]
    k = len(a)
    sign = 1
    for t in range(k):
        piv = next((i for i in range(t, k) if a[i][t] != 0), None)
        if piv is None:
            return 0
        if piv != t:
            a[t], a[piv] = a[piv], a[t]
            sign = -sign
        for i in range(t + 1, k):
            f = a[i][t] / a[t][t]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[t])]
    out = Fraction(sign)
    for t in range(k):
        out *= a[t][t]
    assert out.denominator == 1
    return int(out)


def invariant_factors(m: list[list[int]]) -> tuple[int, ...]:
    """Invariant factors from determinantal divisors d_k = gcd of k x k minors."""
    r = len(m)
    c = len(m[0]) if m else 0
    out = []
    prev = 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in combinations(range(r), k):
            for cols in combinations(range(c), k):
                g = gcd(g, det([[m[i][j] for j in cols] for i in rows]))
                if g == prev:
                    break
            if g == prev:
                break
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    out.extend([0] * (min(r, c) - len(out)))
    return tuple(out)


def ribbon_boundary_count(word: list[tuple[str, int]]) -> int:
    """Boundary circles of a disk with untwisted bands, via an explicit graph.

    Each foot is an interval with a left and a right endpoint in boundary
    order.  Boundary arcs of the disk join the right end of a foot to the
    left end of the next one; the two sides of a band join the left end of
    one foot to the right end of the other.  Every vertex has degree two, so
    the components are the boundary circles.
    """
    k = len(word)
    if k == 0:
        return 1
    gph = nx.MultiGraph()
    where = {f: i for i, f in enumerate(word)}
    for i in range(k):
        gph.add_edge(("R", i), ("L", (i + 1) % k))
    for (band, end), i in where.items():
        if end == 0:
            j = where[(band, 1)]
            gph.add_edge(("L", i), ("R", j))
            gph.add_edge(("R", i), ("L", j))
    return nx.number_connected_components(gph)
