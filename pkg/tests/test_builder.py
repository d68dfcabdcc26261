from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_buildable_handle_grid
from palf.builder import (
    BuildError,
    apply_step0,
    build,
    init_state,
    insert_negative_kink,
    normalize_right_portions,
    sweep_states,
)
from palf.fiber import boundary_count, euler_char, genus, homology_class, is_simple
from palf.gridlink import GridDiagram, grid_to_link, nw_count, random_grid, self_writhe, stein_framings


def test_trefoil_palf(trefoil):
    _, p = build(trefoil)
    assert genus(p.fiber) == 1
    assert boundary_count(p.fiber) == 3
    assert len(p.fiber.bands) == 4
    assert len(p.cycles) == 5
    assert p.factorization.ids == ("C0", "C4", "C3", "C2", "C1")


def test_unknot_annulus(unknot):
    _, p = build(unknot)
    assert (genus(p.fiber), boundary_count(p.fiber), euler_char(p.fiber)) == (0, 2, 0)
    assert p.factorization.ids == ("C0", "C1")
    for c in p.cycles:
        assert homology_class(p.fiber, c).coefficients in ((1,), (-1,))
        assert len(c.passes()) == 1


def test_cork_palf(cork):
    _, p = build(cork)
    assert genus(p.fiber) == 3
    assert boundary_count(p.fiber) == 4
    assert p.factorization.ids == ("C02", "C01") + tuple(f"C{j}" for j in range(8, 0, -1))
    assert [b.id for b in p.fiber.bands if b.origin == "handle"] == ["h1"]


def test_sweep_stages(trefoil):
    states = sweep_states(trefoil)
    assert [s.stage for s in states] == [0, 1, 2, 3, 4]
    assert [len(s.surface.bands) for s in states] == [0, 1, 2, 3, 4]
    assert [len(s.curves) for s in states] == [1, 2, 3, 4, 5]
    assert states[0].surface.boundary_word == ()


def test_cork_hole_stage_adds_no_curve(cork):
    states = sweep_states(cork)
    assert 9 not in states[-1].added
    assert len(states[-1].curves) == len(states[-2].curves)


def test_normalize_keeps_homology(cork):
    _, p = build(cork)
    q = normalize_right_portions(p)
    assert q.factorization == p.factorization
    for a, b in zip(p.cycles, q.cycles):
        assert homology_class(p.fiber, a) == homology_class(q.fiber, b)
        assert is_simple(q.fiber, b)


@pytest.mark.parametrize(
    "holes, handles, message",
    [
        ((8,), ((8, 10),), "just left of column"),
        ((9,), ((1, 10),), "not a hole column"),
    ],
)
def test_hole_validation(cork, holes, handles, message):
    g = GridDiagram(cork.size, cork.x_row, cork.o_row, holes, handles)
    with pytest.raises(BuildError, match=message):
        init_state(grid_to_link(g))


def test_hole_must_be_ne():
    # column 2 of this grid is topped by an NW corner
    g = GridDiagram(3, (1, 2, 3), (2, 3, 1), (2,), ((2, 3),))
    link = grid_to_link(g)
    with pytest.raises(BuildError, match="NE top corner"):
        init_state(link)


def test_negative_kink_shifts_invariants(trefoil):
    link = grid_to_link(trefoil)
    for r in range(1, 6):
        k = grid_to_link(insert_negative_kink(trefoil, r))
        assert k.m == 1
        assert self_writhe(k, 0) == self_writhe(link, 0) - 1
        assert nw_count(k, 0) == nw_count(link, 0) + 1
        assert stein_framings(k)[0] == stein_framings(link)[0] - 2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1), st.data())
def test_negative_kink_on_random_grids(n, seed, data):
    g = random_grid(n, random.Random(seed))
    r = data.draw(st.integers(1, n))
    a, b = grid_to_link(g), grid_to_link(insert_negative_kink(g, r))
    k = a.row_owner[r - 1]
    assert b.m == a.m
    fa, fb = stein_framings(a), stein_framings(b)
    assert [y - x for x, y in zip(fa, fb)] == [-2 if i == k else 0 for i in range(a.m)]


def test_step0_on_cork(cork):
    g = apply_step0(cork)
    assert g.size == cork.size + 4
    assert stein_framings(grid_to_link(g)) == (-4, -2)
    _, p = build(cork, step0=True)
    assert len(p.cycles) == 14


def test_step0_is_identity_without_handles(trefoil):
    assert apply_step0(trefoil) == trefoil


@pytest.mark.parametrize("ell", [1, 2])
def test_random_grids_with_handles(ell):
    rng = random.Random(11 + ell)
    for _ in range(25):
        g = random_buildable_handle_grid(rng, rng.randint(3 + ell, 8), ell)
        _, p = build(g)
        assert euler_char(p.fiber) + len(p.cycles) == 1 - ell + grid_to_link(g).m
        assert sum(b.origin == "handle" for b in p.fiber.bands) == ell
        for c in p.cycles:
            assert is_simple(p.fiber, c)
            assert not homology_class(p.fiber, c).is_zero()
