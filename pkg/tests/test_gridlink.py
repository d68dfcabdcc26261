from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from palf.gridlink import (
    FrontWord,
    GridDiagram,
    GridError,
    corner_table,
    format_grid,
    front_to_grid,
    front_writhe,
    grid_to_link,
    left_cusps,
    linking_matrix,
    linking_number,
    load_input,
    nw_count,
    parse_front,
    parse_grid,
    random_grid,
    self_writhe,
    stein_framings,
    thurston_bennequin,
)


def grids(min_n: int = 2, max_n: int = 8):
    return st.builds(
        lambda n, seed: random_grid(n, random.Random(seed)),
        st.integers(min_n, max_n),
        st.integers(0, 2**32 - 1),
    )


def test_parse_matrix_two_by_two():
    g = parse_grid("n=2\nOX\nXO\n")
    assert g.size == 2
    # first text line is the top row
    assert g.x_row == (1, 2) and g.o_row == (2, 1)


def test_parse_permutation_lines_with_comments():
    g = parse_grid("# trefoil\nn=5\nX: 3 2 1 5 4\nO: 5 4 3 2 1  # rows of O\n")
    assert g.x_row == (3, 2, 1, 5, 4)
    assert g.o_row == (5, 4, 3, 2, 1)


def test_parse_holes_and_handles():
    g = parse_grid("n=3\nX: 1 2 3\nO: 2 3 1\nholes: 2\nhandle: 2 3\n")
    assert g.hole_columns == (2,)
    assert g.dotted_handles == ((2, 3),)


@pytest.mark.parametrize(
    "text, message",
    [
        ("n=2\nXX\nOO\n", "X marks must occupy"),
        ("n=2\nX: 1 1\nO: 2 2\n", "X marks must occupy every row"),
        ("n=2\nX: 1 2\nO: 1 2\n", "same cell"),
        ("n=2\nX: 1 2\n", "both X: and O:"),
        ("X: 1 2\nO: 2 1\n", "first line"),
        ("", "empty"),
        ("n=1\nX: 1\nO: 1\n", "at least 2"),
        ("n=2\nX: 1 2\nO: 2 1\nholes: 1\n", "handle descriptor"),
        ("n=2\nX: 1 2\nO: 2 1\nfoo: 3\n", "unknown directive"),
        ("n=2\nX: 1 a\nO: 2 1\n", "expected integers"),
        ("n=2\nOZ\nXO\n", "bad character"),
        ("n=2\nXO\nX.\n", "exactly one X and one O"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(GridError, match=message):
        parse_grid(text)


def test_broken_grid_file_is_rejected(grids_dir):
    with pytest.raises(GridError, match="X marks"):
        load_input(grids_dir / "broken.grid")


def test_format_round_trip(cork):
    assert parse_grid(format_grid(cork)) == cork


def test_two_by_two_unknot(unknot):
    link = grid_to_link(unknot)
    assert link.m == 1 and not link.crossings
    assert self_writhe(link, 0) == 0
    assert nw_count(link, 0) == 1
    assert thurston_bennequin(link, 0) == -1
    assert stein_framings(link) == (-2,)


def test_two_disjoint_squares():
    g = GridDiagram(4, (1, 2, 3, 4), (2, 1, 4, 3))
    link = grid_to_link(g)
    assert link.m == 2
    assert not link.crossings
    assert [link.component_name(k) for k in range(2)] == ["C01", "C02"]
    assert linking_number(link, 0, 1) == 0


def test_trefoil_invariants(trefoil):
    link = grid_to_link(trefoil)
    ct = corner_table(link)
    assert link.m == 1
    assert self_writhe(link, 0) == 3
    assert [c for c in range(1, 6) if ct.kind(c) == "NW"] == [1, 2]
    assert thurston_bennequin(link, 0) == 1
    assert stein_framings(link) == (0,)


def test_cork_input(cork):
    link = grid_to_link(cork)
    assert link.m == 2
    assert stein_framings(link) == (-2, 0)
    assert cork.hole_columns == (9,)


def test_linking_matrix_of_hopf_link():
    # squares on columns {1,3} x rows {1,3} and {2,4} x {2,4}
    g = GridDiagram(4, (1, 2, 3, 4), (3, 4, 1, 2))
    link = grid_to_link(g)
    assert link.m == 2 and len(link.crossings) == 2
    lm = linking_matrix(link)
    assert abs(lm[0][1]) == 1 and lm[0][1] == lm[1][0]


@settings(max_examples=150, deadline=None)
@given(grids())
def test_extreme_columns_topped_nw_and_ne(g):
    link = grid_to_link(g)
    ct = corner_table(link)
    assert ct.kind(1) == "NW"
    assert ct.kind(g.size) == "NE"


@settings(max_examples=150, deadline=None)
@given(grids())
def test_one_segment_per_row_and_column(g):
    link = grid_to_link(g)
    n = g.size
    assert sorted(c for k in range(link.m) for c in link.columns_of(k)) == list(range(1, n + 1))
    for r in range(1, n + 1):
        h = link.horizontal(r)
        assert {h.start, h.end} == {g.o_col(r), g.x_col(r)}
    for c in range(1, n + 1):
        v = link.vertical(c)
        assert {v.start, v.end} == {g.x(c), g.o(c)}


@settings(max_examples=150, deadline=None)
@given(grids())
def test_writhe_invariant_under_total_reversal(g):
    # swapping X and O reverses every component
    rev = GridDiagram(g.size, g.o_row, g.x_row)
    a, b = grid_to_link(g), grid_to_link(rev)
    assert sorted(self_writhe(a, k) for k in range(a.m)) == sorted(self_writhe(b, k) for k in range(b.m))


@settings(max_examples=100, deadline=None)
@given(grids(3, 8))
def test_linking_numbers_symmetric(g):
    link = grid_to_link(g)
    for a in range(link.m):
        for b in range(link.m):
            if a != b:
                assert linking_number(link, a, b) == linking_number(link, b, a)


# ---------------------------------------------------------------- fronts

@st.composite
def fronts(draw, max_events: int = 10):
    events: list[tuple[str, int]] = []
    count = 0
    budget = draw(st.integers(1, max_events))
    while budget > 0 or count:
        choices = ["b"]
        if count >= 2:
            choices += ["d", "x"]
        kind = draw(st.sampled_from(choices)) if budget > 0 else ("d" if count else "b")
        if kind == "b":
            k = draw(st.integers(1, count + 1))
            count += 2
        else:
            k = draw(st.integers(1, count - 1))
            if kind == "d":
                count -= 2
        events.append((kind, k))
        budget -= 1
    return FrontWord(tuple(events))


def test_parse_front_tokens():
    a = parse_front("b1 b1 x2 x2 x2 d1 d1")
    b = parse_front("birth(1); birth(1) cross(2) cross(2) cross(2) death(1) death(1)")
    assert a == b
    assert front_writhe(a) == 3
    assert left_cusps(a) == 2


@pytest.mark.parametrize("text", ["b1 d2", "b1", "b1 q1", "x1", ""])
def test_bad_fronts(text):
    with pytest.raises(GridError):
        parse_front(text)


def test_unknot_front_is_two_by_two():
    g = front_to_grid(parse_front("b1 d1"))
    assert g.size == 2
    assert thurston_bennequin(grid_to_link(g), 0) == -1


def test_trefoil_front(grids_dir):
    g = load_input(grids_dir / "trefoil.front")
    link = grid_to_link(g)
    assert link.m == 1
    assert self_writhe(link, 0) == 3
    assert thurston_bennequin(link, 0) == 1


@settings(max_examples=120, deadline=None)
@given(fronts())
def test_front_conversion_preserves_tb(f):
    g = front_to_grid(f)
    link = grid_to_link(g)
    assert sum(self_writhe(link, k) for k in range(link.m)) + 2 * sum(
        linking_number(link, a, b) for a in range(link.m) for b in range(a + 1, link.m)
    ) == front_writhe(f)
    assert sum(nw_count(link, k) for k in range(link.m)) == left_cusps(f)
    assert sum(thurston_bennequin(link, k) for k in range(link.m)) + 2 * sum(
        linking_number(link, a, b) for a in range(link.m) for b in range(a + 1, link.m)
    ) == front_writhe(f) - left_cusps(f)
