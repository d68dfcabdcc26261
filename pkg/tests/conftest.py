from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

from palf.builder import BuildError
from palf.gridlink import GridDiagram, corner_table, grid_to_link, load_grid, random_grid

GRIDS = Path(__file__).resolve().parent.parent / "grids"


@pytest.fixture
def grids_dir() -> Path:
    return GRIDS


@pytest.fixture
def trefoil() -> GridDiagram:
    return load_grid(GRIDS / "trefoil.grid")


@pytest.fixture
def unknot() -> GridDiagram:
    return load_grid(GRIDS / "unknot2.grid")


@pytest.fixture
def cork() -> GridDiagram:
    return load_grid(GRIDS / "cork.grid")


def random_handle_grid(rng: random.Random, n: int, ell: int = 1) -> GridDiagram | None:
    """Random grid with ell hole columns n-ell..n-1 and a random split of the
    hole columns and column n into ell handles, or None when the draw does
    not admit holes there."""
    g = random_grid(n, rng)
    link = grid_to_link(g)
    ct = corner_table(link)
    holes = list(range(n - ell, n))
    crossing_cols = {x.column for x in link.crossings}
    if any(ct.kind(c) != "NE" or c in crossing_cols for c in holes):
        return None
    strands = holes + [n]
    rng.shuffle(strands)
    cuts = sorted(rng.sample(range(1, len(strands)), ell - 1))
    parts, prev = [], 0
    for c in cuts + [len(strands)]:
        parts.append(tuple(strands[prev:c]))
        prev = c
    return GridDiagram(n, g.x_row, g.o_row, tuple(holes), tuple(parts))


def random_buildable_handle_grid(rng: random.Random, n: int, ell: int = 1) -> GridDiagram:
    from palf.builder import init_state

    while True:
        g = random_handle_grid(rng, n, ell)
        if g is None:
            continue
        try:
            init_state(grid_to_link(g))
        except BuildError:
            continue
        return g


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        title, ok, detail = results[num]
        line = f"criterion {num} ({title}): {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
