from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_buildable_handle_grid
from palf.builder import sweep_states
from palf.gridlink import random_grid
from palf.kirby import (
    KirbyError,
    boundary_homology,
    extended_linking_matrix,
    framings_of,
    h1_presentation,
    handlebody_homology,
    kd_chain,
    linking,
    phi_state_to_kd,
    psi_move,
    reversed_orientation,
    writhe,
)

TREFOIL_TRACE = [(0,), (1, -1), (2, -1, -1), (2, -1, -1, -2), (2, -1, -1, -2, -2)]


def chain(g):
    states = sweep_states(g)
    phi, psi = kd_chain(states)
    return states, phi, psi


def test_trefoil_trace(trefoil):
    _, phi, psi = chain(trefoil)
    assert [framings_of(kd) for kd in phi] == TREFOIL_TRACE
    assert [framings_of(kd) for kd in psi] == TREFOIL_TRACE[1:]
    for kd in phi:
        assert boundary_homology(kd).cokernel == ((), 1)


def test_unknot_trace(unknot):
    _, phi, _ = chain(unknot)
    assert [framings_of(kd) for kd in phi] == [(-2,), (-1, -1)]
    assert [boundary_homology(kd).describe() for kd in phi] == ["Z/2", "Z/2"]


def test_cork_chain(cork):
    _, phi, psi = chain(cork)
    assert framings_of(phi[0]) == (-2, 0)
    assert framings_of(phi[-1])[:2] == (-1, 4)
    assert len({boundary_homology(kd).cokernel for kd in phi + psi}) == 1
    assert {handlebody_homology(kd).cokernel for kd in phi} == {((), 0)}
    assert [c.name for c in phi[0].dotted] == ["D1h"]


def test_vertical_order(trefoil, cork):
    _, phi, _ = chain(trefoil)
    assert phi[-1].vertical_order == ("C0", "C4", "C3", "C2", "C1")
    _, phi, _ = chain(cork)
    assert phi[0].vertical_order == ("C02", "C01")


def test_added_circle_templates(trefoil):
    _, phi, _ = chain(trefoil)
    kd = phi[-1]
    for c in kd.attaching:
        if c.tag == "NW":
            assert writhe(kd, c.name) == 0
        elif c.tag == "NE":
            assert writhe(kd, c.name) == -1
    assert writhe(kd, "C0") == 3


def test_extended_linking_matrix_shape(trefoil):
    _, phi, _ = chain(trefoil)
    kd = phi[2]
    elm = extended_linking_matrix(kd)
    k = len(elm.labels)
    assert k == len(kd.attaching) + len(kd.dotted)
    assert all(elm.matrix[i][j] == elm.matrix[j][i] for i in range(k) for j in range(k))
    for i, name in enumerate(elm.labels):
        if name.startswith("D"):
            assert elm.matrix[i][i] == 0
    h1 = h1_presentation(kd)
    assert len(h1) == len(kd.dotted)
    assert all(len(row) == len(kd.attaching) for row in h1)


def test_linking_symmetric(cork):
    _, phi, _ = chain(cork)
    kd = phi[5]
    names = kd.names()
    for a in names:
        for b in names:
            if a != b:
                assert linking(kd, a, b) == linking(kd, b, a)


def test_psi_move_errors(trefoil):
    states, phi, _ = chain(trefoil)
    with pytest.raises(KirbyError, match="corner kind"):
        psi_move(phi[0], 1, "SW", states[1])
    with pytest.raises(KirbyError, match="already processed"):
        psi_move(phi[2], 1, "NW", states[2])


def test_phi_of_stage_zero_has_no_dotted_circles(trefoil):
    kd = phi_state_to_kd(sweep_states(trefoil)[0])
    assert kd.dotted == ()
    assert [c.name for c in kd.attaching] == ["C0"]


def _orientation_check(g, rng):
    _, phi, _ = chain(g)
    for kd in phi:
        names = [n for n in kd.names() if rng.random() < 0.5]
        flipped = reversed_orientation(kd, names)
        assert boundary_homology(flipped).cokernel == boundary_homology(kd).cokernel
        assert handlebody_homology(flipped).cokernel == handlebody_homology(kd).cokernel
        assert framings_of(flipped) == framings_of(kd)
        for name in kd.names():
            assert writhe(flipped, name) == writhe(kd, name)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_snf_independent_of_orientations(n, seed):
    rng = random.Random(seed)
    _orientation_check(random_grid(n, rng), rng)


def test_snf_independent_of_orientations_with_handles():
    rng = random.Random(5)
    for _ in range(15):
        _orientation_check(random_buildable_handle_grid(rng, rng.randint(4, 8), rng.choice([1, 2])), rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_phi_psi_agree(n, seed):
    states, phi, psi = chain(random_grid(n, random.Random(seed)))
    for j, kd in enumerate(psi, start=1):
        assert framings_of(kd) == framings_of(phi[j])
        assert kd.vertical_order == phi[j].vertical_order
        assert boundary_homology(kd).cokernel == boundary_homology(phi[j]).cokernel
