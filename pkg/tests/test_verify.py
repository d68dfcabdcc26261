from __future__ import annotations

import inspect
import json
import random

import pytest

from conftest import random_buildable_handle_grid
from mutations import MUTATIONS
from palf.gridlink import GridError
from palf.verify import SKIP, CheckRecord, VerificationReport, run_all, run_random

CHECKS = {
    "grid_invariants",
    "euler_consistency",
    "genus_bound",
    "monodromy",
    "framing_trace",
    "writhe_conservation",
    "snf_invariance",
    "boundary_homology",
}


@pytest.mark.parametrize("name", ["trefoil.grid", "unknot2.grid", "cork.grid", "trefoil.front"])
def test_examples_pass(grids_dir, name):
    r = run_all(grids_dir / name)
    assert r.passed, r.failures()
    assert {c.name for c in r.checks} == CHECKS
    assert all(c.status == "pass" for c in r.checks)


def test_report_fields(trefoil):
    r = run_all(trefoil)
    euler = next(c for c in r.checks if c.name == "euler_consistency")
    assert (euler.expected, euler.actual) == (2, 2)
    fr = next(c for c in r.checks if c.name == "framing_trace")
    assert fr.actual == [(0,), (1, -1), (2, -1, -1), (2, -1, -1, -2), (2, -1, -1, -2, -2)]
    assert {c.provenance for c in r.checks} <= {"theory", "oracle", "bookkeeping"}
    assert r.meta["genus"] == 1 and r.meta["boundary_components"] == 3


def test_cork_report(cork):
    r = run_all(cork)
    euler = next(c for c in r.checks if c.name == "euler_consistency")
    assert (euler.expected, euler.actual) == (2, 2)
    fr = next(c for c in r.checks if c.name == "framing_trace")
    assert fr.actual[0] == (-2, 0)
    assert fr.actual[-1][:2] == (-1, 4)


def test_step0_report(cork):
    assert run_all(cork, step0=True).passed


def test_corrupted_input_raises_before_checks(tmp_path):
    bad = tmp_path / "bad.grid"
    bad.write_text("n=3\nX: 1 1 3\nO: 2 3 1\n")
    with pytest.raises(GridError):
        run_all(bad)


def test_deterministic(trefoil):
    a = run_all(trefoil).to_dict(timing=False)
    b = run_all(trefoil).to_dict(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_verdict_requires_every_check():
    ok = CheckRecord("a", "pass", 1, 1, "bookkeeping")
    skipped = CheckRecord("b", SKIP, 1, 0, "oracle")
    bad = CheckRecord("c", "fail", 1, 0, "theory")
    assert VerificationReport("x", (ok, skipped)).passed
    assert not VerificationReport("x", (ok, bad)).passed
    assert VerificationReport("x", (ok, bad)).to_dict()["verdict"] == "fail"


def test_random_reports_are_reproducible():
    a = [r.to_dict(timing=False) for r in run_random(10, 6, seed=3)]
    b = [r.to_dict(timing=False) for r in run_random(10, 6, seed=3)]
    assert a == b
    assert all(r["verdict"] == "pass" for r in a)


def test_random_handle_grids_pass():
    rng = random.Random(8)
    for _ in range(20):
        g = random_buildable_handle_grid(rng, rng.randint(4, 8), rng.choice([1, 2]))
        r = run_all(g)
        assert r.passed, (g, r.failures())


def test_every_check_has_a_mutation():
    assert {name for name, _, _ in MUTATIONS} == CHECKS


@pytest.mark.parametrize("grid_name", ["trefoil", "cork"])
@pytest.mark.parametrize("target, what, mutate", MUTATIONS, ids=[f"{t}-{w}" for t, w, _ in MUTATIONS])
def test_mutation_detected(request, monkeypatch, grid_name, target, what, mutate):
    g = request.getfixturevalue(grid_name)
    kwargs = {"monkeypatch": monkeypatch} if "monkeypatch" in inspect.signature(mutate).parameters else {}
    clean, mutated = mutate(g, **kwargs)
    assert clean.name == mutated.name == target
    assert clean.status == "pass"
    assert mutated.status == "fail", f"{what}: {mutated}"
