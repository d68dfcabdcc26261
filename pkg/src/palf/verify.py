"""Cross-checks between the grid input, the constructed PALF and the Kirby
chain, folded into one machine-readable report.

Every check is a pure function returning a :class:`CheckRecord`.  Passing
homology checks is a necessary condition for the claimed diffeomorphisms,
never a proof of them; the report wording says so.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .builder import Palf, SweepState, assemble_palf, apply_step0
from .fiber import (
    FiberError,
    boundary_count,
    euler_char,
    genus,
    homology_class,
    intersection_form,
    is_simple,
    pairing,
    transvection_matrix,
)
from .gridlink import (
    CornerTable,
    GridDiagram,
    GridLink,
    corner_table,
    load_input,
    random_grid,
    self_writhe,
    stein_framings,
)
from .intmat import cokernel, identity, integer_kernel, matmul, transpose
from .kirby import (
    KirbyDiagram,
    boundary_homology,
    framings_of,
    handlebody_homology,
    kd_chain,
    writhe,
)
from . import builder

# Kinds of evidence behind a check.
THEORY = "theory"  # a property the construction is proven to have
ORACLE = "oracle"  # comparison with an independent computation
BOOKKEEPING = "bookkeeping"  # a counting identity of the data structures

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str  # pass / fail / skip
    expected: Any
    actual: Any
    provenance: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL


@dataclass(frozen=True)
class VerificationReport:
    source: str
    checks: tuple[CheckRecord, ...]
    seconds: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "source": self.source,
            "verdict": PASS if self.passed else FAIL,
            "meta": dict(self.meta),
            "checks": [asdict(c) for c in self.checks],
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass(frozen=True)
class Chain:
    """Sweep states with their Kirby diagrams KD(0..n-1) and the diagrams
    KD'(j-1) obtained from KD(j-1) by the cancelling-pair move."""

    link: GridLink
    corners: CornerTable
    states: tuple[SweepState, ...]
    phi: tuple[KirbyDiagram, ...]
    psi: tuple[KirbyDiagram, ...]


def build_chain(g: GridDiagram) -> Chain:
    states = builder.sweep_states(g)
    phi, psi = kd_chain(states)
    link = states[0].link
    return Chain(link, states[0].corners, tuple(states), tuple(phi), tuple(psi))


def _record(name: str, ok: bool, expected, actual, provenance: str, note: str = "") -> CheckRecord:
    return CheckRecord(name, PASS if ok else FAIL, expected, actual, provenance, note)


# ---------------------------------------------------------------- checks

def check_grid_invariants(link: GridLink, corners: CornerTable | None = None) -> CheckRecord:
    """One vertical per column, one horizontal per row, closed components,
    column 1 topped by NW and column n by NE."""
    corners = corner_table(link) if corners is None else corners
    n = link.n
    problems = []
    cols = sorted(c for k in range(link.m) for c in link.columns_of(k))
    if cols != list(range(1, n + 1)):
        problems.append(f"columns covered {cols}")
    for r in range(1, n + 1):
        h = link.horizontal(r)
        if h.index != r or h.lo == h.hi:
            problems.append(f"row {r} horizontal malformed")
    for c in range(1, n + 1):
        v = link.vertical(c)
        if v.index != c or v.lo == v.hi:
            problems.append(f"column {c} vertical malformed")
        top = corners[c]
        h = link.horizontal(top.top_row)
        want = "NW" if h.hi > c else "NE"
        if top.top != want:
            problems.append(f"column {c} top corner {top.top}, horizontal says {want}")
    kinds = (corners.kind(1), corners.kind(n))
    if kinds != ("NW", "NE"):
        problems.append(f"extreme columns topped by {kinds}")
    if any(x.column == n for x in link.crossings):
        problems.append(f"column {n} has a crossing")
    return _record(
        "grid_invariants", not problems, "none", problems or "none", BOOKKEEPING,
        "rectilinear link closes up with forced extreme corners",
    )


def check_euler_consistency(p: Palf, ell: int, m: int) -> CheckRecord:
    chi = euler_char(p.fiber)
    k = len(p.factorization.ids)
    return _record(
        "euler_consistency", chi + k == 1 - ell + m, 1 - ell + m, chi + k, THEORY,
        f"chi(fiber)={chi}, cycles={k}",
    )


def check_genus_bound(p: Palf, n: int) -> CheckRecord:
    try:
        g = genus(p.fiber)
    except FiberError as exc:
        return _record("genus_bound", False, f"g <= {(n - 1) / 2}", str(exc), THEORY)
    bands = len(p.fiber.bands) - p.meta.ell
    ok = 2 * g <= n - 1 and bands <= n - 1
    return _record(
        "genus_bound", ok, f"g <= {(n - 1) / 2}, column bands <= {n - 1}",
        f"g = {g}, column bands = {bands}", THEORY,
    )


def framing_trace(chain: Chain) -> list[tuple[int, ...]]:
    return [framings_of(kd) for kd in chain.phi]


def check_framing_trace(chain: Chain) -> CheckRecord:
    """KD(0) framings are the Stein framings, added circles are framed by
    their corner kind, and the move reproduces the next diagram."""
    problems = []
    stein = stein_framings(chain.link)
    m = chain.link.m
    if chain.phi and framings_of(chain.phi[0])[:m] != stein:
        problems.append(f"KD(0) framings {framings_of(chain.phi[0])[:m]} != tb-1 {stein}")
    want = {"NW": -1, "NE": -2}
    for kd in chain.phi:
        for c in kd.attaching:
            if c.tag == "component":
                continue
            kind = chain.corners.kind(int(c.name[1:]))
            if c.tag != kind or c.framing != want[kind]:
                problems.append(f"KD({kd.stage}) {c.name}: {c.tag} framed {c.framing}, corner {kind}")
    for j, kd in enumerate(chain.psi, start=1):
        nxt = chain.phi[j]
        if framings_of(kd) != framings_of(nxt):
            problems.append(f"stage {j}: move gives {framings_of(kd)}, direct {framings_of(nxt)}")
        if kd.vertical_order != nxt.vertical_order:
            problems.append(f"stage {j}: move order {kd.vertical_order} != {nxt.vertical_order}")
    return _record(
        "framing_trace", not problems, "consistent", problems or framing_trace(chain), THEORY,
    )


def check_writhe_conservation(chain: Chain) -> CheckRecord:
    m = chain.link.m
    names = [chain.link.component_name(k) for k in range(m)]
    want = [self_writhe(chain.link, k) for k in range(m)]
    rows = [[writhe(kd, nm) for nm in names] for kd in chain.phi + chain.psi]
    bad = [r for r in rows if r != want]
    return _record(
        "writhe_conservation", not bad, want, bad[0] if bad else want, THEORY,
        "component writhes along the chain",
    )


def check_snf_invariance(chain: Chain) -> CheckRecord:
    """Boundary homology (extended linking matrix) and handlebody homology
    (dotted rows) are constant along the chain.  Necessary, not sufficient,
    for the stages to be diffeomorphic."""
    kds = list(chain.phi) + list(chain.psi)
    bnd = [boundary_homology(kd).cokernel for kd in kds]
    hb = [handlebody_homology(kd).cokernel for kd in kds]
    ok = len(set(bnd)) <= 1 and len(set(hb)) <= 1
    actual = {"boundary": sorted(set(bnd)), "handlebody": sorted(set(hb))}
    return _record(
        "snf_invariance", ok, "one value each", actual, THEORY,
        "homology agreement is a necessary condition only",
    )


def check_monodromy(p: Palf) -> CheckRecord:
    """Every cycle simple with nonzero class; the product of the twists
    preserves the intersection form."""
    s = p.fiber
    cm = p.cycle_map()
    problems = []
    missing = [i for i in p.factorization.ids if i not in cm]
    if missing:
        problems.append(f"factorization names unknown cycles {missing}")
    for c in p.cycles:
        if homology_class(s, c).is_zero():
            problems.append(f"{c.id} is null-homologous")
        if not is_simple(s, c):
            problems.append(f"{c.id} is not simple")
    q = intersection_form(s)
    k = len(s.bands)
    mono = identity(k)
    for cid in p.factorization.ids:
        if cid in cm:
            t = transvection_matrix(q, homology_class(s, cm[cid]).coefficients)
            mono = matmul(t, mono)
    if matmul(matmul(transpose(mono), q), mono) != q:
        problems.append("M^T Q M != Q")
    return _record("monodromy", not problems, "simple nontrivial cycles, M^T Q M = Q",
                   problems or "ok", THEORY)


def palf_boundary_form(p: Palf) -> tuple[list[list[int]], list[list[int]]]:
    """Matrix of cycle classes (bands x cycles, factorization order) and the
    boundary form restricted to its integer kernel.

    For x, y in the kernel the form is -x.y - sum_{i<j} x_i y_j <h_i, h_j>.
    Its cokernel is the first homology of the boundary of the total space
    whenever the total space is simply connected in homology.
    """
    s = p.fiber
    q = intersection_form(s)
    cm = p.cycle_map()
    hs = [homology_class(s, cm[i]).coefficients for i in p.factorization.ids]
    k = len(hs)
    hmat = [[h[b] for h in hs] for b in range(len(s.bands))]
    ker = integer_kernel(hmat, k)
    ip = [[pairing(q, hs[i], hs[j]) for j in range(k)] for i in range(k)]

    def form(x, y) -> int:
        v = -sum(a * b for a, b in zip(x, y))
        for i in range(k):
            if x[i]:
                v -= x[i] * sum(y[j] * ip[i][j] for j in range(i + 1, k))
        return v

    return hmat, [[form(x, y) for y in ker] for x in ker]


def check_boundary_homology(p: Palf, kd0: KirbyDiagram) -> CheckRecord:
    """Boundary homology computed from the fibration agrees with the
    extended linking matrix of KD(0).  Skipped when H1 of the total space
    is nonzero, where the fibration formula does not apply."""
    hmat, form = palf_boundary_form(p)
    h1 = cokernel(hmat, len(hmat))
    if h1 != ((), 0):
        return CheckRecord("boundary_homology", SKIP, "H1(total space) = 0", _describe(h1), ORACLE,
                           "total space has nonzero first homology")
    got = cokernel(form, len(form))
    want = boundary_homology(kd0).cokernel
    return _record("boundary_homology", got == want, _describe(want), _describe(got), ORACLE,
                   "fibration form versus KD(0) linking matrix")


def _describe(ck: tuple[tuple[int, ...], int]) -> str:
    tors, free = ck
    parts = [f"Z/{d}" for d in tors]
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------- driver

def run_checks(g: GridDiagram) -> tuple[list[CheckRecord], Palf, Chain]:
    chain = build_chain(g)
    p = assemble_palf(chain.states[-1])
    ell, m = len(g.hole_columns), chain.link.m
    checks = [
        check_grid_invariants(chain.link, chain.corners),
        check_euler_consistency(p, ell, m),
        check_genus_bound(p, g.size),
        check_monodromy(p),
        check_framing_trace(chain),
        check_writhe_conservation(chain),
        check_snf_invariance(chain),
        check_boundary_homology(p, chain.phi[0]),
    ]
    return checks, p, chain


def run_all(source: GridDiagram | str | Path, step0: bool = False) -> VerificationReport:
    """Full pipeline and every check.  Input errors propagate as GridError
    before any check runs."""
    t0 = time.perf_counter()
    if isinstance(source, GridDiagram):
        g, label = source, "<grid>"
    else:
        g, label = load_input(source), str(source)
    if step0:
        g = apply_step0(g)
    checks, p, chain = run_checks(g)
    meta = {
        "n": g.size,
        "components": chain.link.m,
        "handles": len(g.hole_columns),
        "genus": genus(p.fiber),
        "boundary_components": boundary_count(p.fiber),
        "factorization": list(p.factorization.ids),
    }
    return VerificationReport(label, tuple(checks), time.perf_counter() - t0, meta)


def run_random(count: int, max_n: int, seed: int, min_n: int = 2) -> list[VerificationReport]:
    """Reports for ``count`` random grids with sizes in min_n..max_n, in
    generation order."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        g = random_grid(n, rng)
        r = run_all(g)
        out.append(VerificationReport(f"random[{i}] n={n}", r.checks, r.seconds,
                                      dict(r.meta, x_row=list(g.x_row), o_row=list(g.o_row))))
    return out


__all__: Sequence[str] = [
    "CheckRecord",
    "VerificationReport",
    "Chain",
    "build_chain",
    "check_grid_invariants",
    "check_euler_consistency",
    "check_genus_bound",
    "check_framing_trace",
    "check_writhe_conservation",
    "check_snf_invariance",
    "check_monodromy",
    "check_boundary_homology",
    "palf_boundary_form",
    "run_checks",
    "run_all",
    "run_random",
]
