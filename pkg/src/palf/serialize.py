"""JSON documents for PALFs and Kirby diagrams, with exact round trips."""
from __future__ import annotations

import json
from typing import Any

from .builder import Palf, PalfMeta
from .fiber import (
    BandPass,
    BaseArc,
    Band,
    FiberSurface,
    Foot,
    MonodromyFactorization,
    SurfaceCurve,
    boundary_count,
    genus,
    homology_class,
)
from .kirby import CrossingRecord, KCircle, KirbyDiagram, framings_of

PALF_SCHEMA = "palf/1"
KD_SCHEMA = "kirby-diagram/1"
CHAIN_SCHEMA = "kirby-chain/1"


class SchemaError(ValueError):
    pass


def _pt(p) -> tuple[int, int]:
    return (int(p[0]), int(p[1]))


def _check(doc: dict, schema: str) -> None:
    if doc.get("schema") != schema:
        raise SchemaError(f"expected schema {schema!r}, got {doc.get('schema')!r}")


# ---------------------------------------------------------------- PALF

def curve_to_dict(c: SurfaceCurve) -> dict:
    steps = []
    for s in c.steps:
        if isinstance(s, BandPass):
            steps.append({"pass": s.band, "direction": s.direction})
        else:
            steps.append({"arc": [list(p) for p in s.points]})
    return {"id": c.id, "steps": steps}


def curve_from_dict(d: dict) -> SurfaceCurve:
    steps = []
    for s in d["steps"]:
        if "pass" in s:
            steps.append(BandPass(s["pass"], int(s["direction"])))
        else:
            steps.append(BaseArc(tuple(_pt(p) for p in s["arc"])))
    return SurfaceCurve(d["id"], tuple(steps))


def palf_to_dict(p: Palf) -> dict[str, Any]:
    s = p.fiber
    return {
        "schema": PALF_SCHEMA,
        "genus": genus(s),
        "boundary_components": boundary_count(s),
        "factorization": list(p.factorization.ids),
        "meta": {"ell": p.meta.ell, "m": p.meta.m, "n": p.meta.n, "grid_size": p.meta.grid_size},
        "unit": p.unit,
        "fiber": {
            "bands": [
                {"id": b.id, "origin": b.origin, "index": b.index, "anchors": [list(a) for a in b.anchors]}
                for b in s.bands
            ],
            "boundary_word": [[f.band, f.end] for f in s.boundary_word],
        },
        "cycles": [
            dict(curve_to_dict(c), homology=list(homology_class(s, c).coefficients)) for c in p.cycles
        ],
        "hole_markers": [list(m) for m in p.hole_markers],
    }


def palf_from_dict(d: dict) -> Palf:
    _check(d, PALF_SCHEMA)
    f = d["fiber"]
    bands = tuple(
        Band(b["id"], b["origin"], int(b["index"]), tuple(_pt(a) for a in b["anchors"])) for b in f["bands"]
    )
    surface = FiberSurface(bands, tuple(Foot(b, int(e)) for b, e in f["boundary_word"]))
    meta = PalfMeta(**{k: int(v) for k, v in d["meta"].items()})
    return Palf(
        surface,
        tuple(curve_from_dict(c) for c in d["cycles"]),
        MonodromyFactorization(tuple(d["factorization"])),
        meta,
        tuple(_pt(m) for m in d["hole_markers"]),
        int(d["unit"]),
    )


# ---------------------------------------------------------------- Kirby diagrams

def _circle_to_dict(c: KCircle) -> dict:
    return {"name": c.name, "kind": c.kind, "tag": c.tag, "framing": c.framing,
            "points": [list(p) for p in c.points]}


def _circle_from_dict(d: dict) -> KCircle:
    fr = d["framing"]
    return KCircle(d["name"], d["kind"], tuple(_pt(p) for p in d["points"]),
                   None if fr is None else int(fr), d["tag"])


def kd_to_dict(kd: KirbyDiagram) -> dict[str, Any]:
    return {
        "schema": KD_SCHEMA,
        "stage": kd.stage,
        "framings": list(framings_of(kd)),
        "vertical_order": list(kd.vertical_order),
        "dotted": [_circle_to_dict(c) for c in kd.dotted],
        "attaching": [_circle_to_dict(c) for c in kd.attaching],
        "crossings": [
            {"over": r.over, "over_seg": r.over_seg, "under": r.under, "under_seg": r.under_seg,
             "point": list(r.point), "sign": r.sign}
            for r in kd.crossings
        ],
        "pinned": [[list(p), name, seg] for p, name, seg in kd.pinned],
    }


def kd_from_dict(d: dict) -> KirbyDiagram:
    _check(d, KD_SCHEMA)
    return KirbyDiagram(
        int(d["stage"]),
        tuple(_circle_from_dict(c) for c in d["dotted"]),
        tuple(_circle_from_dict(c) for c in d["attaching"]),
        tuple(d["vertical_order"]),
        tuple(
            CrossingRecord(r["over"], int(r["over_seg"]), r["under"], int(r["under_seg"]),
                           _pt(r["point"]), int(r["sign"]))
            for r in d["crossings"]
        ),
        tuple((_pt(p), name, int(seg)) for p, name, seg in d["pinned"]),
    )


def chain_to_dict(phi, psi) -> dict[str, Any]:
    return {
        "schema": CHAIN_SCHEMA,
        "trace": [list(framings_of(kd)) for kd in phi],
        "diagrams": [kd_to_dict(kd) for kd in phi],
        "moves": [kd_to_dict(kd) for kd in psi],
    }


def dumps(doc: dict) -> str:
    """Stable text form: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
