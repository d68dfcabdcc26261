"""Command-line front end: ``palf build|chain|verify|render``.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 internal
invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .builder import InvariantError, apply_step0, build, normalize_right_portions
from .fiber import FiberError, boundary_count, genus
from .gridlink import GridDiagram, GridError, format_grid, load_input
from .kirby import KirbyError, framings_of
from .render import render_fiber, render_kirby
from .serialize import KD_SCHEMA, SchemaError, chain_to_dict, dumps, kd_from_dict, kd_to_dict, palf_to_dict
from .verify import VerificationReport, build_chain, run_all, run_random

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None
    json: str | None = None
    svg: str | None = None
    out_dir: str | None = None
    stage: int | None = None
    random: int = 0
    max_n: int = 8
    seed: int = 0
    step0: bool = False
    quiet: bool = False


def _load(cfg: RunConfig) -> GridDiagram:
    if cfg.input is None:
        raise GridError("an input file is required")
    g = load_input(cfg.input)
    return apply_step0(g) if cfg.step0 else g


def _write(path: str, text: str) -> None:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True)
    p.write_text(text)


def _say(cfg: RunConfig, msg: str) -> None:
    if not cfg.quiet:
        print(msg)


def cmd_build(cfg: RunConfig) -> int:
    g = _load(cfg)
    _, p = build(g)
    p = normalize_right_portions(p)
    doc = palf_to_dict(p)
    doc["input_grid"] = format_grid(g)
    if cfg.json:
        _write(cfg.json, dumps(doc))
    if cfg.svg:
        _write(cfg.svg, render_fiber(p, g))
    _say(cfg, f"genus {genus(p.fiber)}  boundary {boundary_count(p.fiber)}  bands {len(p.fiber.bands)}  "
              f"cycles {len(p.cycles)}")
    _say(cfg, "factorization " + " ".join(p.factorization.ids))
    return EXIT_OK


def cmd_chain(cfg: RunConfig) -> int:
    g = _load(cfg)
    chain = build_chain(g)
    if cfg.json:
        _write(cfg.json, dumps(chain_to_dict(chain.phi, chain.psi)))
    if cfg.out_dir:
        for kd in chain.phi:
            _write(str(Path(cfg.out_dir) / f"kd_{kd.stage}.json"), dumps(kd_to_dict(kd)))
    for kd in chain.phi:
        _say(cfg, f"KD({kd.stage})  " + " ".join(str(v) for v in framings_of(kd)))
    return EXIT_OK


def _report_line(r: VerificationReport) -> str:
    bad = ", ".join(c.name for c in r.failures())
    return f"{'PASS' if r.passed else 'FAIL'}  {r.source}" + (f"  [{bad}]" if bad else "")


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.random:
        if cfg.max_n < 2:
            raise GridError(f"--max-n must be at least 2, got {cfg.max_n}")
        reports = run_random(cfg.random, cfg.max_n, cfg.seed)
    else:
        g = _load(cfg)
        r = run_all(g)
        reports = [VerificationReport(cfg.input or "<grid>", r.checks, r.seconds, r.meta)]
    if not cfg.random:
        for c in reports[0].checks:
            _say(cfg, f"  {c.status:4}  {c.name:22} expected {c.expected}  actual {c.actual}")
    for r in reports:
        if cfg.random and r.passed:
            continue
        _say(cfg, _report_line(r))
    ok = all(r.passed for r in reports)
    _say(cfg, f"{sum(r.passed for r in reports)}/{len(reports)} reports pass")
    if cfg.json:
        doc = {"schema": "verification/1", "reports": [r.to_dict(timing=False) for r in reports],
               "verdict": "pass" if ok else "fail"}
        _write(cfg.json, dumps(doc))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_render(cfg: RunConfig) -> int:
    if cfg.input and cfg.input.endswith(".json"):
        try:
            doc = json.loads(Path(cfg.input).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise GridError(f"cannot read {cfg.input}: {exc}") from exc
        if doc.get("schema") != KD_SCHEMA:
            raise SchemaError(f"render reads {KD_SCHEMA!r} documents, got {doc.get('schema')!r}")
        svg = render_kirby(kd_from_dict(doc))
    elif cfg.stage is not None:
        chain = build_chain(_load(cfg))
        if not 0 <= cfg.stage < len(chain.phi):
            raise GridError(f"stage {cfg.stage} outside 0..{len(chain.phi) - 1}")
        svg = render_kirby(chain.phi[cfg.stage])
    else:
        g = _load(cfg)
        _, p = build(g)
        svg = render_fiber(normalize_right_portions(p), g)
    if cfg.svg:
        _write(cfg.svg, svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "chain": cmd_chain, "verify": cmd_verify, "render": cmd_render}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="palf", description="Grid diagrams to Lefschetz fibrations and Kirby chains.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?" if name == "verify" else None,
                        help="grid file, .front file, or (render) a Kirby diagram JSON")
        sp.add_argument("--json", help="write the JSON document here")
        sp.add_argument("--step0", action="store_true", help="insert negative kinks before hole columns first")
        sp.add_argument("-q", "--quiet", action="store_true")
        if name in ("build", "render"):
            sp.add_argument("--svg", help="write an SVG drawing here")
        if name == "render":
            sp.add_argument("--stage", type=int, help="draw KD(stage) instead of the fiber")
        if name == "chain":
            sp.add_argument("--out-dir", help="write one JSON file per Kirby diagram")
        if name == "verify":
            sp.add_argument("--random", type=int, default=0, metavar="N", help="check N random grids")
            sp.add_argument("--max-n", type=int, default=8, metavar="K")
            sp.add_argument("--seed", type=int, default=0, metavar="S")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input=ns.input,
        json=ns.json,
        svg=getattr(ns, "svg", None),
        out_dir=getattr(ns, "out_dir", None),
        stage=getattr(ns, "stage", None),
        random=getattr(ns, "random", 0),
        max_n=getattr(ns, "max_n", 8),
        seed=getattr(ns, "seed", 0),
        step0=ns.step0,
        quiet=ns.quiet,
    )


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (GridError, SchemaError, OSError) as exc:
        print(f"palf: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, FiberError, KirbyError) as exc:
        print(f"palf: internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv: Sequence[str] | None = None) -> int:
    ns = make_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
