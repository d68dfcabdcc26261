"""Grid diagrams of Stein handlebodies to positive allowable Lefschetz
fibrations, with the matching chain of Kirby diagrams and invariant checks."""
from __future__ import annotations

from .builder import BuildError, InvariantError, Palf, apply_step0, build, sweep_states
from .fiber import FiberSurface, SurfaceCurve, boundary_count, euler_char, genus
from .gridlink import (
    GridDiagram,
    GridError,
    front_to_grid,
    grid_to_link,
    load_grid,
    load_input,
    parse_front,
    parse_grid,
    thurston_bennequin,
)
from .intmat import smith_normal_form
from .kirby import KirbyDiagram, framings_of, kd_chain
from .verify import VerificationReport, build_chain, run_all

__version__ = "0.1.0"

__all__ = [
    "BuildError",
    "InvariantError",
    "Palf",
    "apply_step0",
    "build",
    "sweep_states",
    "FiberSurface",
    "SurfaceCurve",
    "boundary_count",
    "euler_char",
    "genus",
    "GridDiagram",
    "GridError",
    "front_to_grid",
    "grid_to_link",
    "load_grid",
    "load_input",
    "parse_front",
    "parse_grid",
    "thurston_bennequin",
    "smith_normal_form",
    "KirbyDiagram",
    "framings_of",
    "kd_chain",
    "VerificationReport",
    "build_chain",
    "run_all",
]
