"""Exact rational CDGA computations and Gorenstein invariants."""

__version__ = "0.1.0"

from ._rational import BACKEND
from .algebra import CdgaPresentation, FiniteCdga, Generator, free_algebra
from .invariants import (
    example_fiber_homology,
    g_invariant,
    gorenstein,
    pd_check,
    t_invariant,
    theorem2_report,
    theorem4_report,
)
from .parser import format_algebra, parse_algebra
from .presets import preset
from .sullivan import LambdaExtension, acyclic_closure, minimal_model

__all__ = [
    "BACKEND",
    "CdgaPresentation",
    "FiniteCdga",
    "Generator",
    "LambdaExtension",
    "acyclic_closure",
    "example_fiber_homology",
    "format_algebra",
    "free_algebra",
    "g_invariant",
    "gorenstein",
    "minimal_model",
    "parse_algebra",
    "pd_check",
    "preset",
    "t_invariant",
    "theorem2_report",
    "theorem4_report",
]
