"""Exact invariants of isotrivial elliptic surfaces E x^G X.

Submodules: ``algebra`` (finite fields, polynomials, truncated algebras,
power series), ``groupscheme``, ``pgl2``, ``invariants``, ``ramification``,
``examples`` and ``cli``.
"""

from .errors import IsotrivialError
from .groupscheme import AlphaPr, ConstantCyclic, GroupSchemeDesc, Mu, SupersingularE2
from .invariants import InvariantReport, OrbitDatum, SurfaceData, compute_report

__version__ = "0.1.0"

__all__ = [
    "AlphaPr",
    "ConstantCyclic",
    "GroupSchemeDesc",
    "InvariantReport",
    "IsotrivialError",
    "Mu",
    "OrbitDatum",
    "SupersingularE2",
    "SurfaceData",
    "compute_report",
]
