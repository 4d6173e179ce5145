"""Path equivalence, degree bounds and invariant checks for quivers in dimension (2,...,2)."""

from __future__ import annotations

from .errors import Inconclusive, PropertyViolation, QuiverError
from .quiver import Arrow, Multidegree, Quiver, load_quiver

__all__ = [
    "Arrow",
    "Inconclusive",
    "Multidegree",
    "PropertyViolation",
    "Quiver",
    "QuiverError",
    "load_quiver",
]

__version__ = "0.1.0"
