"""Exception types shared across the package.

The CLI maps them onto exit codes: ``QuiverError`` is bad input (2),
``PropertyViolation`` a falsified property (1), ``Inconclusive`` a cap hit (3).
"""

from __future__ import annotations


class QuiverError(ValueError):
    """Malformed quiver, word or multidegree, or a violated precondition."""


class PropertyViolation(RuntimeError):
    """A property that should hold by theory failed at a concrete instance."""


class Inconclusive(RuntimeError):
    """A search cap (states, degree) was exceeded before a decision."""
