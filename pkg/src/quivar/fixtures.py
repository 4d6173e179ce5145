"""Small named quivers and words used by the acceptance suite and the tests."""

from __future__ import annotations

from .quiver import Quiver, Word


def one_loop() -> Quiver:
    return Quiver.build(["v"], [("x", "v", "v")])


def two_loops() -> Quiver:
    return Quiver.build(["v"], [("x", "v", "v"), ("y", "v", "v")])


def two_cycle() -> Quiver:
    """C2: one arrow each way between two vertices."""
    return Quiver.build(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])


def triangle_quiver() -> Quiver:
    """Three vertices with a 2-cycle on every edge of a triangle, oriented as
    u -x-> v -y-> w -z-> u one way and u -c-> w -b-> v -a-> u the other."""
    return Quiver.build(
        ["u", "v", "w"],
        [("a", "v", "u"), ("x", "u", "v"), ("y", "v", "w"),
         ("b", "w", "v"), ("c", "u", "w"), ("z", "w", "u")],
    )


H1: Word = ("c", "z", "c", "z", "x", "y", "b", "a")
H2: Word = ("c", "z", "c", "b", "y", "z", "x", "a")

NAMED = {
    "loop1": one_loop,
    "loop2": two_loops,
    "c2": two_cycle,
    "triangle": triangle_quiver,
}
