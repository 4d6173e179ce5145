from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivar.equiv import EquivEngine
from quivar.errors import Inconclusive, QuiverError
from quivar.fixtures import H1, H2, one_loop, triangle_quiver, two_cycle, two_loops
from quivar.oracle.invariants import (
    CONSTANTS,
    cayley_hamilton_residual,
    cross_validate,
    decomposable,
    decomposable_report,
    invariant_polynomial,
    ring,
    substitution_certificate,
)
from quivar.oracle.poly import GF2, GF3, RATIONALS, Poly, field_from_name, in_span
from quivar.quiver import Quiver, enumerate_closed_words, mdeg


def _dump(q: Quiver, poly: Poly) -> dict:
    names = ring(q, poly.field).var_names()
    return {tuple(sorted(t["monomial"].items())): t["coeff"] for t in poly.dump(names)}


def test_trace_and_det_of_one_matrix():
    q = one_loop()
    tr = _dump(q, invariant_polynomial(q, ("x",), 1))
    assert tr == {(("x11(x)", 1),): "1", (("x22(x)", 1),): "1"}
    det = _dump(q, invariant_polynomial(q, ("x",), 2))
    assert det == {(("x11(x)", 1), ("x22(x)", 1)): "1", (("x12(x)", 1), ("x21(x)", 1)): "-1"}


def test_det_is_multiplicative():
    q = two_cycle()
    r = ring(q, RATIONALS)
    lhs = invariant_polynomial(q, ("a", "b"), 2)
    assert lhs == r.generic("a").det() * r.generic("b").det()


def test_det_multiplicative_along_h2():
    q = triangle_quiver()
    r = ring(q, RATIONALS)
    prod = Poly.constant(RATIONALS, r.nvars, 1)
    for a in H2:
        prod = prod * r.generic(a).det()
    assert invariant_polynomial(q, H2, 2) == prod


def test_multiplication_order_is_reversed():
    q = two_cycle()
    r = ring(q, RATIONALS)
    m = r.path_matrix(("a", "b"))
    expected = r.generic("b") @ r.generic("a")
    assert all(m.e[i][j] == expected.e[i][j] for i in range(2) for j in range(2))


def test_trace_rotation_invariance():
    q = triangle_quiver()
    r = ring(q, RATIONALS)
    for w in [("x", "a"), ("c", "z"), ("x", "y", "z")]:
        rot = w[1:] + w[:1]
        assert r.path_matrix(w).trace() == r.path_matrix(rot).trace()


def test_homogeneous_multidegree():
    q = triangle_quiver()
    r = ring(q, RATIONALS)
    for k in (1, 2):
        poly = invariant_polynomial(q, ("c", "z", "x", "a"), k)
        assert r.arrow_degree(poly) == {mdeg(("c", "z", "x", "a")).scale(k)}


def test_cayley_hamilton():
    for fld in (RATIONALS, GF2, GF3):
        assert cayley_hamilton_residual(fld).is_zero()


def test_square_over_each_field():
    q = one_loop()
    # over GF(2) tr(X^2) = tr(X)^2; over Q the det generator is needed
    assert decomposable(q, ("x", "x"), 1, GF2)
    assert not decomposable(q, ("x", "x"), 1, RATIONALS)
    r = ring(q, RATIONALS)
    tr = r.generic("x").trace()
    ident = tr * tr - r.generic("x").det().scale(2)
    assert invariant_polynomial(q, ("x", "x"), 1) == ident


def test_worked_example_over_gf2():
    q = triangle_quiver()
    assert not decomposable(q, H2, 1, GF2)
    assert decomposable(q, H1, 1, GF2)


def test_two_cycle_det_indecomposable():
    assert not decomposable(two_cycle(), ("a", "b"), 2, RATIONALS)


def test_decomposable_cap():
    with pytest.raises(Inconclusive):
        decomposable(one_loop(), ("x",) * 5, 2, RATIONALS, cap=8)


def test_explain_lists_products():
    rep = decomposable_report(one_loop(), ("x", "x"), 1, GF2, explain=True)
    assert rep.decomposable and rep.products == len(rep.transcript) >= 1


def test_substitution_examples():
    q = one_loop()
    assert not substitution_certificate(q, ("x",), {"x": "I"}).nonzero
    q2 = two_loops()
    assert not substitution_certificate(q2, ("x", "y"), {"x": "I", "y": "J"}).nonzero
    assert substitution_certificate(q2, ("x", "y"), {"x": "I", "y": "I"}).nonzero
    assert not substitution_certificate(q, ("x",), {"x": "J"}).nonzero


def test_substitution_errors():
    q = two_loops()
    with pytest.raises(QuiverError):
        substitution_certificate(q, ("x", "y"), {"x": "I"})
    with pytest.raises(QuiverError):
        substitution_certificate(q, ("x",), {"x": "K"})
    with pytest.raises(QuiverError):
        substitution_certificate(q, ("x",), {"x": "I", "nope": "I"})


def test_core_path_nonzero():
    loops = ["x1", "y1", "x2", "y2"]
    q = Quiver.build(["v"], [(a, "v", "v") for a in loops])
    h0 = ("x1", "y1", "x2", "y2", "x1", "x2")
    res = substitution_certificate(q, h0, {a: "generic" for a in loops})
    assert res.nonzero


def test_constant_matrices():
    assert CONSTANTS["I"] == ((1, 0), (0, -1))
    assert CONSTANTS["J"] == ((0, 1), (-1, 0))


def test_in_span_basic():
    q = one_loop()
    r = ring(q, RATIONALS)
    x = r.generic("x").trace()
    assert in_span(x * x + x * x, [x * x])
    assert not in_span(x, [x * x])


def test_field_names():
    assert field_from_name("q") == RATIONALS
    assert field_from_name("gf3").p == 3
    with pytest.raises(ValueError):
        field_from_name("gf4")


def test_prime_field_agrees_with_rationals():
    # charNot2 regression: GF(3) and Q give the same decomposability verdicts
    for q, cutoff in ((one_loop(), 4), (two_loops(), 4), (two_cycle(), 4), (triangle_quiver(), 4)):
        for w in enumerate_closed_words(q, cutoff=cutoff):
            assert decomposable(q, w, 1, GF3) == decomposable(q, w, 1, RATIONALS), w


def test_cross_validate_examples():
    assert cross_validate(one_loop(), 4, "2").mismatches == []
    for ch in ("2", "not2"):
        assert cross_validate(two_cycle(), 4, ch).mismatches == []
    report = cross_validate(triangle_quiver(), 8, "2", words=[H1, H2])
    assert report.checked == 2 and report.mismatches == []


class _Wrong:
    def __init__(self, q):
        self.inner = EquivEngine(q, "2")

    def equiv_zero(self, w):
        res = self.inner.equiv_zero(w)
        return type(res)(res.word, res.char, not res.equiv_zero, res.states_explored, "flipped")


def test_cross_validate_reports_mismatches():
    report = cross_validate(one_loop(), 3, "2", engine=_Wrong(one_loop()))
    assert len(report.mismatches) == 3


_LOOP2_WORDS = list(enumerate_closed_words(two_loops(), cutoff=5))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(_LOOP2_WORDS), st.sampled_from(["2", "not2"]))
def test_engine_matches_oracle_on_two_loops(word, char):
    fld = GF2 if char == "2" else RATIONALS
    assert EquivEngine(two_loops(), char).is_zero(word) == decomposable(two_loops(), word, 1, fld)
