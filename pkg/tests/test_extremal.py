from __future__ import annotations

import pytest

from quivar.bounds import class_parameters, m_formula, q_class_nonempty, equality_hypothesis_holds
from quivar.equiv import equiv_zero
from quivar.errors import Inconclusive, QuiverError
from quivar.extremal import FAMILIES, build_extremal, require_valid, verify_witness
from quivar.fixtures import two_loops
from quivar.omega import in_omega2
from quivar.oracle.invariants import decomposable
from quivar.oracle.poly import RATIONALS
from quivar.quiver import deg_vertex, mdeg, support


def test_family_a_bouquet():
    w = build_extremal("a", d=3)
    assert w.word == ("a1", "a2", "a3") and w.claimed_degree == 3
    rep = verify_witness(w, "2")
    assert rep.ok
    assert m_formula(1, 3, 1, "2") - 3 == 0


def test_family_b_example():
    w = build_extremal("b", 2, 3, 2)
    assert w.word == ("a1", "b1", "a2", "b1")
    assert w.claimed_degree == 4 == m_formula(2, 3, 2, "2")
    assert verify_witness(w, "2").ok


@pytest.mark.parametrize("n,t", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_family_b_degree(n, t):
    w = build_extremal("cycle_parallel", n, n + t - 1, n)
    assert len(w.word) == t * n
    rep = verify_witness(w, "2")
    assert rep.ok, rep.to_dict()


@pytest.mark.parametrize("d", range(1, 6))
def test_family_a_gap(d):
    w = build_extremal("loop_bouquet", 1, d, 1)
    rep = verify_witness(w, "2")
    assert rep.ok and 0 <= m_formula(1, d, 1, "2") - d <= 1


def test_family_e_main_instance():
    w = build_extremal("e", 4, 8, 2)
    assert w.claimed_degree == 12 == m_formula(4, 8, 2, "not2")
    assert all(deg_vertex(w.quiver, w.word, v) == 3 for v in w.quiver.vertices)
    rep = verify_witness(w, "not2")
    assert rep.ok, rep.to_dict()
    sub = rep.details["substitution"]
    assert sub["h0_nonzero"] and sub["substituted_indecomposable"] and sub["sign_sum_consistent"]


def test_family_e_pendant_repair():
    # the terminal cycle of the plain construction would be even here; a
    # pendant 2-cycle keeps the core path odd and the witness nonzero
    w = build_extremal("e", 3, 7, 2)
    assert w.parameters["pendants"] == 1
    assert len(w.word) == 9
    assert not equiv_zero(w.quiver, w.word, "not2")
    assert class_parameters(w.quiver) == (3, 7, 2)


def test_family_e_unsupported_class_is_inconclusive():
    with pytest.raises(Inconclusive):
        build_extremal("e", 4, 9, 3)


def test_square_times_loop_is_decomposable():
    # tr(X^2 Y) = tr X tr(XY) - det X tr Y: the reason an even core path fails
    assert decomposable(two_loops(), ("x", "x", "y"), 1, RATIONALS)


def test_family_c_smallest():
    w = build_extremal("c", 3, 5, 2)
    q, delta = w.quiver, w.delta
    assert class_parameters(q) == (3, 5, 2)
    assert in_omega2(support(q, delta), delta)
    assert delta.total == w.claimed_degree
    assert mdeg(w.word) == delta
    assert verify_witness(w, "2").ok


def test_family_d_smallest():
    w = build_extremal("d", 3, 4, 2)
    rep = verify_witness(w, "2")
    assert rep.ok, rep.to_dict()
    assert m_formula(3, 4, 2, "2") - w.delta.total == 2


@pytest.mark.parametrize("family,n,d,m", [("c", 7, 11, 3), ("d", 7, 9, 3), ("c", 5, 7, 3)])
def test_rhombus_families_larger(family, n, d, m):
    w = build_extremal(family, n, d, m)
    rep = require_valid(w, "2")
    assert rep.checks["gap"]


def test_constructed_classes_are_nonempty():
    for args in [("a", 1, 4, 1), ("b", 3, 4, 3), ("c", 3, 5, 2), ("d", 3, 4, 2), ("e", 4, 8, 2)]:
        w = build_extremal(*args)
        assert q_class_nonempty(*class_parameters(w.quiver))


def test_hypotheses_are_enforced():
    with pytest.raises(QuiverError):
        build_extremal("a", 2, 3, 1)
    with pytest.raises(QuiverError):
        build_extremal("b", 3, 4, 2)
    with pytest.raises(QuiverError):
        build_extremal("c", 3, 4, 2)
    with pytest.raises(QuiverError):
        build_extremal("d", 3, 5, 2)
    with pytest.raises(QuiverError):
        build_extremal("e", 4, 6, 2)
    with pytest.raises(QuiverError):
        build_extremal("zz", 1, 1, 1)


def test_family_names():
    assert set(FAMILIES) == {"a", "b", "c", "d", "e"}
    assert build_extremal("rhombus_chain", 3, 5, 2).family == "c"


def test_witness_dict_roundtrip_keys():
    d = build_extremal("b", 2, 3, 2).to_dict()
    assert {"family", "quiver", "claimed_degree", "parameters"} <= set(d)


def test_family_e_coverage():
    shaped = unshaped = 0
    for n in range(3, 9):
        for m in range(2, n):
            for d in range(n, 15):
                if not (q_class_nonempty(n, d, m) and equality_hypothesis_holds(n, d, m)):
                    continue
                try:
                    w = build_extremal("e", n, d, m)
                except Inconclusive:
                    unshaped += 1
                    assert m % 2 == 1, (n, d, m)
                    continue
                shaped += 1
                assert verify_witness(w).ok, (n, d, m)
    assert shaped > 0 and unshaped > 0
