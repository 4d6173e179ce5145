from __future__ import annotations

import pytest

from quivar.bounds import class_parameters, sweep
from quivar.equiv import EquivEngine
from quivar.errors import QuiverError
from quivar.extremal import build_extremal
from quivar.fixtures import H2, one_loop, triangle_quiver, two_cycle
from quivar.omega import (
    build_complete_chain,
    build_delta_tree,
    chain_problems,
    decomposition_problems,
    find_path_decomposition,
    good_component_decomposition,
    good_cycle_through,
    in_omega2,
    in_omega3,
    omega_membership,
    tree_problems,
)
from quivar.quiver import Quiver, enumerate_closed_words, mdeg, support


def test_worked_example_membership():
    mem = omega_membership(triangle_quiver(), mdeg(H2), "2", cutoff=8)
    assert mem.in_omega0 and mem.in_omega_equiv == "yes"
    assert not mem.in_omega2 and not mem.in_omega3
    assert mem.witness is not None and mdeg(mem.witness) == mdeg(H2)


def test_single_loop_membership():
    mem = omega_membership(one_loop(), {"x": 1}, "2", cutoff=3)
    assert (mem.in_omega0, mem.in_omega3, mem.in_omega2, mem.in_omega_equiv) == (True, True, True, "yes")


def test_two_cycle_square_membership():
    mem = omega_membership(two_cycle(), {"a": 2, "b": 2}, "2", cutoff=5)
    assert mem.in_omega0
    assert not mem.in_omega2
    assert mem.in_omega_equiv == "no"


def test_report_keys():
    d = omega_membership(two_cycle(), {"a": 1, "b": 1}, "2", cutoff=3).to_dict()
    assert set(d) == {"delta", "omega0", "omega3", "omega2", "omega_equiv", "witness"}


def test_zero_coordinate_is_not_omega0():
    mem = omega_membership(two_cycle(), {"a": 1, "b": 0}, "2", cutoff=3)
    assert not mem.in_omega0 and mem.in_omega_equiv == "no"


def test_omega_equiv_unknown_below_cutoff():
    mem = omega_membership(triangle_quiver(), mdeg(H2), "2", cutoff=4)
    assert mem.in_omega_equiv == "unknown"


def test_chain_empty_on_omega3():
    chain = build_complete_chain(one_loop(), {"x": 1})
    assert chain.paths == ()


def test_chain_rejects_outside_omega2():
    with pytest.raises(QuiverError):
        build_complete_chain(two_cycle(), {"a": 2, "b": 2})
    with pytest.raises(QuiverError):
        build_delta_tree(two_cycle(), {"a": 2, "b": 2})


def test_chain_and_tree_on_rhombus_witness():
    w = build_extremal("c", 3, 5, 2)
    chain = build_complete_chain(w.quiver, w.delta)
    assert chain.paths
    assert chain_problems(w.quiver, w.delta, chain) == []
    tree = build_delta_tree(w.quiver, w.delta)
    assert tree.size() > 1
    assert tree_problems(w.quiver, tree) == []
    for leaf in tree.leaves():
        assert in_omega3(support(w.quiver, leaf.delta), leaf.delta)


def test_tree_single_node_on_omega3():
    tree = build_delta_tree(one_loop(), {"x": 1})
    assert tree.size() == 1


def test_chains_valid_across_sweep():
    checked = 0
    for q in sweep(2, 3):
        for w in enumerate_closed_words(q, cutoff=6):
            delta = mdeg(w)
            if set(delta) != set(q.arrow_ids) or not in_omega2(q, delta):
                continue
            chain = build_complete_chain(q, delta)
            assert chain_problems(q, delta, chain) == []
            checked += 1
    assert checked > 0


def test_good_components_of_a_square():
    dec = good_component_decomposition(two_cycle(), ("a", "b"), ("a", "b", "a", "b"))
    assert dec.r == 0 and dec.null_component == frozenset({"u", "v"})


def test_good_components_worked_example():
    q = triangle_quiver()
    dec = good_component_decomposition(q, ("c", "z"), H2)
    assert dec.r >= 1
    assert set(dec.good_subpaths) == {("b", "y"), ("x", "a")}
    for sub in dec.good_subpaths:
        ends = {q.tail(sub[0]), q.head(sub[-1])}
        assert any(ends <= comp for comp in dec.good_components)
    assert good_cycle_through(q, dec, "u", "u") == [("x", "a")]


def test_two_handles_give_two_components():
    q = Quiver.build(
        ["v1", "v2", "v3", "v4", "w1", "w2"],
        [("a1", "v1", "v2"), ("a2", "v2", "v3"), ("a3", "v3", "v4"), ("a4", "v4", "v1"),
         ("e1", "v1", "w1"), ("f1", "w1", "v1"), ("e2", "v3", "w2"), ("f2", "w2", "v3")],
    )
    h = ("e1", "f1", "a1", "a2", "e2", "f2", "a3", "a4", "a1", "a2", "a3", "a4")
    dec = good_component_decomposition(q, ("a1", "a2", "a3", "a4"), h)
    assert dec.r == 2
    assert dec.null_component == frozenset({"v2", "v4"})


def test_good_components_standing_assumption():
    with pytest.raises(QuiverError):
        good_component_decomposition(two_cycle(), ("a", "b"), ("a", "b"))


def test_path_decomposition_examples():
    dec = find_path_decomposition(two_cycle(), ("a", "b"))
    assert (dec.r, dec.t) == (1, 0)
    assert find_path_decomposition(one_loop(), ("x",)).r == 1
    q = triangle_quiver()
    dec = find_path_decomposition(q, H2)
    assert dec.r >= 1 and dec.r + dec.t <= 6 - 3 + 1
    assert decomposition_problems(q, H2, dec) == []


def test_path_decomposition_bound_on_small_sweep():
    for q in sweep(2, 3):
        n, d, _ = class_parameters(q)
        eng = EquivEngine(q, "2")
        for w in eng.nonzero_words(6):
            dec = find_path_decomposition(q, w)
            assert dec.r >= 1 and dec.r + dec.t <= d - n + 1
