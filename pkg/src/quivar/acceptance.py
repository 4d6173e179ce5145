"""The ten acceptance checks, each returning a pass/fail record with details.

Both ``quivar accept`` and ``tests/test_acceptance.py`` run these functions,
so the command line and the test suite cannot drift apart.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .bounds import (
    labelled_quivers,
    m_formula,
    q_class_nonempty,
    survey_class,
    sweep,
    upper_bound_for_quiver,
)
from .equiv import Characteristic, EquivEngine, engine_for, max_nonzero_degree
from .errors import Inconclusive, PropertyViolation, QuiverError
from .extremal import build_extremal, verify_witness
from .fixtures import H1, H2, one_loop, triangle_quiver, two_cycle, two_loops
from .omega import decomposition_problems, find_path_decomposition, omega_membership
from .oracle.invariants import cross_validate
from .oracle.poly import GF2, RATIONALS
from .properties import PropertyTally, check_word, conserves_multidegree, rotation_invariant
from .quiver import (
    Multidegree,
    Quiver,
    enumerate_closed_words,
    is_strongly_connected,
    max_primitive_degree,
    mdeg,
    support,
)

SWEEP = (3, 4)  # n ≤ 3, d ≤ 4
BOTH = (Characteristic.TWO, Characteristic.NOT2)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "details": self.details}


def _sweep() -> list[Quiver]:
    return list(sweep(*SWEEP))


def _vectors(q: Quiver, max_total: int) -> Iterator[Multidegree]:
    """Every nonzero multidegree on the arrows of q with total ≤ max_total."""
    ids = q.arrow_ids

    def rec(i: int, left: int, acc: list[int]) -> Iterator[list[int]]:
        if i == len(ids):
            yield acc
            return
        for k in range(left + 1):
            yield from rec(i + 1, left - k, acc + [k])

    for vec in rec(0, max_total, []):
        if any(vec):
            yield Multidegree(dict(zip(ids, vec)))


# --- the criteria -----------------------------------------------------------


def criterion_1() -> CriterionResult:
    q = triangle_quiver()
    eng = EquivEngine(q, Characteristic.TWO)
    h1 = eng.is_zero(H1)
    h2 = eng.is_zero(H2)
    mem = omega_membership(q, mdeg(H2), "2")
    ok = h1 and not h2 and mem.in_omega_equiv == "yes" and not mem.in_omega2
    return CriterionResult(1, "worked example: h1 ≡ 0, h2 ≢ 0, mdeg(h2) in Ω≡ but not Ω₂", ok,
                           details={"h1_zero": h1, "h2_zero": h2, "membership": mem.to_dict()})


def criterion_2() -> CriterionResult:
    cases = [("loop1", one_loop(), 6), ("loop2", two_loops(), 6), ("c2", two_cycle(), 6),
             ("triangle", triangle_quiver(), 5)]
    report = {}
    ok = True
    for name, q, cutoff in cases:
        for ch, fld in ((Characteristic.TWO, GF2), (Characteristic.NOT2, RATIONALS)):
            cv = cross_validate(q, cutoff, ch, field_=fld)
            report[f"{name}/{ch.value}"] = {"checked": cv.checked,
                                           "mismatches": [m.to_dict() for m in cv.mismatches]}
            ok = ok and not cv.mismatches
    return CriterionResult(2, "engine agrees with trace decomposability", ok, details=report)


def criterion_3() -> CriterionResult:
    violations = []
    count = 0
    for q in _sweep():
        for ch in BOTH:
            count += 1
            bound = upper_bound_for_quiver(q, ch)
            got = max_nonzero_degree(q, ch, bound + 1)
            if got > bound:
                violations.append({"quiver": q.to_dict(), "char": ch.value, "M_Q": got,
                                   "bound": bound})
    return CriterionResult(3, "M(Q) never exceeds the degree bound", not violations,
                           details={"checked": count, "violations": violations})


def _omega_scan(max_total: int = 8):
    for q in _sweep():
        for delta in _vectors(q, max_total):
            yield q, delta, omega_membership(q, delta, "2", cutoff=max_total)


def criterion_4() -> CriterionResult:
    bad = []
    unknown = 0
    tally = {"omega0": 0, "omega_equiv": 0, "omega2": 0, "omega3": 0}
    checked = 0
    for q, delta, mem in _omega_scan():
        checked += 1
        eq = mem.in_omega_equiv
        unknown += eq == "unknown"
        for k, v in (("omega0", mem.in_omega0), ("omega_equiv", eq == "yes"),
                     ("omega2", mem.in_omega2), ("omega3", mem.in_omega3)):
            tally[k] += bool(v)
        if eq == "unknown":
            chain_ok = (not mem.in_omega3 or mem.in_omega2) and (not mem.in_omega2 or mem.in_omega0)
        else:
            chain_ok = ((not mem.in_omega3 or mem.in_omega2) and (not mem.in_omega2 or eq == "yes")
                        and (eq != "yes" or mem.in_omega0))
        if not chain_ok:
            bad.append({"quiver": q.to_dict(), "delta": delta.to_dict(), "membership": mem.to_dict()})
    return CriterionResult(4, "Ω₃ ⊆ Ω₂ ⊆ Ω≡ ⊆ Ω₀ for |δ| ≤ 8", not bad,
                           details={"checked": checked, "unknown": unknown, "counts": tally,
                                    "violations": bad[:20]})


def criterion_5() -> CriterionResult:
    bad = []
    n3 = n2 = 0
    for q, delta, mem in _omega_scan():
        if not mem.in_omega2:
            continue
        n, d, m = q.n, q.d, max_primitive_degree(q)
        if mem.in_omega3:
            n3 += 1
            if delta.total > m * (d - n + 1):
                bad.append({"set": "omega3", "quiver": q.to_dict(), "delta": delta.to_dict()})
        n2 += 1
        if delta.total > m * (d - n - 1) + 2 * n:
            bad.append({"set": "omega2", "quiver": q.to_dict(), "delta": delta.to_dict()})
    return CriterionResult(5, "|δ| bounds on Ω₃ and Ω₂", not bad,
                           details={"omega3_checked": n3, "omega2_checked": n2, "violations": bad})


def criterion_6() -> CriterionResult:
    failures = []
    checked = 0
    for q in _sweep():
        eng = engine_for(q, Characteristic.TWO)
        for h in enumerate_closed_words(q, cutoff=6):
            if eng.is_zero(h):
                continue
            checked += 1
            sq = support(q, mdeg(h))
            try:
                dec = find_path_decomposition(q, h)
            except PropertyViolation as exc:
                failures.append({"quiver": q.to_dict(), "word": list(h), "error": str(exc)})
                continue
            probs = decomposition_problems(q, h, dec)
            if probs or dec.r < 1 or dec.r + dec.t > sq.d - sq.n + 1:
                failures.append({"quiver": q.to_dict(), "word": list(h), "problems": probs})
    return CriterionResult(6, "path decomposition with r ≥ 1 and r + t ≤ d − n + 1", not failures,
                           details={"checked": checked, "failures": failures[:20]})


def criterion_7() -> CriterionResult:
    cases = [("a", 1, d, 1) for d in range(1, 6)]
    cases += [("b", n, n + t - 1, n) for n in (2, 3) for t in (1, 2, 3)]
    cases += [("e", 4, 8, 2), ("e", 4, 9, 2)]
    cases += [("c", 3, 5, 2), ("d", 3, 4, 2)]
    rows = []
    ok = True
    for fam, n, d, m in cases:
        row = {"family": fam, "n": n, "d": d, "m": m}
        try:
            w = build_extremal(fam, n, d, m)
            rep = verify_witness(w)
            row.update(rep.to_dict())
            good = rep.ok
            if fam == "e":
                good = good and rep.checks.get("substitution", False)
                good = good and rep.details["degree"] == 3 * n == rep.details["M"]
            row["passed"] = good
        except Inconclusive as exc:
            # an unvalidated reading is reported, never silently accepted
            row.update({"passed": False, "inconclusive": str(exc)})
        ok = ok and row["passed"]
        rows.append(row)
    return CriterionResult(7, "extremal witnesses verify", ok, details={"cases": rows})


FORMULA_TABLE = [
    ((2, 2, 2, "2"), 4),
    ((7, 9, 3, "2"), 15),
    ((3, 6, 3, "2"), 12),
    ((2, 3, 2, "not2"), 4),
    ((1, 5, 1, "not2"), 3),
]


def nonempty_by_construction(max_n: int = 4, max_d: int = 6) -> dict[tuple[int, int], set[int]]:
    """(n, d) -> every m(Q) seen over labelled strongly connected quivers."""
    seen: dict[tuple[int, int], set[int]] = {}
    for n in range(1, max_n + 1):
        for d in range(1, max_d + 1):
            ms: set[int] = set()
            for q in labelled_quivers(n, d):
                if is_strongly_connected(q):
                    ms.add(max_primitive_degree(q))
            seen[(n, d)] = ms
    return seen


def criterion_8() -> CriterionResult:
    table = []
    ok = True
    for (n, d, m, ch), want in FORMULA_TABLE:
        got = m_formula(n, d, m, ch)
        table.append({"n": n, "d": d, "m": m, "char": ch, "expected": want, "got": got})
        ok = ok and got == want
    seen = nonempty_by_construction()
    disagreements = []
    for (n, d), ms in seen.items():
        for m in range(1, 5):
            if q_class_nonempty(n, d, m) != (m in ms):
                disagreements.append({"n": n, "d": d, "m": m, "formula": not (m in ms)})
    ok = ok and not disagreements
    return CriterionResult(8, "M formula table and class nonemptiness", ok,
                           details={"table": table, "disagreements": disagreements,
                                    "grid_points": len(seen) * 4})


def criterion_9() -> CriterionResult:
    cases = [(1, 1, 1, "2", 2), (1, 2, 1, "not2", 2), (2, 2, 2, "2", 4), (2, 2, 2, "not2", 4)]
    rows = []
    ok = True
    for n, d, m, ch, want in cases:
        rep = survey_class(n, d, m, ch)
        good = rep.D_exact == want == rep.M_formula and bool(rep.witnesses)
        ok = ok and good
        rows.append({**rep.to_dict(), "expected": want, "passed": good})
    return CriterionResult(9, "exact D at desk scale equals M", ok, details={"classes": rows})


def criterion_10() -> CriterionResult:
    tally: dict[str, PropertyTally] = {}
    rot_bad = []
    cons_bad = []
    words = 0
    for q in _sweep():
        eng = EquivEngine(q, Characteristic.TWO)
        strict = EquivEngine(q, Characteristic.TWO, strict=True)
        for h in enumerate_closed_words(q, cutoff=6):
            words += 1
            if not rotation_invariant(eng, h):
                rot_bad.append(list(h))
            if not conserves_multidegree(eng, h):
                cons_bad.append(list(h))
            strict.is_zero(h)  # asserts conservation on every move it makes
            check_word(eng, h, tally, include_zero=True)
    fails = {k: v.failures for k, v in tally.items()}
    ok = not rot_bad and not cons_bad and not any(fails.values())
    return CriterionResult(10, "engine properties and reachability", ok,
                           details={"words": words, "rotation_failures": rot_bad,
                                    "conservation_failures": cons_bad,
                                    "shapes": {k: v.to_dict() for k, v in tally.items()}})


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run(number: int) -> CriterionResult:
    fn = CRITERIA.get(number)
    if fn is None:
        raise QuiverError(f"no criterion {number}")
    start = time.perf_counter()
    try:
        res = fn()
    except Inconclusive as exc:
        res = CriterionResult(number, fn.__name__, False, details={"inconclusive": str(exc)})
    res.seconds = time.perf_counter() - start
    return res


def run_all(numbers=None) -> list[CriterionResult]:
    return [run(k) for k in (numbers or sorted(CRITERIA))]
