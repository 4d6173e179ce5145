"""Degree bounds: the closed formula M(n,d,m), class nonemptiness, and exact D(Q)
at small scale."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterator

from .equiv import Characteristic, engine_for, max_nonzero_word
from .errors import Inconclusive, QuiverError
from .oracle.invariants import DEFAULT_DEGREE_CAP, decomposable, field_for
from .quiver import Quiver, Word, enumerate_primitive_cycles, is_strongly_connected, max_primitive_degree


def _check_positive(**vals: int) -> None:
    for k, v in vals.items():
        if not isinstance(v, int) or v < 1:
            raise QuiverError(f"{k} must be a positive integer, got {v!r}")


def m_formula_branch(n: int, d: int, m: int, char: Characteristic | str) -> str:
    """Which case of the piecewise definition applies (for reports and tests)."""
    _check_positive(n=n, d=d, m=m)
    if Characteristic.parse(char) is Characteristic.TWO:
        if d == n == m:
            return "d=n=m"
        if d < n + 2 * ((n - 1) // m) and n > m >= 2:
            return "middle"
        return "otherwise"
    if n == m and d in (n, n + 1):
        return "n=m,d<=n+1"
    return "3n"


def m_formula(n: int, d: int, m: int, char: Characteristic | str) -> int:
    branch = m_formula_branch(n, d, m, char)
    if branch == "d=n=m":
        return 2 * m
    if branch == "middle":
        return 2 * m * (d - n) + m
    if branch == "otherwise":
        return m * (d - n - 1) + 2 * n
    if branch == "n=m,d<=n+1":
        return 2 * n
    return 3 * n


def q_class_nonempty(n: int, d: int, m: int) -> bool:
    """Is there a strongly connected quiver with n vertices, d arrows and m(Q) = m?"""
    _check_positive(n=n, d=d, m=m)
    if n == m == 1:
        return True
    if not (n >= m >= 2):
        return False
    l, r = divmod(n - 1, m - 1)
    if r > m - 2:  # divmod already gives 0 ≤ r ≤ m − 2
        return False
    return d >= n + l - (1 if r == 0 else 0)


def class_parameters(q: Quiver) -> tuple[int, int, int]:
    return q.n, q.d, max_primitive_degree(q)


def upper_bound_for_quiver(q: Quiver, char: Characteristic | str) -> int:
    """Bound on deg(h) for closed h ≢ 0 in Q."""
    if not is_strongly_connected(q):
        raise QuiverError("quiver is not strongly connected")
    n, d, m = class_parameters(q)
    if Characteristic.parse(char) is Characteristic.TWO:
        return min(m * (d - n - 1) + 2 * n, 2 * m * (d - n) + m)
    return m_formula(n, d, m, char)


def equality_hypothesis_holds(n: int, d: int, m: int) -> bool:
    """Hypothesis under which D(n,d,m) = M(n,d,m) away from characteristic 2."""
    return d >= n + 2 * ((n - 1) // m) + m or n == m


@dataclass
class GeneratorWitness:
    word: Word
    k: int
    degree: int

    def to_dict(self) -> dict:
        return {"word": list(self.word), "k": self.k, "degree": self.degree}


@dataclass
class DResult:
    D: int
    max_trace_degree: int
    witnesses: list[GeneratorWitness]

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "M_Q": self.max_trace_degree,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def compute_D(q: Quiver, char: Characteristic | str, cap: int = DEFAULT_DEGREE_CAP,
              confirm_traces: bool = True) -> DResult:
    """Largest degree of an indecomposable generator of the invariant ring.

    Trace generators: the top degree of a closed word not ≡ 0 (the engine,
    searched one past the theoretical bound). Determinant generators: only
    primitive cycles can contribute, each tested directly by the oracle.
    """
    ch = Characteristic.parse(char)
    if not is_strongly_connected(q):
        raise QuiverError("quiver is not strongly connected")
    cutoff = upper_bound_for_quiver(q, ch) + 1
    top = max_nonzero_word(q, ch, cutoff)
    fld = field_for(ch)
    if confirm_traces and len(top) <= cap and decomposable(q, top, 1, fld, cap=cap):
        raise Inconclusive(f"engine and oracle disagree on {' '.join(top)}")
    witnesses = [GeneratorWitness(top, 1, len(top))]
    best = len(top)
    for c in enumerate_primitive_cycles(q):
        deg = 2 * len(c)
        if deg < best:
            continue
        if deg > cap:
            raise Inconclusive(f"det of {' '.join(c)} has degree {deg} above the oracle cap {cap}")
        if not decomposable(q, c, 2, fld, cap=cap):
            if deg > best:
                best = deg
                witnesses = [w for w in witnesses if w.degree >= deg]
            witnesses.append(GeneratorWitness(c, 2, deg))
    witnesses = [w for w in witnesses if w.degree == best]
    return DResult(best, len(top), witnesses)


# --- labelled quiver classes ------------------------------------------------


def labelled_quivers(n: int, d: int) -> Iterator[Quiver]:
    """All quivers on vertices v1..vn with d arrows, as multisets of (tail, head)."""
    verts = [f"v{i + 1}" for i in range(n)]
    pairs = [(t, h) for t in verts for h in verts]
    for combo in combinations_with_replacement(pairs, d):
        arrows = [(f"a{i + 1}", t, h) for i, (t, h) in enumerate(combo)]
        yield Quiver.build(verts, arrows)


def strongly_connected_quivers(n: int, d: int, m: int | None = None) -> Iterator[Quiver]:
    for q in labelled_quivers(n, d):
        if is_strongly_connected(q) and (m is None or max_primitive_degree(q) == m):
            yield q


def sweep(max_n: int = 3, max_d: int = 4) -> Iterator[Quiver]:
    """Every labelled strongly connected quiver with n ≤ max_n, n ≤ d ≤ max_d."""
    for n in range(1, max_n + 1):
        for d in range(n, max_d + 1):
            yield from strongly_connected_quivers(n, d)


@dataclass
class BoundReport:
    n: int
    d: int
    m: int
    char: Characteristic
    M_formula: int
    class_nonempty: bool
    D_exact: int | None
    effective_bound: int | None
    quivers: int = 0
    witnesses: list[dict] = field(default_factory=list)
    bound_attained: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def gap(self) -> int | None:
        return None if self.D_exact is None else self.M_formula - self.D_exact

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "m": self.m, "char": self.char.value,
            "M": self.M_formula, "class_nonempty": self.class_nonempty,
            "D": self.D_exact, "gap": self.gap, "effective_bound": self.effective_bound,
            "quivers": self.quivers, "witnesses": self.witnesses,
            "bound_attained": self.bound_attained, "notes": self.notes,
        }


def survey_class(n: int, d: int, m: int, char: Characteristic | str,
                 cap: int = DEFAULT_DEGREE_CAP) -> BoundReport:
    ch = Characteristic.parse(char)
    M = m_formula(n, d, m, ch)
    if not q_class_nonempty(n, d, m):
        raise QuiverError(f"Q({n},{d},{m}) is empty")
    best: int | None = None
    witnesses: list[dict] = []
    count = 0
    for q in strongly_connected_quivers(n, d, m):
        count += 1
        res = compute_D(q, ch, cap=cap)
        if best is None or res.D > best:
            best = res.D
            witnesses = []
        if res.D == best:
            for w in res.witnesses:
                witnesses.append({"quiver": q.to_dict(), **w.to_dict()})
    eff = None
    notes = []
    if ch is Characteristic.TWO:
        eff = min(m * (d - n - 1) + 2 * n, 2 * m * (d - n) + m)
        if eff != M:
            notes.append(f"formula value {M} differs from the smaller of the two degree bounds {eff}")
    holds = best is not None and best <= M
    if best is not None and ch is Characteristic.TWO:
        holds = holds and best >= M - m
    if best is not None and ch is Characteristic.NOT2 and equality_hypothesis_holds(n, d, m):
        holds = holds and best == M
    return BoundReport(n, d, m, ch, M, True, best, eff, count, witnesses[:8], holds, notes)


def survey_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "d", "m", "char", "M", "D", "gap", "holds"])
    for r in reports:
        w.writerow([r.n, r.d, r.m, r.char.value, r.M_formula, r.D_exact, r.gap, r.bound_attained])
    return buf.getvalue()


def max_degree_report(q: Quiver, char: Characteristic | str, cutoff: int | None = None) -> dict:
    ch = Characteristic.parse(char)
    bound = upper_bound_for_quiver(q, ch)
    cut = bound + 1 if cutoff is None else cutoff
    w = max_nonzero_word(q, ch, cut)
    return {"M_Q": len(w), "witness": list(w), "cutoff": cut, "bound": bound,
            "char": ch.value, "within_bound": len(w) <= bound,
            "states_memoized": len(engine_for(q, ch)._memo)}
