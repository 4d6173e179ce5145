"""Witness quivers and closed paths attaining the lower bounds on D(n,d,m).

Five families:

* ``a`` loop bouquet (n = m = 1),
* ``b`` an n-cycle closed by parallel arrows (n = m),
* ``c`` a chain of rhombi ending in a short cycle (large d),
* ``d`` a chain of cycles glued along paths (small d),
* ``e`` the loop-decorated rhombus chain used away from characteristic 2.

The rhombus pictures are not recoverable arrow by arrow from text, so ``c``,
``d`` and ``e`` build an explicit candidate shape and ``verify_witness``
re-checks every required property on the result instead of trusting it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any

from .bounds import m_formula, q_class_nonempty, equality_hypothesis_holds
from .equiv import Characteristic, EquivEngine
from .errors import Inconclusive, PropertyViolation, QuiverError
from .omega import in_omega2
from .oracle.invariants import decomposable, polynomial_decomposable, ring, substitution_certificate
from .oracle.poly import RATIONALS, Poly
from .quiver import (
    Multidegree,
    Quiver,
    Word,
    deg_vertex,
    eulerian_word,
    max_primitive_degree,
    mdeg,
    is_strongly_connected,
    support,
)

FAMILIES = {
    "a": "loop_bouquet",
    "b": "cycle_parallel",
    "c": "rhombus_chain",
    "d": "rhombus_cycle",
    "e": "char_not2_family",
}
# the substitution certificate runs the oracle on a core path of degree 3(r+1)
SUBSTITUTION_DEGREE_CAP = 9


@dataclass
class ExtremalWitness:
    family: str
    quiver: Quiver
    word: Word | None
    delta: Multidegree | None
    claimed_degree: int
    parameters: dict[str, int]
    char: Characteristic
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": FAMILIES[self.family],
            "parameters": dict(self.parameters),
            "char": self.char.value,
            "quiver": self.quiver.to_dict(),
            "word": list(self.word) if self.word else None,
            "delta": self.delta.to_dict() if self.delta is not None else None,
            "claimed_degree": self.claimed_degree,
        }


class _Builder:
    def __init__(self) -> None:
        self.vertices: list[str] = []
        self.arrows: list[tuple[str, str, str]] = []
        self.delta: dict[str, int] = {}

    def vertex(self, name: str) -> str:
        self.vertices.append(name)
        return name

    def arrow(self, name: str, tail: str, head: str, weight: int) -> str:
        self.arrows.append((name, tail, head))
        self.delta[name] = weight
        return name

    def path(self, prefix: str, start: str, end: str, length: int, weight: int,
             inner_prefix: str) -> list[str]:
        """``length`` arrows from start to end through fresh vertices."""
        if length == 0:
            if start != end:
                raise QuiverError("empty path needs equal endpoints")
            return []
        stops = [start] + [self.vertex(f"{inner_prefix}{i}") for i in range(1, length)] + [end]
        return [self.arrow(f"{prefix}{i + 1}", stops[i], stops[i + 1], weight) for i in range(length)]

    def quiver(self) -> Quiver:
        return Quiver.build(self.vertices, self.arrows)


def _split(n: int, m: int) -> tuple[int, int]:
    """n − 1 = l·m + r with 0 ≤ r ≤ m − 1."""
    return divmod(n - 1, m)


# --- families ---------------------------------------------------------------


def _family_a(d: int) -> ExtremalWitness:
    q = Quiver.build(["v"], [(f"a{i}", "v", "v") for i in range(1, d + 1)])
    w = tuple(f"a{i}" for i in range(1, d + 1))
    return ExtremalWitness("a", q, w, None, d, {"n": 1, "d": d, "m": 1}, Characteristic.TWO)


def _cycle_with_parallels(n: int, t: int) -> tuple[Quiver, list[str], list[str]]:
    verts = [f"v{i}" for i in range(1, n + 1)]
    arrows = [(f"a{j}", verts[0], verts[1 % n]) for j in range(1, t + 1)]
    bs = [(f"b{i}", verts[i], verts[(i + 1) % n]) for i in range(1, n)]
    return Quiver.build(verts, arrows + bs), [a[0] for a in arrows], [b[0] for b in bs]


def _family_b(n: int, d: int) -> ExtremalWitness:
    t = d - n + 1
    q, aa, bb = _cycle_with_parallels(n, t)
    w: list[str] = []
    for a in aa:
        w += [a] + bb
    return ExtremalWitness("b", q, tuple(w), None, t * n, {"n": n, "d": d, "m": n, "t": t},
                           Characteristic.TWO)


def _family_c(n: int, d: int, m: int) -> ExtremalWitness:
    l, r = _split(n, m)
    t = d - n - 2 * l + 1
    B = _Builder()
    u, v, w = B.vertex("u"), B.vertex("v"), B.vertex("w")
    for i in range(1, t + 1):
        B.arrow(f"p{i}", u, v, 1)
    # g1..g_{m-1}: v -> y1 -> ... -> y_{m-2} -> u ; the first m-2 carry t+2
    ys = [B.vertex(f"y{i}") for i in range(1, m - 1)]
    stops = [v] + ys + [u]
    for i in range(m - 1):
        B.arrow(f"g{i + 1}", stops[i], stops[i + 1], t + 2 if i < m - 2 else t)
    last = ys[-1] if ys else v
    B.arrow("h1", last, w, 2)
    B.arrow("h2", w, v, 2)
    T = w
    for j in range(1, l):
        A = B.vertex(f"A{j}")
        Bv = B.vertex(f"B{j}") if m > 2 else A
        W = B.vertex(f"W{j}")
        B.path(f"k{j}_", A, Bv, m - 2, 4, f"K{j}_")
        B.arrow(f"e{j}", T, A, 2)
        B.arrow(f"f{j}", Bv, T, 2)
        B.arrow(f"e{j}'", W, A, 2)
        B.arrow(f"f{j}'", Bv, W, 2)
        T = W
    if r == 0:
        B.arrow("z1", T, T, 1)
    else:
        zs = [B.vertex(f"z{i}") for i in range(1, r + 1)]
        stops = [T] + zs + [T]
        for i in range(r + 1):
            B.arrow(f"x{i + 1}", stops[i], stops[i + 1], 1)
    q = B.quiver()
    delta = Multidegree(B.delta)
    claimed = m * (d - n - 1) + 2 * n - (r + 1)
    return ExtremalWitness("c", q, eulerian_word(q, delta), delta, claimed,
                           {"n": n, "d": d, "m": m, "l": l, "r": r, "t": t}, Characteristic.TWO)


def _family_d(n: int, d: int, m: int) -> ExtremalWitness:
    K = d - n
    S = (K + 1) * (m - 1) + 1 - n
    cap = m - 1 if K == 1 else m - 2
    qs = [0] * (K + 1)  # qs[i] = arrows shared by cycles i-1 and i (i = 1..K)
    left = S
    for i in range(1, K + 1, 2 if K > 1 else 1):
        take = min(cap, left)
        qs[i] = take
        left -= take
    if left:
        raise QuiverError("no admissible gluing for these parameters")
    weights = [1] + [2] * (K - 1) + [1]
    verts: list[str] = []
    slot_vertex: list[list[str]] = []
    arrow_of: dict[tuple[str, str], str] = {}
    arrows: list[tuple[str, str, str]] = []
    delta: dict[str, int] = {}
    for i in range(K + 1):
        slots: list[str | None] = [None] * m
        if i > 0:
            prev = slot_vertex[i - 1]
            base = 0 if i - 1 == 0 else m - 1 - qs[i]
            for s in range(qs[i] + 1):
                slots[s] = prev[base + s]
        for s in range(m):
            if slots[s] is None:
                name = f"c{i}_{s}"
                verts.append(name)
                slots[s] = name
        slot_vertex.append([x for x in slots if x is not None])
        for s in range(m):
            tail, head = slot_vertex[i][s], slot_vertex[i][(s + 1) % m]
            key = (tail, head)
            if i > 0 and s < qs[i] and key in arrow_of:
                a = arrow_of[key]
            else:
                a = f"x{i}_{s}"
                arrows.append((a, tail, head))
                arrow_of.setdefault(key, a)
                delta[a] = 0
            delta[a] += weights[i]
    q = Quiver.build(verts, arrows)
    dl = Multidegree(delta)
    claimed = 2 * m * K
    return ExtremalWitness("d", q, eulerian_word(q, dl), dl, claimed,
                           {"n": n, "d": d, "m": m, "K": K, "shared": sum(qs)}, Characteristic.TWO)


def _family_e(n: int, d: int, m: int) -> ExtremalWitness:
    params = {"n": n, "d": d, "m": m}
    M = m_formula(n, d, m, Characteristic.NOT2)
    if m == 1:
        q = Quiver.build(["v"], [(f"a{i}", "v", "v") for i in range(1, d + 1)])
        ids = [f"a{i}" for i in range(1, d + 1)]
        w = tuple(ids[i % d] for i in range(M))
        return ExtremalWitness("e", q, w, None, M, params, Characteristic.NOT2)
    if n == m:
        t = d - n + 1
        q, aa, bb = _cycle_with_parallels(n, t)
        picks = [aa[0], aa[0]] if d in (n, n + 1) else aa[:3]
        w: list[str] = []
        for a in picks:
            w += [a] + bb
        return ExtremalWitness("e", q, tuple(w), None, len(w), params, Characteristic.NOT2)
    shape = _rhombus_shape(n, d, m)
    if shape is None:
        raise Inconclusive(f"no rhombus witness shape for n={n}, d={d}, m={m}")
    return _rhombus_witness(n, d, m, *shape)


def _rhombus_shape(n: int, d: int, m: int) -> tuple[int, int, int] | None:
    """Pick (rhombi, cycle vertices, pendants) for the away-from-2 witness.

    The plain shape uses n − 1 = l·m + r and needs r odd: the core path
    x1 y1 ... x_{r+1} y_{r+1} · x1 ... x_{r+1} is ≡ 0 when r + 1 is odd (for
    r = 0 this is tr(X²Y) = tr(X)tr(XY) − det(X)tr(Y)). Otherwise the cycle
    is shortened to an even number of arrows and the spare vertices hang off
    it as pendant 2-cycles carrying two loops each.
    """
    best = None
    for lp in range(n // m + 1, -1, -1):
        for rp in range(1, m, 2):
            p = n - 1 - lp * m - rp
            if p < 0 or p > rp or (lp == 0 and rp + 1 < m):
                continue
            s = d - 1 - lp * (m + 2) - 2 * rp - 1 - 3 * p
            if s < 0:
                continue
            key = (p, -lp)
            if best is None or key < best[0]:
                best = (key, (lp, rp, p))
    return None if best is None else best[1]


def _rhombus_witness(n: int, d: int, m: int, l: int, r: int, pendants: int) -> ExtremalWitness:
    s = d - 1 - l * (m + 2) - 2 * r - 1 - 3 * pendants
    B = _Builder()
    u = B.vertex("u")
    B.arrow("a", u, u, 1)
    for i in range(1, s + 1):
        B.arrow(f"b{i}", u, u, 0)
    T = u
    rhombi = []
    for j in range(1, l + 1):
        A = B.vertex(f"A{j}")
        Bv = B.vertex(f"B{j}") if m > 2 else A
        ks = B.path(f"k{j}_", A, Bv, m - 2, 3, f"K{j}_")
        W = B.vertex(f"W{j}")
        e1 = B.arrow(f"e{j}", T, A, 2)
        f1 = B.arrow(f"f{j}", Bv, T, 2)
        e2 = B.arrow(f"e{j}'", W, A, 1)
        f2 = B.arrow(f"f{j}'", Bv, W, 1)
        rhombi.append({"e": e1, "f": f1, "k": ks, "e2": e2, "f2": f2})
        T = W
    vs = [B.vertex(f"v{i}") for i in range(1, r + 1)]
    stops = [T] + vs + [T]
    xs = [B.arrow(f"x{i + 1}", stops[i], stops[i + 1], 2) for i in range(r + 1)]
    cs = []
    for i in range(1, r + 1):
        v = vs[i - 1]
        if i <= pendants:
            z = B.vertex(f"z{i}")
            B.arrow(f"p{i}", v, z, 1)
            B.arrow(f"q{i}", z, v, 1)
            B.arrow(f"g{i}", z, z, 1)
            B.arrow(f"g{i}'", z, z, 1)
        else:
            cs.append(B.arrow(f"c{i}", v, v, 1))
    q = B.quiver()
    delta = Multidegree(B.delta)
    word = eulerian_word(q, delta)
    extras = {"rhombi": rhombi, "x": xs, "c": cs, "l": l, "r": r, "s": s, "pendants": pendants}
    params = {"n": n, "d": d, "m": m, "l": l, "r": r, "s": s, "pendants": pendants}
    return ExtremalWitness("e", q, word, delta, 3 * n, params, Characteristic.NOT2, extras)


def build_extremal(family: str, n: int | None = None, d: int | None = None,
                   m: int | None = None) -> ExtremalWitness:
    fam = family.strip().lower()
    for k, v in FAMILIES.items():
        if fam == v:
            fam = k
    if fam not in FAMILIES:
        raise QuiverError(f"unknown family {family!r}")
    if fam == "a":
        if d is None or d < 1 or (n not in (None, 1)) or (m not in (None, 1)):
            raise QuiverError("family a needs n = m = 1 and d ≥ 1")
        return _family_a(d)
    if n is None or d is None or m is None:
        raise QuiverError("n, d and m are required")
    if not q_class_nonempty(n, d, m):
        raise QuiverError(f"Q({n},{d},{m}) is empty")
    if fam == "b":
        if not (n == m >= 2 and d >= n):
            raise QuiverError("family b needs n = m ≥ 2")
        return _family_b(n, d)
    if fam in ("c", "d"):
        if not n > m >= 2:
            raise QuiverError("families c and d need n > m ≥ 2")
        big = d >= n + 2 * ((n - 1) // m)
        if fam == "c" and not big:
            raise QuiverError("family c needs d ≥ n + 2⌊(n−1)/m⌋")
        if fam == "d" and big:
            raise QuiverError("family d needs d < n + 2⌊(n−1)/m⌋")
        return _family_c(n, d, m) if fam == "c" else _family_d(n, d, m)
    if not equality_hypothesis_holds(n, d, m):
        raise QuiverError("family e needs d ≥ n + 2⌊(n−1)/m⌋ + m or n = m")
    return _family_e(n, d, m)


# --- verification -----------------------------------------------------------


@dataclass
class WitnessReport:
    checks: dict[str, bool]
    details: dict[str, Any]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": self.details}


def family_e_substitution(w: ExtremalWitness) -> dict[str, Any]:
    """Peel every rhombus with constant matrices and check the reduced path.

    The loop at the base of a rhombus becomes I, its entering arrow J, and its
    remaining arrows E, except the arrow that re-enters the next base vertex,
    which plays the loop there. What is left is a path h0 = x1 y1 ... x_{r+1}
    y_{r+1} · x1 ... x_{r+1} on the terminal cycle, whose trace must be
    nonzero and indecomposable. The substituted trace, read on Q0, must itself
    be indecomposable, and what remains of h must be ±h0 under the relation. Every exchange of the y's between the two
    halves must give ±h0 with the sign of the exchange.
    """
    ex = w.extras
    rhombi = ex["rhombi"]
    assign: dict[str, str] = {"a": "I"}
    for i, rh in enumerate(rhombi):
        assign[rh["e"]] = "J"
        assign[rh["f"]] = "E"
        assign[rh["e2"]] = "E"
        for k in rh["k"]:
            assign[k] = "E"
        assign[rh["f2"]] = "I" if i + 1 < len(rhombi) else "generic"
    for a in ex["x"] + ex["c"]:
        assign[a] = "generic"
    h = w.word
    assert h is not None
    sub = substitution_certificate(w.quiver, h, {a: assign.get(a, "generic") for a in set(h)})
    last_f2 = rhombi[-1]["f2"]
    xs, cs = ex["x"], ex["c"]
    # Q0: terminal cycle with a loop at each head; the loop at the base is the last f2.
    r = len(xs) - 1
    base = "W"
    verts = [base] + [f"v{i}" for i in range(1, r + 1)]
    stops = verts + [base]
    arrows = [(xs[i], stops[i], stops[i + 1]) for i in range(r + 1)]
    ys = cs + [last_f2]
    arrows += [(ys[i], stops[i + 1], stops[i + 1]) for i in range(r + 1)]
    q0 = Quiver.build(verts, arrows)
    h0: list[str] = []
    for i in range(r + 1):
        h0 += [xs[i], ys[i]]
    h0 += list(xs)
    h0t = tuple(h0)
    # the substituted trace is a nonzero multiple of tr(X_{h'}), h' = h minus constants
    kept = tuple(a for a in h if assign.get(a, "generic") == "generic")
    # move the substituted trace onto the variables of Q0 (arrow ids agree)
    names_main = ring(w.quiver, RATIONALS).var_names()
    r0 = ring(q0, RATIONALS)
    index0 = {name: i for i, name in enumerate(r0.var_names())}
    terms = {}
    lifted_ok = True
    for mono, c in sub.trace.terms.items():
        e = [0] * r0.nvars
        for i, k in enumerate(mono):
            if k:
                j = index0.get(names_main[i])
                if j is None:
                    lifted_ok = False
                    break
                e[j] = k
        terms[tuple(e)] = c
    lifted = Poly(RATIONALS, r0.nvars, terms)
    sub_indec = lifted_ok and not polynomial_decomposable(q0, lifted, mdeg(h0t), RATIONALS)
    eng = EquivEngine(q0, Characteristic.NOT2)
    h0_zero = eng.is_zero(h0t)
    kept_sign = eng.equivalent_sign(h0t, kept)
    signs_ok = True
    for flips in product((0, 1), repeat=r + 1):
        first: list[str] = []
        second: list[str] = []
        for i in range(r + 1):
            first.append(xs[i])
            second.append(xs[i])
            (second if flips[i] else first).append(ys[i])
        want = "minus" if sum(flips) % 2 else "plus"
        got = eng.equivalent_sign(h0t, tuple(first + second))
        if got != want:
            signs_ok = False
    indec = not decomposable(q0, h0t, 1, RATIONALS, cap=max(8, len(h0t)))
    return {
        "substituted_nonzero": sub.nonzero,
        "substituted_indecomposable": sub_indec,
        "reduced": list(kept),
        "reduced_is_signed_h0": kept_sign in ("plus", "minus"),
        "h0": list(h0t),
        "h0_nonzero": not h0_zero,
        "sign_sum_consistent": signs_ok,
        "h0_trace_indecomposable": indec,
    }


def verify_witness(w: ExtremalWitness, char: Characteristic | str | None = None,
                   use_engine: bool = True) -> WitnessReport:
    ch = Characteristic.parse(char) if char is not None else w.char
    p = w.parameters
    n, d, m = p["n"], p["d"], p["m"]
    q = w.quiver
    checks: dict[str, bool] = {}
    details: dict[str, Any] = {}
    checks["class"] = (q.n == n and q.d == d and is_strongly_connected(q)
                       and max_primitive_degree(q) == m)
    details["recomputed"] = {"n": q.n, "d": q.d, "m": max_primitive_degree(q)}
    h = w.word
    deg = len(h) if h is not None else w.delta.total
    if w.delta is not None:
        checks["word_matches_delta"] = h is None or mdeg(h) == w.delta
        checks["delta_total"] = w.delta.total == w.claimed_degree
    checks["degree"] = deg == w.claimed_degree
    M = m_formula(n, d, m, ch)
    details["M"] = M
    details["degree"] = deg
    # nonvanishing
    if w.family in ("c", "d"):
        sq = support(q, w.delta)
        checks["omega2"] = in_omega2(sq, w.delta)
        if w.family == "d":
            checks["gap_is_m"] = M - w.delta.total == m
    if w.family == "e" and w.delta is not None:
        checks["deg_w_is_3"] = all(deg_vertex(q, h, v) == 3 for v in q.vertices)
    if (w.family == "e" and w.extras.get("pendants") == 0 and w.extras.get("rhombi")
            and 3 * (w.extras["r"] + 1) <= SUBSTITUTION_DEGREE_CAP):
        sub = family_e_substitution(w)
        details["substitution"] = sub
        checks["substitution"] = all(v for k, v in sub.items() if k not in ("h0", "reduced"))
    if use_engine and h is not None:
        try:
            checks["engine_nonzero"] = not EquivEngine(q, ch).is_zero(h)
        except Inconclusive as exc:
            if w.family not in ("c", "d"):
                raise
            details["engine"] = str(exc)
    gap = M - deg
    details["gap"] = gap
    if ch is Characteristic.TWO:
        checks["gap"] = 0 <= gap <= m
    elif equality_hypothesis_holds(n, d, m):
        checks["gap"] = gap == 0
    return WitnessReport(checks, details)


def require_valid(w: ExtremalWitness, char: Characteristic | str | None = None) -> WitnessReport:
    rep = verify_witness(w, char)
    if not rep.ok:
        bad = [k for k, v in rep.checks.items() if not v]
        raise PropertyViolation(f"witness {FAMILIES[w.family]} fails: {', '.join(bad)}")
    return rep
