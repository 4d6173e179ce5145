"""Trace and determinant invariants of generic 2x2 matrices along closed paths.

A closed path ``a1...as`` gives ``X_{as}...X_{a1}``; its trace (k=1) and
determinant (k=2) generate the invariant ring. An invariant of degree D is
decomposable when it lies in the span of products of at least two generators
whose multidegrees add up to its own. That span is spanned over the prime
field, so the rank test over GF(p) is valid for every field of characteristic
p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

from ..errors import Inconclusive, QuiverError
from ..quiver import Multidegree, Quiver, Word, check_closed, enumerate_closed_words, least_rotation, mdeg
from .poly import GF2, RATIONALS, Field, Mat2, Poly, in_span

DEFAULT_DEGREE_CAP = 8
ENTRIES = ("11", "12", "21", "22")


class InvariantRing:
    """Generic matrices and generator polynomials for one quiver over one field."""

    def __init__(self, q: Quiver, field_: Field):
        self.q = q
        self.field = field_
        self.index = {a.id: i for i, a in enumerate(q.arrows)}
        self.nvars = 4 * q.d
        self._gen_cache: dict[tuple[Word, int], Poly] = {}

    def var_names(self) -> list[str]:
        return [f"x{e}({a.id})" for a in self.q.arrows for e in ENTRIES]

    def generic(self, arrow_id: str) -> Mat2:
        base = 4 * self.index[arrow_id]
        v = [Poly.variable(self.field, self.nvars, base + i) for i in range(4)]
        return Mat2([[v[0], v[1]], [v[2], v[3]]])

    def constant(self, rows) -> Mat2:
        return Mat2.constant(self.field, self.nvars, rows)

    def path_matrix(self, word: Sequence[str], subst: Mapping[str, Mat2] | None = None) -> Mat2:
        """X_{as}...X_{a1}: later arrows multiply on the left."""
        m: Mat2 | None = None
        for a in word:
            x = subst[a] if subst and a in subst else self.generic(a)
            m = x if m is None else x @ m
        assert m is not None
        return m

    def sigma(self, word: Sequence[str], k: int) -> Poly:
        key = (least_rotation(word), k)
        hit = self._gen_cache.get(key)
        if hit is None:
            m = self.path_matrix(key[0])
            hit = m.trace() if k == 1 else m.det()
            self._gen_cache[key] = hit
        return hit

    def arrow_degree(self, poly: Poly) -> set[Multidegree]:
        out = set()
        for mono in poly.terms:
            out.add(Multidegree({a.id: sum(mono[4 * i:4 * i + 4]) for i, a in enumerate(self.q.arrows)}))
        return out


@lru_cache(maxsize=256)
def ring(q: Quiver, field_: Field) -> InvariantRing:
    return InvariantRing(q, field_)


def invariant_polynomial(q: Quiver, word: Sequence[str], k: int, field_: Field = RATIONALS) -> Poly:
    if k not in (1, 2):
        raise QuiverError("only k = 1 (trace) and k = 2 (determinant) exist for 2x2 matrices")
    w = check_closed(q, word)
    return ring(q, field_).sigma(w, k)


@dataclass(frozen=True)
class Generator:
    word: Word
    k: int

    @property
    def degree(self) -> int:
        return self.k * len(self.word)

    def label(self) -> str:
        return ("tr" if self.k == 1 else "det") + "(" + " ".join(self.word) + ")"


def _generators_below(q: Quiver, delta: Multidegree) -> list[tuple[Generator, Multidegree]]:
    """All generators whose multidegree is componentwise ≤ δ and nonzero."""
    sub = q.subquiver(delta.support, q.vertices)
    gens: list[tuple[Generator, Multidegree]] = []
    for w in enumerate_closed_words(sub, cutoff=delta.total):
        md = mdeg(w)
        if md <= delta:
            gens.append((Generator(w, 1), md))
            if md.scale(2) <= delta:
                gens.append((Generator(w, 2), md.scale(2)))
    return gens


def product_terms(q: Quiver, delta: Multidegree) -> list[tuple[Generator, ...]]:
    """Multisets of ≥ 2 generators whose multidegrees sum to δ."""
    gens = _generators_below(q, delta)
    keys = sorted(delta.support)
    vecs = [tuple(md[a] for a in keys) for _, md in gens]
    target = tuple(delta[a] for a in keys)
    out: list[tuple[Generator, ...]] = []

    def rec(start: int, remaining: tuple[int, ...], chosen: list[int]) -> None:
        if not any(remaining):
            if len(chosen) >= 2:
                out.append(tuple(gens[i][0] for i in chosen))
            return
        for i in range(start, len(gens)):
            v = vecs[i]
            if all(x <= r for x, r in zip(v, remaining)):
                chosen.append(i)
                rec(i, tuple(r - x for r, x in zip(remaining, v)), chosen)
                chosen.pop()

    rec(0, target, [])
    return out


@dataclass
class DecompositionResult:
    decomposable: bool
    degree: int
    products: int
    field: str
    transcript: list[str] = field(default_factory=list)


def decomposable(q: Quiver, word: Sequence[str], k: int, field_: Field = RATIONALS,
                 cap: int = DEFAULT_DEGREE_CAP, explain: bool = False) -> bool:
    return decomposable_report(q, word, k, field_, cap, explain).decomposable


def decomposable_report(q: Quiver, word: Sequence[str], k: int, field_: Field = RATIONALS,
                        cap: int = DEFAULT_DEGREE_CAP, explain: bool = False) -> DecompositionResult:
    w = check_closed(q, word)
    if k not in (1, 2):
        raise QuiverError("k must be 1 or 2")
    degree = k * len(w)
    if degree > cap:
        raise Inconclusive(f"invariant degree {degree} exceeds oracle cap {cap}")
    r = ring(q, field_)
    target = r.sigma(w, k)
    delta = mdeg(w).scale(k)
    terms = product_terms(q, delta)
    polys = []
    for combo in terms:
        p = Poly.constant(field_, r.nvars, 1)
        for g in combo:
            p = p * r.sigma(g.word, g.k)
        polys.append(p)
    result = in_span(target, polys)
    transcript = [" * ".join(g.label() for g in c) for c in terms] if explain else []
    return DecompositionResult(result, degree, len(terms), field_.name, transcript)


def polynomial_decomposable(q: Quiver, poly: Poly, delta: Multidegree,
                            field_: Field = RATIONALS) -> bool:
    """Is ``poly`` (over the variables of ``q``) a combination of products of
    at least two generators with multidegrees summing to δ?"""
    r = ring(q, field_)
    polys = []
    for combo in product_terms(q, delta):
        p = Poly.constant(field_, r.nvars, 1)
        for g in combo:
            p = p * r.sigma(g.word, g.k)
        polys.append(p)
    return in_span(poly, polys)


# --- constant substitutions -------------------------------------------------

CONSTANTS = {
    "I": ((1, 0), (0, -1)),
    "J": ((0, 1), (-1, 0)),
    "E": ((1, 0), (0, 1)),
}


@dataclass
class SubstitutionResult:
    trace: Poly
    nonzero: bool
    names: list[str]

    def to_dict(self) -> dict:
        return {"nonzero": self.nonzero, "trace": self.trace.dump(self.names)}


def substitution_certificate(q: Quiver, word: Sequence[str], assignment: Mapping[str, str],
                             field_: Field = RATIONALS) -> SubstitutionResult:
    """tr of the path matrix after replacing some arrows by I, J or E."""
    w = check_closed(q, word)
    for a, kind in assignment.items():
        q.arrow(a)
        if kind not in CONSTANTS and kind != "generic":
            raise QuiverError(f"unknown constant matrix {kind!r}")
    missing = set(w) - set(assignment)
    if missing:
        raise QuiverError(f"assignment is not total on the word: missing {sorted(missing)}")
    r = ring(q, field_)
    subst = {a: r.constant(CONSTANTS[kind]) for a, kind in assignment.items() if kind != "generic"}
    tr = r.path_matrix(w, subst).trace()
    return SubstitutionResult(tr, not tr.is_zero(), r.var_names())


def field_for(char) -> Field:
    from ..equiv import Characteristic

    return GF2 if Characteristic.parse(char) is Characteristic.TWO else RATIONALS


# --- cross validation -------------------------------------------------------


@dataclass
class Mismatch:
    word: Word
    engine_zero: bool
    oracle_decomposable: bool
    certificate: str | None
    products: int

    def to_dict(self) -> dict:
        return {
            "word": list(self.word),
            "engine_zero": self.engine_zero,
            "oracle_decomposable": self.oracle_decomposable,
            "engine_certificate": self.certificate,
            "oracle_products": self.products,
        }


@dataclass
class CrossValidation:
    checked: int
    mismatches: list[Mismatch]

    def to_dict(self) -> dict:
        return {"checked": self.checked, "mismatches": [m.to_dict() for m in self.mismatches]}


def cross_validate(q: Quiver, cutoff: int, char, *, engine=None, field_: Field | None = None,
                   words: Sequence[Sequence[str]] | None = None) -> CrossValidation:
    """Compare engine verdicts with trace decomposability on every necklace ≤ cutoff."""
    from ..equiv import EquivEngine, Characteristic

    ch = Characteristic.parse(char)
    eng = engine if engine is not None else EquivEngine(q, ch)
    fld = field_ if field_ is not None else field_for(ch)
    todo = list(words) if words is not None else list(enumerate_closed_words(q, cutoff=cutoff))
    mismatches = []
    for w in todo:
        res = eng.equiv_zero(w)
        rep = decomposable_report(q, w, 1, fld, cap=max(cutoff, len(w)))
        if res.equiv_zero != rep.decomposable:
            mismatches.append(Mismatch(tuple(w), res.equiv_zero, rep.decomposable,
                                       res.certificate, rep.products))
    return CrossValidation(len(todo), mismatches)


def cayley_hamilton_residual(field_: Field = RATIONALS) -> Mat2:
    """X² − tr(X)X + det(X)E for a generic X; should be the zero matrix."""
    q = Quiver.build(["v"], [("x", "v", "v")])
    r = InvariantRing(q, field_)
    x = r.generic("x")
    e = r.constant(CONSTANTS["E"])
    return (x @ x) - x.scale_poly(x.trace()) + e.scale_poly(x.det())


def all_substitutions(arrows: Sequence[str]):
    """Every assignment of {I, J, E} to the given arrows (small helper for tests)."""
    for combo in product(sorted(CONSTANTS), repeat=len(arrows)):
        yield dict(zip(arrows, combo))
