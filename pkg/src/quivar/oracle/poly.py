"""Exact sparse polynomials over Q or GF(p), and 2x2 matrices of them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field GF(p)."""

    p: int

    @property
    def name(self) -> str:
        return "q" if self.p == 0 else f"gf{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, c) -> int | Fraction:
        if self.p == 0:
            return Fraction(c)
        if isinstance(c, Fraction):
            return (c.numerator * pow(c.denominator, -1, self.p)) % self.p
        return int(c) % self.p

    def inv(self, c):
        if self.p == 0:
            return 1 / Fraction(c)
        return pow(int(c), -1, self.p)

    def fmt(self, c) -> str:
        return str(c)


RATIONALS = Field(0)
GF2 = Field(2)
GF3 = Field(3)


def field_from_name(name: str) -> Field:
    key = name.strip().lower()
    if key in ("q", "rationals", "qq"):
        return RATIONALS
    if key.startswith("gf"):
        p = int(key[2:])
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"GF({p}) is not a prime field")
        return Field(p)
    raise ValueError(f"unknown field {name!r}")


class Poly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient.

    All polynomials that meet in arithmetic must share a variable count and
    a field; the exponent tuple is indexed by a fixed variable order.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.field = field
        self.nvars = nvars
        clean: dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                c = field.coerce(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field: Field, nvars: int, terms: dict) -> Poly:
        p = cls.__new__(cls)
        p.field = field
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, field: Field, nvars: int, c) -> Poly:
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: Field, nvars: int, index: int) -> Poly:
        e = [0] * nvars
        e[index] = 1
        return cls(field, nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        p = self.field.p
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.field, self.nvars, out)

    def __neg__(self) -> Poly:
        p = self.field.p
        return Poly._raw(self.field, self.nvars,
                         {m: ((-c) % p if p else -c) for m, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c) -> Poly:
        c = self.field.coerce(c)
        if not c:
            return Poly._raw(self.field, self.nvars, {})
        p = self.field.p
        return Poly._raw(self.field, self.nvars,
                         {m: ((v * c) % p if p else v * c) for m, v in self.terms.items()})

    def __mul__(self, other: Poly) -> Poly:
        out: dict[Monomial, object] = {}
        p = self.field.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Poly._raw(self.field, self.nvars, out)

    def __pow__(self, k: int) -> Poly:
        out = Poly.constant(self.field, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def monomials(self) -> list[Monomial]:
        """Monomials in graded reverse order (highest degree, then lex)."""
        return sorted(self.terms, key=lambda m: (sum(m), m), reverse=True)

    def dump(self, names: Sequence[str]) -> list[dict]:
        out = []
        for m in self.monomials():
            out.append({
                "monomial": {names[i]: e for i, e in enumerate(m) if e},
                "coeff": self.field.fmt(self.terms[m]),
            })
        return out


class Mat2:
    """2x2 matrix with polynomial entries."""

    __slots__ = ("e",)

    def __init__(self, e: Sequence[Sequence[Poly]]):
        self.e = ((e[0][0], e[0][1]), (e[1][0], e[1][1]))

    def __matmul__(self, o: Mat2) -> Mat2:
        a, b = self.e
        c, d = o.e
        return Mat2((
            (a[0] * c[0] + a[1] * d[0], a[0] * c[1] + a[1] * d[1]),
            (b[0] * c[0] + b[1] * d[0], b[0] * c[1] + b[1] * d[1]),
        ))

    def trace(self) -> Poly:
        return self.e[0][0] + self.e[1][1]

    def det(self) -> Poly:
        return self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2([[self.e[i][j] + o.e[i][j] for j in range(2)] for i in range(2)])

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2([[self.e[i][j] - o.e[i][j] for j in range(2)] for i in range(2)])

    def scale_poly(self, c: Poly) -> Mat2:
        return Mat2([[c * self.e[i][j] for j in range(2)] for i in range(2)])

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.e for x in row)

    @classmethod
    def constant(cls, field: Field, nvars: int, rows: Iterable[Iterable[int]]) -> Mat2:
        return cls([[Poly.constant(field, nvars, c) for c in row] for row in rows])


def in_span(target: Poly, spanning: Iterable[Poly]) -> bool:
    """Exact test of ``target ∈ span(spanning)`` by incremental elimination."""
    field = target.field
    basis: dict[Monomial, dict[Monomial, object]] = {}  # pivot -> reduced row

    def order(m: Monomial):
        return (sum(m), m)

    def reduce(row: dict[Monomial, object]) -> dict[Monomial, object]:
        row = dict(row)
        p = field.p
        while row:
            piv = max(row, key=order)
            b = basis.get(piv)
            if b is None:
                return row
            c = row[piv]
            for m, v in b.items():
                nv = row.get(m, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    row[m] = nv
                else:
                    row.pop(m, None)
        return row

    for poly in spanning:
        row = reduce(poly.terms)
        if row:
            piv = max(row, key=order)
            inv = field.inv(row[piv])
            p = field.p
            basis[piv] = {m: ((v * inv) % p if p else v * inv) for m, v in row.items()}
    return not reduce(target.terms)
