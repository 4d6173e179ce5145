"""Deciding h ≡ 0 for closed paths by closure over signed cyclic words.

The relation is generated by

1. rotation of a closed path,
2. signed permutation of three or more closed factors sharing a basepoint,
3. ``f f g ≡ 0`` for closed ``f, g`` at a common vertex,
4. ``f f ≡ 0`` in characteristic 2, and ``f1 f2 f3 f4 ≡ 0`` otherwise.

States are ``(canonical word, sign)``. Every permutation of factors is a
product of transpositions of neighbouring factors, and each of those is a cut
of the cyclic word at three basepoint occurrences ``A|B|C -> B A C`` (sign
−1). Exchanging the two factors of a two-factor word is a rotation, so it is
treated as sign-neutral; see ``docs`` in the README for why this is forced.

Nothing here consults a matrix model; ``quivar.oracle`` cross-checks the
verdicts independently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import Inconclusive, QuiverError
from .quiver import Quiver, Word, check_closed, enumerate_closed_words, least_rotation, mdeg

DEFAULT_MAX_STATES = 200_000


class Characteristic(str, Enum):
    TWO = "2"
    NOT2 = "not2"

    @classmethod
    def parse(cls, text: str | Characteristic) -> Characteristic:
        if isinstance(text, Characteristic):
            return text
        t = str(text).strip().lower()
        if t in ("2", "char2", "two"):
            return cls.TWO
        if t in ("not2", "charnot2", "0", "q", "odd"):
            return cls.NOT2
        raise QuiverError(f"unknown characteristic {text!r}")


@dataclass(frozen=True)
class Factorization:
    basepoint: str
    factors: tuple[Word, ...]


@dataclass(frozen=True)
class EquivResult:
    word: Word
    char: Characteristic
    equiv_zero: bool
    states_explored: int
    certificate: str | None  # "rule3" | "rule4" | "sign" | "omega2" | None

    def to_dict(self) -> dict:
        return {
            "word": list(self.word),
            "char": self.char.value,
            "equiv_zero": self.equiv_zero,
            "states_explored": self.states_explored,
            "certificate": self.certificate,
        }


def canonicalize(word: Sequence[str]) -> Word:
    return least_rotation(word)


def rotate(word: Sequence[str], k: int) -> Word:
    w = tuple(word)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def _positions(q: Quiver, word: Word, v: str) -> list[int]:
    return [i for i, a in enumerate(word) if q.tail(a) == v]


def vertex_factorizations(q: Quiver, word: Sequence[str], v: str) -> list[Factorization]:
    """Every way to cut ``word`` at ≥ 2 occurrences of the basepoint ``v``.

    Each choice of a subset of (at least two) basepoint positions gives one
    factorization, which covers the maximal cut and all its merges.
    """
    w = check_closed(q, word)
    pos = _positions(q, w, v)
    if len(pos) < 2:
        raise QuiverError(f"vertex {v!r} occurs fewer than twice as a basepoint")
    n = len(w)
    seen: set[tuple[Word, ...]] = set()
    out: list[Factorization] = []
    for t in range(2, len(pos) + 1):
        for cut in combinations(pos, t):
            parts = []
            for i, p in enumerate(cut):
                q_ = cut[i + 1] if i + 1 < t else cut[0] + n
                parts.append(tuple((w + w)[p:q_]))
            key = tuple(parts)
            if key not in seen:
                seen.add(key)
                out.append(Factorization(v, key))
    return out


class EquivEngine:
    """Decides ≡ 0 on one quiver in one characteristic, memoizing components.

    Every state visited by a finished search is equivalent to the query, so it
    shares the verdict; later queries on any of them are free.
    """

    def __init__(self, q: Quiver, char: Characteristic | str, *,
                 max_states: int = DEFAULT_MAX_STATES, strict: bool = False):
        self.q = q
        self.char = Characteristic.parse(char)
        self.max_states = max_states
        self.strict = strict
        self._tail = {a.id: a.tail for a in q.arrows}
        self._memo: dict[Word, tuple[bool, str | None, int]] = {}

    # -- moves ---------------------------------------------------------------

    def _basepoints(self, w: Word) -> dict[str, list[int]]:
        pos: dict[str, list[int]] = {}
        for i, a in enumerate(w):
            pos.setdefault(self._tail[a], []).append(i)
        return pos

    def neighbours(self, w: Word) -> Iterator[Word]:
        """Canonical words obtained by one factor transposition (sign −1)."""
        n = len(w)
        for pos in self._basepoints(w).values():
            if len(pos) < 3:
                continue
            for p, q_, r in combinations(pos, 3):
                a = w[p:q_]
                b = w[q_:r]
                c = w[r:] + w[:p]
                yield least_rotation(b + a + c)
        if self.strict:
            assert n == len(w)

    def detect(self, w: Word) -> str | None:
        """Name of a rule that sends ``w`` to zero directly, if any."""
        n = len(w)
        pos = self._basepoints(w)
        if self.char is Characteristic.TWO:
            if n % 2 == 0 and w[: n // 2] == w[n // 2:]:
                return "rule4"
        else:
            if any(len(p) >= 4 for p in pos.values()):
                return "rule4"
        for ps in pos.values():
            if len(ps) < 2:
                continue
            ww = w + w
            for s in ps:
                rel = sorted((p - s) % n for p in ps)
                for j in rel[1:]:
                    if 2 * j >= n:
                        break
                    f = ww[s:s + j]
                    for k in rel:
                        if k < j:
                            continue
                        if k + j > n:
                            break
                        if ww[s + k:s + k + j] == f:
                            return "rule3"
        return None

    # -- queries -------------------------------------------------------------

    def equiv_zero(self, word: Sequence[str]) -> EquivResult:
        w0 = least_rotation(check_closed(self.q, word))
        hit = self._memo.get(w0)
        if hit is not None:
            return EquivResult(w0, self.char, hit[0], 0, hit[1])

        signed = self.char is Characteristic.NOT2
        signs: dict[Word, int] = {w0: 1}
        queue = deque([w0])
        certificate: str | None = None
        target = mdeg(w0) if self.strict else None
        while queue:
            w = queue.popleft()
            certificate = self.detect(w)
            if certificate is not None:
                break
            s = signs[w]
            for u in self.neighbours(w):
                if self.strict and mdeg(u) != target:
                    raise AssertionError("multidegree not conserved")
                old = signs.get(u)
                if old is None:
                    signs[u] = -s
                    if len(signs) > self.max_states:
                        raise Inconclusive(
                            f"state cap {self.max_states} exceeded for {' '.join(w0)}")
                    queue.append(u)
                elif signed and old == s:
                    # u is reachable with both signs: 2u ≡ 0
                    certificate = "sign"
                    break
            if certificate is not None:
                break
        zero = certificate is not None
        for u in signs:
            self._memo[u] = (zero, certificate, len(signs))
        return EquivResult(w0, self.char, zero, len(signs), certificate)

    def is_zero(self, word: Sequence[str]) -> bool:
        return self.equiv_zero(word).equiv_zero

    def reachable(self, word: Sequence[str]) -> dict[Word, set[int]]:
        """All signed states reachable from ``(word, +1)``, without stopping at zero."""
        w0 = least_rotation(check_closed(self.q, word))
        signed = self.char is Characteristic.NOT2
        seen: dict[Word, set[int]] = {w0: {1}}
        queue = deque([(w0, 1)])
        count = 1
        while queue:
            w, s = queue.popleft()
            for u in self.neighbours(w):
                su = -s if signed else 1
                got = seen.setdefault(u, set())
                if su not in got:
                    got.add(su)
                    count += 1
                    if count > self.max_states:
                        raise Inconclusive(f"state cap {self.max_states} exceeded")
                    queue.append((u, su))
        return seen

    def equivalent_sign(self, w1: Sequence[str], w2: Sequence[str]) -> str:
        a = check_closed(self.q, w1)
        b = least_rotation(check_closed(self.q, w2))
        if mdeg(a) != mdeg(b):
            return "unreachable"
        got = self.reachable(a).get(b)
        if not got:
            return "unreachable"
        if got == {1, -1}:
            return "both"
        return "plus" if 1 in got else "minus"

    def closed_words(self, cutoff: int) -> Iterator[Word]:
        return enumerate_closed_words(self.q, cutoff=cutoff)

    def nonzero_words(self, cutoff: int) -> Iterator[Word]:
        for w in self.closed_words(cutoff):
            if not self.is_zero(w):
                yield w


_ENGINES: dict[tuple[Quiver, Characteristic], EquivEngine] = {}


def engine_for(q: Quiver, char: Characteristic | str) -> EquivEngine:
    """Shared engine per (quiver, characteristic) so memo tables are reused."""
    key = (q, Characteristic.parse(char))
    eng = _ENGINES.get(key)
    if eng is None:
        if len(_ENGINES) > 4096:
            _ENGINES.clear()
        eng = _ENGINES[key] = EquivEngine(q, key[1])
    return eng


def equiv_zero(q: Quiver, word: Sequence[str], char: Characteristic | str) -> bool:
    return engine_for(q, char).is_zero(word)


def equivalent_sign(q: Quiver, w1: Sequence[str], w2: Sequence[str],
                    char: Characteristic | str) -> str:
    return engine_for(q, char).equivalent_sign(w1, w2)


def max_nonzero_word(q: Quiver, char: Characteristic | str, cutoff: int,
                     use_certificate: bool = True) -> Word:
    """A closed word of largest degree ≤ cutoff that is not ≡ 0.

    In characteristic 2 a word whose multidegree lies in Ω₂ of its support is
    accepted without search. Degrees are scanned from the top down.
    """
    from .omega import in_omega2_support  # local: omega imports this module

    eng = engine_for(q, char)
    by_degree: dict[int, list[Word]] = {}
    for w in enumerate_closed_words(q, cutoff=cutoff):
        by_degree.setdefault(len(w), []).append(w)
    if not by_degree:
        raise QuiverError("quiver has no closed path")
    cert = use_certificate and eng.char is Characteristic.TWO
    for deg in sorted(by_degree, reverse=True):
        for w in by_degree[deg]:
            if cert and in_omega2_support(q, mdeg(w)):
                return w
            if not eng.is_zero(w):
                return w
    raise QuiverError("every closed word up to the cutoff is ≡ 0")


def max_nonzero_degree(q: Quiver, char: Characteristic | str, cutoff: int) -> int:
    """M(Q) searched up to ``cutoff``; the cutoff should exceed the known bound."""
    return len(max_nonzero_word(q, char, cutoff))


def iter_equiv(q: Quiver, words: Iterable[Sequence[str]],
               char: Characteristic | str) -> Iterator[EquivResult]:
    eng = engine_for(q, char)
    for w in words:
        yield eng.equiv_zero(w)
