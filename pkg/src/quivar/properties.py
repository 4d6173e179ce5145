"""Reachability properties of the equivalence engine on concrete instances.

Three shapes are asserted, all in characteristic 2:

* loops at a vertex can be gathered into one block, placed right after an
  arrow entering the vertex or right before an arrow leaving it;
* a path ``a1...as`` of distinct arrows, each used at least twice by ``h``,
  can be made contiguous, and extended by an arrow ``b`` glued at either end;
* around a primitive cycle with a chord ``b`` between ``v2`` and ``vk``,
  ``a1 a2`` can be made to occur twice.

A property only has content when ``h`` is not ≡ 0 (otherwise every shape is
equivalent to ``h``), so instances with ``h ≡ 0`` are counted as vacuous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .equiv import Characteristic, EquivEngine
from .quiver import Quiver, Word, deg_arrow, enumerate_primitive_cycles, least_rotation, mdeg


def occurrences(word: Sequence[str], pattern: Sequence[str]) -> list[int]:
    """Start positions of ``pattern`` in the cyclic word."""
    n, k = len(word), len(pattern)
    if k == 0 or k > n:
        return []
    ww = tuple(word) + tuple(word)
    pat = tuple(pattern)
    return [i for i in range(n) if ww[i:i + k] == pat]


def contains(word: Sequence[str], pattern: Sequence[str]) -> bool:
    return bool(occurrences(word, pattern))


def loop_block_ok(w: Word, loops: set[str]) -> bool:
    """All occurrences of the given loops form one cyclic block."""
    marks = [a in loops for a in w]
    if all(marks) or not any(marks):
        return True
    runs = sum(1 for i in range(len(w)) if marks[i] and not marks[i - 1])
    return runs == 1


def _block_after(w: Word, a: str, loops: set[str]) -> bool:
    """``a`` is immediately followed by the whole loop block (possibly empty)."""
    if not loop_block_ok(w, loops):
        return False
    n = len(w)
    total = sum(1 for x in w if x in loops)
    for i, x in enumerate(w):
        if x == a and all(w[(i + 1 + j) % n] in loops for j in range(total)):
            return True
    return False


def _block_before(w: Word, a: str, loops: set[str]) -> bool:
    if not loop_block_ok(w, loops):
        return False
    n = len(w)
    total = sum(1 for x in w if x in loops)
    for i, x in enumerate(w):
        if x == a and all(w[(i - 1 - j) % n] in loops for j in range(total)):
            return True
    return False


@dataclass(frozen=True)
class Instance:
    shape: str  # "loops" | "path" | "chord"
    word: Word
    detail: str

    def to_dict(self) -> dict:
        return {"shape": self.shape, "word": list(self.word), "detail": self.detail}


@dataclass
class PropertyTally:
    checked: int = 0
    vacuous: int = 0
    failures: list[Instance] = field(default_factory=list)
    # the same shapes tested on the raw move graph of words that are ≡ 0
    strong_checked: int = 0
    strong_failures: list[Instance] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"checked": self.checked, "vacuous": self.vacuous,
                "failures": [f.to_dict() for f in self.failures],
                "strong_checked": self.strong_checked,
                "strong_failures": [f.to_dict() for f in self.strong_failures]}


def loop_instances(q: Quiver, h: Word) -> Iterator[tuple[str, object]]:
    """(description, predicate on a state) for every loop-gathering claim about h."""
    used = set(h)
    for v in q.vertices:
        loops = {a.id for a in q.arrows if a.tail == v and a.head == v}
        if not loops & used:
            continue
        yield f"gather loops at {v}", (lambda w, L=loops: loop_block_ok(w, L))
        for a in sorted(used):
            arr = q.arrow(a)
            if arr.tail == arr.head:
                continue
            if arr.head == v:
                yield f"loops at {v} after {a}", (lambda w, L=loops, a=a: _block_after(w, a, L))
            if arr.tail == v:
                yield f"loops at {v} before {a}", (lambda w, L=loops, a=a: _block_before(w, a, L))


def _simple_paths(q: Quiver, arrows: Iterable[str], max_len: int) -> Iterator[Word]:
    """Paths of pairwise different arrows drawn from ``arrows``."""
    pool = sorted(arrows)

    def grow(path: list[str]) -> Iterator[Word]:
        yield tuple(path)
        if len(path) == max_len:
            return
        end = q.head(path[-1])
        for a in pool:
            if a not in path and q.tail(a) == end:
                path.append(a)
                yield from grow(path)
                path.pop()

    for a in pool:
        yield from grow([a])


def path_instances(q: Quiver, h: Word) -> Iterator[tuple[str, object]]:
    twice = [a for a in set(h) if deg_arrow(h, a) >= 2]
    others = sorted(set(h))
    for a in _simple_paths(q, twice, len(h) // 2):
        extra = [b for b in others if b not in a]
        if not extra:
            continue
        yield f"contiguous {' '.join(a)}", (lambda w, a=a: contains(w, a))
        for b in extra:
            if q.head(b) == q.tail(a[0]):
                yield f"{b} then {' '.join(a)}", (lambda w, p=(b,) + a: contains(w, p))
            if q.tail(b) == q.head(a[-1]):
                yield f"{' '.join(a)} then {b}", (lambda w, p=a + (b,): contains(w, p))


def chord_instances(q: Quiver, h: Word) -> Iterator[tuple[str, object]]:
    used = set(h)
    for cyc in enumerate_primitive_cycles(q):
        s = len(cyc)
        if s < 2 or not all(deg_arrow(h, x) >= 2 for x in cyc):
            continue
        for shift in range(s):
            a = cyc[shift:] + cyc[:shift]
            tails = [q.tail(x) for x in a]  # tails[i] is v_{i+1}
            v2 = tails[1]
            ks = [tails[0]] + tails[2:]
            for b in sorted(used - set(a)):
                arr = q.arrow(b)
                if arr.head == arr.tail:
                    continue
                if any({arr.head, arr.tail} == {v2, vk} for vk in ks):
                    yield (f"{' '.join(a[:2])} twice around {' '.join(a)} with chord {b}",
                           (lambda w, p=a[:2]: len(occurrences(w, p)) >= 2))


def check_word(engine: EquivEngine, h: Sequence[str], tally: dict[str, PropertyTally],
               include_zero: bool = False) -> None:
    """Check every qualifying instance for ``h`` against its reachable states.

    With ``include_zero`` the shapes are also looked for when ``h ≡ 0``; those
    results go to the ``strong_*`` counters, since the claim is vacuous there.
    """
    q = engine.q
    w0 = least_rotation(h)
    families = (("loops", loop_instances), ("path", path_instances), ("chord", chord_instances))
    pending = [(name, desc, pred) for name, gen in families for desc, pred in gen(q, w0)]
    if not pending:
        return
    zero = engine.is_zero(w0)
    if zero and not include_zero:
        for name, _, _ in pending:
            tally.setdefault(name, PropertyTally()).vacuous += 1
        return
    states = list(engine.reachable(w0))
    for name, desc, pred in pending:
        t = tally.setdefault(name, PropertyTally())
        found = any(pred(s) for s in states)
        if zero:
            t.vacuous += 1
            t.strong_checked += 1
            if not found:
                t.strong_failures.append(Instance(name, w0, desc))
        else:
            t.checked += 1
            if not found:
                t.failures.append(Instance(name, w0, desc))


def rotation_invariant(engine: EquivEngine, h: Sequence[str]) -> bool:
    base = engine.is_zero(h)
    w = tuple(h)
    return all(engine.is_zero(w[k:] + w[:k]) == base for k in range(1, len(w)))


def conserves_multidegree(engine: EquivEngine, h: Sequence[str]) -> bool:
    target = mdeg(h)
    return all(mdeg(s) == target for s in engine.reachable(h))


def char2_engine(q: Quiver) -> EquivEngine:
    return EquivEngine(q, Characteristic.TWO)
