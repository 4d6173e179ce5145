"""Quivers, closed words, multidegrees and the Euler-type realizability test."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import QuiverError

Word = tuple[str, ...]


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Quiver:
    """Finite directed multigraph; parallel arrows and loops allowed."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    _by_id: dict[str, Arrow] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        known = set(self.vertices)
        by_id: dict[str, Arrow] = {}
        for a in self.arrows:
            if a.id in by_id:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            for end in (a.tail, a.head):
                if end not in known:
                    raise QuiverError(f"arrow {a.id!r} references undeclared vertex {end!r}")
            by_id[a.id] = a
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def build(cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]]) -> Quiver:
        """Shorthand: ``arrows`` is a list of ``(id, tail, head)`` triples."""
        return cls(tuple(vertices), tuple(Arrow(i, t, h) for i, t, h in arrows))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def d(self) -> int:
        return len(self.arrows)

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise QuiverError(f"unknown arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._by_id

    def tail(self, arrow_id: str) -> str:
        return self.arrow(arrow_id).tail

    def head(self, arrow_id: str) -> str:
        return self.arrow(arrow_id).head

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def subquiver(self, arrow_ids: Iterable[str], vertices: Iterable[str] | None = None) -> Quiver:
        """Subquiver on the given arrows (declaration order kept).

        Vertices default to the endpoints of the chosen arrows.
        """
        keep = set(arrow_ids)
        arrows = tuple(a for a in self.arrows if a.id in keep)
        if vertices is None:
            used = {a.tail for a in arrows} | {a.head for a in arrows}
        else:
            used = set(vertices)
        return Quiver(tuple(v for v in self.vertices if v in used), arrows)

    def induced(self, vertices: Iterable[str]) -> Quiver:
        vs = set(vertices)
        arrows = [a.id for a in self.arrows if a.tail in vs and a.head in vs]
        return self.subquiver(arrows, vs)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in self.arrows],
        }


def load_quiver(text: str) -> Quiver:
    """Parse a quiver JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverError(f"invalid JSON: {exc}") from None
    return quiver_from_dict(doc)


def quiver_from_dict(doc: Mapping) -> Quiver:
    if not isinstance(doc, Mapping) or "vertices" not in doc or "arrows" not in doc:
        raise QuiverError("quiver document needs 'vertices' and 'arrows'")
    try:
        vertices = tuple(str(v) for v in doc["vertices"])
        arrows = tuple(Arrow(str(a["id"]), str(a["tail"]), str(a["head"])) for a in doc["arrows"])
    except (KeyError, TypeError) as exc:
        raise QuiverError(f"malformed arrow record: {exc}") from None
    return Quiver(vertices, arrows)


def dump_quiver(q: Quiver) -> str:
    return json.dumps(q.to_dict(), sort_keys=True)


# --- multidegrees -----------------------------------------------------------


class Multidegree(Mapping[str, int]):
    """Arrow-indexed vector of non-negative integers; zero entries are dropped."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        clean: dict[str, int] = {}
        for k, v in items:
            v = int(v)
            if v < 0:
                raise ValueError(f"negative multidegree entry {k}={v}")
            if v:
                clean[k] = clean.get(k, 0) + v
        self._counts = dict(sorted(clean.items()))
        self._hash = None

    def __getitem__(self, key: str) -> int:
        return self._counts.get(key, 0)

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, key: object) -> bool:
        return key in self._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._counts.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multidegree):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self) -> str:
        return f"Multidegree({self._counts})"

    def __add__(self, other: Mapping[str, int]) -> Multidegree:
        out = dict(self._counts)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return Multidegree(out)

    def __sub__(self, other: Mapping[str, int]) -> Multidegree:
        out = dict(self._counts)
        for k, v in other.items():
            out[k] = out.get(k, 0) - v
        return Multidegree(out)

    def scale(self, k: int) -> Multidegree:
        return Multidegree({a: k * v for a, v in self._counts.items()})

    def __ge__(self, other: Mapping[str, int]) -> bool:  # componentwise
        return all(self[k] >= v for k, v in other.items())

    def __le__(self, other: Mapping[str, int]) -> bool:
        return all(other.get(k, 0) >= v for k, v in self._counts.items())

    @property
    def total(self) -> int:
        """|δ|, the sum of all entries."""
        return sum(self._counts.values())

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._counts)

    def to_dict(self) -> dict[str, int]:
        return dict(self._counts)


def mdeg(word: Sequence[str]) -> Multidegree:
    return Multidegree(Counter(word))


# --- closed words -----------------------------------------------------------


def is_path(q: Quiver, word: Sequence[str]) -> bool:
    return all(q.head(word[i]) == q.tail(word[i + 1]) for i in range(len(word) - 1))


def is_closed(q: Quiver, word: Sequence[str]) -> bool:
    if not word:
        return False
    for a in word:
        if not q.has_arrow(a):
            return False
    return is_path(q, word) and q.head(word[-1]) == q.tail(word[0])


def check_closed(q: Quiver, word: Sequence[str]) -> Word:
    for a in word:
        q.arrow(a)
    if not word or not is_closed(q, word):
        raise QuiverError(f"word {' '.join(word)!r} is not a closed path")
    return tuple(word)


def deg_arrow(word: Sequence[str], b: str) -> int:
    return sum(1 for a in word if a == b)


def deg_vertex(q: Quiver, word: Sequence[str], v: str) -> int:
    """max of the number of arrows of ``word`` entering and leaving ``v``."""
    heads = sum(1 for a in word if q.head(a) == v)
    tails = sum(1 for a in word if q.tail(a) == v)
    return max(heads, tails)


def deg_inner(q: Quiver, word: Sequence[str], v: str) -> int:
    """Heads equal to ``v`` among all arrows but the last one."""
    return sum(1 for a in word[:-1] if q.head(a) == v)


def word_vertices(q: Quiver, word: Sequence[str]) -> set[str]:
    if not word:
        return set()
    return {q.tail(word[0])} | {q.head(a) for a in word}


def least_rotation(word: Sequence[str]) -> Word:
    """Lexicographically least rotation (plain string order on arrow ids)."""
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def is_canonical(word: Sequence[str]) -> bool:
    w = tuple(word)
    return all(w <= w[i:] + w[:i] for i in range(1, len(w)))


def load_word(text: str) -> Word:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverError(f"invalid JSON: {exc}") from None
    if isinstance(doc, Mapping):
        doc = doc.get("word")
    if not isinstance(doc, list) or not all(isinstance(a, str) for a in doc):
        raise QuiverError("word document must be {\"word\": [arrow ids]}")
    return tuple(doc)


def load_multidegree(text: str) -> Multidegree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise QuiverError("multidegree document must be an object")
    try:
        return Multidegree({str(k): int(v) for k, v in doc.items()})
    except (TypeError, ValueError) as exc:
        raise QuiverError(f"bad multidegree: {exc}") from None


def check_multidegree(q: Quiver, delta: Mapping[str, int]) -> Multidegree:
    for a in delta:
        q.arrow(a)
    return delta if isinstance(delta, Multidegree) else Multidegree(delta)


# --- graph algorithms -------------------------------------------------------


def strongly_connected_components(q: Quiver) -> list[Quiver]:
    """SCC partition of the vertices, each returned as an induced subquiver.

    Components are ordered by the first declared vertex they contain.
    """
    succ: dict[str, list[str]] = {v: [] for v in q.vertices}
    pred: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        succ[a.tail].append(a.head)
        pred[a.head].append(a.tail)

    # Kosaraju, iterative
    order: list[str] = []
    seen: set[str] = set()
    for root in q.vertices:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(succ[w])))
                    break
            else:
                stack.pop()
                order.append(v)

    comp_of: dict[str, int] = {}
    n_comp = 0
    for root in reversed(order):
        if root in comp_of:
            continue
        comp_of[root] = n_comp
        todo = [root]
        while todo:
            v = todo.pop()
            for w in pred[v]:
                if w not in comp_of:
                    comp_of[w] = n_comp
                    todo.append(w)
        n_comp += 1

    groups: dict[int, list[str]] = {}
    for v in q.vertices:
        groups.setdefault(comp_of[v], []).append(v)
    return [q.induced(vs) for vs in sorted(groups.values(), key=lambda vs: q.vertices.index(vs[0]))]


def is_strongly_connected(q: Quiver) -> bool:
    """True iff some closed path passes through every vertex."""
    if q.n == 0 or q.d == 0:
        return False
    return len(strongly_connected_components(q)) == 1


def enumerate_primitive_cycles(q: Quiver) -> list[Word]:
    """All closed paths visiting each of their vertices once, one per rotation class.

    Parallel arrows give distinct cycles. Returned sorted by canonical form.
    """
    index = {v: i for i, v in enumerate(q.vertices)}
    out_by_vertex: dict[str, list[Arrow]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out_by_vertex[a.tail].append(a)

    found: set[Word] = set()
    for start in q.vertices:
        s = index[start]
        # cycles whose least-indexed vertex is ``start``
        stack: list[tuple[str, list[str], set[str]]] = [(start, [], {start})]
        while stack:
            v, path, visited = stack.pop()
            for a in out_by_vertex[v]:
                if a.head == start:
                    found.add(least_rotation(path + [a.id]))
                elif index[a.head] > s and a.head not in visited:
                    stack.append((a.head, path + [a.id], visited | {a.head}))
    return sorted(found)


def max_primitive_degree(q: Quiver) -> int:
    """m(Q): the largest degree of a primitive closed path."""
    cycles = enumerate_primitive_cycles(q)
    if not cycles:
        raise QuiverError("quiver has no closed path")
    return max(len(c) for c in cycles)


def is_balanced(q: Quiver, delta: Mapping[str, int]) -> bool:
    flow = {v: 0 for v in q.vertices}
    for a, k in delta.items():
        arrow = q.arrow(a)
        flow[arrow.head] += k
        flow[arrow.tail] -= k
    return all(x == 0 for x in flow.values())


def closed_path_exists(q: Quiver, delta: Mapping[str, int]) -> bool:
    """Is there a closed path h with mdeg(h)=δ and Arr(h)=Arr(Q)?

    Decided by the Euler-type criterion: every arrow used at least once and
    in-flow equals out-flow at every vertex. ``q`` must be strongly connected.
    """
    delta = check_multidegree(q, delta)
    if any(delta[a] < 1 for a in q.arrow_ids):
        return False
    return is_balanced(q, delta)


def support(q: Quiver, delta: Mapping[str, int]) -> Quiver:
    """Subquiver on the arrows with δ ≥ 1 and their endpoints."""
    return q.subquiver(a for a in q.arrow_ids if delta.get(a, 0) >= 1)


def realizable(q: Quiver, delta: Mapping[str, int]) -> bool:
    """Is δ the multidegree of some closed path (of its support)?"""
    delta = check_multidegree(q, delta)
    if delta.total == 0:
        return False
    s = support(q, delta)
    return is_strongly_connected(s) and is_balanced(s, delta)


@dataclass(frozen=True)
class VectorClassification:
    kind: str  # "indecomposable" | "decomposable" | "neither"
    components: tuple[tuple[Multidegree, Quiver], ...]


def classify_multidegree(q: Quiver, delta: Mapping[str, int]) -> VectorClassification:
    """Indecomposable / decomposable / neither, from the SCCs of the support."""
    delta = check_multidegree(q, delta)
    if delta.total == 0:
        raise QuiverError("zero vector has no support")
    s = support(q, delta)
    comps = strongly_connected_components(s)
    if len(comps) == 1:
        return VectorClassification("indecomposable", ((delta, s),))
    covered = sum(c.d for c in comps)
    if covered == s.d and all(c.d > 0 for c in comps):
        parts = tuple((Multidegree({a: delta[a] for a in c.arrow_ids}), c) for c in comps)
        return VectorClassification("decomposable", parts)
    return VectorClassification("neither", ())


def decomposition(q: Quiver, delta: Mapping[str, int]) -> list[tuple[Multidegree, Quiver]]:
    """Components of δ when its support is a disjoint union of strongly connected quivers."""
    cls = classify_multidegree(q, delta)
    if cls.kind == "neither":
        raise QuiverError("support is not a disjoint union of strongly connected quivers")
    return list(cls.components)


# --- word enumeration -------------------------------------------------------


def _extend(q: Quiver, first: str, length: int, budget: dict[str, int] | None,
            min_symbol: str) -> Iterator[Word]:
    """DFS over composable sequences starting with ``first``."""
    start = q.tail(first)
    outs = {v: sorted((a for a in q.out_arrows(v) if a.id >= min_symbol), key=lambda a: a.id)
            for v in q.vertices}
    word = [first]
    if budget is not None:
        budget = dict(budget)
        budget[first] -= 1

    def rec(v: str) -> Iterator[Word]:
        if len(word) == length:
            if v == start and is_canonical(word):
                yield tuple(word)
            return
        for a in outs[v]:
            if budget is not None:
                if budget.get(a.id, 0) == 0:
                    continue
                budget[a.id] -= 1
            word.append(a.id)
            yield from rec(a.head)
            word.pop()
            if budget is not None:
                budget[a.id] += 1

    yield from rec(q.head(first))


def enumerate_closed_words(q: Quiver, *, delta: Mapping[str, int] | None = None,
                           cutoff: int | None = None) -> Iterator[Word]:
    """Canonical representatives of all closed words meeting the constraint.

    Exactly one of ``delta`` (exact multidegree) or ``cutoff`` (max degree)
    is given. Exact mode yields in lexicographic order; cutoff mode by degree,
    then lexicographically.
    """
    if (delta is None) == (cutoff is None):
        raise ValueError("give exactly one of delta or cutoff")
    if delta is not None:
        delta = check_multidegree(q, delta)
        if delta.total == 0:
            return
        first = min(delta)
        yield from _extend(q, first, delta.total, delta.to_dict(), first)
        return
    ids = sorted(q.arrow_ids)
    for length in range(1, cutoff + 1):
        for first in ids:
            yield from _extend(q, first, length, None, first)


def restriction(q: Quiver, h: Sequence[str], vertices: Iterable[str]) -> tuple[Quiver, Word]:
    """The h-restriction of Q to V, and the image of h in it.

    Arrows are the arrows of h with both ends in V plus one arrow for every
    distinct subpath of h that runs between V-vertices through vertices
    outside V. Collapsed arrows are named ``[x1.x2...]``. This follows the
    collapsing used when shrinking a path onto a vertex subset; the original
    definition lives elsewhere, so treat it as an interpretation.
    """
    h = check_closed(q, h)
    vs = set(vertices)
    if not vs:
        raise QuiverError("restriction to the empty vertex set")
    if not vs <= word_vertices(q, h):
        raise QuiverError("restriction vertices must lie on the path")
    starts = [i for i, a in enumerate(h) if q.tail(a) in vs]
    rot = h[starts[0]:] + h[:starts[0]]
    segments: list[Word] = []
    cur: list[str] = []
    for a in rot:
        cur.append(a)
        if q.head(a) in vs:
            segments.append(tuple(cur))
            cur = []
    arrows: dict[str, Arrow] = {}
    image: list[str] = []
    for seg in segments:
        if len(seg) == 1:
            arrow = q.arrow(seg[0])
        else:
            arrow = Arrow("[" + ".".join(seg) + "]", q.tail(seg[0]), q.head(seg[-1]))
        arrows.setdefault(arrow.id, arrow)
        image.append(arrow.id)
    order = [v for v in q.vertices if v in vs]
    rq = Quiver(tuple(order), tuple(sorted(arrows.values(), key=lambda a: a.id)))
    return rq, least_rotation(image)


def eulerian_word(q: Quiver, delta: Mapping[str, int]) -> Word:
    """Some closed path with multidegree δ (Hierholzer on the δ-fold multigraph)."""
    delta = check_multidegree(q, delta)
    if not realizable(q, delta):
        raise QuiverError("multidegree is not realized by a closed path")
    remaining = delta.to_dict()
    outs: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in sorted(delta, reverse=True):
        outs[q.tail(a)].extend([a] * delta[a])
    start = q.tail(min(delta))
    stack: list[tuple[str, str | None]] = [(start, None)]
    circuit: list[str] = []
    while stack:
        v, via = stack[-1]
        if outs[v]:
            a = outs[v].pop()
            remaining[a] -= 1
            stack.append((q.head(a), a))
        else:
            stack.pop()
            if via is not None:
                circuit.append(via)
    circuit.reverse()
    return least_rotation(circuit)
