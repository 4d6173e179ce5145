"""Multidegree sets Ω₀ ⊇ Ω≡ ⊇ Ω₂ ⊇ Ω₃ and the certificates built on them.

Everything here is combinatorial except Ω≡, which asks the equivalence
engine about the finitely many closed words of a fixed multidegree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterator, Mapping, Sequence

from .equiv import Characteristic, engine_for
from .errors import Inconclusive, PropertyViolation, QuiverError
from .quiver import (
    Multidegree,
    Quiver,
    Word,
    check_closed,
    check_multidegree,
    classify_multidegree,
    closed_path_exists,
    enumerate_closed_words,
    enumerate_primitive_cycles,
    is_strongly_connected,
    least_rotation,
    mdeg,
    support,
    word_vertices,
)


def double_paths(q: Quiver, delta: Mapping[str, int]) -> list[Word]:
    """Primitive closed paths all of whose arrows have δ ≥ 2, smallest first."""
    return [c for c in enumerate_primitive_cycles(q) if all(delta.get(a, 0) >= 2 for a in c)]


def in_omega0(q: Quiver, delta: Mapping[str, int]) -> bool:
    delta = check_multidegree(q, delta)
    if not is_strongly_connected(q):
        return False
    return closed_path_exists(q, delta)


def in_omega3(q: Quiver, delta: Mapping[str, int]) -> bool:
    return in_omega0(q, delta) and not double_paths(q, delta)


def _residual_decomposable(q: Quiver, delta: Multidegree, a: Word) -> bool:
    theta = delta - mdeg(a).scale(2)
    if theta.total == 0:
        return False
    return classify_multidegree(q, theta).kind == "decomposable"


def in_omega2(q: Quiver, delta: Mapping[str, int]) -> bool:
    delta = check_multidegree(q, delta)
    if not in_omega0(q, delta):
        return False
    return all(_residual_decomposable(q, delta, a) for a in double_paths(q, delta))


def in_omega2_support(q: Quiver, delta: Mapping[str, int]) -> bool:
    """δ ∈ Ω₂ of its own support quiver (the form used as a certificate)."""
    delta = check_multidegree(q, delta)
    return delta.total > 0 and in_omega2(support(q, delta), delta)


def nonzero_certificate(q: Quiver, word: Sequence[str]) -> bool:
    """Sufficient test for h ≢ 0 in characteristic 2.

    True when, for every mdeg(h)-double path a, the support of mdeg(h) − 2mdeg(a)
    is nonempty and not strongly connected.
    """
    h = check_closed(q, word)
    delta = mdeg(h)
    for a in double_paths(q, delta):
        theta = delta - mdeg(a).scale(2)
        if theta.total == 0 or is_strongly_connected(support(q, theta)):
            return False
    return True


@dataclass
class OmegaMembership:
    delta: Multidegree
    in_omega0: bool
    in_omega3: bool
    in_omega2: bool
    in_omega_equiv: str  # "yes" | "no" | "unknown"
    witness: Word | None = None
    double_path_witness: Word | None = None

    def to_dict(self) -> dict:
        return {
            "delta": self.delta.to_dict(),
            "omega0": self.in_omega0,
            "omega3": self.in_omega3,
            "omega2": self.in_omega2,
            "omega_equiv": self.in_omega_equiv,
            "witness": list(self.witness) if self.witness else None,
        }


def omega_equiv(q: Quiver, delta: Mapping[str, int], char: Characteristic | str,
                cutoff: int | None = None) -> tuple[str, Word | None]:
    """Is some closed path of multidegree δ (using every arrow) not ≡ 0?"""
    delta = check_multidegree(q, delta)
    if not in_omega0(q, delta):
        return "no", None
    if cutoff is not None and delta.total > cutoff:
        return "unknown", None
    eng = engine_for(q, char)
    unknown = False
    for w in enumerate_closed_words(q, delta=delta):
        try:
            if not eng.is_zero(w):
                return "yes", w
        except Inconclusive:
            unknown = True
    return ("unknown" if unknown else "no"), None


def omega_membership(q: Quiver, delta: Mapping[str, int], char: Characteristic | str = "2",
                     cutoff: int | None = None) -> OmegaMembership:
    delta = check_multidegree(q, delta)
    o0 = in_omega0(q, delta)
    dps = double_paths(q, delta) if o0 else []
    o3 = o0 and not dps
    o2 = o0 and all(_residual_decomposable(q, delta, a) for a in dps)
    bad = next((a for a in dps if not _residual_decomposable(q, delta, a)), None)
    eq, witness = omega_equiv(q, delta, char, cutoff)
    return OmegaMembership(delta, o0, o3, o2, eq, witness, bad)


# --- complete chains --------------------------------------------------------


@dataclass
class CompleteChain:
    paths: tuple[Word, ...]
    residual: Multidegree
    components: tuple[Multidegree, ...]

    def to_dict(self) -> dict:
        return {
            "paths": [list(p) for p in self.paths],
            "residual": self.residual.to_dict(),
            "components": [c.to_dict() for c in self.components],
        }


def _vertices(q: Quiver, w: Word) -> set[str]:
    return word_vertices(q, w)


def _comp_vertices(q: Quiver, theta: Multidegree) -> set[str]:
    return set(support(q, theta).vertices)


def chain_problems(q: Quiver, delta: Mapping[str, int], chain: CompleteChain) -> list[str]:
    """Violations of the complete-chain conditions (empty list = valid)."""
    delta = check_multidegree(q, delta)
    probs: list[str] = []
    paths = chain.paths
    if not paths:
        if double_paths(q, delta):
            probs.append("empty chain but a double path exists")
        return probs
    for i, j in combinations(range(len(paths)), 2):
        meet = bool(_vertices(q, paths[i]) & _vertices(q, paths[j]))
        if (j - i > 1) == meet:
            probs.append(f"chain adjacency fails for paths {i + 1},{j + 1}")
    prims = set(enumerate_primitive_cycles(q))
    for p in paths:
        if least_rotation(p) not in prims:
            probs.append(f"{' '.join(p)} is not primitive")
        if not all(delta[a] >= 2 for a in p):
            probs.append(f"{' '.join(p)} is not a double path")
    theta = Multidegree({a: delta[a] for a in delta})
    for p in paths:
        rest = dict(theta.to_dict())
        for a in p:
            rest[a] = rest.get(a, 0) - 2
        if any(v < 0 for v in rest.values()):
            probs.append("residual has a negative entry")
            return probs
        theta = Multidegree(rest)
    if theta != chain.residual:
        probs.append("stored residual differs from δ − 2Σ mdeg")
    if theta.total == 0:
        probs.append("residual is zero")
        return probs
    cls = classify_multidegree(q, theta)
    if cls.kind != "decomposable":
        probs.append(f"residual is {cls.kind}, not decomposable")
        return probs
    comps = [c for c, _ in cls.components]
    if sorted(map(lambda c: sorted(c.items()), comps)) != sorted(
            map(lambda c: sorted(c.items()), chain.components)):
        probs.append("stored components differ from the decomposition")
    for c in comps:
        if not in_omega2(support(q, c), c):
            probs.append(f"component {c.to_dict()} is not in Ω₂ of its support")
    if len(paths) >= 2:
        if len(comps) != 2:
            probs.append("t ≥ 2 requires exactly two components")
        else:
            t = len(paths)
            ordered = list(chain.components)
            for i, c in enumerate(ordered, start=1):
                vs = _comp_vertices(q, c)
                for j, p in enumerate(paths, start=1):
                    touches = bool(vs & _vertices(q, p))
                    want = (i == 1 and j == 1) or (i == 2 and j == t)
                    if touches != want:
                        probs.append(f"component {i} attachment to path {j} is wrong")
    return probs


def _make_chain(q: Quiver, delta: Multidegree, paths: Sequence[Word]) -> CompleteChain | None:
    theta = delta
    for p in paths:
        theta = theta - mdeg(p).scale(2) if (theta >= mdeg(p).scale(2)) else None
        if theta is None:
            return None
    if theta.total == 0:
        return CompleteChain(tuple(paths), theta, ())
    cls = classify_multidegree(q, theta)
    comps = tuple(c for c, _ in cls.components) if cls.kind == "decomposable" else ()
    if len(paths) >= 2 and len(comps) == 2:
        first = _vertices(q, paths[0])
        if not (_comp_vertices(q, comps[0]) & first):
            comps = (comps[1], comps[0])
    return CompleteChain(tuple(paths), theta, comps)


def _follow_proof(q: Quiver, delta: Multidegree) -> CompleteChain | None:
    dps = double_paths(q, delta)
    chain: list[Word] = [dps[0]]
    switched = False
    for _ in range(4 * q.n + 4):
        cur = _make_chain(q, delta, chain)
        if cur is None or len(cur.components) < 2:
            return None
        bad_index = None
        a2 = None
        for i, c in enumerate(cur.components):
            sq = support(q, c)
            if in_omega2(sq, c):
                continue
            cands = [a for a in double_paths(sq, c) if not _residual_decomposable(sq, c, a)]
            if not cands:
                continue
            ind = [a for a in cands if (c - mdeg(a).scale(2)).total
                   and classify_multidegree(sq, c - mdeg(a).scale(2)).kind == "indecomposable"]
            a2 = (ind or cands)[0]
            bad_index = i
            break
        if bad_index is None:
            return cur
        if len(chain) == 1 and len(cur.components) >= 3 and not switched:
            chain = [a2]
            switched = True
            continue
        if len(chain) == 1:
            chain = [chain[0], a2]
        elif bad_index == 0:
            chain = [a2] + chain
        else:
            chain = chain + [a2]
    return None


def _search_chain(q: Quiver, delta: Multidegree) -> CompleteChain | None:
    dps = double_paths(q, delta)
    for t in range(1, len(dps) + 1):
        for combo in permutations(dps, t):
            if t >= 2 and combo[0] > combo[-1]:
                continue  # reversed chains are checked with swapped components
            cur = _make_chain(q, delta, combo)
            if cur is not None and not chain_problems(q, delta, cur):
                return cur
    return None


def build_complete_chain(q: Quiver, delta: Mapping[str, int]) -> CompleteChain:
    delta = check_multidegree(q, delta)
    if not in_omega2(q, delta):
        raise QuiverError("multidegree is not in Ω₂")
    if not double_paths(q, delta):
        return CompleteChain((), delta, (delta,))
    chain = _follow_proof(q, delta)
    if chain is None or chain_problems(q, delta, chain):
        chain = _search_chain(q, delta)
    if chain is None:
        raise PropertyViolation(f"no complete chain exists for {delta.to_dict()}")
    return chain


# --- δ-trees ----------------------------------------------------------------


@dataclass
class TreeNode:
    delta: Multidegree
    chain: CompleteChain
    children: list[TreeNode] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def leaves(self) -> Iterator[TreeNode]:
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def to_dict(self) -> dict:
        return {
            "delta": self.delta.to_dict(),
            "chain": [list(p) for p in self.chain.paths],
            "children": [c.to_dict() for c in self.children],
        }


def build_delta_tree(q: Quiver, delta: Mapping[str, int]) -> TreeNode:
    """Recursive complete chains; each child lives in the support of its vector."""
    delta = check_multidegree(q, delta)
    if not in_omega2(q, delta):
        raise QuiverError("multidegree is not in Ω₂")

    def grow(d: Multidegree) -> TreeNode:
        sq = support(q, d)
        chain = build_complete_chain(sq, d)
        node = TreeNode(d, chain)
        if chain.paths:
            node.children = [grow(c) for c in chain.components]
        return node

    return grow(delta)


def tree_problems(q: Quiver, root: TreeNode) -> list[str]:
    probs: list[str] = []
    seen_paths: set[Word] = set()

    def visit(node: TreeNode) -> None:
        sq = support(q, node.delta)
        probs.extend(chain_problems(sq, node.delta, node.chain))
        for p in node.chain.paths:
            if p in seen_paths:
                probs.append(f"path {' '.join(p)} repeats across nodes")
            seen_paths.add(p)
        if not node.chain.paths:
            if node.children:
                probs.append("leaf with children")
            if not in_omega3(sq, node.delta):
                probs.append("leaf not in Ω₃ of its support")
            return
        if sorted(sorted(c.delta.items()) for c in node.children) != sorted(
                sorted(c.items()) for c in node.chain.components):
            probs.append("children do not match the residual decomposition")
        for c in node.children:
            visit(c)

    visit(root)
    return probs


# --- good components --------------------------------------------------------


@dataclass
class GoodDecomposition:
    null_component: frozenset[str]
    good_components: tuple[frozenset[str], ...]
    good_subpaths: tuple[Word, ...]

    @property
    def r(self) -> int:
        return len(self.good_components)

    def to_dict(self) -> dict:
        return {
            "null_component": sorted(self.null_component),
            "good_components": [sorted(c) for c in self.good_components],
            "good_subpaths": [list(p) for p in self.good_subpaths],
        }


def good_subpaths(q: Quiver, a: Sequence[str], h: Sequence[str]) -> list[Word]:
    """Occurrences of subpaths of h between vertices of a, avoiding them inside,
    that are not single arrows of a."""
    h = check_closed(q, h)
    verts = _vertices(q, tuple(a))
    arrows_a = set(a)
    starts = [i for i, x in enumerate(h) if q.tail(x) in verts]
    if not starts:
        return []
    rot = h[starts[0]:] + h[:starts[0]]
    out: list[Word] = []
    cur: list[str] = []
    for x in rot:
        cur.append(x)
        if q.head(x) in verts:
            seg = tuple(cur)
            if not (len(seg) == 1 and seg[0] in arrows_a):
                out.append(seg)
            cur = []
    return out


def good_component_decomposition(q: Quiver, a: Sequence[str], h: Sequence[str]) -> GoodDecomposition:
    a = check_closed(q, a)
    h = check_closed(q, h)
    if len(a) < 2:
        raise QuiverError("the primitive path needs degree at least 2")
    if least_rotation(a) not in set(enumerate_primitive_cycles(q)):
        raise QuiverError("path is not primitive")
    if any(h.count(x) != 2 for x in a):
        raise QuiverError("every arrow of the primitive path must occur exactly twice in h")
    verts = [q.tail(x) for x in a]
    parent = {v: v for v in verts}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    subs = good_subpaths(q, a, h)
    touched: set[str] = set()
    for s in subs:
        u, w = q.tail(s[0]), q.head(s[-1])
        touched |= {u, w}
        parent[find(u)] = find(w)
    groups: dict[str, set[str]] = {}
    for v in verts:
        if v in touched:
            groups.setdefault(find(v), set()).add(v)
    comps = tuple(frozenset(g) for g in sorted(groups.values(), key=lambda g: verts.index(min(g, key=verts.index))))
    null = frozenset(v for v in verts if v not in touched)
    return GoodDecomposition(null, comps, tuple(subs))


def good_cycle_through(q: Quiver, dec: GoodDecomposition, u: str, w: str) -> list[Word] | None:
    """Distinct good subpaths b1..bl forming a closed path that starts at u and
    in which some b_k ends at w."""
    subs = dec.good_subpaths
    used: list[int] = []

    def rec(cur: str, seen_w: bool) -> bool:
        if used and cur == u and seen_w:
            return True
        for i, s in enumerate(subs):
            if i in used or q.tail(s[0]) != cur:
                continue
            used.append(i)
            end = q.head(s[-1])
            if rec(end, seen_w or end == w):
                return True
            used.pop()
        return False

    return [subs[i] for i in used] if rec(u, False) else None


# --- path decomposition ---------------------------------------------------


@dataclass
class PathDecomposition:
    b_paths: tuple[Word, ...]
    c_paths: tuple[Word, ...]
    x_arrows: tuple[str, ...]
    y_arrows: tuple[str, ...]
    z_arrows: tuple[str, ...]

    @property
    def r(self) -> int:
        return len(self.b_paths)

    @property
    def t(self) -> int:
        return len(self.c_paths)

    def to_dict(self) -> dict:
        return {
            "b": [list(p) for p in self.b_paths],
            "c": [list(p) for p in self.c_paths],
            "x": list(self.x_arrows),
            "y": list(self.y_arrows),
            "z": list(self.z_arrows),
            "r": self.r,
            "t": self.t,
        }


def decomposition_problems(q: Quiver, h: Sequence[str], dec: PathDecomposition) -> list[str]:
    h = check_closed(q, h)
    delta = mdeg(h)
    sq = support(q, delta)
    probs: list[str] = []
    total = Multidegree({})
    for b in dec.b_paths:
        total = total + mdeg(b)
    for c in dec.c_paths:
        total = total + mdeg(c).scale(2)
    if total != delta:
        probs.append("multidegrees do not add up")
    allp = dec.b_paths + dec.c_paths
    if len(set(allp)) != len(allp):
        probs.append("paths are not pairwise different")
    arrows = dec.x_arrows + dec.y_arrows + dec.z_arrows
    if len(set(arrows)) != len(arrows):
        probs.append("x, y, z arrows are not pairwise different")
    for c, y, z in zip(dec.c_paths, dec.y_arrows, dec.z_arrows):
        if y not in c or z not in c or delta[y] != 2 or delta[z] != 2:
            probs.append(f"y/z condition fails on {' '.join(c)}")
    for b, x in zip(dec.b_paths, dec.x_arrows):
        if x not in b or delta[x] - 2 * sum(c.count(x) for c in dec.c_paths) != 1:
            probs.append(f"x condition fails on {' '.join(b)}")
    if dec.r + dec.t > sq.d - sq.n + 1:
        probs.append("r + t exceeds d − n + 1")
    if dec.r < 1:
        probs.append("r = 0")
    return probs


def _exact_covers(cycles: list[Word], target: Multidegree, start: int = 0) -> Iterator[list[Word]]:
    if target.total == 0:
        yield []
        return
    for i in range(start, len(cycles)):
        md = mdeg(cycles[i])
        if target >= md:
            for rest in _exact_covers(cycles, target - md, i + 1):
                yield [cycles[i]] + rest


def _assign(options: list[list[str]]) -> list[str] | None:
    chosen: list[str] = []

    def rec(i: int) -> bool:
        if i == len(options):
            return True
        for x in options[i]:
            if x not in chosen:
                chosen.append(x)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    return list(chosen) if rec(0) else None


def find_path_decomposition(q: Quiver, h: Sequence[str]) -> PathDecomposition:
    """Search for b- and c-paths splitting mdeg(h) with distinguished arrows.

    Raises ``PropertyViolation`` if no admissible decomposition exists.
    """
    h = check_closed(q, h)
    delta = mdeg(h)
    sq = support(q, delta)
    cycles = enumerate_primitive_cycles(sq)
    limit = sq.d - sq.n + 1
    doubles = [c for c in cycles if len(c) >= 2 and all(delta[a] >= 2 for a in c)]
    for t in range(0, limit):
        for cs in combinations(doubles, t):
            twice = Multidegree({})
            for c in cs:
                twice = twice + mdeg(c).scale(2)
            if not delta >= twice:
                continue
            rest = delta - twice
            if rest.total == 0:
                continue
            pool = [c for c in cycles if c not in cs]
            for bs in _exact_covers(pool, rest):
                if not bs or len(bs) + t > limit:
                    continue
                yz_opts = []
                for c in cs:
                    twos = [a for a in c if delta[a] == 2]
                    yz_opts += [twos, twos]
                x_opts = [[a for a in b if delta[a] - 2 * sum(c.count(a) for c in cs) == 1]
                          for b in bs]
                got = _assign(x_opts + yz_opts)
                if got is None:
                    continue
                xs = got[:len(bs)]
                ys = got[len(bs)::2]
                zs = got[len(bs) + 1::2]
                dec = PathDecomposition(tuple(bs), tuple(cs), tuple(xs), tuple(ys), tuple(zs))
                if not decomposition_problems(q, h, dec):
                    return dec
    raise PropertyViolation(f"no admissible path decomposition for {' '.join(h)}")
