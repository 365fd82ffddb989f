"""Preferential structures with copies, and representation constructions
for finite choice functions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .choicefn import ChoiceFunction, CheckResult, bits, check, hull_mask, shortlex, sub
from .errors import BoundExceeded, CycleInQualityRelation, DomainClosureError, PreconditionFailed


@dataclass(frozen=True, order=True)
class CopyNode:
    element: str
    index: str = "0"

    def __str__(self):
        return f"<{self.element},{self.index}>"


@dataclass(frozen=True)
class PrefStructure:
    nodes: frozenset[CopyNode]
    rel: frozenset[tuple[CopyNode, CopyNode]]  # (smaller, bigger)

    def __post_init__(self):
        for a, b in self.rel:
            assert a in self.nodes and b in self.nodes, (a, b)

    @cached_property
    def below(self) -> dict[CopyNode, frozenset[CopyNode]]:
        d: dict[CopyNode, set] = {n: set() for n in self.nodes}
        for a, b in self.rel:
            d[b].add(a)
        return {n: frozenset(v) for n, v in d.items()}

    @cached_property
    def below_elems(self) -> dict[CopyNode, frozenset[str]]:
        return {n: frozenset(c.element for c in v) for n, v in self.below.items()}

    @cached_property
    def copies(self) -> dict[str, list[CopyNode]]:
        d: dict[str, list] = {}
        for n in sorted(self.nodes):
            d.setdefault(n.element, []).append(n)
        return d

    @property
    def elements(self) -> frozenset[str]:
        return frozenset(self.copies)

    def minimal_in(self, node: CopyNode, X: frozenset[str]) -> bool:
        return not (self.below_elems[node] & X)

    def sorted_rel(self) -> list[tuple[CopyNode, CopyNode]]:
        return sorted(self.rel)


def mu(S: PrefStructure, X: Iterable[str]) -> frozenset[str]:
    X = frozenset(X)
    return frozenset(x for x in X for c in S.copies.get(x, ()) if S.minimal_in(c, X))


def verify(S: PrefStructure, f: ChoiceFunction) -> CheckResult:
    for X, fx in f.items():
        if mu(S, X) != fx:
            return CheckResult(False, (X, mu(S, X), fx), "verify")
    return CheckResult(True, None, "verify")


def is_smooth(S: PrefStructure, domain: Iterable[Iterable[str]]) -> CheckResult:
    for X in sorted((frozenset(x) for x in domain), key=lambda s: (len(s), sorted(s))):
        mins = {c for x in X for c in S.copies.get(x, ()) if S.minimal_in(c, X)}
        for x in sorted(X):
            for c in S.copies.get(x, ()):
                if c in mins:
                    continue
                if not any(b in mins for b in S.below[c]):
                    return CheckResult(False, (X, c), "smooth")
    return CheckResult(True, None, "smooth")


def is_irreflexive(S: PrefStructure) -> CheckResult:
    for a, b in S.sorted_rel():
        if a == b:
            return CheckResult(False, (a,), "irreflexive")
    return CheckResult(True, None, "irreflexive")


def is_transitive(S: PrefStructure) -> CheckResult:
    for a, b in S.sorted_rel():
        for c in sorted(S.below[a]):
            if (c, b) not in S.rel:
                return CheckResult(False, (c, a, b), "transitive")
    return CheckResult(True, None, "transitive")


def is_ranked(S: PrefStructure) -> CheckResult:
    """Strict partial order whose incomparability is transitive."""
    for r in (is_irreflexive(S), is_transitive(S)):
        if not r.holds:
            return CheckResult(False, r.witness, "ranked")
    nodes = sorted(S.nodes)
    for a, b, c in itertools.permutations(nodes, 3):
        inc_ab = (a, b) not in S.rel and (b, a) not in S.rel
        inc_bc = (b, c) not in S.rel and (c, b) not in S.rel
        inc_ac = (a, c) not in S.rel and (c, a) not in S.rel
        if inc_ab and inc_bc and not inc_ac:
            return CheckResult(False, (a, b, c), "ranked")
    return CheckResult(True, None, "ranked")


@dataclass(frozen=True)
class RankedPartition:
    blocks: tuple[frozenset[str], ...]  # best block first

    def __post_init__(self):
        seen: set[str] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("blocks must be nonempty")
            if seen & b:
                raise ValueError("blocks must be disjoint")
            seen |= b
        object.__setattr__(self, "_rank", {e: i for i, b in enumerate(self.blocks) for e in b})

    @classmethod
    def of(cls, *blocks: Iterable[str]) -> "RankedPartition":
        return cls(tuple(frozenset(map(str, b)) for b in blocks))

    def rg(self, x: str) -> int:
        return self._rank[x]

    def covers(self, elems: Iterable[str]) -> bool:
        return set(elems) <= set(self._rank)

    @property
    def token(self) -> str:
        return "<".join(",".join(sorted(b)) for b in self.blocks)


def is_A_ranked(S: PrefStructure, P: RankedPartition) -> CheckResult:
    for a in sorted(S.nodes):
        for b in sorted(S.nodes):
            if P.rg(a.element) < P.rg(b.element) and (a, b) not in S.rel:
                return CheckResult(False, (a, b), "A-ranked")
    return CheckResult(True, None, "A-ranked")


# -- constructions ------------------------------------------------------------


MAX_COPIES = 4096


class RepresentationError(AssertionError):
    pass


def _require(f: ChoiceFunction, *props):
    for p in props:
        r = check(f, p)
        if not r.holds:
            raise PreconditionFailed(p, r.witness)


def _require_closure(f: ChoiceFunction, *ops):
    from .choicefn import closure_gap
    for op in ops:
        gap = closure_gap(f.domain_masks, op, f.full)
        if gap is not None:
            raise DomainClosureError({f.to_set(gap)}, f"domain not closed under {op}")


def _ensure(S: PrefStructure, f: ChoiceFunction, *extra: CheckResult) -> PrefStructure:
    for r in (verify(S, f),) + extra:
        if not r.holds:
            raise RepresentationError(f"{r.prop} fails at {r.witness}")
    return S


def _show(f: ChoiceFunction, m: int) -> str:
    return "{" + ",".join(f.universe[i] for i in bits(m)) + "}"


def _sel_token(f: ChoiceFunction, sets, picks) -> str:
    return "[" + ";".join(f"{_show(f, Y)}:{f.universe[e]}" for Y, e in zip(sets, picks)) + "]"


def _pi(f: ChoiceFunction, x: int):
    """Sets where x is not chosen, and all selection functions on them."""
    ys = [Y for Y in f.domain_masks if (Y >> x) & 1 and not (f.values[Y] >> x) & 1]
    size = 1
    for Y in ys:
        size *= bin(Y).count("1")
    if size > MAX_COPIES:
        raise BoundExceeded(f"{size} copies of {f.universe[x]} exceed {MAX_COPIES}")
    return ys, list(itertools.product(*(bits(Y) for Y in ys)))


def _elem_nodes(f: ChoiceFunction):
    for x, name in enumerate(f.universe):
        yield x, name


def represent_general(f: ChoiceFunction) -> PrefStructure:
    _require(f, "muSub", "muPR")
    nodes, ran = [], {}
    for x, name in _elem_nodes(f):
        ys, sels = _pi(f, x)
        for g in sels:
            n = CopyNode(name, _sel_token(f, ys, g))
            nodes.append(n)
            ran[n] = set(g)
    rel = {(m, n) for n in nodes for m in nodes if f.index[m.element] in ran[n]}
    return _ensure(PrefStructure(frozenset(nodes), frozenset(rel)), f)


def represent_transitive(f: ChoiceFunction) -> PrefStructure:
    """Tree-indexed copies; the infinite constant trees become self-looped
    copies, which keeps the relation transitive on a finite carrier."""
    _require(f, "muSub", "muPR")
    tops: dict[int, CopyNode] = {}
    trees = []
    for x, name in _elem_nodes(f):
        ys, sels = _pi(f, x)
        if not ys:
            tops[x] = CopyNode(name, "leaf")
            continue
        tops[x] = CopyNode(name, "tc")
        for g in sels:
            trees.append((CopyNode(name, "t" + _sel_token(f, ys, g)), set(g)))
    rel = set()
    for x, n in tops.items():
        if n.index == "tc":
            rel.add((n, n))
    for n, g in trees:
        for y in g:
            rel.add((tops[y], n))
    nodes = frozenset(tops.values()) | frozenset(n for n, _ in trees)
    S = PrefStructure(nodes, frozenset(rel))
    return _ensure(S, f, is_transitive(S))


def _smooth_core(f: ChoiceFunction):
    """Copies <x,U> for x in mu(U), each above every copy of the elements
    its admissible sequence picks outside H(U,x)."""
    vals, full = f.values, f.full
    copies: dict[CopyNode, int] = {}
    for U in f.domain_masks:
        for x in bits(vals[U]):
            H = hull_mask(f, U, x)[-1]
            above = 0
            picks = 0
            for Y in f.domain_masks:
                if (Y >> x) & 1 and not (vals[Y] >> x) & 1:
                    pool = vals[Y] & ~H
                    if not pool:
                        raise PreconditionFailed("HUu", (f.to_set(U), f.universe[x], f.to_set(Y)))
                    picks |= pool & -pool
            seen = set()
            while picks not in seen:
                seen.add(picks)
                above |= picks
                nxt = 0
                for X in f.domain_masks:
                    if (vals[X] >> x) & 1 and X & picks:
                        pool = vals[X] & ~H
                        assert pool, "admissible sequence stuck"
                        nxt |= pool & -pool
                picks = nxt
                if not picks:
                    break
            copies[CopyNode(f.universe[x], "U" + _show(f, U))] = above
    return copies


def _top_copies(f: ChoiceFunction, K: int):
    """Copies for elements outside K, above the chosen elements of every set
    containing them. Impossible when such a set has empty mu."""
    out = {}
    for x, name in _elem_nodes(f):
        if (K >> x) & 1:
            continue
        holders = [Y for Y in f.domain_masks if (Y >> x) & 1]
        if any(f.values[Y] == 0 for Y in holders):
            continue
        above = 0
        for Y in holders:
            above |= f.values[Y]
        out[CopyNode(name, "top")] = above
    return out


def represent_smooth(f: ChoiceFunction) -> PrefStructure:
    _require(f, "muSub", "HUu")
    core = _smooth_core(f)
    K = 0
    for v in f.values.values():
        K |= v
    core.update(_top_copies(f, K))
    nodes = frozenset(core)
    by_elem: dict[int, list[CopyNode]] = {}
    for n in nodes:
        by_elem.setdefault(f.index[n.element], []).append(n)
    rel = {(m, n) for n, above in core.items() for y in bits(above) for m in by_elem.get(y, ())}
    S = PrefStructure(nodes, frozenset(rel))
    return _ensure(S, f, is_smooth(S, f.domain))


def _u_free_hull(f: ChoiceFunction, U: int) -> int:
    return hull_mask(f, U, None)[-1]


def represent_smooth_transitive(f: ChoiceFunction) -> PrefStructure:
    _require_closure(f, "union")
    _require(f, "muSub", "muPR", "muCUM")
    vals = f.values
    kids: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def children(U: int, x: int):
        key = (U, x)
        if key in kids:
            return kids[key]
        H = _u_free_hull(f, U)
        out = []
        for Y in f.domain_masks:
            if (Y >> x) & 1 and Y & ~H:
                V = U | Y
                pool = vals[V] & ~H
                if not pool:
                    raise RepresentationError(f"no fresh minimal element for {_show(f, V)}")
                out.append((V, (pool & -pool).bit_length() - 1))
        kids[key] = out
        return out

    desc: dict[tuple[int, int], frozenset] = {}

    def descendants(U: int, x: int) -> frozenset:
        key = (U, x)
        if key not in desc:
            acc = set()
            for ch in children(U, x):
                acc.add(ch)
                acc |= descendants(*ch)
            desc[key] = frozenset(acc)
        return desc[key]

    def node(U: int, x: int) -> CopyNode:
        return CopyNode(f.universe[x], "t" + _show(f, U))

    roots = [(U, x) for U in f.domain_masks for x in bits(vals[U])]
    rel = set()
    nodes = set()
    for U, x in roots:
        nodes.add(node(U, x))
        for V, y in descendants(U, x):
            nodes.add(node(V, y))
            rel.add((node(V, y), node(U, x)))
    for x, name in _elem_nodes(f):
        holders = [U for U in f.domain_masks if (U >> x) & 1]
        if any(vals[U] == 0 for U in holders):
            continue
        top = CopyNode(name, "T'")
        nodes.add(top)
        for U in holders:
            y = (vals[U] & -vals[U]).bit_length() - 1
            rel.add((node(U, y), top))
            for V, z in descendants(U, y):
                rel.add((node(V, z), top))
    S = PrefStructure(frozenset(nodes), frozenset(rel))
    return _ensure(S, f, is_smooth(S, f.domain), is_transitive(S), is_irreflexive(S))


def represent_ranked(f: ChoiceFunction) -> PrefStructure:
    _require_closure(f, "singletons", "union")
    _require(f, "muSub", "muEmptyFin", "muEq", "muIn")
    g = nx.DiGraph()
    g.add_nodes_from(range(len(f.universe)))
    strict = set()
    for U in f.domain_masks:
        m = f.values[U]
        ch = bits(m)
        for a in ch:
            for b in ch:
                if a != b:
                    g.add_edge(a, b)
            for b in bits(U & ~m):
                g.add_edge(a, b)
                strict.add((a, b))
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for v in scc:
            comp[v] = i
    for a, b in sorted(strict):
        if comp[a] == comp[b]:
            cyc = nx.shortest_path(g, b, a)
            raise CycleInQualityRelation([f.universe[v] for v in [a] + cyc])
    cond = nx.condensation(g, scc=[{v for v in comp if comp[v] == i} for i in sorted(set(comp.values()))])
    order = list(nx.lexicographical_topological_sort(cond, key=lambda c: min(cond.nodes[c]["members"])))
    rank = {v: order.index(c) for c in order for v in cond.nodes[c]["members"]}
    nodes = {x: CopyNode(name, "0") for x, name in _elem_nodes(f)}
    rel = {(nodes[a], nodes[b]) for a in nodes for b in nodes if rank[a] < rank[b]}
    S = PrefStructure(frozenset(nodes.values()), frozenset(rel))
    return _ensure(S, f, is_ranked(S))


def represent_A_ranked(f: ChoiceFunction, P: RankedPartition, smooth: bool = False,
                       transitive: bool = False) -> PrefStructure:
    if not P.covers(f.universe):
        raise ValueError("partition must cover the universe")
    token = "muA:" + P.token
    if smooth:
        _require_closure(f, "union")
        _require(f, "muSub", "muPR", "muCUM", token)
        base = represent_smooth(f)
    elif transitive:
        _require(f, "muSub", "muPR", token)
        base = represent_transitive(f)
    else:
        _require(f, "muSub", "muPR", token)
        base = represent_general(f)
    rel = set(base.rel)
    for a in base.nodes:
        for b in base.nodes:
            if P.rg(a.element) < P.rg(b.element):
                rel.add((a, b))
    if transitive:
        closure = nx.transitive_closure(nx.DiGraph(list(rel)), reflexive=False)
        rel = set(closure.edges())
    S = PrefStructure(base.nodes, frozenset(rel))
    extra = [is_A_ranked(S, P)]
    if smooth:
        extra.append(is_smooth(S, f.domain))
    if transitive:
        extra.append(is_transitive(S))
    return _ensure(S, f, *extra)


def induced_choice(S: PrefStructure, f: ChoiceFunction) -> ChoiceFunction:
    """The choice function of S on the domain of f."""
    return ChoiceFunction(f.universe, f.domain, lambda X: mu(S, X))
