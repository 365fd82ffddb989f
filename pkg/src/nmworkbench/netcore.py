"""Inheritance diagrams: data model, path enumeration and degree."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx

from .errors import CycleError, DanglingNode, DuplicateItem, HardContradiction, UnknownNode


class Polarity(enum.Enum):
    POS = "+"
    NEG = "-"

    def flip(self) -> "Polarity":
        return Polarity.NEG if self is Polarity.POS else Polarity.POS


POS, NEG = Polarity.POS, Polarity.NEG


@dataclass(frozen=True, order=True)
class Arrow:
    source: str
    target: str
    polarity: Polarity = field(default=POS, compare=False)
    # ordering ignores polarity; a diagram never holds both signs for a pair

    @property
    def positive(self) -> bool:
        return self.polarity is POS

    def __str__(self):
        return f"{self.source} {'->' if self.positive else '!>'} {self.target}"

    def __repr__(self):
        return f"Arrow({self})"

    def __hash__(self):
        return hash((self.source, self.target, self.polarity))

    def __eq__(self, other):
        if not isinstance(other, Arrow):
            return NotImplemented
        return (self.source, self.target, self.polarity) == (other.source, other.target, other.polarity)


def pos(a: str, b: str) -> Arrow:
    return Arrow(a, b, POS)


def neg(a: str, b: str) -> Arrow:
    return Arrow(a, b, NEG)


class PathKind(enum.Enum):
    GENERALIZED = "generalized"
    POTENTIAL_POSITIVE = "potential+"
    POTENTIAL_NEGATIVE = "potential-"


@dataclass(frozen=True, order=True)
class Path:
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if not self.arrows:
            raise ValueError("paths have at least one arrow")
        for a, b in zip(self.arrows, self.arrows[1:]):
            if a.target != b.source:
                raise ValueError(f"arrows {a} and {b} do not chain")

    @property
    def origin(self) -> str:
        return self.arrows[0].source

    @property
    def end(self) -> str:
        return self.arrows[-1].target

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.origin,) + tuple(a.target for a in self.arrows)

    @property
    def kind(self) -> PathKind:
        negs = [i for i, a in enumerate(self.arrows) if not a.positive]
        if not negs:
            return PathKind.POTENTIAL_POSITIVE
        if negs == [len(self.arrows) - 1]:
            return PathKind.POTENTIAL_NEGATIVE
        return PathKind.GENERALIZED

    @property
    def potential(self) -> bool:
        return self.kind is not PathKind.GENERALIZED

    @property
    def polarity(self) -> Polarity:
        return self.arrows[-1].polarity

    def __len__(self):
        return len(self.arrows)

    def prefix(self) -> "Path":
        return Path(self.arrows[:-1])

    def __str__(self):
        out = self.origin
        for a in self.arrows:
            out += ("->" if a.positive else "!>") + a.target
        return out

    def __repr__(self):
        return f"Path({self})"


def kind_ok(p: Path) -> bool:
    """Machine check of the kind invariant."""
    negs = [i for i, a in enumerate(p.arrows) if not a.positive]
    k = p.kind
    if k is PathKind.POTENTIAL_POSITIVE:
        return not negs
    if k is PathKind.POTENTIAL_NEGATIVE:
        return negs == [len(p) - 1]
    return bool(negs) and negs != [len(p) - 1]


@dataclass(frozen=True)
class Diagram:
    nodes: frozenset[str]
    arrows: frozenset[Arrow]

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((a.source, a.target) for a in self.arrows)
        return g

    @cached_property
    def order(self) -> tuple[str, ...]:
        return tuple(nx.lexicographical_topological_sort(self.graph))

    @cached_property
    def rank(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.order)}

    @cached_property
    def _out(self) -> dict[str, tuple[Arrow, ...]]:
        d = {n: [] for n in self.nodes}
        for a in self.arrows:
            d[a.source].append(a)
        return {n: tuple(sorted(v)) for n, v in d.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Arrow, ...]]:
        d = {n: [] for n in self.nodes}
        for a in self.arrows:
            d[a.target].append(a)
        return {n: tuple(sorted(v)) for n, v in d.items()}

    @cached_property
    def _link(self) -> dict[tuple[str, str], Arrow]:
        return {(a.source, a.target): a for a in self.arrows}

    def out_arrows(self, n: str) -> tuple[Arrow, ...]:
        self.require(n)
        return self._out[n]

    def in_arrows(self, n: str) -> tuple[Arrow, ...]:
        self.require(n)
        return self._in[n]

    def link(self, a: str, b: str) -> Arrow | None:
        return self._link.get((a, b))

    def require(self, *names: str) -> None:
        for n in names:
            if n not in self.nodes:
                raise UnknownNode(n)

    def sorted_arrows(self) -> list[Arrow]:
        return sorted(self.arrows)

    def __len__(self):
        return len(self.nodes)


def validate_diagram(arrows: Iterable, nodes: Iterable[str] | None = None) -> Diagram:
    """Build a Diagram from arrows (Arrow or (src, dst, positive) triples).

    When `nodes` is given, every arrow endpoint must be declared in it.
    """
    declared: list[str] = []
    if nodes is not None:
        seen = set()
        for n in nodes:
            if not n:
                raise DuplicateItem("empty node name")
            if n in seen:
                raise DuplicateItem(f"node {n!r} declared twice")
            seen.add(n)
            declared.append(n)
    arrs: list[Arrow] = []
    for item in arrows:
        if isinstance(item, Arrow):
            arrs.append(item)
        else:
            s, t, sign = item
            if isinstance(sign, Polarity):
                arrs.append(Arrow(s, t, sign))
            else:
                arrs.append(Arrow(s, t, POS if sign else NEG))
    pairs: dict[tuple[str, str], Arrow] = {}
    for a in arrs:
        if not a.source or not a.target:
            raise DuplicateItem("empty node name")
        key = (a.source, a.target)
        if key in pairs:
            if pairs[key].polarity is not a.polarity:
                raise HardContradiction(*key)
            raise DuplicateItem(f"arrow {a} listed twice")
        pairs[key] = a
    names = set(declared)
    if nodes is not None:
        for a in arrs:
            for n in (a.source, a.target):
                if n not in names:
                    raise DanglingNode(n)
    else:
        for a in arrs:
            names.update((a.source, a.target))
    for a in arrs:
        if a.source == a.target:
            raise CycleError([a.source, a.source])
    g = nx.DiGraph()
    g.add_nodes_from(names)
    g.add_edges_from(pairs)
    try:
        cyc = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        cyc = None
    if cyc:
        raise CycleError([e[0] for e in cyc] + [cyc[0][0]])
    return Diagram(frozenset(names), frozenset(arrs))


def _chains(d: Diagram, x: str, positive_only: bool) -> list[tuple[Arrow, ...]]:
    out: list[tuple[Arrow, ...]] = []
    stack: list[tuple[Arrow, ...]] = [(a,) for a in reversed(d.out_arrows(x))]
    while stack:
        ch = stack.pop()
        out.append(ch)
        last = ch[-1]
        if positive_only and not last.positive:
            continue
        for a in reversed(d.out_arrows(last.target)):
            stack.append(ch + (a,))
    return out


def generalized_paths(d: Diagram, x: str, y: str) -> set[Path]:
    """All directed chains x ... y, with no restriction on signs."""
    d.require(x, y)
    return {Path(c) for c in _chains(d, x, False) if c[-1].target == y}


def potential_paths(d: Diagram, x: str, y: str) -> set[Path]:
    d.require(x, y)
    return {Path(c) for c in _chains(d, x, True) if c[-1].target == y}


def potential_paths_from(d: Diagram, x: str) -> list[Path]:
    d.require(x)
    return sorted(Path(c) for c in _chains(d, x, True))


def longest_from(d: Diagram, x: str) -> dict[str, int]:
    """Arrow count of the longest chain from x to each reachable node."""
    d.require(x)
    best = {x: 0}
    for n in d.order[d.rank[x]:]:
        if n not in best:
            continue
        for a in d._out[n]:
            best[a.target] = max(best.get(a.target, 0), best[n] + 1)
    del best[x]
    return best


def degree(d: Diagram, x: str, sigma: Path) -> int:
    d.require(x)
    if sigma.origin != x:
        raise ValueError(f"{sigma} does not start at {x}")
    return longest_from(d, x)[sigma.end]
