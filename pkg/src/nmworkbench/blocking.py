"""Horizon of a seed set in a blocking net.

A node is visible if it is a seed, or if a visible node points to it
positively and no visible node points to it negatively. Nets are acyclic,
so one pass in topological order gives the least such set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .netcore import Diagram, validate_diagram

BlockNet = Diagram


@dataclass(frozen=True)
class Horizon:
    base: Diagram
    seed: frozenset[str]
    visible: frozenset[str]

    def __post_init__(self):
        assert self.seed <= self.visible <= self.base.nodes


def horizon(net: Diagram, seeds: Iterable[str]) -> Horizon:
    seed = frozenset(seeds)
    net.require(*sorted(seed))
    vis: set[str] = set()
    for n in net.order:
        if n in seed:
            vis.add(n)
            continue
        ins = net.in_arrows(n)
        if any(a.positive and a.source in vis for a in ins) and not any(
            not a.positive and a.source in vis for a in ins
        ):
            vis.add(n)
    return Horizon(net, seed, frozenset(vis))


def cum_violation(net: Diagram, a: Iterable[str], b: Iterable[str]):
    """None when A <= B <= horizon(A) gives equal horizons, else both sets."""
    ha = horizon(net, a).visible
    b = frozenset(b)
    if not (frozenset(a) <= b <= ha):
        raise ValueError("requires A <= B <= horizon(A)")
    hb = horizon(net, b).visible
    return None if ha == hb else (ha, hb)


def _nets(n: int):
    names = [chr(ord("a") + i) for i in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    # each pair: absent, positive, negative
    for code in itertools.product((0, 1, 2), repeat=len(pairs)):
        arrows = [(s, t, c == 1) for (s, t), c in zip(pairs, code) if c]
        yield validate_diagram(arrows, names)


def search_nonmonotone(max_nodes: int = 3):
    """First (net, A, B) with A <= B and some node visible from A but not from B."""
    for n in range(2, max_nodes + 1):
        for net in _nets(n):
            nodes = sorted(net.nodes)
            for r in range(1, n):
                for A in itertools.combinations(nodes, r):
                    ha = horizon(net, A).visible
                    for extra in nodes:
                        if extra in A:
                            continue
                        B = frozenset(A) | {extra}
                        if ha - horizon(net, B).visible - B:
                            return net, frozenset(A), B
    return None


def all_nets(n: int):
    """Every blocking net on n named nodes with arrows along a fixed order."""
    return _nets(n)
