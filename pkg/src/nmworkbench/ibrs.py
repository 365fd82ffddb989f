"""Generalized preferential structures: arrows may attack arrows.

Arrows carry ids; a destination is either a CopyNode or the id of another
arrow. Validity is computed top level first, so each query is one linear
pass over the arrows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

from .choicefn import ChoiceFunction, CheckResult, bits, check, shortlex
from .errors import BoundExceeded, DiagramError, LevelOverflow, PreconditionFailed
from .prefstruct import CopyNode, PrefStructure, RepresentationError

Dest = Union[CopyNode, str]
MAX_LEVEL = 8
MAX_ARROWS = 400_000


@dataclass(frozen=True)
class HigherArrow:
    id: str
    origin: CopyNode
    dest: Dest
    index: str = ""

    @property
    def attacks_arrow(self) -> bool:
        return isinstance(self.dest, str)

    def __str__(self):
        d = f"#{self.dest}" if self.attacks_arrow else str(self.dest)
        return f"{self.id}: {self.origin} -> {d}"


class GenStructure:
    def __init__(self, nodes: Iterable[CopyNode], arrows: Iterable[HigherArrow],
                 max_level: int = MAX_LEVEL, universe: Iterable[str] = ()):
        self.nodes = frozenset(nodes)
        self.arrows: dict[str, HigherArrow] = {}
        for a in arrows:
            if a.id in self.arrows:
                raise DiagramError(f"duplicate arrow id {a.id!r}")
            self.arrows[a.id] = a
        for a in self.arrows.values():
            if a.origin not in self.nodes:
                raise DiagramError(f"origin {a.origin} of {a.id} is not a node")
            if a.attacks_arrow:
                if a.dest not in self.arrows:
                    raise DiagramError(f"{a.id} attacks unknown arrow {a.dest!r}")
            elif a.dest not in self.nodes:
                raise DiagramError(f"destination {a.dest} of {a.id} is not a node")
        self.universe = tuple(sorted({n.element for n in self.nodes} | {str(e) for e in universe}))
        self.index = {e: i for i, e in enumerate(self.universe)}
        self._levels(max_level)

    def _levels(self, max_level):
        lev: dict[str, int] = {}
        for aid in self.arrows:
            chain, cur = [], aid
            while cur not in lev and self.arrows[cur].attacks_arrow:
                if cur in chain:
                    raise DiagramError("arrows attack each other in a cycle: " + " -> ".join(chain))
                chain.append(cur)
                cur = self.arrows[cur].dest
            lev.setdefault(cur, 1)
            for c in reversed(chain):
                lev[c] = lev[self.arrows[c].dest] + 1
        self.level_of = lev
        self.level = max(lev.values(), default=0)
        if self.level > max_level:
            raise LevelOverflow(f"level {self.level} exceeds {max_level}")

    def mask(self, xs) -> int:
        m = 0
        for e in xs:
            m |= 1 << self.index[str(e)]
        return m

    @cached_property
    def attackers(self) -> dict[str, list[str]]:
        d: dict[str, list[str]] = {a: [] for a in self.arrows}
        for a in self.arrows.values():
            if a.attacks_arrow:
                d[a.dest].append(a.id)
        return d

    @cached_property
    def into(self) -> dict[CopyNode, list[str]]:
        d: dict[CopyNode, list[str]] = {n: [] for n in self.nodes}
        for a in self.arrows.values():
            if not a.attacks_arrow:
                d[a.dest].append(a.id)
        return d

    @cached_property
    def _om(self) -> dict[str, int]:
        return {aid: self.mask(self.O(aid)) for aid in self.arrows}

    @cached_property
    def _dm(self) -> dict[str, int]:
        return {aid: self.mask(self.D(aid)) for aid in self.arrows}

    @cached_property
    def _origin_bit(self) -> dict[str, int]:
        return {aid: 1 << self.index[a.origin.element] for aid, a in self.arrows.items()}

    @cached_property
    def _top_down(self) -> list[str]:
        return sorted(self.arrows, key=lambda a: (-self.level_of[a], a))

    def O(self, aid: str) -> frozenset[str]:
        out, cur = set(), aid
        while True:
            a = self.arrows[cur]
            out.add(a.origin.element)
            if not a.attacks_arrow:
                return frozenset(out)
            cur = a.dest

    def D(self, aid: str) -> frozenset[str]:
        cur = aid
        while self.arrows[cur].attacks_arrow:
            cur = self.arrows[cur].dest
        return frozenset({self.arrows[cur].dest.element})

    def final_target(self, aid: str) -> CopyNode:
        cur = aid
        while self.arrows[cur].attacks_arrow:
            cur = self.arrows[cur].dest
        return self.arrows[cur].dest

    def copies(self, x: str) -> list[CopyNode]:
        return sorted(n for n in self.nodes if n.element == x)

    def sorted_arrows(self) -> list[HigherArrow]:
        return [self.arrows[a] for a in sorted(self.arrows, key=lambda a: (self.level_of[a], a))]

    def __repr__(self):
        return f"GenStructure(level={self.level}, nodes={len(self.nodes)}, arrows={len(self.arrows)})"

    @classmethod
    def from_pref(cls, S: PrefStructure) -> "GenStructure":
        arrows = [HigherArrow(f"r{i}", a, b) for i, (a, b) in enumerate(S.sorted_rel())]
        return cls(S.nodes, arrows, universe=S.elements)


def _valid_to(S: GenStructure, X: int, Y: int) -> set[str]:
    ok: set[str] = set()
    om, dm, ob, att = S._om, S._dm, S._origin_bit, S.attackers
    for aid in S._top_down:
        if om[aid] & ~X or dm[aid] & ~Y:
            continue
        if all(any(c in ok for c in att[b]) for b in att[aid] if ob[b] & X):
            ok.add(aid)
    return ok


def _valid_arrow(S: GenStructure, X: int, Y: int) -> set[str]:
    ok: set[str] = set()
    om, dm, ob, att = S._om, S._dm, S._origin_bit, S.attackers
    for aid in S._top_down:
        if not ob[aid] & X or om[aid] & ~Y or dm[aid] & ~Y:
            continue
        if all(any(c in ok for c in att[b]) for b in att[aid] if ob[b] & Y):
            ok.add(aid)
    return ok


def valid_arrows(S: GenStructure, X: Iterable[str], Y: Iterable[str] | None = None,
                 arrow: bool = False) -> frozenset[str]:
    """Valid X-to-Y arrows, or valid X => Y arrows when `arrow` is set."""
    Xm = S.mask(X)
    Ym = Xm if Y is None else S.mask(Y)
    if arrow:
        if Xm & ~Ym:
            raise ValueError("X => Y needs X <= Y")
        out = _valid_arrow(S, Xm, Ym)
        assert out <= _valid_to(S, Ym, Ym)
        return frozenset(out)
    return frozenset(_valid_to(S, Xm, Ym))


def _mu_mask(S: GenStructure, X: int, Y: int | None = None) -> int:
    ok = _valid_to(S, X, X if Y is None else Y)
    scope = X if Y is None else Y
    out = 0
    for n, ins in S.into.items():
        b = 1 << S.index[n.element]
        if b & scope and not out & b and not any(a in ok for a in ins):
            out |= b
    return out


def higher_mu(S: GenStructure, X: Iterable[str]) -> frozenset[str]:
    X = frozenset(X) & set(S.universe)
    m = _mu_mask(S, S.mask(X))
    return frozenset(S.universe[i] for i in bits(m))


def check_sqsubseteq(S: GenStructure, X: Iterable[str], Xp: Iterable[str]) -> CheckResult:
    X, Xp = frozenset(X), frozenset(Xp)
    if not X <= Xp:
        return CheckResult(False, ("not a subset", X, Xp), "sqsubseteq")
    Xm, Xpm = S.mask(X & set(S.universe)), S.mask(Xp & set(S.universe))
    ok = _valid_arrow(S, Xm, Xpm)
    ob, att = S._origin_bit, S.attackers
    for x in sorted(Xp - X):
        for c in S.copies(x):
            if not any(a in ok for a in S.into[c]):
                return CheckResult(False, ("unattacked", c), "sqsubseteq")
    for x in sorted(X):
        good = any(
            all(any(b in ok for b in att[a]) for a in S.into[c] if ob[a] & Xpm)
            for c in S.copies(x)
        )
        if not good:
            return CheckResult(False, ("no defended copy", x), "sqsubseteq")
    r = CheckResult(True, None, "sqsubseteq")
    assert higher_mu(S, Xp) == X, "X below X' must be mu(X')"
    return r


def essentially_smooth(S: GenStructure, domain: Iterable[Iterable[str]]) -> CheckResult:
    for X in sorted((frozenset(x) for x in domain), key=lambda s: (len(s), sorted(s))):
        r = check_sqsubseteq(S, higher_mu(S, X), X)
        if not r.holds:
            return CheckResult(False, (X,) + tuple(r.witness), "essentially-smooth")
    return CheckResult(True, None, "essentially-smooth")


def totally_smooth(S: GenStructure, domain: Iterable[Iterable[str]]) -> CheckResult:
    by_dest: dict[Dest, list[str]] = {}
    for a in S.arrows.values():
        by_dest.setdefault(a.dest, []).append(a.id)
    for X in sorted((frozenset(x) for x in domain), key=lambda s: (len(s), sorted(s))):
        Xm = S.mask(X & set(S.universe))
        mu = _mu_mask(S, Xm)
        ok = _valid_to(S, Xm, Xm)
        for aid in sorted(S.arrows):
            if (S._om[aid] | S._dm[aid]) & ~Xm:
                continue
            alts = [b for b in by_dest[S.arrows[aid].dest] if S._origin_bit[b] & mu]
            if not alts:
                return CheckResult(False, (X, aid, "no arrow from mu"), "totally-smooth")
            if aid in ok and not any(b in ok for b in alts):
                return CheckResult(False, (X, aid, "no valid arrow from mu"), "totally-smooth")
    return CheckResult(True, None, "totally-smooth")


# -- representations ----------------------------------------------------------


@dataclass
class AttackPair:
    universe: tuple[str, ...]
    eta: dict[int, int]
    rho: dict[int, int]

    @classmethod
    def of(cls, universe: Iterable, eta: Mapping, rho: Mapping) -> "AttackPair":
        u = tuple(sorted({str(e) for e in universe}))
        idx = {e: i for i, e in enumerate(u)}

        def m(xs):
            return sum(1 << idx[str(e)] for e in set(xs))
        e = {m(k): m(v) for k, v in eta.items()}
        r = {m(k): m(v) for k, v in rho.items()}
        if set(e) != set(r):
            raise ValueError("eta and rho need the same domain")
        return cls(u, e, r)

    @classmethod
    def from_choice(cls, f: ChoiceFunction) -> "AttackPair":
        return cls(f.universe, {X: X for X in f.domain_masks}, dict(f.values))

    def check(self):
        for X in sorted(self.eta, key=shortlex):
            if self.rho[X] & ~self.eta[X]:
                raise PreconditionFailed("rho<=eta", self.show(X))
        if 0 in self.eta and self.eta[0] != self.rho[0]:
            raise PreconditionFailed("rho(empty)=eta(empty)", frozenset())

    def show(self, m: int) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(m))

    @property
    def domain(self) -> list[int]:
        return sorted(self.eta, key=shortlex)


def _tok(universe, m: int) -> str:
    return "{" + ",".join(universe[i] for i in bits(m)) + "}"


def _sel(universe, sets, picks) -> str:
    return "[" + ";".join(f"{_tok(universe, Y)}:{universe[e]}" for Y, e in zip(sets, picks)) + "]"


def _product_guard(sets, pools, what):
    size = 1
    for p in pools:
        size *= len(p)
    if size > MAX_ARROWS:
        raise BoundExceeded(f"{size} {what}")


def represent_attacking_level2(A: AttackPair) -> GenStructure:
    A.check()
    U, dom = A.universe, A.domain
    eta, rho = A.eta, A.rho
    nodes: list[CopyNode] = []
    meta: dict[CopyNode, tuple[int, frozenset, int | None]] = {}
    for x in range(len(U)):
        bad = [X for X in dom if (eta[X] >> x) & 1 and not (rho[X] >> x) & 1]
        pools = [bits(X) for X in bad]
        _product_guard(bad, pools, "stage one copies")
        for g in itertools.product(*pools):
            ran = frozenset(g)
            tok = _sel(U, bad, g)
            n = CopyNode(U[x], tok + "*")
            nodes.append(n)
            meta[n] = (x, ran, None)
            for X in dom:
                if not (rho[X] >> x) & 1:
                    continue
                if not any(Xp & ~X == 0 and (eta[Xp] >> x) & 1 and not (rho[Xp] >> x) & 1 for Xp in dom):
                    continue
                ranm = sum(1 << e for e in ran)
                if all((ranm & Xpp) & ~X for Xpp in dom
                       if X & ~Xpp == 0 and (eta[Xpp] >> x) & 1 and not (rho[Xpp] >> x) & 1):
                    n2 = CopyNode(U[x], tok + _tok(U, X))
                    nodes.append(n2)
                    meta[n2] = (x, ran, X)
    first = {}
    for n in sorted(nodes):
        first.setdefault(n.element, n)
    arrows: list[HigherArrow] = []
    for n in sorted(nodes):
        x, ran, X = meta[n]
        for xp in sorted(ran):
            src = first[U[xp]]
            base = f"a:{U[xp]}>{U[x]}{n.index}"
            if X is None or not (X >> xp) & 1:
                arrows.append(HigherArrow(base, src, n))
                continue
            for xpp in bits(X):
                aid = f"{base}/{U[xpp]}"
                arrows.append(HigherArrow(aid, src, n, U[xpp]))
                arrows.append(HigherArrow("b:" + aid, first[U[xpp]], aid, U[xpp]))
    S = GenStructure(nodes, arrows, universe=U)
    for X in dom:
        got = _mu_mask(S, X, eta[X])
        if got != rho[X]:
            raise RepresentationError(f"rho mismatch at {A.show(X)}: {A.show(got)} vs {A.show(rho[X])}")
    return S


def represent_level3_smooth(f: ChoiceFunction) -> GenStructure:
    for p in ("muSub", "muSubSup"):
        r = check(f, p)
        if not r.holds:
            raise PreconditionFailed(p, r.witness)
    U, dom, mu = f.universe, f.domain_masks, f.values
    # stage one: copies <x,g>, g picking from mu(X) for each X minimizing x
    copies: dict[int, list[tuple[CopyNode, frozenset]]] = {}
    for x in range(len(U)):
        ys = [Y for Y in dom if (Y >> x) & 1 and not (mu[Y] >> x) & 1]
        pools = [bits(mu[Y]) for Y in ys]
        _product_guard(ys, pools, "copies")
        copies[x] = [(CopyNode(U[x], _sel(U, ys, g)), frozenset(g)) for g in itertools.product(*pools)]
    first = {x: cs[0][0] for x, cs in copies.items() if cs}
    nodes = [n for cs in copies.values() for n, _ in cs]
    arrows: list[HigherArrow] = []
    for x, cs in copies.items():
        for n, ran in cs:
            for y in sorted(ran):
                if y not in first:
                    raise RepresentationError(f"{U[y]} is chosen somewhere but has no copy")
                arrows.extend(_level3_gadget(f, y, x, first, n))
                if len(arrows) > MAX_ARROWS:
                    raise BoundExceeded(f"more than {MAX_ARROWS} arrows")
    S = GenStructure(nodes, arrows, universe=U)
    for X in dom:
        got = _mu_mask(S, X)
        if got != mu[X]:
            raise RepresentationError(f"mu mismatch at {f.show_set(X)}: {f.show_set(got)} vs {f.show_set(mu[X])}")
    r = essentially_smooth(S, f.domain)
    if not r.holds:
        raise RepresentationError(f"not essentially smooth: {r.witness}")
    return S


def _level3_gadget(f: ChoiceFunction, y: int, x: int, first, target: CopyNode) -> list[HigherArrow]:
    """The level 1 arrow y -> target, replaced by copies that every D-set
    kills and some copy survives in every O-set."""
    U, dom, mu = f.universe, f.domain_masks, f.values
    src = first[y]
    base = f"a:{U[y]}>{U[x]}{target.index}"
    O = [Y for Y in dom if (Y >> x) & 1 and not (mu[Y] >> x) & 1 and (mu[Y] >> y) & 1]
    D = [X for X in dom if (mu[X] >> x) & 1 and (X >> y) & 1]
    if not D or not O:
        return [HigherArrow(base, src, target)]
    missing = {e for X in D for e in bits(mu[X])} | {e for Y in O for e in bits(mu[Y])}
    missing -= set(first)
    if missing:
        raise RepresentationError(f"{sorted(U[e] for e in missing)} chosen somewhere but without copies")
    out = []
    pO = list(itertools.product(*(bits(mu[Y]) for Y in O)))
    for fsel in itertools.product(*(bits(mu[X]) for X in D)):
        aid = base + _sel(U, D, fsel)
        out.append(HigherArrow(aid, src, target, _sel(U, D, fsel)))
        for r, Xr in enumerate(D):
            for g in pO:
                bid = f"b:{aid}|{_tok(U, Xr)}{_sel(U, O, g)}"
                out.append(HigherArrow(bid, first[fsel[r]], aid))
                for s, Ys in enumerate(O):
                    if mu[Ys] & ~Xr and (Ys >> fsel[r]) & 1:
                        out.append(HigherArrow(f"c:{bid}|{_tok(U, Ys)}", first[g[s]], bid))
    return out
