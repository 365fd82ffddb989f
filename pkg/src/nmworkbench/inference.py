"""Path validity in inheritance diagrams, conclusions and extensions.

Validity is decided by memoized recursion. Every comparison path used for
a path ending in y ends in a predecessor of y, so the recursion is
well-founded on topological rank; it is the degree-indexed induction
without materializing degrees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ModeError
from .netcore import Arrow, Diagram, Path, Polarity, POS, NEG, potential_paths_from


class Mode(enum.Enum):
    SPLIT = "split"
    ONPATH = "onpath"
    TOTAL = "total"
    EXTENSIONS = "extensions"


class Verdict(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    UNDEFINED = "?"

    @classmethod
    def of(cls, p: Polarity) -> "Verdict":
        return cls.POSITIVE if p is POS else cls.NEGATIVE


@dataclass(frozen=True)
class InferenceConfig:
    mode: Mode = Mode.SPLIT
    # "P2.2" eliminates a less specific source only on contradiction,
    # "P2.1" eliminates it whatever its sign
    plugin: str = "P2.2"


class _Branch(Exception):
    def __init__(self, pair):
        self.pair = pair


class _Evaluator:
    def __init__(self, d: Diagram, cfg: InferenceConfig, choices=None):
        self.d = d
        self.cfg = cfg
        self.mode = cfg.mode
        self.choices = choices if choices is not None else {}
        self.memo: dict[tuple[Arrow, ...], bool] = {}
        pos_chains: dict[tuple[str, str], list[tuple[Arrow, ...]]] = {}
        self.all_paths: list[Path] = []
        for x in sorted(d.nodes):
            for p in potential_paths_from(d, x):
                self.all_paths.append(p)
                if p.polarity is POS:
                    pos_chains.setdefault((x, p.end), []).append(p.arrows)
        self.pos_chains = pos_chains
        self._vpos: dict[tuple[str, str], list[tuple[Arrow, ...]]] = {}

    def valid_pos(self, a: str, b: str) -> list[tuple[Arrow, ...]]:
        key = (a, b)
        if key not in self._vpos:
            self._vpos[key] = [c for c in self.pos_chains.get(key, ()) if self.valid(c)]
        return self._vpos[key]

    def reaches(self, a: str, b: str) -> bool:
        # a itself or a valid positive path a ... b
        return a == b or bool(self.valid_pos(a, b))

    def valid(self, sigma: tuple[Arrow, ...]) -> bool:
        r = self.memo.get(sigma)
        if r is None:
            r = self._decide(sigma)
            self.memo[sigma] = r
        return r

    def _better(self, x: str, v: str, u: str, prefix) -> bool:
        """Is source v more specific than u, seen from x?"""
        if self.mode is Mode.ONPATH:
            return v in _nodes(prefix, x)
        if self.mode is Mode.TOTAL:
            taus = [()] if v == x else self.valid_pos(x, v)
            for t1 in taus:
                for t2 in self.valid_pos(v, u):
                    if self.valid(t1 + t2):
                        return True
            return False
        return self.reaches(x, v) and bool(self.valid_pos(v, u))

    def _precluders(self, y: str, s: Polarity, u: str):
        for a in self.d.in_arrows(y):
            if a.source == u:
                continue
            if a.polarity is not s or self.cfg.plugin == "P2.1":
                yield a.source

    def precluded(self, x: str, prefix, u: str, y: str, s: Polarity) -> bool:
        for v in self._precluders(y, s, u):
            if self._better(x, v, u, prefix):
                return True
        return False

    def _conflicts(self, x: str, y: str, s: Polarity):
        """Opposite candidates x ... v -/+> y with a valid prefix."""
        for a in self.d.in_arrows(y):
            if a.polarity is s:
                continue
            v = a.source
            if v == x:
                yield v, ()
            else:
                for tau in self.valid_pos(x, v):
                    yield v, tau
                    if self.mode is not Mode.ONPATH:
                        break

    def _defeats(self, x: str, v: str, tau, y: str, s: Polarity, allow_origin: bool) -> bool:
        """Some z with z -s-> y is more specific than the conflicting v."""
        for a in self.d.in_arrows(y):
            if a.polarity is not s:
                continue
            z = a.source
            if z == x and not allow_origin:
                continue
            if self.mode is Mode.ONPATH:
                if z in _nodes(tau, x):
                    return True
            elif self.mode is Mode.TOTAL:
                rhos = [()] if z == x else self.valid_pos(x, z)
                for r1 in rhos:
                    for r2 in self.valid_pos(z, v):
                        if self.valid(r1 + r2):
                            return True
            elif self.reaches(x, z) and self.valid_pos(z, v):
                return True
        return False

    def _decide(self, sigma) -> bool:
        if len(sigma) == 1:
            return True
        prefix = sigma[:-1]
        if not self.valid(prefix):
            return False
        last = sigma[-1]
        x, u, y, s = sigma[0].source, last.source, last.target, last.polarity
        if self.precluded(x, prefix, u, y, s):
            return False
        open_conflict = False
        for v, tau in self._conflicts(x, y, s):
            if self._defeats(x, v, tau, y, s, allow_origin=False):
                continue
            # the origin's own link settles it against the compound path
            if self.d.link(x, y) is not None:
                return False
            if self.mode is not Mode.EXTENSIONS:
                return False
            if not self._defeats(x, v, tau, y, s, allow_origin=True):
                open_conflict = True
        if open_conflict:
            pick = self.choices.get((x, y))
            if pick is None:
                raise _Branch((x, y))
            return pick is s
        return True


def _nodes(chain, x):
    return (x,) + tuple(a.target for a in chain)


@dataclass(frozen=True)
class ValidSet:
    diagram: Diagram
    mode: Mode
    paths: frozenset[Path]

    def __post_init__(self):
        for p in self.paths:
            assert p.potential, p
            if len(p) > 1:
                assert p.prefix() in self.paths, f"initial segment of {p} missing"

    def from_origin(self, x: str) -> frozenset[Path]:
        return frozenset(p for p in self.paths if p.origin == x)

    def between(self, x: str, y: str) -> list[Path]:
        return sorted(p for p in self.paths if p.origin == x and p.end == y)

    def verdict(self, x: str, y: str) -> Verdict:
        self.diagram.require(x, y)
        signs = {p.polarity for p in self.paths if p.origin == x and p.end == y}
        if signs == {POS}:
            return Verdict.POSITIVE
        if signs == {NEG}:
            return Verdict.NEGATIVE
        assert not signs, f"both signs valid for {x},{y}"
        return Verdict.UNDEFINED

    @cached_property
    def _key(self):
        return tuple(sorted(self.paths))

    def __lt__(self, other):
        return self._key < other._key


def _as_cfg(mode) -> InferenceConfig:
    if isinstance(mode, InferenceConfig):
        return mode
    if isinstance(mode, str):
        mode = Mode(mode)
    return InferenceConfig(mode=mode)


def valid_paths(d: Diagram, mode=Mode.SPLIT) -> ValidSet:
    cfg = _as_cfg(mode)
    if cfg.mode is Mode.EXTENSIONS:
        raise ModeError("use extensions() for the extension-based variant")
    ev = _Evaluator(d, cfg)
    good = frozenset(p for p in ev.all_paths if ev.valid(p.arrows))
    return ValidSet(d, cfg.mode, good)


def _branch_order(ev: _Evaluator):
    return sorted(ev.all_paths, key=lambda p: (p.end, p.origin, p))


def extensions(d: Diagram, plugin: str = "P2.2") -> list[ValidSet]:
    """All extensions, in canonical order.

    Paths are evaluated by (target, source); the first unresolved conflict
    met is branched on, positive side first.
    """
    cfg = InferenceConfig(Mode.EXTENSIONS, plugin)
    found: dict[frozenset, ValidSet] = {}
    todo = [{}]
    while todo:
        choices = todo.pop()
        ev = _Evaluator(d, cfg, choices)
        try:
            good = frozenset(p for p in _branch_order(ev) if ev.valid(p.arrows))
        except _Branch as b:
            todo.append({**choices, b.pair: NEG})
            todo.append({**choices, b.pair: POS})
            continue
        found.setdefault(good, ValidSet(d, Mode.EXTENSIONS, good))
    return sorted(found.values())


def conclude(d: Diagram, x: str, y: str, mode=Mode.SPLIT) -> Verdict:
    d.require(x, y)
    cfg = _as_cfg(mode)
    if cfg.mode is Mode.EXTENSIONS:
        verdicts = {e.verdict(x, y) for e in extensions(d, cfg.plugin)}
        return verdicts.pop() if len(verdicts) == 1 else Verdict.UNDEFINED
    return valid_paths(d, cfg).verdict(x, y)


def all_conclusions(d: Diagram, mode=Mode.SPLIT) -> dict[tuple[str, str], Verdict]:
    cfg = _as_cfg(mode)
    if cfg.mode is Mode.EXTENSIONS:
        exts = extensions(d, cfg.plugin)
        out = {}
        for x in sorted(d.nodes):
            for y in sorted(d.nodes):
                vs = {e.verdict(x, y) for e in exts}
                out[(x, y)] = vs.pop() if len(vs) == 1 else Verdict.UNDEFINED
        return out
    vs = valid_paths(d, cfg)
    return {(x, y): vs.verdict(x, y) for x in sorted(d.nodes) for y in sorted(d.nodes)}


# -- big/small set translation ------------------------------------------------


@dataclass(frozen=True, order=True)
class SetExpr:
    """Intersection of node extensions, optionally with one complement."""

    members: tuple[str, ...]
    complement: str | None = None

    def __str__(self):
        parts = list(self.members) + ([f"~{self.complement}"] if self.complement else [])
        return " & ".join(parts)


@dataclass(frozen=True, order=True)
class BigJudgment:
    subject: SetExpr
    reference: str
    strength: str  # "big" or "BIG"
    sign: str  # "in" or "out"
    rule: str = field(default="", compare=False)

    def __str__(self):
        return f"{self.subject} in {self.strength}({self.reference}) [{self.sign}; {self.rule}]"


class BigSetEngine:
    """Pair-level saturation with symbolic big/BIG judgments.

    b_in(X, Y) records that X & Y is a big subset of X. A pair (X, Z) is
    settled from the most specific reference class: X itself if it has an
    arrow to Z, else every Y with b_in(X, Y) and an arrow Y -> Z.
    """

    def __init__(self, d: Diagram, plugin: str = "P2.2"):
        self.d = d
        self.plugin = plugin
        self.memo: dict[tuple[str, str], str | None] = {}
        self.log: list[BigJudgment] = []
        for a in d.sorted_arrows():
            subj = SetExpr((a.source, a.target)) if a.positive else SetExpr((a.source,), a.target)
            self.log.append(BigJudgment(subj, a.source, "BIG", "in" if a.positive else "out", "base"))

    def b(self, x: str, z: str) -> str | None:
        key = (x, z)
        if key not in self.memo:
            self.memo[key] = self._settle(x, z)
        return self.memo[key]

    def _settle(self, x: str, z: str) -> str | None:
        a = self.d.link(x, z)
        if a is not None:
            sign = "in" if a.positive else "out"
            self.log.append(BigJudgment(SetExpr((x, z)) if a.positive else SetExpr((x,), z),
                                        x, "big", sign, "(3') from BIG"))
            return sign
        refs = [arr for arr in self.d.in_arrows(z) if self.b(x, arr.source) == "in"]
        if not refs:
            return None
        ys = tuple(sorted(r.source for r in refs))
        self.log.append(BigJudgment(SetExpr((x,) + ys), x, "big", "in", "(1.2')"))
        # plug-in decision: drop a reference class when a more specific one contradicts it
        survivors = []
        for r in refs:
            beaten = False
            for q in refs:
                if q is r:
                    continue
                if self.plugin == "P2.2" and q.polarity is r.polarity:
                    continue
                if self.b(q.source, r.source) == "in":
                    beaten = True
                    break
            if not beaten:
                survivors.append(r)
        signs = {r.polarity for r in survivors}
        if len(signs) != 1:
            return None
        sign = "in" if signs.pop() is POS else "out"
        inter = tuple(sorted(r.source for r in survivors))
        comp = None if sign == "in" else z
        memb = inter + ((z,) if sign == "in" else ())
        self.log.append(BigJudgment(SetExpr(memb, comp), " & ".join(inter), "BIG", sign, "(1.3')"))
        self.log.append(BigJudgment(SetExpr((x,) + memb, comp), x, "big", sign, "(1.4')"))
        self.log.append(BigJudgment(SetExpr((x, z) if sign == "in" else (x,), comp), x, "big", sign, "(2')"))
        return sign

    def conclusions(self) -> set[tuple[str, str, str]]:
        out = set()
        for x in sorted(self.d.nodes):
            for z in sorted(self.d.nodes):
                if x != z:
                    s = self.b(x, z)
                    if s is not None:
                        out.add((x, z, s))
        return out


def bigset_conclusions(d: Diagram) -> set[tuple[str, str, str]]:
    return BigSetEngine(d).conclusions()
