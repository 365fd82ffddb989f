"""Reactive compilation of inheritance diagrams, memo labels, signposts,
and a small synchronous gate simulator."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import NoValidPath, ParseError, UndrivenPoint
from .inference import Mode, Verdict, valid_paths
from .netcore import Arrow, Diagram, Path, POS, NEG


@dataclass(frozen=True, order=True)
class DoubleArrow:
    trigger: Arrow
    blocked: Arrow

    def __post_init__(self):
        if self.trigger == self.blocked:
            raise ValueError("a double arrow cannot block its own trigger")

    def __str__(self):
        return f"({_compact(self.trigger)}) ~> ({_compact(self.blocked)})"


def _compact(a: Arrow) -> str:
    return f"{a.source}{'->' if a.positive else '!>'}{a.target}"


@dataclass(frozen=True)
class ReactiveDiagram:
    base: Diagram
    origin: str
    doubles: frozenset[DoubleArrow]

    def __post_init__(self):
        self.base.require(self.origin)
        for dbl in self.doubles:
            assert dbl.trigger in self.base.arrows and dbl.blocked in self.base.arrows

    def erase(self) -> Diagram:
        return self.base

    def traverse(self) -> frozenset[Path]:
        """Walks from the origin along arrows not switched off so far."""
        blocks: dict[Arrow, set[Arrow]] = {}
        for dbl in self.doubles:
            blocks.setdefault(dbl.trigger, set()).add(dbl.blocked)
        out: set[Path] = set()
        stack = [((a,), frozenset(blocks.get(a, ()))) for a in self.base.out_arrows(self.origin)]
        while stack:
            walk, off = stack.pop()
            out.add(Path(walk))
            last = walk[-1]
            if not last.positive:
                continue
            for a in self.base.out_arrows(last.target):
                if a in off:
                    continue
                stack.append((walk + (a,), off | blocks.get(a, frozenset())))
        return frozenset(out)


def _doubles_for(d: Diagram, valid: frozenset[Path], walks) -> set[DoubleArrow]:
    found = set()
    for p in walks:
        if p.polarity is not POS:
            continue
        for a in d.out_arrows(p.end):
            if Path(p.arrows + (a,)) not in valid:
                found.add(DoubleArrow(p.arrows[0], a))
    return found


def compile(d: Diagram, origin: str) -> ReactiveDiagram:
    d.require(origin)
    valid = valid_paths(d, Mode.SPLIT).from_origin(origin)
    return ReactiveDiagram(d, origin, frozenset(_doubles_for(d, valid, valid)))


def recompile_fixpoint(r: ReactiveDiagram) -> ReactiveDiagram:
    valid = valid_paths(r.base, Mode.SPLIT).from_origin(r.origin)
    extra = _doubles_for(r.base, valid, r.traverse())
    return ReactiveDiagram(r.base, r.origin, r.doubles | frozenset(extra))


class PairLabel(enum.Enum):
    NONE = "*"
    P_POS = "p+"
    P_NEG = "p-"
    P_BOTH = "p+-"
    V_POS = "v+"
    V_NEG = "v-"

    @property
    def final(self) -> bool:
        return self in (PairLabel.V_POS, PairLabel.V_NEG)


def memo_labels(d: Diagram) -> dict[tuple[str, str], PairLabel]:
    """Staged labelling: direct links, potential paths, then arbitration."""
    labels: dict[tuple[str, str], PairLabel] = {}
    for a in d.arrows:
        labels[(a.source, a.target)] = PairLabel.V_POS if a.positive else PairLabel.V_NEG
    # potential positive reach, computed forwards
    reach: dict[str, set[str]] = {}
    for n in reversed(d.order):
        r = set()
        for a in d.out_arrows(n):
            if a.positive:
                r.add(a.target)
                r |= reach[a.target]
        reach[n] = r
    for x in d.nodes:
        for y in d.nodes:
            if x == y or (x, y) in labels:
                continue
            hp = hn = False
            for a in d.in_arrows(y):
                if a.source in reach[x]:
                    hp |= a.positive
                    hn |= not a.positive
            labels[(x, y)] = (PairLabel.P_BOTH if hp and hn else PairLabel.P_POS if hp
                              else PairLabel.P_NEG if hn else PairLabel.NONE)
    for y in d.order:
        for x in sorted(d.nodes):
            lab = labels.get((x, y))
            if lab is None or lab.final or lab is PairLabel.NONE:
                continue
            preds = [a for a in d.in_arrows(y) if labels.get((x, a.source)) is PairLabel.V_POS]
            keep = [a for a in preds
                    if not any(b.polarity is not a.polarity
                               and labels.get((b.source, a.source)) is PairLabel.V_POS
                               for b in preds)]
            signs = {a.polarity for a in keep}
            if signs == {POS}:
                labels[(x, y)] = PairLabel.V_POS
            elif signs == {NEG}:
                labels[(x, y)] = PairLabel.V_NEG
            else:
                labels[(x, y)] = PairLabel.NONE
    return labels


def label_verdict(lab: PairLabel) -> Verdict:
    if lab is PairLabel.V_POS:
        return Verdict.POSITIVE
    if lab is PairLabel.V_NEG:
        return Verdict.NEGATIVE
    return Verdict.UNDEFINED


def signposts(d: Diagram, x: str, y: str) -> set[Arrow]:
    """Arrows leaving a node of some valid x..y path that no valid x..y path uses."""
    d.require(x, y)
    paths = valid_paths(d, Mode.SPLIT).between(x, y)
    if not paths:
        raise NoValidPath(f"no valid path from {x} to {y}")
    used = {a for p in paths for a in p.arrows}
    stops = {n for p in paths for n in p.nodes[:-1]}
    return {a for n in stops for a in d.out_arrows(n) if a not in used}


# -- gate circuits ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(&)|(\|)|([!~])|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def parse_expr(text: str):
    """Boolean expression over point names with !, &, | and parentheses."""
    toks = []
    for m in _TOKEN.finditer(text):
        if m.group(7):
            raise ParseError(f"unexpected {m.group(7)!r}", 1, m.start(7) + 1)
        if m.lastindex:
            toks.append(m.group(m.lastindex))
    pos_ = 0

    def peek():
        return toks[pos_] if pos_ < len(toks) else None

    def take():
        nonlocal pos_
        pos_ += 1
        return toks[pos_ - 1]

    def disj():
        terms = [conj()]
        while peek() == "|":
            take()
            terms.append(conj())
        return terms[0] if len(terms) == 1 else ("or", tuple(terms))

    def conj():
        terms = [unary()]
        while peek() == "&":
            take()
            terms.append(unary())
        return terms[0] if len(terms) == 1 else ("and", tuple(terms))

    def unary():
        t = peek()
        if t in ("!", "~"):
            take()
            return ("not", unary())
        if t == "(":
            take()
            e = disj()
            if peek() != ")":
                raise ParseError("missing ')'", 1, 0)
            take()
            return e
        if t is None or t in ("&", "|", ")"):
            raise ParseError(f"expected operand, got {t!r}", 1, 0)
        return ("var", take())

    e = disj()
    if peek() is not None:
        raise ParseError(f"trailing {peek()!r}", 1, 0)
    return e


def expr_vars(e) -> set[str]:
    if e[0] == "var":
        return {e[1]}
    if e[0] == "not":
        return expr_vars(e[1])
    return set().union(*(expr_vars(t) for t in e[1]))


def eval_expr(e, row: dict[str, bool]) -> bool:
    op = e[0]
    if op == "var":
        return row[e[1]]
    if op == "not":
        return not eval_expr(e[1], row)
    if op == "and":
        return all(eval_expr(t, row) for t in e[1])
    return any(eval_expr(t, row) for t in e[1])


def show_expr(e, top=True) -> str:
    op = e[0]
    if op == "var":
        return e[1]
    if op == "not":
        return "!" + show_expr(e[1], False)
    s = (" & " if op == "and" else " | ").join(show_expr(t, False) for t in e[1])
    return s if top else f"({s})"


@dataclass(frozen=True)
class Gate:
    expr: tuple
    delay: int = 1

    def __post_init__(self):
        if self.delay < 1:
            raise ValueError("gate delay must be a positive integer")


@dataclass
class GateCircuit:
    points: list[str]
    gates: dict[str, Gate] = field(default_factory=dict)
    initial: dict[str, bool] = field(default_factory=dict)

    @property
    def inputs(self) -> list[str]:
        return [p for p in self.points if p not in self.gates]

    def check(self) -> None:
        known = set(self.points)
        for p, g in self.gates.items():
            if p not in known:
                raise UndrivenPoint(f"gate drives unknown point {p!r}")
            missing = expr_vars(g.expr) - known
            if missing:
                raise UndrivenPoint(f"gate for {p} reads unknown point(s) {sorted(missing)}")
        for p in self.inputs:
            if p not in self.initial:
                raise UndrivenPoint(f"point {p!r} has neither a gate nor an initial value")


def simulate_circuit(c: GateCircuit, steps: int) -> list[dict[str, bool]]:
    """Rows 1..steps. A gate output at t is its expression at t - delay,
    or the initial value (default F) while t - delay < 1."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    c.check()
    rows: list[dict[str, bool]] = []
    for t in range(1, steps + 1):
        row = {}
        for p in c.points:
            g = c.gates.get(p)
            if g is None:
                row[p] = c.initial[p]
            elif t - g.delay < 1:
                row[p] = c.initial.get(p, False)
            else:
                row[p] = eval_expr(g.expr, rows[t - g.delay - 1])
        rows.append(row)
    return rows


def format_table(c: GateCircuit, rows: list[dict[str, bool]]) -> str:
    w = max(len(p) for p in c.points)
    w = max(w, len(str(len(rows))))
    head = " ".join(["t".rjust(w)] + [p.rjust(w) for p in c.points])
    lines = [head]
    for i, r in enumerate(rows, 1):
        lines.append(" ".join([str(i).rjust(w)] + [("T" if r[p] else "F").rjust(w) for p in c.points]))
    return "\n".join(lines) + "\n"


def row_string(c: GateCircuit, row: dict[str, bool]) -> str:
    return "".join("T" if row[p] else "F" for p in c.points)
