"""Text formats, canonical serialization and DOT export.

Kinds and file extensions:
    diagram .net    reactive .rnet   circuit .circ
    choice  .cf     sizes    .sz     pref    .ps     gen .gs
"""

from __future__ import annotations

import os
import re
from pathlib import Path as FsPath
from typing import Iterable

from .choicefn import ChoiceFunction, bits
from .errors import ParseError
from .ibrs import GenStructure, HigherArrow
from .netcore import Arrow, Diagram, neg, pos, validate_diagram
from .prefstruct import CopyNode, PrefStructure, RankedPartition
from .reactive import DoubleArrow, Gate, GateCircuit, ReactiveDiagram, parse_expr, show_expr
from .sizes import SizeSystem

EXTENSIONS = {
    ".net": "diagram", ".rnet": "reactive", ".circ": "circuit", ".cf": "choice",
    ".sz": "sizes", ".ps": "pref", ".gs": "gen",
}
CORPUS_ENV = "NMW_CORPUS"

_ARROW = re.compile(r"^(\S+?)\s*(->|!>)\s*(\S+)$")
_NAME = re.compile(r"^[^\s{}(),@#]+$")
_SET = re.compile(r"\{([^{}]*)\}")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("arrow") else _strip_comment(raw)
        if line:
            yield no, line, raw


def _strip_comment(raw: str) -> str:
    # arrow lines use '#' for arrow targets, so only ' #' followed by a space is a comment
    i = raw.find(" # ")
    return (raw[:i] if i >= 0 else raw).strip()


def _col(raw: str, token: str) -> int:
    i = raw.find(token)
    return i + 1 if i >= 0 else 1


def _name(tok: str, no: int, raw: str) -> str:
    if not _NAME.match(tok):
        raise ParseError(f"bad name {tok!r}", no, _col(raw, tok))
    return tok


def _arrow(line: str, no: int, raw: str) -> Arrow:
    m = _ARROW.match(line)
    if not m:
        raise ParseError("expected '<a> -> <b>' or '<a> !> <b>'", no, len(raw.rstrip()) + 1)
    a, op, b = _name(m.group(1), no, raw), m.group(2), _name(m.group(3), no, raw)
    return pos(a, b) if op == "->" else neg(a, b)


def _set(tok: str, no: int, raw: str) -> frozenset[str]:
    m = _SET.fullmatch(tok.strip())
    if not m:
        raise ParseError(f"expected a set like {{a,b}}, got {tok.strip()!r}", no, _col(raw, tok.strip()))
    body = m.group(1).strip()
    if not body:
        return frozenset()
    return frozenset(_name(e.strip(), no, raw) for e in body.split(","))


def _sets(text: str, no: int, raw: str) -> list[frozenset[str]]:
    rest = text.strip()
    out = []
    while rest:
        m = _SET.match(rest)
        if not m:
            raise ParseError(f"expected a set, got {rest!r}", no, _col(raw, rest))
        out.append(_set(m.group(0), no, raw))
        rest = rest[m.end():].strip()
    return out


def _show(s: Iterable[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


# -- diagrams -----------------------------------------------------------------


def parse_diagram(text: str) -> Diagram:
    nodes, arrows = [], []
    for no, line, raw in _lines(text):
        if line.startswith("node ") or line == "node":
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'node <name>'", no, 1)
            nodes.append(_name(parts[1], no, raw))
        else:
            arrows.append(_arrow(line, no, raw))
    names = list(dict.fromkeys(nodes + [n for a in arrows for n in (a.source, a.target)]))
    return validate_diagram(arrows, names)


def serialize_diagram(d: Diagram) -> str:
    used = {n for a in d.arrows for n in (a.source, a.target)}
    out = [f"node {n}" for n in sorted(d.nodes - used)]
    out += [str(a) for a in d.sorted_arrows()]
    return "".join(line + "\n" for line in out)


def _double(line: str, no: int, raw: str) -> DoubleArrow:
    m = re.fullmatch(r"\((.+?)\)\s*~>\s*\((.+?)\)", line)
    if not m:
        raise ParseError("expected '(a->b) ~> (c->d)'", no, 1)
    return DoubleArrow(_arrow(m.group(1).strip(), no, raw), _arrow(m.group(2).strip(), no, raw))


def parse_reactive(text: str) -> ReactiveDiagram:
    base_lines, doubles, origin = [], [], None
    for no, line, raw in _lines(text):
        if line.startswith("("):
            doubles.append(_double(line, no, raw))
            base_lines.append("")
        elif line.startswith("origin"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'origin <node>'", no, 1)
            origin = parts[1]
            base_lines.append("")
        else:
            base_lines.append(raw)
    if origin is None:
        raise ParseError("missing 'origin <node>' line", 1, 1)
    base = parse_diagram("\n".join(base_lines))
    for dbl in doubles:
        for a in (dbl.trigger, dbl.blocked):
            if a not in base.arrows:
                raise ParseError(f"double arrow refers to unknown arrow {a}", 1, 1)
    return ReactiveDiagram(base, origin, frozenset(doubles))


def serialize_reactive(r: ReactiveDiagram) -> str:
    out = serialize_diagram(r.base) + f"origin {r.origin}\n"
    return out + "".join(f"{d}\n" for d in sorted(r.doubles))


# -- circuits -----------------------------------------------------------------


def parse_circuit(text: str) -> GateCircuit:
    points, gates, initial = [], {}, {}
    for no, line, raw in _lines(text):
        if line.startswith("input ") or line.startswith("init "):
            m = re.fullmatch(r"(input|init)\s+(\S+)\s*=\s*([TF])", line)
            if not m:
                raise ParseError("expected 'input <p> = T|F' or 'init <p> = T|F'", no, 1)
            kind, p, v = m.groups()
            initial[p] = v == "T"
            if kind == "input":
                points.append(p)
            continue
        m = re.fullmatch(r"(\S+)\s*:=\s*(.+?)(?:\s*@\s*(\d+))?", line)
        if not m:
            raise ParseError("expected '<p> := <expr> [@delay]'", no, 1)
        p, expr, delay = m.groups()
        try:
            e = parse_expr(expr)
        except ParseError as err:
            raise ParseError(str(err).split(": ", 1)[-1], no, _col(raw, expr) + err.column - 1) from None
        gates[p] = Gate(e, int(delay) if delay else 1)
        points.append(p)
    c = GateCircuit(points, gates, initial)
    c.check()
    return c


def serialize_circuit(c: GateCircuit) -> str:
    out = []
    for p in c.points:
        g = c.gates.get(p)
        if g is None:
            out.append(f"input {p} = {'T' if c.initial[p] else 'F'}")
        else:
            out.append(f"{p} := {show_expr(g.expr)} @{g.delay}")
    for p in c.points:
        if p in c.gates and p in c.initial:
            out.append(f"init {p} = {'T' if c.initial[p] else 'F'}")
    return "".join(line + "\n" for line in out)


# -- choice functions and size systems ----------------------------------------


def _universe(line: str, no: int, raw: str) -> list[str]:
    parts = line.split()
    return [_name(p, no, raw) for p in parts[1:]]


def parse_choice(text: str) -> ChoiceFunction:
    universe, table = None, {}
    for no, line, raw in _lines(text):
        if line.startswith("universe"):
            universe = _universe(line, no, raw)
            continue
        if ":" not in line:
            raise ParseError("expected '{X} : {mu(X)}'", no, 1)
        left, right = line.split(":", 1)
        X = _set(left, no, raw)
        if X in table:
            raise ParseError(f"{_show(X)} listed twice", no, 1)
        table[X] = _set(right, no, raw)
    if universe is None:
        raise ParseError("missing 'universe' line", 1, 1)
    try:
        return ChoiceFunction(universe, list(table), table)
    except ValueError as e:
        raise ParseError(str(e), 1, 1) from None


def serialize_choice(f: ChoiceFunction) -> str:
    out = ["universe " + " ".join(f.universe)]
    out += [f"{f.show_set(X)} : {f.show_set(f.values[X])}" for X in f.domain_masks]
    return "".join(line + "\n" for line in out)


def parse_sizes(text: str) -> SizeSystem:
    universe, ideals = None, {}
    for no, line, raw in _lines(text):
        if line.startswith("universe"):
            universe = _universe(line, no, raw)
            continue
        if ":" not in line:
            raise ParseError("expected '{X} : {A} {B} ...'", no, 1)
        left, right = line.split(":", 1)
        ideals[_set(left, no, raw)] = _sets(right, no, raw)
    if universe is None:
        raise ParseError("missing 'universe' line", 1, 1)
    try:
        return SizeSystem(universe, ideals)
    except (ValueError, KeyError) as e:
        raise ParseError(str(e), 1, 1) from None


def serialize_sizes(s: SizeSystem) -> str:
    from .choicefn import shortlex
    out = ["universe " + " ".join(s.universe)]
    for X in s.domain:
        fam = " ".join(_show(s.show(A)) for A in sorted(s.small[X], key=shortlex))
        out.append(f"{_show(s.show(X))} : {fam}".rstrip())
    return "".join(line + "\n" for line in out)


# -- structures ---------------------------------------------------------------


def _ref(c: CopyNode) -> str:
    return f"{c.element}@{c.index}"


def _parse_ref(tok: str, no: int, raw: str, nodes: dict[str, CopyNode]) -> CopyNode:
    if tok not in nodes:
        raise ParseError(f"unknown copy {tok!r}", no, _col(raw, tok))
    return nodes[tok]


def _copy_line(line: str, no: int, raw: str, nodes: dict[str, CopyNode]):
    parts = line.split(None, 2)
    if len(parts) != 3:
        raise ParseError("expected 'copy <elem> <index>'", no, 1)
    c = CopyNode(_name(parts[1], no, raw), parts[2].strip())
    if " " in c.index or "@" in c.index:
        raise ParseError("copy index may not contain spaces or '@'", no, 1)
    if _ref(c) in nodes:
        raise ParseError(f"copy {_ref(c)} declared twice", no, 1)
    nodes[_ref(c)] = c


def parse_pref(text: str) -> PrefStructure:
    nodes: dict[str, CopyNode] = {}
    rel = set()
    for no, line, raw in _lines(text):
        if line.startswith("copy"):
            _copy_line(line, no, raw, nodes)
        elif line.startswith("prec"):
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("expected 'prec <copy> <copy>'", no, 1)
            rel.add((_parse_ref(parts[1], no, raw, nodes), _parse_ref(parts[2], no, raw, nodes)))
        else:
            raise ParseError(f"unknown line {line!r}", no, 1)
    return PrefStructure(frozenset(nodes.values()), frozenset(rel))


def serialize_pref(S: PrefStructure) -> str:
    out = [f"copy {c.element} {c.index}" for c in sorted(S.nodes)]
    out += [f"prec {_ref(a)} {_ref(b)}" for a, b in S.sorted_rel()]
    return "".join(line + "\n" for line in out)


_GARROW = re.compile(r"arrow\s+(\S+):\s+(\S+)\s+->\s+(\S+)(?:\s+([+-]))?")


def parse_gen(text: str) -> GenStructure:
    nodes: dict[str, CopyNode] = {}
    universe: list[str] = []
    pending = []
    for no, line, raw in _lines(text):
        if line.startswith("copy"):
            _copy_line(line, no, raw, nodes)
        elif line.startswith("universe"):
            universe = _universe(line, no, raw)
        elif line.startswith("arrow"):
            m = _GARROW.fullmatch(line)
            if not m:
                raise ParseError("expected 'arrow <id>: <copy> -> <copy|#id>'", no, 1)
            pending.append((no, raw, m.group(1), m.group(2), m.group(3)))
        else:
            raise ParseError(f"unknown line {line!r}", no, 1)
    arrows = []
    ids = {p[2] for p in pending}
    for no, raw, aid, o, d in pending:
        origin = _parse_ref(o, no, raw, nodes)
        if d.startswith("#"):
            if d[1:] not in ids:
                raise ParseError(f"unknown arrow {d}", no, _col(raw, d))
            dest = d[1:]
        else:
            dest = _parse_ref(d, no, raw, nodes)
        arrows.append(HigherArrow(aid, origin, dest))
    return GenStructure(nodes.values(), arrows, universe=universe)


def serialize_gen(S: GenStructure) -> str:
    extra = sorted(set(S.universe) - {n.element for n in S.nodes})
    out = ["universe " + " ".join(S.universe)] if extra else []
    out += [f"copy {c.element} {c.index}" for c in sorted(S.nodes)]
    for a in S.sorted_arrows():
        d = f"#{a.dest}" if a.attacks_arrow else _ref(a.dest)
        out.append(f"arrow {a.id}: {_ref(a.origin)} -> {d}")
    return "".join(line + "\n" for line in out)


# -- dispatch -----------------------------------------------------------------

PARSERS = {
    "diagram": parse_diagram, "reactive": parse_reactive, "circuit": parse_circuit,
    "choice": parse_choice, "sizes": parse_sizes, "pref": parse_pref, "gen": parse_gen,
}


def parse(kind: str, text: str):
    if kind not in PARSERS:
        raise ValueError(f"unknown kind {kind!r}")
    return PARSERS[kind](text)


def serialize(obj) -> str:
    if isinstance(obj, Diagram):
        return serialize_diagram(obj)
    if isinstance(obj, ReactiveDiagram):
        return serialize_reactive(obj)
    if isinstance(obj, GateCircuit):
        return serialize_circuit(obj)
    if isinstance(obj, ChoiceFunction):
        return serialize_choice(obj)
    if isinstance(obj, SizeSystem):
        return serialize_sizes(obj)
    if isinstance(obj, PrefStructure):
        return serialize_pref(obj)
    if isinstance(obj, GenStructure):
        return serialize_gen(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def resolve(path: str) -> FsPath:
    """A path as given, or relative to the corpus directory."""
    p = FsPath(path)
    if p.exists():
        return p
    corpus = os.environ.get(CORPUS_ENV)
    roots = [FsPath(corpus)] if corpus else []
    roots.append(FsPath(__file__).resolve().parents[2] / "corpus")
    for r in roots:
        if (r / path).exists():
            return r / path
    raise FileNotFoundError(path)


def kind_of(path: str) -> str:
    ext = FsPath(path).suffix
    if ext not in EXTENSIONS:
        raise ValueError(f"unknown file extension {ext!r}; expected one of {sorted(EXTENSIONS)}")
    return EXTENSIONS[ext]


def load(path: str, kind: str | None = None):
    p = resolve(path)
    return parse(kind or kind_of(str(p)), p.read_text())


# -- DOT ----------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _edge_attrs(a: Arrow, bold: bool = False) -> str:
    attrs = [] if a.positive else ["style=dashed", "color=red", "arrowhead=tee"]
    if bold:
        attrs.append("penwidth=2.5")
    return f" [{', '.join(attrs)}]" if attrs else ""


def dot_diagram(d: Diagram, bold: Iterable[Arrow] = (), name: str = "G") -> str:
    bold = set(bold)
    out = [f"digraph {name} {{"]
    out += [f"  {_q(n)};" for n in sorted(d.nodes)]
    out += [f"  {_q(a.source)} -> {_q(a.target)}{_edge_attrs(a, a in bold)};" for a in d.sorted_arrows()]
    if not d.nodes:
        out = [f"digraph {name} {{"]
    return "\n".join(out) + "\n}\n"


def dot_reactive(r: ReactiveDiagram) -> str:
    d = r.base
    involved = sorted({a for dbl in r.doubles for a in (dbl.trigger, dbl.blocked)})
    mid = {a: f"m{i}" for i, a in enumerate(involved)}
    out = ["digraph G {", f"  {_q(r.origin)} [shape=doublecircle];"]
    out += [f"  {_q(n)};" for n in sorted(d.nodes - {r.origin})]
    for a in d.sorted_arrows():
        if a in mid:
            m = mid[a]
            style = "" if a.positive else ", style=dashed, color=red"
            out.append(f"  {m} [shape=point, width=0.05];")
            out.append(f"  {_q(a.source)} -> {m} [arrowhead=none{style}];")
            out.append(f"  {m} -> {_q(a.target)}{_edge_attrs(a)};")
        else:
            out.append(f"  {_q(a.source)} -> {_q(a.target)}{_edge_attrs(a)};")
    for dbl in sorted(r.doubles):
        out.append(f"  {mid[dbl.trigger]} -> {mid[dbl.blocked]} [style=dotted, color=blue, constraint=false];")
    return "\n".join(out) + "\n}\n"


def dot_pref(S: PrefStructure, partition: RankedPartition | None = None) -> str:
    out = ["digraph G {", "  rankdir=BT;"]
    label = {c: f"<{c.element},{c.index}>" for c in S.nodes}
    if partition is not None:
        for i, block in enumerate(partition.blocks):
            members = [c for c in sorted(S.nodes) if c.element in block]
            out.append(f"  subgraph block{i} {{ rank=same; " + " ".join(_q(_ref(c)) + ";" for c in members) + " }")
    out += [f"  {_q(_ref(c))} [label={_q(label[c])}];" for c in sorted(S.nodes)]
    out += [f"  {_q(_ref(a))} -> {_q(_ref(b))};" for a, b in S.sorted_rel()]
    return "\n".join(out) + "\n}\n"


def dot_gen(S: GenStructure) -> str:
    attacked = {a.dest for a in S.arrows.values() if a.attacks_arrow}
    mids = {aid: f"m{i}" for i, aid in enumerate(sorted(attacked))}
    out = ["digraph G {"]
    out += [f"  {_q(_ref(c))} [label={_q(f'<{c.element},{c.index}>')}];" for c in sorted(S.nodes)]
    for a in S.sorted_arrows():
        target = mids[a.dest] if a.attacks_arrow else _q(_ref(a.dest))
        color = ", color=red" if a.attacks_arrow else ""
        if a.id in mids:
            m = mids[a.id]
            out.append(f"  {m} [shape=point, width=0.05];")
            out.append(f"  {_q(_ref(a.origin))} -> {m} [arrowhead=none, label={_q(a.id)}{color}];")
            out.append(f"  {m} -> {target}{(' [' + color[2:] + ']') if color else ''};")
        else:
            out.append(f"  {_q(_ref(a.origin))} -> {target} [label={_q(a.id)}{color}];")
    return "\n".join(out) + "\n}\n"


def export_dot(obj, **kw) -> str:
    if isinstance(obj, Diagram):
        return dot_diagram(obj, **kw)
    if isinstance(obj, ReactiveDiagram):
        return dot_reactive(obj)
    if isinstance(obj, PrefStructure):
        return dot_pref(obj, **kw)
    if isinstance(obj, GenStructure):
        return dot_gen(obj)
    raise TypeError(f"no DOT rendering for {type(obj).__name__}")
