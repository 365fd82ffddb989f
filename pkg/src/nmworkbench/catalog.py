"""Named fixtures: diagrams, circuits, nets, choice functions, size systems
and higher structures used by the tests, the CLI and the scripts."""

from __future__ import annotations

from .choicefn import ChoiceFunction, powerset
from .ibrs import GenStructure, HigherArrow
from .netcore import Diagram, neg, pos, validate_diagram
from .prefstruct import CopyNode, RankedPartition
from .reactive import Gate, GateCircuit, parse_expr
from .sizes import SizeSystem


def diagram(text: str) -> Diagram:
    """Comma separated arrows, e.g. "a->b, c!>d"."""
    arrows = []
    for part in text.split(","):
        part = part.strip()
        if "!>" in part:
            a, b = part.split("!>")
            arrows.append(neg(a.strip(), b.strip()))
        else:
            a, b = part.split("->")
            arrows.append(pos(a.strip(), b.strip()))
    return validate_diagram(arrows)


TWEETY = diagram("a->b, a->c, c->b, b->d, c!>d")
NIXON = diagram("a->b, a->c, b->d, c!>d")
UP_DOWN = diagram("z->u, z!>x, u->v, u->x, x->v, v->y, x!>y")
SPLIT_TOTAL = diagram("u->x, u->v, v->y, x!>y, u!>w, x->w, w->v")
INHER_UNIV = diagram(
    "x->a, x->c, a->y, c->y, b!>y, f!>a, d->a, b->f, b->d, g!>b, e->b, c->g, c->e, e->g"
)

DIAGRAMS: dict[str, Diagram] = {
    "tweety": TWEETY,
    "nixon": NIXON,
    "up-down": UP_DOWN,
    "split-total": SPLIT_TOTAL,
    "inher-univ": INHER_UNIV,
}


# -- circuits -----------------------------------------------------------------

POINTS = ["In1", "In2", "A1", "A2", "A3", "A4", "Out1", "Out2"]


def latch_circuit(and_delay: int = 1) -> GateCircuit:
    g = {
        "A1": Gate(parse_expr("In1 & Out1"), and_delay),
        "A2": Gate(parse_expr("In2 & Out2"), and_delay),
        "A3": Gate(parse_expr("A1 | Out2")),
        "A4": Gate(parse_expr("A2 | Out1")),
        "Out1": Gate(parse_expr("!A3")),
        "Out2": Gate(parse_expr("!A4")),
    }
    return GateCircuit(list(POINTS), g, {"In1": True, "In2": False})


CIRCUIT_1 = latch_circuit(1)
CIRCUIT_2 = latch_circuit(2)

CIRCUIT_1_TABLE = [
    "TFFFFFFF", "TFFFFFTT", "TFTFTTTT", "TFTFTTFF", "TFFFTFFF",
    "TFFFFFFT", "TFFFTFTT", "TFTFTTFT", "TFFFTFFF",
]
CIRCUIT_2_TABLE = [
    "TFFFFFFF", "TFFFFFTT", "TFFFTTTT", "TFTFTTFF", "TFTFTFFF",
    "TFFFTFFT", "TFFFTFFT", "TFFFTFFT",
]


# -- blocking nets ------------------------------------------------------------

HORIZON_1 = diagram("a->b, b!>c, a->c")
HORIZON_2 = diagram("b->c, c!>x, b!>d, d->x, a!>c, a->d")
# a new seed removes a visible node; found by blocking.search_nonmonotone
NONMONOTONE = (diagram("a->c, b!>c"), frozenset({"a"}), frozenset({"a", "b"}))


# -- choice functions ---------------------------------------------------------


def _f(universe, table: dict[str, str]) -> ChoiceFunction:
    dom = [frozenset(k) for k in table]
    return ChoiceFunction(universe, dom, {frozenset(k): frozenset(v) for k, v in table.items()})


MU_CUM_CD = ChoiceFunction("abcd", [set("abc"), set("abd")], {"abc": "a", "abd": "ab"})
NEED_PR = ChoiceFunction("abc", powerset("abc"), lambda S: frozenset("b") if S == frozenset("ab") else S)
RANK_COPIES = _f("ab", {"a": "a", "b": "b", "ab": ""})
A_RANKED_EXAMPLE = _f("abc", {"abc": "b", "ab": "ab", "ac": "", "bc": "b"})
A_RANKED_PARTITION = RankedPartition.of("ab", "c")
# no transitive A-ranked structure represents this one
A_RANKED_NO_TRANSITIVE = (_f("xy", {"x": "x", "xy": ""}), RankedPartition.of("x", "y"))


def level_bigger_2() -> ChoiceFunction:
    full = frozenset({"x", "y", "y'"})
    special = {
        full: frozenset({"y", "y'"}),
        frozenset({"x", "y"}): frozenset({"x"}),
        frozenset({"x", "y'"}): frozenset({"x"}),
    }
    return ChoiceFunction(full, powerset(full), lambda S: special.get(S, S))


def inf_cum_alpha(k: int) -> ChoiceFunction:
    """Generators closed under nonempty intersections; mu keeps the
    elements nothing below them in the set."""
    xs = [f"x{i}" for i in range(k + 2)]
    ys = [f"y{i}" for i in range(k + 1)]
    prec = {("a", "b"), ("b", "c")}
    prec |= {(xs[i], xs[i + 1]) for i in range(k + 1)}
    prec |= {(xs[i], ys[i]) for i in range(k + 1)}
    gens = [frozenset({"a", "c", "x0"})]
    gens += [frozenset({"c", xs[i], ys[i], xs[i + 1]}) for i in range(k)]
    gens.append(frozenset({"a", "b", "c", xs[k], ys[k], xs[k + 1]}))
    dom = set(gens)
    grew = True
    while grew:
        grew = False
        for A in list(dom):
            for B in list(dom):
                C = A & B
                if C and C not in dom:
                    dom.add(C)
                    grew = True
    return ChoiceFunction(["a", "b", "c"] + xs + ys, dom,
                          lambda S: frozenset(x for x in S if not any((y, x) in prec for y in S)))


FUNCTIONS = {
    "mu-cum-cd": MU_CUM_CD,
    "need-pr": NEED_PR,
    "rank-copies": RANK_COPIES,
    "a-ranked": A_RANKED_EXAMPLE,
}

# witnesses the audit finds for the two rows that fail
ROW_4_WITNESS = _f("ab", {"a": "", "ab": "ab"})
ROW_9_WITNESS = _f("abc", {"ab": "", "ac": "a"})


# -- size systems -------------------------------------------------------------


def singleton_system(n: int) -> SizeSystem:
    """On n elements: singletons small in the whole set, nothing small elsewhere."""
    U = [str(i) for i in range(1, n + 1)]
    full = frozenset(U)
    ideals = {X: [frozenset()] for X in powerset(U, nonempty=True)}
    ideals[full] = [frozenset()] + [frozenset({u}) for u in U]
    return SizeSystem(U, ideals)


# -- higher structures --------------------------------------------------------


def _gs(spec: list[tuple[str, str, str]], elems) -> GenStructure:
    nodes = {e: CopyNode(e) for e in elems}
    arrows = []
    for aid, o, d in spec:
        dest = d[1:] if d.startswith("#") else nodes[d]
        arrows.append(HigherArrow(aid, nodes[o], dest))
    return GenStructure(nodes.values(), arrows)


NEED_SMOOTH = _gs([("a1", "a", "b"), ("a2", "b", "c"), ("a", "a", "c"), ("b", "a", "#a")], "abc")
LEVEL_3_SOLUTION = _gs([
    ("alpha1", "x", "y"), ("alpha2", "x", "y'"), ("alpha3", "y", "x"),
    ("beta1", "y", "#alpha2"), ("beta2", "y'", "#alpha1"),
    ("beta3", "y", "#alpha3"), ("beta4", "x", "#alpha3"),
    ("gamma1", "y'", "#beta3"), ("gamma2", "y'", "#beta4"),
], ["x", "y", "y'"])
TOTALLY_SMOOTH_NOT = _gs([("alpha", "a", "b"), ("alpha1", "b", "c"), ("alpha2", "a", "c"),
                          ("beta", "b", "#alpha1")], "abc")
TOTALLY_SMOOTH_YES = _gs([("alpha", "a", "b"), ("alpha1", "b", "c"), ("alpha2", "a", "c"),
                          ("beta", "b", "#alpha1"), ("beta1", "a", "#alpha1")], "abc")
