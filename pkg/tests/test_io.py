import re

import pytest
from hypothesis import given, settings

from nmworkbench import catalog as C
from nmworkbench import io
from nmworkbench import prefstruct as P
from nmworkbench.errors import ParseError
from nmworkbench.netcore import validate_diagram
from nmworkbench.reactive import compile as compile_reactive
from strategies import choice_functions, diagrams

CORPUS = {
    "tweety.net": C.TWEETY, "nixon.net": C.NIXON, "up-down.net": C.UP_DOWN,
    "split-total.net": C.SPLIT_TOTAL, "inher-univ.net": C.INHER_UNIV,
    "need-pr.cf": C.NEED_PR, "mu-cum-cd.cf": C.MU_CUM_CD, "rank-copies.cf": C.RANK_COPIES,
}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_matches_fixtures(name):
    assert io.load(name) == CORPUS[name]


def test_corpus_circuit_simulates_like_fixture():
    from nmworkbench.reactive import row_string, simulate_circuit
    c = io.load("circuit1.circ")
    assert [row_string(c, r) for r in simulate_circuit(c, 9)] == C.CIRCUIT_1_TABLE


def test_corpus_env(tmp_path, monkeypatch):
    (tmp_path / "mine.net").write_text("p -> q\n")
    monkeypatch.setenv(io.CORPUS_ENV, str(tmp_path))
    assert io.load("mine.net").nodes == {"p", "q"}
    with pytest.raises(FileNotFoundError):
        io.load("absent.net")


def test_parse_small_and_malformed():
    d = io.parse("diagram", "a -> b\nc !> b")
    assert len(d.nodes) == 3
    with pytest.raises(ParseError) as e:
        io.parse("diagram", "a ->")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        io.parse("choice", "universe a b\n{a} : {a}\n{a,b} : a")
    assert e.value.line == 3


@settings(max_examples=80, deadline=None)
@given(diagrams())
def test_diagram_round_trip(d):
    text = io.serialize(d)
    assert io.parse("diagram", text) == d
    assert io.serialize(io.parse("diagram", text)) == text


@settings(max_examples=80, deadline=None)
@given(choice_functions())
def test_choice_round_trip(f):
    text = io.serialize(f)
    assert io.parse("choice", text) == f
    assert io.serialize(io.parse("choice", "  " + text.replace(" : ", ":"))) == text


@pytest.mark.parametrize("obj", [
    compile_reactive(C.INHER_UNIV, "x"), C.CIRCUIT_2, C.singleton_system(3),
    C.NEED_SMOOTH, C.LEVEL_3_SOLUTION, P.represent_general(C.A_RANKED_EXAMPLE),
], ids=["reactive", "circuit", "sizes", "gen", "gen3", "pref"])
def test_other_round_trips(obj):
    text = io.serialize(obj)
    kind = {"ReactiveDiagram": "reactive", "GateCircuit": "circuit", "SizeSystem": "sizes",
            "GenStructure": "gen", "PrefStructure": "pref"}[type(obj).__name__]
    assert io.serialize(io.parse(kind, text)) == text


def _edges(dot):
    return [l for l in dot.splitlines() if "->" in l]


def test_dot_tweety():
    edges = _edges(io.export_dot(C.TWEETY))
    assert len(edges) == 5
    assert sum("dashed" in e for e in edges) == 1


def test_dot_reactive_midpoints():
    r = compile_reactive(C.INHER_UNIV, "x")
    dot = io.export_dot(r)
    assert len(set(re.findall(r"\bm\d+ \[shape=point", dot))) >= len({d.blocked for d in r.doubles})
    assert dot.count("dotted") == len(r.doubles)


def test_dot_empty_is_header_only():
    assert io.export_dot(validate_diagram([])).split() == ["digraph", "G", "{", "}"]


def test_dot_is_balanced():
    for obj in (C.TWEETY, C.LEVEL_3_SOLUTION, P.represent_general(C.A_RANKED_EXAMPLE)):
        dot = io.export_dot(obj)
        assert dot.startswith("digraph") and dot.count("{") == dot.count("}")
        assert dot.count('"') % 2 == 0
