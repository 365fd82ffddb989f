import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmworkbench import catalog as C
from nmworkbench.errors import NoValidPath, ParseError, UndrivenPoint
from nmworkbench.inference import Mode, all_conclusions, valid_paths
from nmworkbench.netcore import pos
from nmworkbench.reactive import (Gate, GateCircuit, compile, eval_expr, expr_vars, label_verdict,
                                  memo_labels, parse_expr, recompile_fixpoint, show_expr, signposts,
                                  simulate_circuit)
from strategies import diagrams


def test_inher_univ_doubles_switch_off_rival_arrows():
    r = compile(C.INHER_UNIV, "x")
    assert {str(dbl) for dbl in r.doubles} == {
        "(x->c) ~> (b!>y)", "(x->c) ~> (d->a)", "(x->c) ~> (f!>a)", "(x->c) ~> (g!>b)"}
    assert r.erase() == C.INHER_UNIV


def test_tweety_signposts():
    # what the x..y test cases expose; see the notes on Tweety
    assert signposts(C.TWEETY, "a", "d") == {pos("a", "b"), pos("c", "b")}
    with pytest.raises(NoValidPath):
        signposts(C.NIXON, "a", "d")


def test_memo_labels_match_split_on_named():
    for d in C.DIAGRAMS.values():
        labels = memo_labels(d)
        for (x, y), v in all_conclusions(d).items():
            if x != y:
                assert label_verdict(labels[(x, y)]) is v


@settings(max_examples=80, deadline=None)
@given(diagrams(max_nodes=7))
def test_reactive_traversal_equals_valid_paths(d):
    vs = valid_paths(d, Mode.SPLIT)
    for o in d.nodes:
        r = compile(d, o)
        assert r.traverse() == vs.from_origin(o)
        assert recompile_fixpoint(r) == r


@settings(max_examples=80, deadline=None)
@given(diagrams(max_nodes=7))
def test_memo_labels_match_split(d):
    labels = memo_labels(d)
    for (x, y), v in all_conclusions(d).items():
        if x != y:
            assert label_verdict(labels[(x, y)]) is v


def test_expr_parse_show():
    e = parse_expr("!(a & b) | c")
    assert show_expr(e) == "!(a & b) | c"
    assert expr_vars(e) == {"a", "b", "c"}
    assert eval_expr(e, {"a": True, "b": True, "c": False}) is False
    with pytest.raises(ParseError):
        parse_expr("a &")


names = st.sampled_from(["p", "q", "r"])
exprs = st.recursive(names, lambda sub: st.one_of(
    st.builds(lambda a: f"!{a}", sub),
    st.builds(lambda a, b: f"({a} & {b})", sub, sub),
    st.builds(lambda a, b: f"({a} | {b})", sub, sub)), max_leaves=6)


@given(exprs, st.fixed_dictionaries({"p": st.booleans(), "q": st.booleans(), "r": st.booleans()}))
def test_show_parse_round_trip(text, row):
    e = parse_expr(text)
    e2 = parse_expr(show_expr(e))
    assert eval_expr(e, row) == eval_expr(e2, row)
    assert show_expr(e2) == show_expr(e)


def test_circuit_oscillation_period():
    rows = simulate_circuit(C.CIRCUIT_1, 20)
    assert rows[8] == rows[4] and rows[12] == rows[8]


def test_undriven_point():
    c = GateCircuit(["a", "b"], {"b": Gate(parse_expr("!a"))}, {})
    with pytest.raises(UndrivenPoint):
        simulate_circuit(c, 3)
    with pytest.raises(ValueError):
        Gate(parse_expr("a"), 0)
