import pytest
from hypothesis import given

from nmworkbench import catalog as C
from nmworkbench.errors import CycleError, DanglingNode, DuplicateItem, HardContradiction, UnknownNode
from nmworkbench.netcore import (Path, PathKind, degree, generalized_paths, kind_ok, longest_from, neg, pos,
                                 potential_paths, potential_paths_from, validate_diagram)
from strategies import diagrams


def test_validate_rejects_bad_input():
    with pytest.raises(CycleError):
        validate_diagram([pos("a", "b"), pos("b", "a")])
    with pytest.raises(CycleError):
        validate_diagram([pos("a", "a")])
    with pytest.raises(HardContradiction):
        validate_diagram([pos("a", "b"), neg("a", "b")])
    with pytest.raises(DuplicateItem):
        validate_diagram([pos("a", "b"), pos("a", "b")])
    with pytest.raises(DanglingNode):
        validate_diagram([pos("a", "b")], nodes=["a"])


def test_isolated_nodes_kept():
    d = validate_diagram([pos("a", "b")], nodes=["a", "b", "z"])
    assert d.nodes == {"a", "b", "z"}
    with pytest.raises(UnknownNode):
        d.require("q")


def test_path_kinds():
    assert Path((pos("a", "b"), pos("b", "c"))).kind is PathKind.POTENTIAL_POSITIVE
    assert Path((pos("a", "b"), neg("b", "c"))).kind is PathKind.POTENTIAL_NEGATIVE
    assert Path((neg("a", "b"), pos("b", "c"))).kind is PathKind.GENERALIZED
    with pytest.raises(ValueError):
        Path((pos("a", "b"), pos("c", "d")))


def test_tweety_paths():
    assert {str(p) for p in potential_paths(C.TWEETY, "a", "d")} == {"a->b->d", "a->c->b->d", "a->c!>d"}
    assert generalized_paths(C.TWEETY, "a", "d") == potential_paths(C.TWEETY, "a", "d")


def test_degree_is_longest_chain():
    p = Path((pos("a", "c"), neg("c", "d")))
    assert degree(C.TWEETY, "a", p) == 3
    assert longest_from(C.TWEETY, "a") == {"b": 2, "c": 1, "d": 3}


@given(diagrams())
def test_kind_invariant(d):
    for x in d.nodes:
        for y in d.nodes:
            for p in generalized_paths(d, x, y) if x != y else ():
                assert kind_ok(p)


@given(diagrams())
def test_potential_paths_prefix_closed_and_degree_monotone(d):
    for x in sorted(d.nodes):
        paths = set(potential_paths_from(d, x))
        for p in paths:
            assert p.potential
            if len(p) > 1:
                q = p.prefix()
                assert q in paths
                assert degree(d, x, q) < degree(d, x, p)
