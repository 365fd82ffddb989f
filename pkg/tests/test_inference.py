import pytest
from hypothesis import given, settings

from nmworkbench import catalog as C
from nmworkbench.errors import ModeError, UnknownNode
from nmworkbench.inference import (Mode, Verdict, all_conclusions, bigset_conclusions, conclude, extensions,
                                   valid_paths)
from strategies import diagrams


def test_tweety_bigset_listing():
    assert bigset_conclusions(C.TWEETY) == {
        ("a", "b", "in"), ("a", "c", "in"), ("a", "d", "out"),
        ("b", "d", "in"), ("c", "b", "in"), ("c", "d", "out"),
    }


@pytest.mark.parametrize("mode,want", [
    ("split", Verdict.NEGATIVE), ("onpath", Verdict.UNDEFINED),
    ("total", Verdict.UNDEFINED), ("extensions", Verdict.NEGATIVE),
])
def test_split_total_modes(mode, want):
    assert conclude(C.SPLIT_TOTAL, "u", "y", mode) is want


def test_extension_counts():
    assert len(extensions(C.TWEETY)) == 1
    exts = extensions(C.NIXON)
    assert len(exts) == 2
    assert {e.verdict("a", "d") for e in exts} == {Verdict.POSITIVE, Verdict.NEGATIVE}


def test_errors():
    with pytest.raises(ModeError):
        valid_paths(C.TWEETY, Mode.EXTENSIONS)
    with pytest.raises(UnknownNode):
        conclude(C.TWEETY, "a", "zz")


def test_all_conclusions_matches_pointwise():
    for d in C.DIAGRAMS.values():
        for (x, y), v in all_conclusions(d).items():
            assert conclude(d, x, y) is v


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_valid_sets_are_consistent(d):
    for mode in (Mode.SPLIT, Mode.ONPATH, Mode.TOTAL):
        vs = valid_paths(d, mode)  # prefix closure is asserted on construction
        for x in d.nodes:
            for y in d.nodes:
                assert len({p.polarity for p in vs.between(x, y)}) <= 1


@settings(max_examples=40, deadline=None)
@given(diagrams(max_nodes=5))
def test_direct_links_win_in_every_mode(d):
    for a in d.arrows:
        for mode in ("split", "onpath", "total"):
            want = Verdict.POSITIVE if a.positive else Verdict.NEGATIVE
            assert conclude(d, a.source, a.target, mode) is want


@settings(max_examples=40, deadline=None)
@given(diagrams(max_nodes=5))
def test_skeptical_extensions_agree_with_each_extension(d):
    exts = extensions(d)
    assert exts
    for x in d.nodes:
        for y in d.nodes:
            v = conclude(d, x, y, Mode.EXTENSIONS)
            if v is not Verdict.UNDEFINED:
                assert all(e.verdict(x, y) is v for e in exts)


@settings(max_examples=60, deadline=None)
@given(diagrams())
def test_bigset_agrees_with_split(d):
    vs = valid_paths(d)
    big = {(x, y): s for x, y, s in bigset_conclusions(d)}
    sign = {Verdict.POSITIVE: "in", Verdict.NEGATIVE: "out", Verdict.UNDEFINED: None}
    for x in d.nodes:
        for y in d.nodes:
            if x != y:
                assert big.get((x, y)) == sign[vs.verdict(x, y)]
