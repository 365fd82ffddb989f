import pytest
from hypothesis import given, settings

from nmworkbench import catalog as C
from nmworkbench.choicefn import (ChoiceFunction, bits, check, closure_gap, identity, powerset, prop, replay,
                                  shortlex, submasks)
from nmworkbench.errors import DomainClosureError
from strategies import choice_functions


# naive oracles over frozensets, independent of the vectorised checker
def _pairs(f):
    items = list(f.items())
    return [(X, mx, Y, my) for X, mx in items for Y, my in items]


ORACLES = {
    "muSub": lambda f: all(mx <= X for X, mx in f.items()),
    "muPR": lambda f: all(my & X <= mx for X, mx, Y, my in _pairs(f) if X <= Y),
    "muCUM": lambda f: all(mx == my for X, mx, Y, my in _pairs(f) if mx <= Y <= X),
    "muSubSup": lambda f: all(mx == my for X, mx, Y, my in _pairs(f) if mx <= Y and my <= X),
    "muEq": lambda f: all(my & X == mx for X, mx, Y, my in _pairs(f) if X <= Y and my & X),
}


@pytest.mark.parametrize("token", sorted(ORACLES))
@settings(max_examples=150, deadline=None)
@given(f=choice_functions())
def test_checker_matches_naive_oracle(token, f):
    assert check(f, token).holds == ORACLES[token](f)


@given(choice_functions(sub=False))
def test_sub_oracle_on_arbitrary_values(f):
    assert check(f, "muSub").holds == ORACLES["muSub"](f)


@settings(max_examples=150, deadline=None)
@given(choice_functions())
def test_failures_carry_replayable_witness(f):
    for token in ("muPR", "muCUM", "muSubSup", "muEq", "muCM", "muRatM"):
        r = check(f, token)
        if not r.holds:
            assert replay(f, token, r.witness) is False


@settings(max_examples=150, deadline=None)
@given(choice_functions())
def test_pr_gives_cut(f):
    if check(f, "muPR").holds:
        assert check(f, "muCUT").holds


def test_identity_has_everything():
    f = identity("abc")
    for t in ("muSub", "muPR", "muCUM", "muEq", "muIn", "muPar", "muCup", "HU", "HUu", "muCumA:2"):
        assert check(f, t).holds, t


def test_need_pr_witness():
    r = check(C.NEED_PR, "muPR")
    assert not r.holds
    assert r.witness == (frozenset("abc"), frozenset("ab"))


def test_closure_gap_and_missing_sets():
    a, b, ab = 1, 2, 3
    assert closure_gap([a, b], "union", 3) == ab
    assert closure_gap([a, b, ab], "union", 3) is None
    f = ChoiceFunction("ab", [{"a"}], {"a": "a"})
    with pytest.raises(DomainClosureError):
        f.mu({"b"})


def test_bit_helpers():
    assert bits(0b101) == (0, 2)
    assert submasks(0b101) == [0, 1, 4, 5]
    assert sorted([3, 1, 4, 2], key=shortlex) == [1, 2, 4, 3]
    assert len(powerset("abc")) == 8 and len(powerset("abc", nonempty=True)) == 7


def test_unknown_property():
    with pytest.raises(KeyError):
        prop("muNope")
    assert prop("muA:a,b<c").token == "muA:a,b<c"
