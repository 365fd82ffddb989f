import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmworkbench import catalog as C
from nmworkbench.choicefn import check, powerset, shortlex, submasks
from nmworkbench.errors import DiagramError, PreconditionFailed
from nmworkbench.ibrs import (AttackPair, GenStructure, HigherArrow, _mu_mask, check_sqsubseteq,
                              essentially_smooth, higher_mu, represent_attacking_level2,
                              represent_level3_smooth, totally_smooth, valid_arrows)
from nmworkbench.prefstruct import CopyNode, PrefStructure, mu
from helpers import blocked_choice
from strategies import choice_functions


def test_need_smooth_mu():
    assert higher_mu(C.NEED_SMOOTH, "abc") == {"a"}
    assert higher_mu(C.NEED_SMOOTH, "ac") == {"a", "c"}


def test_level3_solution_valid_sets():
    L = C.LEVEL_3_SOLUTION
    assert L.level == 3
    assert valid_arrows(L, ["x", "y", "y'"]) == {"alpha3", "beta1", "beta2", "gamma1", "gamma2"}
    assert higher_mu(L, ["x", "y", "y'"]) == {"y", "y'"}
    assert higher_mu(L, ["x", "y"]) == {"x"}
    assert essentially_smooth(L, powerset(["x", "y", "y'"])).holds


def test_totally_smooth_examples():
    P = powerset("abc")
    assert not totally_smooth(C.TOTALLY_SMOOTH_NOT, P).holds
    assert totally_smooth(C.TOTALLY_SMOOTH_YES, P).holds


def test_level3_solution_not_totally_smooth_literally():
    r = totally_smooth(C.LEVEL_3_SOLUTION, powerset(["x", "y", "y'"]))
    assert not r.holds and r.witness[1] == "alpha3"


def test_sqsubseteq_requires_subset():
    assert not check_sqsubseteq(C.NEED_SMOOTH, "ab", "a").holds


def test_level_one_structure_matches_pref_mu():
    a, b, c = CopyNode("a"), CopyNode("b"), CopyNode("c")
    P = PrefStructure(frozenset({a, b, c}), frozenset({(a, b), (b, c)}))
    G = GenStructure.from_pref(P)
    for X in powerset("abc"):
        assert higher_mu(G, X) == mu(P, X)


def test_attack_pair_checks():
    with pytest.raises(PreconditionFailed):
        represent_attacking_level2(AttackPair.of("ab", {"ab": "a"}, {"ab": "b"}))
    with pytest.raises(ValueError):
        AttackPair.of("ab", {"ab": "a"}, {"a": "a"})


@st.composite
def attack_pairs(draw):
    n = draw(st.integers(1, 3))
    U = tuple("abc"[:n])
    masks = sorted(range(1 << n), key=shortlex)
    dom = draw(st.lists(st.sampled_from(masks), min_size=1, unique=True))
    eta, rho = {}, {}
    for X in dom:
        eta[X] = draw(st.sampled_from(submasks(X)))
        rho[X] = eta[X] if X == 0 else draw(st.sampled_from(submasks(eta[X])))
    return AttackPair(U, eta, rho)


@settings(max_examples=100, deadline=None)
@given(attack_pairs())
def test_level2_represents_attack_pairs(A):
    S = represent_attacking_level2(A)
    assert S.level <= 2
    for X in A.domain:
        assert _mu_mask(S, X, A.eta[X]) == A.rho[X]


@settings(max_examples=80, deadline=None)
@given(choice_functions(max_elems=2))
def test_level3_succeeds_exactly_off_the_blocked_pattern(f):
    if not (check(f, "muSub").holds and check(f, "muSubSup").holds):
        with pytest.raises(PreconditionFailed):
            represent_level3_smooth(f)
        return
    if blocked_choice(f):
        with pytest.raises(AssertionError):
            represent_level3_smooth(f)
    else:
        S = represent_level3_smooth(f)
        assert all(higher_mu(S, X) == fx for X, fx in f.items())
        assert essentially_smooth(S, f.domain).holds


def test_level_bigger_2():
    f = C.level_bigger_2()
    S3 = represent_level3_smooth(f)
    assert essentially_smooth(S3, f.domain).holds
    # the level 2 construction represents f but is not essentially smooth; recorded, not a claim
    S2 = represent_attacking_level2(AttackPair.from_choice(f))
    assert all(higher_mu(S2, X) == fx for X, fx in f.items())
    print("level-2 essentially smooth on Level-Bigger-2:", essentially_smooth(S2, f.domain).holds)


def test_dangling_attack_target():
    a = CopyNode("a")
    with pytest.raises(DiagramError):
        GenStructure([a], [HigherArrow("x", a, "missing")])
