import pytest
from hypothesis import given, settings

from nmworkbench import catalog as C
from nmworkbench import prefstruct as P
from nmworkbench.choicefn import ChoiceFunction, check, powerset
from nmworkbench.errors import BoundExceeded, DomainClosureError, PreconditionFailed
from nmworkbench.prefstruct import CopyNode, PrefStructure, RankedPartition
from strategies import choice_functions

CASES = [
    (P.represent_general, ("muSub", "muPR"), (), []),
    (P.represent_transitive, ("muSub", "muPR"), (), [lambda S, f: P.is_transitive(S)]),
    (P.represent_smooth, ("muSub", "HUu"), (), [lambda S, f: P.is_smooth(S, f.domain)]),
    (P.represent_smooth_transitive, ("muSub", "muPR", "muCUM"), ("union",),
     [lambda S, f: P.is_smooth(S, f.domain), lambda S, f: P.is_transitive(S), lambda S, f: P.is_irreflexive(S)]),
    (P.represent_ranked, ("muSub", "muEmptyFin", "muEq", "muIn"), ("union", "singletons"),
     [lambda S, f: P.is_ranked(S)]),
]


@pytest.mark.parametrize("build,hyps,closure,structural", CASES, ids=lambda c: getattr(c, "__name__", ""))
@settings(max_examples=120, deadline=None)
@given(f=choice_functions())
def test_construction_verifies_or_refuses(build, hyps, closure, structural, f):
    ok = all(f.closed_under(op) for op in closure) and all(check(f, h).holds for h in hyps)
    if not ok:
        with pytest.raises((PreconditionFailed, DomainClosureError)):
            build(f)
        return
    S = build(f)
    assert P.verify(S, f).holds
    assert P.induced_choice(S, f) == f
    for s in structural:
        assert s(S, f).holds


def _two_level():
    a, b = CopyNode("a"), CopyNode("b")
    return PrefStructure(frozenset({a, b}), frozenset({(a, b)}))


def test_mu_of_hand_structure():
    S = _two_level()
    assert P.mu(S, "ab") == {"a"}
    assert P.mu(S, "b") == {"b"}
    assert P.is_transitive(S).holds and P.is_irreflexive(S).holds


def test_a_ranked_example():
    S = P.represent_A_ranked(C.A_RANKED_EXAMPLE, C.A_RANKED_PARTITION)
    assert P.verify(S, C.A_RANKED_EXAMPLE).holds
    assert P.is_A_ranked(S, C.A_RANKED_PARTITION).holds


def test_a_ranked_transitive_is_refused_when_impossible():
    f, part = C.A_RANKED_NO_TRANSITIVE
    assert P.verify(P.represent_A_ranked(f, part), f).holds
    with pytest.raises(P.RepresentationError):
        P.represent_A_ranked(f, part, transitive=True)


def test_partition_rules():
    with pytest.raises(ValueError):
        RankedPartition.of("ab", "b")
    with pytest.raises(ValueError):
        P.represent_A_ranked(C.A_RANKED_EXAMPLE, RankedPartition.of("ab"))
    assert RankedPartition.of("ba", "c").token == "a,b<c"


def test_rank_copies_refused():
    with pytest.raises(PreconditionFailed) as e:
        P.represent_ranked(C.RANK_COPIES)
    assert e.value.prop == "muEmptyFin"


def test_identity_ranks_flat():
    f = ChoiceFunction("abc", powerset("abc"), lambda X: X)
    S = P.represent_ranked(f)
    assert P.is_ranked(S).holds and not S.rel


def test_copy_bound():
    U = "abcdefg"
    f = ChoiceFunction(U, powerset(U), lambda X: X - {"a"} if len(X) > 1 else X)
    with pytest.raises(BoundExceeded):
        P.represent_general(f)


def test_random_ranked_functions_on_six():
    import random
    rng = random.Random(3)
    U = "abcdef"
    for _ in range(10):
        rank = {e: rng.randint(0, 2) for e in U}
        f = ChoiceFunction(U, powerset(U, nonempty=True),
                           lambda X: {x for x in X if rank[x] == min(rank[y] for y in X)})
        assert P.is_ranked(P.represent_ranked(f)).holds
        assert P.verify(P.represent_smooth_transitive(f), f).holds
