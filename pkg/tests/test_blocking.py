import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmworkbench import catalog as C
from nmworkbench.blocking import cum_violation, horizon, search_nonmonotone
from nmworkbench.errors import UnknownNode
from strategies import diagrams


def test_example_horizons():
    assert horizon(C.HORIZON_1, ["a"]).visible == {"a", "b"}
    assert horizon(C.HORIZON_2, ["a", "b"]).visible == {"a", "b"}


def test_nonmonotone_example():
    net, A, B = C.NONMONOTONE
    found = search_nonmonotone(3)
    assert found == (net, A, B)
    assert "c" in horizon(net, A).visible and "c" not in horizon(net, B).visible


def test_cum_precondition():
    with pytest.raises(ValueError):
        cum_violation(C.HORIZON_1, ["a"], ["a", "c"])
    with pytest.raises(UnknownNode):
        horizon(C.HORIZON_1, ["q"])


@settings(max_examples=100, deadline=None)
@given(diagrams(max_nodes=7), st.data())
def test_cum_and_seed_containment(net, data):
    nodes = sorted(net.nodes)
    A = data.draw(st.lists(st.sampled_from(nodes), min_size=1, unique=True))
    h = horizon(net, A).visible
    assert set(A) <= h
    extra = data.draw(st.lists(st.sampled_from(sorted(h)), unique=True))
    assert cum_violation(net, A, set(A) | set(extra)) is None
