"""Hypothesis strategies for diagrams and choice functions."""

from hypothesis import strategies as st

from nmworkbench.choicefn import ChoiceFunction, shortlex, submasks
from nmworkbench.netcore import validate_diagram


@st.composite
def diagrams(draw, max_nodes: int = 6):
    n = draw(st.integers(2, max_nodes))
    names = [f"v{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    signs = draw(st.lists(st.sampled_from([None, True, False]), min_size=len(pairs), max_size=len(pairs)))
    arrows = [(names[i], names[j], s) for (i, j), s in zip(pairs, signs) if s is not None]
    # shuffle labels so topological order differs from name order
    perm = draw(st.permutations(names))
    ren = dict(zip(names, perm))
    return validate_diagram([(ren[a], ren[b], s) for a, b, s in arrows], nodes=perm)


@st.composite
def choice_functions(draw, max_elems: int = 3, sub: bool = True):
    n = draw(st.integers(1, max_elems))
    universe = tuple("abcdef"[:n])
    masks = sorted(range(1 << n), key=shortlex)
    dom = draw(st.lists(st.sampled_from(masks), min_size=1, unique=True))
    vals = {}
    for X in dom:
        vals[X] = draw(st.sampled_from(submasks(X))) if sub else draw(st.integers(0, (1 << n) - 1))
    return ChoiceFunction.from_masks(universe, vals)
