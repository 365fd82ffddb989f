"""Shared generators for the test suite."""

import itertools
import random

from nmworkbench.choicefn import ChoiceFunction, closure_gap, prop, shortlex, submasks
from nmworkbench.netcore import validate_diagram
from nmworkbench.search import survivors


def random_dag(seed: int, n: int = 8, m: int = 14, p_pos: float = 0.6):
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(n)]
    arrows = {}
    for _ in range(m):
        i, j = sorted(rng.sample(range(n), 2))
        arrows[(names[i], names[j])] = rng.random() < p_pos
    return validate_diagram([(a, b, s) for (a, b), s in arrows.items()])


def all_functions(universe, dom=None):
    """Every mu with mu(X) a subset of X on `dom` (default: all subsets)."""
    n = len(universe)
    dom = sorted(dom if dom is not None else range(1 << n), key=shortlex)
    for vals in itertools.product(*(submasks(X) for X in dom)):
        yield ChoiceFunction.from_masks(tuple(universe), dict(zip(dom, vals)))


def domains(n: int, closure=()):
    full = (1 << n) - 1
    masks = sorted(range(full + 1), key=shortlex)
    for fam in range(1, 1 << len(masks)):
        dom = [m for i, m in enumerate(masks) if (fam >> i) & 1]
        if all(closure_gap(dom, op, full) is None for op in closure):
            yield dom


def sample_satisfying(universe, hyps, count: int, seed: int, closure=()):
    """`count` functions satisfying `hyps`, spread over closed domains.

    Survivor enumeration per domain, then a seeded pick.  Returns fewer
    than `count` only when fewer exist.
    """
    rng = random.Random(seed)
    ps = [prop(h) for h in hyps]
    pool = []
    for dom in domains(len(universe), closure):
        rows = survivors(tuple(universe), dom, ps, True)
        for r in rows:
            pool.append((tuple(dom), tuple(int(v) for v in r)))
    rng.shuffle(pool)
    out = []
    for dom, vals in pool[:count]:
        out.append(ChoiceFunction.from_masks(tuple(universe), dict(zip(sorted(dom, key=shortlex), vals))))
    return out


def blocked_choice(f: ChoiceFunction) -> bool:
    """Some element chosen somewhere also sits in a set with empty mu."""
    chosen = 0
    for v in f.values.values():
        chosen |= v
    return any(f.values[X] == 0 and X & chosen for X in f.domain_masks)


# acceptance outcomes, printed at the end of the run by conftest.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok
