"""Counterexample search for implications between choice-function conditions.

Universes up to `exhaustive_max` elements are enumerated completely: every
domain satisfying the required closures, every function on it. Candidate
functions are grown one domain set at a time and filtered by the
hypothesis instances that have become decidable, so the survivors stay
small. Larger universes are sampled.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .choicefn import (
    DTYPE, ChoiceFunction, CheckResult, Ctx, Prop, check, closure_gap, prop, shortlex, submasks,
)

LETTERS = string.ascii_lowercase


@dataclass
class SearchConfig:
    seed: int = 0
    samples: int = 2000
    exhaustive_max: int = 3
    closure: tuple[str, ...] = ()
    # probability that a random set joins a sampled domain
    density: float = 0.4


@dataclass
class SearchOutcome:
    function: ChoiceFunction | None
    failure: CheckResult | None = None
    exhausted: list[int] = field(default_factory=list)
    sampled: int = 0
    candidates: int = 0

    @property
    def found(self) -> bool:
        return self.function is not None

    @property
    def holds(self) -> bool:
        return self.function is None

    def describe(self) -> str:
        if self.found:
            return f"counterexample {self.function!r}; {self.failure.describe()}"
        sizes = ",".join(map(str, self.exhausted)) or "-"
        return f"no counterexample (exhaustive |U| in {{{sizes}}}, {self.sampled} samples, {self.candidates} candidates)"


def _closures(props: Iterable[Prop], extra: Iterable[str]) -> tuple[str, ...]:
    need = set(extra)
    for p in props:
        need.update(p.closure)
    return tuple(sorted(need))


def _domain_ok(dom: Sequence[int], closure: Sequence[str], full: int) -> bool:
    return all(closure_gap(dom, op, full) is None for op in closure)


def _grow(rows: np.ndarray, vals: Sequence[int]) -> np.ndarray:
    v = np.asarray(vals, dtype=DTYPE)
    left = np.repeat(rows, len(v), axis=0)
    right = np.tile(v, rows.shape[0])[:, None]
    return np.hstack([left, right])


def _scalar_ok(p: Prop, universe, dom, row) -> bool:
    f = ChoiceFunction.from_masks(universe, {X: int(row[j]) for j, X in enumerate(dom)})
    return check(f, p).holds


def survivors(universe, dom: Sequence[int], hyps: Sequence[Prop], sub_only: bool) -> np.ndarray:
    """All functions on `dom` (rows of mu masks) satisfying the hypotheses."""
    n = len(universe)
    full = (1 << n) - 1
    dom = sorted(dom, key=shortlex)
    ctx = Ctx(universe, dom, np.zeros((1, 0), dtype=DTYPE), known=0)
    staged: dict[int, list] = {}
    late = []
    for h in hyps:
        if not h.vector:
            late.append(h)
            continue
        for inst in h.instances(ctx):
            stage = max(ctx.col[X] for X in inst.needs) if inst.needs else 0
            staged.setdefault(stage, []).append(inst)
    rows = np.zeros((1, 0), dtype=DTYPE)
    for j, X in enumerate(dom):
        rows = _grow(rows, submasks(X) if sub_only else range(full + 1))
        ctx.cols, ctx.rows, ctx.known = rows, rows.shape[0], j + 1
        keep = np.ones(rows.shape[0], dtype=bool)
        for inst in staged.get(j, ()):
            keep &= inst.pred()
            if not keep.any():
                break
        rows = rows[keep]
        if rows.shape[0] == 0:
            return rows
    for h in late:
        keep = np.array([_scalar_ok(h, universe, dom, r) for r in rows], dtype=bool)
        rows = rows[keep] if rows.shape[0] else rows
    return rows


def _first_violation(universe, dom, rows, concls: Sequence[Prop]):
    if rows.shape[0] == 0:
        return None
    ctx = Ctx(universe, dom, rows)
    bad = np.zeros(rows.shape[0], dtype=bool)
    for c in concls:
        if c.vector:
            for inst in c.instances(ctx):
                bad |= ~inst.pred()
        else:
            bad |= np.array([not _scalar_ok(c, universe, dom, r) for r in rows], dtype=bool)
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return None
    r = rows[hits[0]]
    return ChoiceFunction.from_masks(universe, {X: int(r[j]) for j, X in enumerate(dom)})


def search_counterexample(hypothesis: Iterable, conclusion, bound: int = 3,
                          config: SearchConfig | None = None) -> SearchOutcome:
    """Look for f satisfying every hypothesis but not the conclusion(s)."""
    cfg = config or SearchConfig()
    hyps = [prop(h) for h in hypothesis]
    concls = [prop(c) for c in (conclusion if isinstance(conclusion, (list, tuple, set, frozenset)) else [conclusion])]
    closure = _closures(hyps + concls, cfg.closure)
    sub_only = prop("muSub") in hyps
    out = SearchOutcome(None)
    for n in range(1, bound + 1):
        universe = tuple(LETTERS[:n])
        full = (1 << n) - 1
        masks = sorted(range(full + 1), key=shortlex)
        if n <= cfg.exhaustive_max:
            for fam in range(1 << len(masks)):
                dom = [m for i, m in enumerate(masks) if (fam >> i) & 1]
                if not _domain_ok(dom, closure, full):
                    continue
                rows = survivors(universe, dom, hyps, sub_only)
                out.candidates += rows.shape[0]
                f = _first_violation(universe, sorted(dom, key=shortlex), rows, concls)
                if f is not None:
                    out.function = f
                    out.failure = next(r for r in (check(f, c) for c in concls) if not r.holds)
                    return out
            out.exhausted.append(n)
        else:
            rng = np.random.default_rng([cfg.seed, n])
            for _ in range(cfg.samples):
                out.sampled += 1
                dom = _random_domain(rng, masks, closure, full, cfg.density)
                vals = {X: int(rng.choice(submasks(X))) if sub_only else int(rng.integers(0, full + 1))
                        for X in dom}
                f = ChoiceFunction.from_masks(universe, vals)
                if all(check(f, h).holds for h in hyps):
                    out.candidates += 1
                    for c in concls:
                        r = check(f, c)
                        if not r.holds:
                            out.function, out.failure = f, r
                            return out
    return out


def _random_domain(rng, masks, closure, full, density) -> list[int]:
    dom = {m for m in masks if m and rng.random() < density}
    if not dom:
        dom.add(full)
    while True:
        gaps = [g for g in (closure_gap(sorted(dom), op, full) for op in closure) if g is not None]
        if not gaps:
            return sorted(dom, key=shortlex)
        dom.update(gaps)


@dataclass(frozen=True)
class Row:
    """One line of the condition table: hyps (+ side) => or =/=> concls."""

    label: str
    hyps: tuple[str, ...]
    concls: tuple[str, ...]
    side: tuple[str, ...] = ()
    holds: bool = True
    required: bool = True


MU_BASE_ROWS: tuple[Row, ...] = (
    Row("1.1", ("muPR", "muSub"), ("muPR'",), ("inter",)),
    Row("1.2", ("muPR'",), ("muPR",), required=False),
    Row("2.1", ("muPR", "muSub"), ("muOR",)),
    Row("2.2", ("muOR", "muSub"), ("muPR",), ("diff",), required=False),
    Row("2.3", ("muPR", "muSub"), ("muwOR",), required=False),
    Row("2.4", ("muwOR", "muSub"), ("muPR",), ("diff",), required=False),
    Row("3", ("muPR",), ("muCUT",)),
    Row("4", ("muSub", "muSubSup", "muCUM", "muRatM"), ("muPR",), ("inter",), holds=False),
    Row("5.1", ("muCM", "muSub"), ("muResM",), ("inter",)),
    Row("5.2", ("muResM",), ("muCM",), ("inter",), required=False),
    Row("6a", ("muCM", "muCUT"), ("muCUM",)),
    Row("6b", ("muCUM",), ("muCM", "muCUT")),
    Row("7", ("muSub", "muSubSup"), ("muCUM",)),
    Row("8", ("muSub", "muCUM"), ("muSubSup",), ("inter",)),
    Row("9", ("muSub", "muCUM"), ("muSubSup",), holds=False),
    Row("10", ("muRatM", "muPR"), ("muEq",)),
    Row("11", ("muEq",), ("muPR", "muRatM")),
    Row("12.1", ("muEq", "muSub"), ("muEq'",), ("inter",)),
    Row("12.2", ("muEq'",), ("muEq",)),
    Row("13", ("muSub", "muEq"), ("muCup",), ("union",)),
    Row("14", ("muSub", "muEmpty", "muEq"), ("muPar", "muCup'", "muCUM"), ("union",)),
    Row("15", ("muSub", "muPar"), ("muEq",), ("diff",)),
    Row("16", ("muPar", "muIn", "muPR", "muSub"), ("muEq",), ("union", "singletons"), required=False),
    Row("17", ("muCUM", "muEq"), ("muIn",), ("union", "singletons")),
    Row("18", ("muCUM", "muEq", "muSub"), ("muPar",), ("union",)),
    Row("20", ("muSub", "muPR", "muEq"), ("muPar",), holds=False, required=False),
    Row("21", ("muSub", "muPR", "muPar"), ("muEq",), holds=False, required=False),
    Row("22", ("muSub", "muPR", "muPar", "muEq", "muCup"), ("muIn",), holds=False, required=False),
)


def audit_row(row: Row, bound: int = 3, config: SearchConfig | None = None) -> SearchOutcome:
    base = config or SearchConfig()
    cfg = SearchConfig(base.seed, base.samples, base.exhaustive_max, tuple(row.side), base.density)
    return search_counterexample(row.hyps, list(row.concls), bound, cfg)
