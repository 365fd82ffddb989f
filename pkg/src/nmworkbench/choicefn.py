"""Finite choice functions and their algebraic conditions.

Sets are bitmasks over the canonical (sorted) element order. Every
condition is written once against a context whose `m(X)` returns a numpy
column, so the same code checks one function or filters millions of
candidates in the search harness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import BoundExceeded, DomainClosureError

DTYPE = np.uint16
MAX_ELEMENTS = 16


def shortlex(mask: int) -> tuple[int, tuple[int, ...]]:
    return (bin(mask).count("1"), bits(mask))


def bits(mask: int) -> tuple[int, ...]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def submasks(mask: int) -> list[int]:
    """All submasks of `mask`, ascending."""
    out, s = [], mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return out[::-1]


class ChoiceFunction:
    """mu on an explicit domain of subsets of a finite universe."""

    def __init__(self, universe: Iterable, domain: Iterable[Iterable], mu):
        elems = sorted({str(e) for e in universe})
        if len(elems) > MAX_ELEMENTS:
            raise ValueError(f"at most {MAX_ELEMENTS} elements supported")
        self.universe: tuple[str, ...] = tuple(elems)
        self.index = {e: i for i, e in enumerate(self.universe)}
        dom = {self.mask(X) for X in domain}
        self.domain_masks: tuple[int, ...] = tuple(sorted(dom, key=shortlex))
        if callable(mu):
            get = mu
        else:
            table = {frozenset(str(e) for e in k): v for k, v in mu.items()}
            get = table.get
        vals: dict[int, int] = {}
        for X in self.domain_masks:
            v = get(self.to_set(X))
            if v is None:
                raise ValueError(f"mu undefined on {set(self.to_set(X)) or '{}'}")
            vals[X] = self.mask(v)
        self.values: dict[int, int] = vals

    @classmethod
    def from_masks(cls, universe: Sequence[str], values: dict[int, int]) -> "ChoiceFunction":
        obj = cls.__new__(cls)
        obj.universe = tuple(universe)
        obj.index = {e: i for i, e in enumerate(obj.universe)}
        obj.domain_masks = tuple(sorted(values, key=shortlex))
        obj.values = dict(values)
        return obj

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def mask(self, xs: Iterable) -> int:
        m = 0
        for e in xs:
            e = str(e)
            if e not in self.index:
                raise ValueError(f"{e!r} is not in the universe")
            m |= 1 << self.index[e]
        return m

    def to_set(self, mask: int) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(mask))

    @property
    def domain(self) -> list[frozenset[str]]:
        return [self.to_set(X) for X in self.domain_masks]

    def mu(self, X: Iterable) -> frozenset[str]:
        m = self.mask(X)
        if m not in self.values:
            raise DomainClosureError({self.to_set(m)}, "not in the domain")
        return self.to_set(self.values[m])

    __call__ = mu

    def items(self):
        for X in self.domain_masks:
            yield self.to_set(X), self.to_set(self.values[X])

    def closed_under(self, op: str) -> bool:
        return closure_gap(self.domain_masks, op, self.full) is None

    def context(self) -> "Ctx":
        cols = np.array([[self.values[X] for X in self.domain_masks]], dtype=DTYPE)
        return Ctx(self.universe, self.domain_masks, cols)

    def restrict(self, domain_masks: Iterable[int]) -> "ChoiceFunction":
        return ChoiceFunction.from_masks(self.universe, {X: self.values[X] for X in domain_masks})

    def __eq__(self, other):
        return (isinstance(other, ChoiceFunction) and self.universe == other.universe
                and self.values == other.values)

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self.values.items()))))

    def show_set(self, mask: int) -> str:
        return "{" + ",".join(self.universe[i] for i in bits(mask)) + "}"

    def __repr__(self):
        body = ", ".join(f"{self.show_set(X)}:{self.show_set(v)}" for X, v in
                         ((X, self.values[X]) for X in self.domain_masks))
        return f"ChoiceFunction({body})"


def identity(universe: Iterable, domain=None) -> ChoiceFunction:
    u = sorted({str(e) for e in universe})
    if domain is None:
        domain = powerset(u)
    return ChoiceFunction(u, domain, lambda X: X)


def powerset(xs: Iterable, nonempty: bool = False) -> list[frozenset]:
    xs = sorted(xs)
    out = []
    for r in range(1 if nonempty else 0, len(xs) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(xs, r))
    return out


# -- domain closure -----------------------------------------------------------

CLOSURES = ("union", "inter", "diff", "singletons", "pairs")


def closure_gap(dom: Sequence[int], op: str, full: int):
    """First missing set for closure `op`, or None if closed."""
    have = set(dom)
    if op == "union":
        for X in dom:
            for Y in dom:
                if X | Y not in have:
                    return X | Y
    elif op == "inter":
        for X in dom:
            for Y in dom:
                if X & Y not in have:
                    return X & Y
    elif op == "diff":
        for X in dom:
            for Y in dom:
                if X & ~Y & full not in have:
                    return X & ~Y & full
    elif op == "singletons":
        for i in range(full.bit_length()):
            if (1 << i) not in have:
                return 1 << i
    elif op == "pairs":
        for X in dom:
            for a in bits(X):
                for b in bits(X):
                    if (1 << a) | (1 << b) not in have:
                        return (1 << a) | (1 << b)
    else:
        raise ValueError(f"unknown closure {op!r}")
    return None


# -- evaluation context -------------------------------------------------------


class Ctx:
    """Column view of one or many functions on the same domain."""

    def __init__(self, universe, dom: Sequence[int], cols: np.ndarray, known: int | None = None):
        self.universe = tuple(universe)
        self.n = len(self.universe)
        self.full = (1 << self.n) - 1
        self.dom = list(dom)
        self.col = {X: j for j, X in enumerate(self.dom)}
        self.cols = cols
        self.rows = cols.shape[0]
        self.known = len(self.dom) if known is None else known

    def m(self, X: int):
        j = self.col.get(X)
        if j is None or j >= self.known:
            raise DomainClosureError({self.show(X)}, "needed set missing from the domain")
        return self.cols[:, j]

    def comp(self, X):
        return self.full ^ X

    def true(self):
        return np.ones(self.rows, dtype=bool)

    def show(self, X: int) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(X))

    def elt(self, i: int) -> str:
        return self.universe[i]


def sub(a, b, full):
    return (a & (full ^ b)) == 0


def implies(p, fn):
    p = np.asarray(p)
    if not p.any():
        return np.ones(p.shape, dtype=bool)
    return ~p | np.asarray(fn())


@dataclass
class Instance:
    witness: tuple
    needs: tuple[int, ...]
    pred: Callable[[], np.ndarray]


@dataclass
class CheckResult:
    holds: bool
    witness: tuple | None = None
    prop: str = ""

    def __bool__(self):
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return f"{self.prop}: holds"
        return f"{self.prop}: fails at {show_witness(self.witness)}"


def show_witness(w) -> str:
    if w is None:
        return "-"
    parts = []
    for item in w:
        if isinstance(item, frozenset):
            parts.append("{" + ",".join(sorted(item)) + "}")
        else:
            parts.append(str(item))
    return "(" + ", ".join(parts) + ")"


# -- properties ---------------------------------------------------------------


class Prop:
    token = ""
    closure: tuple[str, ...] = ()
    vector = True

    def instances(self, c: Ctx) -> Iterator[Instance]:
        raise NotImplementedError

    def __str__(self):
        return self.token

    def __repr__(self):
        return f"<{self.token}>"

    def __eq__(self, other):
        return isinstance(other, Prop) and self.token == other.token

    def __hash__(self):
        return hash(self.token)


def _pairs(c: Ctx, ordered=True, distinct=True):
    for i, X in enumerate(c.dom):
        for j, Y in enumerate(c.dom):
            if distinct and i == j:
                continue
            if not ordered and j < i:
                continue
            yield X, Y


class _Simple(Prop):
    def __init__(self, token, closure, gen):
        self.token = token
        self.closure = closure
        self._gen = gen

    def instances(self, c):
        return self._gen(c)


def _mu_sub(c):
    for X in c.dom:
        yield Instance((c.show(X),), (X,), lambda X=X: sub(c.m(X), X, c.full))


def _mu_empty(c):
    for X in c.dom:
        if X:
            yield Instance((c.show(X),), (X,), lambda X=X: c.m(X) != 0)


def _or_like(kind):
    def gen(c):
        # the weak form is not symmetric in X and Y
        for X, Y in _pairs(c, ordered=kind == "w"):
            if kind == "disj" and X & Y:
                continue
            U = X | Y
            if kind == "w":
                f = lambda X=X, Y=Y, U=U: sub(c.m(U), c.m(X) | Y, c.full)
            else:
                f = lambda X=X, Y=Y, U=U: sub(c.m(U), c.m(X) | c.m(Y), c.full)
            yield Instance((c.show(X), c.show(Y)), (X, Y, U), f)
    return gen


def _mu_pr(c):
    # witness (Y, X) with X a proper subset of Y
    for Y in c.dom:
        for X in c.dom:
            if X != Y and X & ~Y == 0:
                yield Instance((c.show(Y), c.show(X)), (X, Y),
                               lambda X=X, Y=Y: sub(c.m(Y) & X, c.m(X), c.full))


def _mu_pr_prime(c):
    for X, Y in _pairs(c, distinct=False):
        I = X & Y
        yield Instance((c.show(X), c.show(Y)), (X, I),
                       lambda X=X, Y=Y, I=I: sub(c.m(X) & Y, c.m(I), c.full))


def _sub_pairs(c):
    # (X, Y) with Y a proper subset of X
    for X in c.dom:
        for Y in c.dom:
            if Y != X and Y & ~X == 0:
                yield X, Y


def _cut(c):
    for X, Y in _sub_pairs(c):
        yield Instance((c.show(X), c.show(Y)), (X, Y), lambda X=X, Y=Y: implies(
            sub(c.m(X), Y, c.full), lambda: sub(c.m(X), c.m(Y), c.full)))


def _cm(c):
    for X, Y in _sub_pairs(c):
        yield Instance((c.show(X), c.show(Y)), (X, Y), lambda X=X, Y=Y: implies(
            sub(c.m(X), Y, c.full), lambda: sub(c.m(Y), c.m(X), c.full)))


def _cum(c):
    for X, Y in _sub_pairs(c):
        yield Instance((c.show(X), c.show(Y)), (X, Y), lambda X=X, Y=Y: implies(
            sub(c.m(X), Y, c.full), lambda: c.m(Y) == c.m(X)))


def _resm(c):
    # f(X) <= A & B implies f(X & A) <= B; the tightest B is f(X)
    for X in c.dom:
        for A in c.dom:
            I = X & A
            yield Instance((c.show(X), c.show(A)), (X, I), lambda X=X, A=A, I=I: implies(
                sub(c.m(X), A, c.full), lambda: sub(c.m(I), c.m(X), c.full)))


def _subsup(c):
    for X, Y in _pairs(c, ordered=False):
        yield Instance((c.show(X), c.show(Y)), (X, Y), lambda X=X, Y=Y: implies(
            sub(c.m(X), Y, c.full) & sub(c.m(Y), X, c.full), lambda: c.m(X) == c.m(Y)))


def _ratm(c):
    for Y in c.dom:
        for X in c.dom:
            if X != Y and X & ~Y == 0:
                yield Instance((c.show(Y), c.show(X)), (X, Y), lambda X=X, Y=Y: implies(
                    (X & c.m(Y)) != 0, lambda: sub(c.m(X), c.m(Y) & X, c.full)))


def _eq(c):
    for Y in c.dom:
        for X in c.dom:
            if X != Y and X & ~Y == 0:
                yield Instance((c.show(Y), c.show(X)), (X, Y), lambda X=X, Y=Y: implies(
                    (X & c.m(Y)) != 0, lambda: c.m(X) == (c.m(Y) & X)))


def _eq_prime(c):
    for Y, X in _pairs(c, distinct=False):
        I = X & Y
        yield Instance((c.show(Y), c.show(X)), (Y, I), lambda X=X, Y=Y, I=I: implies(
            (c.m(Y) & X) != 0, lambda: c.m(I) == (c.m(Y) & X)))


def _par(c):
    for X, Y in _pairs(c, ordered=False):
        U = X | Y

        def f(X=X, Y=Y, U=U):
            v, a, b = c.m(U), c.m(X), c.m(Y)
            return (v == a) | (v == b) | (v == (a | b))
        yield Instance((c.show(X), c.show(Y)), (X, Y, U), f)


def _cup(prime):
    def gen(c):
        for X, Y in _pairs(c):
            U = X | Y
            if prime:
                concl = lambda X=X, U=U: c.m(U) == c.m(X)
            else:
                concl = lambda Y=Y, U=U: (c.m(U) & Y) == 0
            yield Instance((c.show(X), c.show(Y)), (X, Y, U), lambda X=X, Y=Y, concl=concl: implies(
                (c.m(Y) & X & c.comp(c.m(X))) != 0, concl))
    return gen


def _in(c):
    for X in c.dom:
        for a in bits(X):
            pairs = [(1 << a) | (1 << b) for b in bits(X)]

            def f(X=X, a=a, pairs=pairs):
                def some():
                    acc = np.zeros(c.rows, dtype=bool)
                    for P in pairs:
                        acc |= (c.m(P) >> a) & 1 == 0
                    return acc
                return implies((c.m(X) >> a) & 1 == 0, some)
            yield Instance((c.show(X), c.elt(a)), (X, *pairs), f)


class MuA(Prop):
    """Blocks listed best first; a set meeting two blocks keeps nothing
    from the worse one."""

    def __init__(self, blocks: Sequence[Iterable[str]]):
        self.blocks = tuple(tuple(sorted(str(e) for e in b)) for b in blocks)
        self.token = "muA:" + "<".join(",".join(b) for b in self.blocks)

    def block_masks(self, universe) -> list[int]:
        idx = {e: i for i, e in enumerate(universe)}
        out, seen = [], set()
        for b in self.blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            m = 0
            for e in b:
                if e not in idx:
                    raise ValueError(f"partition element {e!r} not in universe")
                if e in seen:
                    raise ValueError(f"element {e!r} in two blocks")
                seen.add(e)
                m |= 1 << idx[e]
            out.append(m)
        if seen != set(universe):
            raise ValueError("partition does not cover the universe")
        return out

    def instances(self, c):
        bm = self.block_masks(c.universe)
        for X in c.dom:
            for i, A in enumerate(bm):
                for B in bm[i + 1:]:
                    if X & A and X & B:
                        yield Instance((c.show(X), c.show(A), c.show(B)), (X,),
                                       lambda X=X, B=B: (c.m(X) & B) == 0)


class _Scalar(Prop):
    vector = False

    def instances(self, c):
        if c.rows != 1:
            raise NotImplementedError(f"{self.token} is checked one function at a time")
        cf = ChoiceFunction.from_masks(c.universe, {X: int(c.cols[0, j]) for j, X in enumerate(c.dom)})
        return self._instances(cf, c)


class HUProp(_Scalar):
    def __init__(self, anchored: bool):
        self.anchored = anchored
        self.token = "HUu" if anchored else "HU"

    def _instances(self, cf, c):
        vals = cf.values
        for U in cf.domain_masks:
            for u in bits(vals[U]):
                h = None
                for Y in cf.domain_masks:
                    if (Y >> u) & 1 and not (vals[Y] >> u) & 1:
                        if h is None:
                            h = hull_mask(cf, U, u if self.anchored else None)[-1]
                        ok = not sub(vals[Y], h, cf.full)
                        yield Instance((c.show(U), c.elt(u), c.show(Y)), (U, Y),
                                       lambda ok=ok: np.array([ok]))


class CumAlpha(_Scalar):
    def __init__(self, alpha: int, transitive: bool = False, bound: int = 6):
        if alpha < 0:
            raise ValueError("alpha must be a finite non-negative index")
        if alpha > bound:
            raise BoundExceeded(f"alpha={alpha} exceeds bound {bound}")
        self.alpha = alpha
        self.transitive = transitive
        self.token = f"muCum{'t' if transitive else ''}A:{alpha}"

    def _instances(self, cf, c):
        vals, full, dom = cf.values, cf.full, cf.domain_masks
        a = self.alpha
        for U in dom:
            mU = vals[U]
            # depth-first over sequences whose premise holds so far
            stack = [((), U, full)]
            while stack:
                seq, cover, inter = stack.pop()
                if len(seq) == a + 1:
                    last = seq[-1]
                    lhs = (last if self.transitive else inter) & mU
                    ok = sub(lhs, vals[last], full)
                    yield Instance((c.show(U),) + tuple(c.show(X) for X in seq), (U,) + seq,
                                   lambda ok=ok: np.array([ok]))
                    continue
                for X in reversed(dom):
                    if sub(vals[X], cover, full):
                        stack.append((seq + (X,), cover | X, inter & X))


PROPERTIES: dict[str, Prop] = {}


def _reg(p: Prop, *aliases):
    PROPERTIES[p.token] = p
    for a in aliases:
        PROPERTIES[a] = p


_reg(_Simple("muSub", (), _mu_sub))
_reg(_Simple("muEmpty", (), _mu_empty))
_reg(_Simple("muEmptyFin", (), _mu_empty))
_reg(_Simple("muPR", (), _mu_pr))
_reg(_Simple("muPR'", ("inter",), _mu_pr_prime), "muPRp")
_reg(_Simple("muOR", ("union",), _or_like("")))
_reg(_Simple("muwOR", ("union",), _or_like("w")))
_reg(_Simple("mudisjOR", ("union",), _or_like("disj")))
_reg(_Simple("muCUT", (), _cut))
_reg(_Simple("muCM", (), _cm))
_reg(_Simple("muResM", ("inter",), _resm))
_reg(_Simple("muCUM", (), _cum))
_reg(_Simple("muSubSup", (), _subsup))
_reg(_Simple("muEq", (), _eq))
_reg(_Simple("muEq'", ("inter",), _eq_prime), "muEqp")
_reg(_Simple("muPar", ("union",), _par))
_reg(_Simple("muCup", ("union",), _cup(False)))
_reg(_Simple("muCup'", ("union",), _cup(True)), "muCupp")
_reg(_Simple("muIn", ("pairs",), _in))
_reg(_Simple("muRatM", (), _ratm))
_reg(HUProp(False))
_reg(HUProp(True))


def prop(token) -> Prop:
    """Property by ASCII token, e.g. `muPR`, `muCumA:2`, `muA:a,b<c`."""
    if isinstance(token, Prop):
        return token
    if token in PROPERTIES:
        return PROPERTIES[token]
    name, _, arg = token.partition(":")
    if name in ("muCumA", "muCumtA") and arg:
        return CumAlpha(int(arg), transitive=name == "muCumtA")
    if name == "muA" and arg:
        return MuA([b.split(",") for b in arg.split("<")])
    raise KeyError(f"unknown property {token!r}")


def check(f: ChoiceFunction, p) -> CheckResult:
    p = prop(p)
    c = f.context()
    for inst in p.instances(c):
        if not bool(inst.pred()[0]):
            return CheckResult(False, inst.witness, p.token)
    return CheckResult(True, None, p.token)


def replay(f: ChoiceFunction, p, witness) -> bool:
    """Evaluate only the instance named by `witness`; True if it holds."""
    p = prop(p)
    for inst in p.instances(f.context()):
        if inst.witness == tuple(witness):
            return bool(inst.pred()[0])
    raise KeyError(f"no instance {witness} of {p.token}")


# -- hull ---------------------------------------------------------------------


@dataclass
class HullTrace:
    base: frozenset
    anchor: str | None
    stages: list[frozenset]

    @property
    def fixpoint(self) -> frozenset:
        return self.stages[-1]


def hull_mask(f: ChoiceFunction, U: int, u: int | None) -> list[int]:
    stages = [U]
    while True:
        h = stages[-1]
        nxt = h
        for X in f.domain_masks:
            if (u is None or (X >> u) & 1) and sub(f.values[X], h, f.full):
                nxt |= X
        if nxt == h:
            return stages
        stages.append(nxt)


def hull(f: ChoiceFunction, U: Iterable, u: str | None = None) -> HullTrace:
    Um = f.mask(U)
    if Um not in f.values:
        raise DomainClosureError({f.to_set(Um)}, "hull base must be in the domain")
    ui = None if u is None else f.index[str(u)]
    st = hull_mask(f, Um, ui)
    return HullTrace(f.to_set(Um), u, [f.to_set(s) for s in st])


def check_cum_alpha(f: ChoiceFunction, alpha: int, transitive: bool = False, bound: int = 6) -> CheckResult:
    return check(f, CumAlpha(alpha, transitive, bound))
