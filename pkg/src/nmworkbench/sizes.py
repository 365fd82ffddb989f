"""Coherent systems of sizes: per-set ideals of small subsets and the
rules relating them across sets."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable

from .choicefn import CheckResult, bits, shortlex, submasks


class SizeSystem:
    def __init__(self, universe: Iterable, ideals: dict):
        """`ideals` maps each domain member X to the family of small subsets of X."""
        self.universe = tuple(sorted({str(e) for e in universe}))
        self.index = {e: i for i, e in enumerate(self.universe)}
        small: dict[int, frozenset[int]] = {}
        for X, fam in ideals.items():
            xm = self.mask(X)
            if xm == 0:
                raise ValueError("the empty set is not a domain member")
            fm = frozenset(self.mask(A) for A in fam)
            for A in fm:
                if A & ~xm:
                    raise ValueError(f"{self.show(A)} is not a subset of {self.show(xm)}")
            small[xm] = fm
        self.small = small
        self.domain = tuple(sorted(small, key=shortlex))
        self._check_duality()

    @classmethod
    def from_masks(cls, universe, small: dict[int, Iterable[int]]) -> "SizeSystem":
        obj = cls.__new__(cls)
        obj.universe = tuple(universe)
        obj.index = {e: i for i, e in enumerate(obj.universe)}
        obj.small = {X: frozenset(v) for X, v in small.items()}
        obj.domain = tuple(sorted(obj.small, key=shortlex))
        return obj

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def mask(self, xs) -> int:
        if isinstance(xs, int):
            return xs
        m = 0
        for e in xs:
            m |= 1 << self.index[str(e)]
        return m

    def show(self, m: int) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(m))

    def I(self, X: int) -> frozenset[int]:
        return self.small[X]

    def F(self, X: int) -> frozenset[int]:
        return frozenset(A for A in submasks(X) if X & ~A in self.small[X])

    def Mplus(self, X: int) -> frozenset[int]:
        return frozenset(A for A in submasks(X) if A not in self.small[X])

    def is_small(self, A: int, X: int) -> bool:
        return A in self.small[X]

    def is_big(self, A: int, X: int) -> bool:
        return (X & ~A) in self.small[X]

    def _check_duality(self):
        for X in self.domain:
            F = self.F(X)
            for A in submasks(X):
                assert (A in F) == ((X & ~A) in self.small[X])

    def __repr__(self):
        def fam(v):
            return "{" + ",".join("{" + ",".join(sorted(self.show(A))) + "}" for A in sorted(v, key=shortlex)) + "}"
        body = ", ".join(f"{{{','.join(sorted(self.show(X)))}}}:{fam(self.small[X])}" for X in self.domain)
        return f"SizeSystem({body})"


def _sets(s: SizeSystem, *ms) -> tuple:
    return tuple(s.show(m) for m in ms)


def _opt(s):
    for X in s.domain:
        if 0 not in s.small[X]:
            return _sets(s, X)


def _im(s):
    for X in s.domain:
        for B in sorted(s.small[X], key=shortlex):
            for A in submasks(B):
                if A not in s.small[X]:
                    return _sets(s, X, B, A)


def _nested(s):
    for X in s.domain:
        for Y in s.domain:
            if X != Y and X & ~Y == 0:
                yield X, Y


def _emi(s):
    for X, Y in _nested(s):
        for A in sorted(s.small[X], key=shortlex):
            if A not in s.small[Y]:
                return _sets(s, X, Y, A)


def _emf(s):
    for X, Y in _nested(s):
        for A in sorted(s.F(Y), key=shortlex):
            if A & ~X == 0 and not s.is_big(A, X):
                return _sets(s, X, Y, A)


def _idisj(s):
    dom = set(s.domain)
    for X in s.domain:
        for Y in s.domain:
            if X & Y or (X | Y) not in dom:
                continue
            for A in sorted(s.small[X], key=shortlex):
                for B in sorted(s.small[Y], key=shortlex):
                    if (A | B) not in s.small[X | Y]:
                        return _sets(s, X, Y, A, B)


def _nstar(n):
    def rule(s):
        for X in s.domain:
            reach = {0}
            for _ in range(n):
                reach = {r | A for r in reach for A in s.small[X]}
            if X in reach:
                cover = _cover(s.small[X], X, n)
                return _sets(s, X, *cover)
    return rule


def _cover(fam, X, n):
    for combo in itertools.combinations_with_replacement(sorted(fam, key=shortlex), n):
        acc = 0
        for A in combo:
            acc |= A
        if acc == X:
            return combo
    return ()


def _mplus_n(n):
    def rule(s):
        # chains X1 <= ... <= Xn, each X_i big in X_{i+1}
        def extend(chain):
            top = chain[-1]
            if len(chain) == n:
                if chain[0] in s.small[top]:
                    return _sets(s, *chain)
                return None
            for Y in s.domain:
                if top & ~Y == 0 and s.is_big(top, Y):
                    r = extend(chain + (Y,))
                    if r:
                        return r
            return None
        for X in s.domain:
            for A in submasks(X):
                if n == 1:
                    continue
                if s.is_big(A, X):
                    r = extend((A, X))
                    if r:
                        return r
        return None
    return rule


def _or_n(n):
    def rule(s):
        dom = set(s.domain)
        for xs in itertools.combinations_with_replacement(s.domain, n - 1):
            X = 0
            for Xi in xs:
                X |= Xi
            if X not in dom:
                continue
            for B in range(s.full + 1):
                if all(s.is_small(Xi & ~B, Xi) for Xi in xs) and s.is_small(X & B, X):
                    return _sets(s, *xs, B)
    return rule


def _cm_n(n):
    def rule(s):
        dom = set(s.domain)
        for X in s.domain:
            bigs = [B for B in submasks(X) if s.is_big(B, X)]
            for bs in itertools.product(bigs, repeat=n - 1):
                Xp = X
                for B in bs[:-1]:
                    Xp &= B
                if Xp not in dom:
                    continue
                if s.is_small(Xp & bs[-1], Xp):
                    return _sets(s, X, *bs)
    return rule


def _chain3(s):
    for X, Y in _nested(s):
        for A in submasks(X):
            yield A, X, Y
    for X in s.domain:
        for A in submasks(X):
            yield A, X, X


def _momega(k):
    def rule(s):
        if k in (1, 2, 3):
            for A, X, Y in _chain3(s):
                if k == 1:
                    bad = s.is_big(A, X) and X not in s.small[Y] and A in s.small[Y]
                elif k == 2:
                    bad = A not in s.small[X] and s.is_big(X, Y) and A in s.small[Y]
                else:
                    bad = s.is_big(A, X) and s.is_big(X, Y) and not s.is_big(A, Y)
                if bad:
                    return _sets(s, A, X, Y)
            return None
        dom = set(s.domain)
        for X in s.domain:
            for A in sorted(s.small[X], key=shortlex):
                for B in sorted(s.small[X], key=shortlex):
                    Xr = X & ~B
                    if Xr not in dom:
                        continue
                    if (A & ~B) not in s.small[Xr]:
                        return _sets(s, A, B, X)
    return rule


def _mpp(k):
    def rule(s):
        dom = set(s.domain)
        if k == 3:
            for A, X, Y in _chain3(s):
                if A not in s.small[X] and X not in s.small[Y] and A in s.small[Y]:
                    return _sets(s, A, X, Y)
            return None
        for X in s.domain:
            for B in submasks(X):
                if s.is_big(B, X):
                    continue
                Xr = X & ~B
                if Xr not in dom:
                    continue
                for A in submasks(X):
                    if k == 1 and A in s.small[X] and (A & ~B) not in s.small[Xr]:
                        return _sets(s, A, B, X)
                    if k == 2 and s.is_big(A, X) and not s.is_big(A & ~B, Xr):
                        return _sets(s, A, B, X)
    return rule


def size_rule(name: str):
    base, _, arg = name.partition(":")
    fixed = {"Opt": _opt, "iM": _im, "eMI": _emi, "eMF": _emf, "Iudisj": _idisj}
    if base in fixed:
        return fixed[base]
    k = int(arg) if arg else None
    if k is None or k < 1:
        raise KeyError(f"rule {name!r} needs a positive parameter")
    if base == "nStar":
        return _nstar(k)
    if base == "Mplus":
        return _mplus_n(k)
    if base == "OR":
        return _or_n(k)
    if base == "CM":
        return _cm_n(k)
    if base == "Momega" and k <= 4:
        return _momega(k)
    if base == "Mpp" and k <= 3:
        return _mpp(k)
    raise KeyError(f"unknown size rule {name!r}")


SIZE_RULES = ("Opt", "iM", "eMI", "eMF", "Iudisj", "nStar:n", "Mplus:n", "OR:n", "CM:n",
              "Momega:1", "Momega:2", "Momega:3", "Momega:4", "Mpp:1", "Mpp:2", "Mpp:3")


def check_size_rule(s: SizeSystem, rule: str) -> CheckResult:
    w = size_rule(rule)(s)
    return CheckResult(w is None, w, rule)


# -- search over size systems -------------------------------------------------


@dataclass
class SizeSearchOutcome:
    system: SizeSystem | None
    failure: CheckResult | None = None
    exhausted: list[int] = field(default_factory=list)
    sampled: int = 0

    @property
    def found(self) -> bool:
        return self.system is not None


def _all_families(X: int):
    subs = submasks(X)
    for bitsel in range(1 << len(subs)):
        yield frozenset(A for i, A in enumerate(subs) if (bitsel >> i) & 1)


def search_size_counterexample(hyps: Iterable[str], concl: str, bound: int = 2,
                               exhaustive_max: int = 2, samples: int = 2000, seed: int = 0,
                               ideals_only: bool = False) -> SizeSearchOutcome:
    """Systems on P(U) minus the empty set, exhaustive up to `exhaustive_max` elements."""
    hyps = list(hyps)
    out = SizeSearchOutcome(None)
    letters = "abcdefgh"
    for n in range(1, bound + 1):
        universe = tuple(letters[:n])
        full = (1 << n) - 1
        dom = sorted(range(1, full + 1), key=shortlex)
        if n <= exhaustive_max:
            for fams in itertools.product(*(list(_all_families(X)) for X in dom)):
                if ideals_only and not all(_is_ideal(f, X) for f, X in zip(fams, dom)):
                    continue
                s = SizeSystem.from_masks(universe, dict(zip(dom, fams)))
                if all(check_size_rule(s, h).holds for h in hyps):
                    r = check_size_rule(s, concl)
                    if not r.holds:
                        out.system, out.failure = s, r
                        return out
            out.exhausted.append(n)
        else:
            rng = random.Random(f"{seed}:{n}")
            for _ in range(samples):
                out.sampled += 1
                fams = {}
                for X in dom:
                    gens = [A for A in submasks(X) if A != X and rng.random() < 0.3]
                    fams[X] = _ideal_from(gens, X) if ideals_only or rng.random() < 0.7 else frozenset(gens) | {0}
                s = SizeSystem.from_masks(universe, fams)
                if all(check_size_rule(s, h).holds for h in hyps):
                    r = check_size_rule(s, concl)
                    if not r.holds:
                        out.system, out.failure = s, r
                        return out
    return out


def _is_ideal(fam, X) -> bool:
    if 0 not in fam:
        return False
    return all(A in fam for B in fam for A in submasks(B)) and all(A | B in fam for A in fam for B in fam)


def _ideal_from(gens, X) -> frozenset[int]:
    fam = {0}
    for g in gens:
        fam.update(submasks(g))
    changed = True
    while changed:
        changed = False
        for A in list(fam):
            for B in list(fam):
                if (A | B) not in fam and (A | B) != X:
                    fam.add(A | B)
                    fam.update(submasks(A | B))
                    changed = True
    return frozenset(fam)
