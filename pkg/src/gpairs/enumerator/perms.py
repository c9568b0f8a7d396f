"""Permutation groups: stabilizer chains, closures, element orders.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``; products
compose left to right, ``mul(p, q)[i] == q[p[i]]``, matching the right action
of coset tables.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from ..zlinalg import AbelianInvariants

Perm = tuple[int, ...]


class OrderCapExceeded(RuntimeError):
    pass


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def perm_power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inv(p), -k
    out = identity(len(p))
    base = p
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def cycle_lengths(p: Perm) -> list[int]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            out.append(n)
    return out


def element_order(p: Perm) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), cycle_lengths(p), 1)


def from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    img = list(range(n))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            img[x] = cyc[(k + 1) % len(cyc)]
    return tuple(img)


def evaluate_word(w: Sequence[int], images: Sequence[Perm], degree: int) -> Perm:
    """Image of a word under generator images (letters as in ``gpairs.words``)."""
    out = identity(degree)
    invs: dict[int, Perm] = {}
    for x in w:
        g = abs(x) - 1
        if x > 0:
            out = mul(out, images[g])
        else:
            if g not in invs:
                invs[g] = inv(images[g])
            out = mul(out, invs[g])
    return out


class _Level:
    __slots__ = ("point", "gens", "trans")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[Perm] = []
        self.trans: dict[int, Perm] = {point: identity(degree)}


class StabilizerChain:
    """Deterministic Schreier-Sims.  Level ``i`` fixes the first ``i`` base points;
    its generators are those stored at levels ``>= i``.
    """

    def __init__(self, degree: int, gens: Iterable[Perm] = ()):
        self.degree = degree
        self.levels: list[_Level] = []
        for g in gens:
            self.insert(g)

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            x = g[lv.point]
            u = lv.trans.get(x)
            if u is None:
                return g, j
            g = mul(g, inv(u))
        return g, len(self.levels)

    def contains(self, g: Perm) -> bool:
        h, _ = self.strip(g)
        return is_identity(h)

    def _gens_from(self, i: int) -> list[Perm]:
        out = []
        for lv in self.levels[i:]:
            out.extend(lv.gens)
        return out

    def insert(self, g: Perm, start: int = 0):
        h, j = self.strip(g, start)
        if is_identity(h):
            return
        if j == len(self.levels):
            point = next(i for i in range(self.degree) if h[i] != i)
            self.levels.append(_Level(point, self.degree))
        self.levels[j].gens.append(h)
        # orbits of levels <= j may grow; close them and sift the new Schreier generators
        for i in range(j, -1, -1):
            self._close_level(i)

    def _close_level(self, i: int):
        lv = self.levels[i]
        gens = self._gens_from(i)
        queue = list(lv.trans)
        k = 0
        while k < len(queue):
            x = queue[k]
            k += 1
            ux = lv.trans[x]
            for s in gens:
                y = s[x]
                if y not in lv.trans:
                    lv.trans[y] = mul(ux, s)
                    queue.append(y)
        # Schreier generators u_x s u_{xs}^-1 must lie in the next level's group
        for x, ux in list(lv.trans.items()):
            for s in self._gens_from(i):
                t = mul(mul(ux, s), inv(lv.trans[s[x]]))
                if not is_identity(t):
                    h, _ = self.strip(t, i + 1)
                    if not is_identity(h):
                        self.insert(t, i + 1)

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.trans)
        return n


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if len(g) != self.degree or sorted(g) != list(range(self.degree)):
                raise ValueError(f"{g} is not a permutation of degree {self.degree}")
        object.__setattr__(self, "generators", gens)

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.degree, self.generators)

    def order(self) -> int:
        return self.chain.order()

    def contains(self, g: Perm) -> bool:
        return self.chain.contains(tuple(g))

    def identity(self) -> Perm:
        return identity(self.degree)

    def subgroup(self, gens: Iterable[Perm]) -> "PermGroup":
        return PermGroup(self.degree, tuple(gens))

    def elements(self, cap: int = 100_000) -> list[Perm]:
        """All elements in breadth-first order from the identity."""
        if self.order() > cap:
            raise OrderCapExceeded(f"group order {self.order()} exceeds cap {cap}")
        e = self.identity()
        seen = {e}
        out = [e]
        for g in out:
            for s in self.generators:
                h = mul(g, s)
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        return out

    def normal_closure(self, perms: Iterable[Perm]) -> "PermGroup":
        """Smallest normal subgroup of ``self`` containing ``perms``."""
        gens = [tuple(p) for p in perms if not is_identity(tuple(p))]
        chain = StabilizerChain(self.degree, gens)
        k = 0
        while k < len(gens):
            g = gens[k]
            k += 1
            for x in self.generators:
                c = mul(mul(inv(x), g), x)
                if not chain.contains(c):
                    chain.insert(c)
                    gens.append(c)
        sub = PermGroup(self.degree, tuple(gens))
        sub.__dict__["chain"] = chain
        return sub

    def derived_subgroup(self) -> "PermGroup":
        comms = []
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                comms.append(mul(mul(inv(a), inv(b)), mul(a, b)))
        return self.normal_closure(comms)

    def derived_series_orders(self, max_len: int = 32) -> list[int]:
        """Orders of G, G', G'', ... stopping once the series stabilises."""
        orders = [self.order()]
        g = self
        for _ in range(max_len):
            d = g.derived_subgroup()
            o = d.order()
            if o == orders[-1]:
                break
            orders.append(o)
            g = d
            if o == 1:
                break
        return orders

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(mul(a, b) == mul(b, a) for a in gs for b in gs)

    def is_perfect(self) -> bool:
        return self.derived_subgroup().order() == self.order()

    def abelian_invariants(self) -> AbelianInvariants:
        """Invariants of ``G / G'`` from element orders in the quotient."""
        derived = self.derived_subgroup()
        reps = [self.identity()]

        def coset_of(g):
            for k, r in enumerate(reps):
                if derived.contains(mul(g, inv(r))):
                    return k
            return None

        k = 0
        while k < len(reps):
            r = reps[k]
            k += 1
            for s in self.generators:
                h = mul(r, s)
                if coset_of(h) is None:
                    reps.append(h)
        orders = []
        for r in reps:
            o, p = 1, r
            while not derived.contains(p):
                p = mul(p, r)
                o += 1
            orders.append(o)
        return invariants_from_order_counts(orders)


def invariants_from_order_counts(orders: Sequence[int]) -> AbelianInvariants:
    """Invariant factors of a finite abelian group from the orders of all its elements."""
    n = len(orders)
    factors = []
    m = n
    p = 2
    primes = []
    while m > 1:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    for p in primes:
        # c[k] = #{a : a^(p^k) = 1} = p^(sum_i min(k, e_i))
        logs = [0]
        k = 1
        while True:
            pk = p ** k
            c = sum(1 for o in orders if pk % o == 0)
            e = 0
            while c > 1:
                c //= p
                e += 1
            logs.append(e)
            if logs[-1] == logs[-2]:
                break
            k += 1
        # number of cyclic factors of exponent >= k is logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        for k in range(len(at_least)):
            exactly = at_least[k] - (at_least[k + 1] if k + 1 < len(at_least) else 0)
            factors.extend([p ** (k + 1)] * exactly)
    return AbelianInvariants.from_factors(factors)


def order_histogram(g: PermGroup, cap: int = 100_000) -> dict[int, int]:
    """Map element order -> number of elements of that order."""
    return dict(sorted(Counter(element_order(x) for x in g.elements(cap)).items()))


def image_group(images: Sequence[Perm], degree: Optional[int] = None) -> PermGroup:
    if degree is None:
        degree = len(images[0]) if images else 0
    return PermGroup(degree, tuple(images))


def perm_order(g: PermGroup) -> int:
    return g.order()


element_order_histogram = order_histogram
