"""Truncated finite-quotient spectra.

A quotient of order ``m`` is the action on the cosets of the trivial
subgroup's preimage, an index-``m`` subgroup; so low-index search to ``n``
followed by normal cores finds every quotient of order at most ``n``.
Quotients are grouped first by kernel, then by isomorphism type.
Isomorphism is decided exactly up to order 64 and by fingerprint above that;
two distinct kernels whose large quotients share a fingerprint stay separate
and are flagged ``unresolved``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .enumerator.cosets import CosetTable
from .enumerator.lowindex import DEFAULT_MAX_NODES, low_index_subgroups
from .enumerator.perms import PermGroup, element_order, mul, order_histogram
from .enumerator.subgroups import QuotientRecord, normal_core_quotient
from .presentations import Presentation
from .zlinalg import AbelianInvariants

EXACT_ISO_CAP = 64


class IsoCapExceeded(ValueError):
    pass


class IncompleteSpectrum(RuntimeError):
    pass


@dataclass(frozen=True)
class Fingerprint:
    order: int
    abelianization: AbelianInvariants
    derived_series_orders: tuple[int, ...]
    element_order_histogram: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if sum(c for _, c in self.element_order_histogram) != self.order:
            raise ValueError("histogram total differs from the order")

    @classmethod
    def of(cls, g: PermGroup) -> "Fingerprint":
        return cls(g.order(), g.abelian_invariants(), tuple(g.derived_series_orders()),
                   tuple(order_histogram(g).items()))

    @property
    def histogram(self) -> dict[int, int]:
        return dict(self.element_order_histogram)

    @property
    def is_perfect(self) -> bool:
        return self.abelianization.is_trivial

    def sort_key(self):
        return (self.order, self.abelianization.free_rank, self.abelianization.torsion,
                self.derived_series_orders, self.element_order_histogram)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "abelianization": self.abelianization.to_json(),
            "derived_series_orders": list(self.derived_series_orders),
            "element_order_histogram": {str(k): v for k, v in self.element_order_histogram},
        }


@dataclass(frozen=True)
class QuotientClass:
    fingerprint: Fingerprint
    count: int
    representative: QuotientRecord
    unresolved: bool = False

    @property
    def order(self) -> int:
        return self.fingerprint.order

    def to_json(self) -> dict:
        out = {"order": self.order, "fingerprint": self.fingerprint.to_json(), "count": self.count}
        if self.unresolved:
            out["unresolved"] = True
        return out


@dataclass(frozen=True)
class SpectrumReport:
    level: int
    quotients: tuple[QuotientClass, ...]
    complete: bool
    budget_exhausted: bool
    nodes: int = 0

    def orders(self) -> list[int]:
        return [q.order for q in self.quotients]

    def restrict(self, m: int) -> "SpectrumReport":
        return SpectrumReport(min(m, self.level), tuple(q for q in self.quotients if q.order <= m),
                              self.complete, self.budget_exhausted, self.nodes)

    def to_json(self) -> dict:
        return {"level": self.level, "complete": self.complete,
                "budget_exhausted": self.budget_exhausted,
                "quotients": [q.to_json() for q in self.quotients]}


# ---------------------------------------------------------------- isomorphism

class _Cayley:
    """Multiplication table of a small permutation group."""

    def __init__(self, g: PermGroup):
        self.elements = g.elements(cap=EXACT_ISO_CAP)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.n = len(self.elements)
        self.mul = [[self.index[mul(x, y)] for y in self.elements] for x in self.elements]
        self.orders = [element_order(x) for x in self.elements]

    def closure(self, gens: list[int]) -> list[int]:
        seen = {0}
        out = [0]
        for x in out:
            for s in gens:
                y = self.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out


def _small_generating_set(c: _Cayley, gens: list[int]) -> list[int]:
    chosen: list[int] = []
    size = 1
    for s in gens:
        grown = len(c.closure(chosen + [s]))
        if grown > size:
            chosen.append(s)
            size = grown
    if len(chosen) > 2:
        by_order = sorted(range(c.n), key=lambda i: -c.orders[i])
        for i in by_order:
            for j in by_order:
                if j > i and len(c.closure([i, j])) == c.n:
                    return [i, j]
    return chosen


def _isomorphic_tables(a: _Cayley, b: _Cayley, gens: list[int]) -> bool:
    # Level k checks consistency on the subgroup generated by gens[:k+1].
    levels = [a.closure(gens[:k + 1]) for k in range(len(gens))]
    images = [0] * len(gens)

    def consistent(k: int) -> bool:
        phi = {0: 0}
        for x in levels[k]:
            px = phi[x]
            for g in range(k + 1):
                y = a.mul[x][gens[g]]
                py = b.mul[px][images[g]]
                if y in phi:
                    if phi[y] != py:
                        return False
                else:
                    phi[y] = py
        return len(set(phi.values())) == len(phi)

    def extend(k: int) -> bool:
        if k == len(gens):
            return True
        want = a.orders[gens[k]]
        for cand in range(b.n):
            if b.orders[cand] != want:
                continue
            images[k] = cand
            if consistent(k) and extend(k + 1):
                return True
        return False

    return extend(0)


def exact_iso(a: PermGroup, b: PermGroup) -> bool:
    """Decide ``a ~= b`` for groups of order at most 64 by backtracking on generator images."""
    if a.order() > EXACT_ISO_CAP or b.order() > EXACT_ISO_CAP:
        raise IsoCapExceeded(f"exact isomorphism is limited to order {EXACT_ISO_CAP}")
    if a.order() != b.order():
        return False
    if order_histogram(a) != order_histogram(b):
        return False
    ca, cb = _Cayley(a), _Cayley(b)
    if ca.n == 1:
        return True
    gens = _small_generating_set(ca, [ca.index[s] for s in a.generators])
    return _isomorphic_tables(ca, cb, gens)


def same_kernel(q1: QuotientRecord, q2: QuotientRecord) -> bool:
    """True when two quotients of the same presentation have equal kernels."""
    if q1.order != q2.order:
        return False
    d1, d2 = q1.group.degree, q2.group.degree
    diag = [tuple(x) + tuple(d1 + y for y in z) for x, z in zip(q1.images, q2.images)]
    return PermGroup(d1 + d2, tuple(diag)).order() == q1.order


def _classes_match(f1: Fingerprint, g1: PermGroup, f2: Fingerprint, g2: PermGroup) -> Optional[bool]:
    """True / False when decided, None when only the fingerprints agree above the cap."""
    if f1 != f2:
        return False
    if f1.order <= EXACT_ISO_CAP:
        return exact_iso(g1, g2)
    return None


# ---------------------------------------------------------------- spectra

def _group_quotients(records: list[QuotientRecord], distinct_kernels: bool = False) -> list[QuotientClass]:
    kernels: list[QuotientRecord] = []
    by_order: dict[int, list[QuotientRecord]] = {}
    for r in records:
        seen = by_order.setdefault(r.order, [])
        if distinct_kernels or not any(same_kernel(r, k) for k in seen):
            seen.append(r)
            kernels.append(r)
    classes: list[list] = []  # [fingerprint, count, rep, unresolved]
    for r in kernels:
        fp = Fingerprint.of(r.group)
        unresolved = False
        for c in classes:
            verdict = _classes_match(fp, r.group, c[0], c[2].group)
            if verdict:
                c[1] += 1
                break
            if verdict is None:
                c[3] = unresolved = True
        else:
            classes.append([fp, 1, r, unresolved])
    out = [QuotientClass(fp, n, rep, unres) for fp, n, rep, unres in classes]
    out.sort(key=lambda q: (q.fingerprint.sort_key(), q.representative.images))
    return out


def finite_quotients(p: Presentation, n: int, max_nodes: int = DEFAULT_MAX_NODES,
                     method: str = "lowindex", workers: int = 1) -> SpectrumReport:
    """Every finite quotient of order at most ``n``, up to isomorphism.

    ``method="lowindex"`` takes normal cores of all subgroups of index at most
    ``n``; ``method="normal"`` searches normal subgroups directly, which is far
    cheaper for groups with many subgroups (free groups of rank 4).
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    if method not in ("lowindex", "normal"):
        raise ValueError(f"unknown method {method!r}")
    res = low_index_subgroups(p, n, max_nodes, normal_only=(method == "normal"), workers=workers)
    records = []
    for t in res.tables:
        q = normal_core_quotient(p, t)
        if q.order <= n:
            records.append(q)
    return SpectrumReport(n, tuple(_group_quotients(records, method == "normal")), res.complete, not res.complete, res.nodes)


@dataclass
class SpectrumComparison:
    status: str  # EQUAL / UNEQUAL / UNRESOLVED
    level: int
    witness: Optional[QuotientClass] = None
    witness_side: Optional[int] = None
    unresolved: list[int] = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.status == "EQUAL"

    def to_json(self) -> dict:
        out = {"status": self.status, "level": self.level}
        if self.witness is not None:
            out["witness"] = {"side": self.witness_side, **self.witness.to_json()}
        if self.unresolved:
            out["unresolved_orders"] = self.unresolved
        return out


def compare_reports(r1: SpectrumReport, r2: SpectrumReport) -> SpectrumComparison:
    if not (r1.complete and r2.complete):
        raise IncompleteSpectrum("both spectra must be complete to compare")
    level = min(r1.level, r2.level)
    a, b = r1.restrict(level).quotients, r2.restrict(level).quotients
    unresolved = set()
    missing: list[tuple[int, QuotientClass]] = []
    for side, xs, ys in ((1, a, b), (2, b, a)):
        for x in xs:
            found = False
            for y in ys:
                verdict = _classes_match(x.fingerprint, x.representative.group,
                                         y.fingerprint, y.representative.group)
                if verdict:
                    found = True
                    break
                if verdict is None:
                    unresolved.add(x.order)
                    found = True
            if not found:
                missing.append((side, x))
    if missing:
        side, w = min(missing, key=lambda sw: (sw[1].order, sw[0], sw[1].fingerprint.sort_key()))
        return SpectrumComparison("UNEQUAL", level, w, side, sorted(unresolved))
    if unresolved:
        return SpectrumComparison("UNRESOLVED", level, unresolved=sorted(unresolved))
    return SpectrumComparison("EQUAL", level)


def spectra_equal(p1: Presentation, p2: Presentation, n: int, max_nodes: int = DEFAULT_MAX_NODES,
                  method: str = "lowindex") -> SpectrumComparison:
    """Compare the sets of isomorphism types of quotients of order at most ``n``."""
    return compare_reports(finite_quotients(p1, n, max_nodes, method), finite_quotients(p2, n, max_nodes, method))


@dataclass(frozen=True)
class NoQuotientsCertificate:
    status: str  # VALID / REFUTED / BUDGET
    level: int
    nodes: int
    witness: Optional[CosetTable] = None

    @property
    def valid(self) -> bool:
        return self.status == "VALID"

    def to_json(self) -> dict:
        out = {"status": self.status, "level": self.level, "nodes": self.nodes}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def no_finite_quotients_certificate(p: Presentation, n: int,
                                    max_nodes: int = DEFAULT_MAX_NODES) -> NoQuotientsCertificate:
    """VALID when an exhaustive search finds no proper subgroup of index at most ``n``."""
    if n < 1:
        raise ValueError("level must be >= 1")
    res = low_index_subgroups(p, n, max_nodes)
    proper = [t for t in res.tables if t.coset_count > 1]
    if proper:
        return NoQuotientsCertificate("REFUTED", n, res.nodes, proper[0])
    if not res.complete:
        return NoQuotientsCertificate("BUDGET", n, res.nodes)
    return NoQuotientsCertificate("VALID", n, res.nodes)


def _prime_factors(k: int) -> set[int]:
    out, d = set(), 2
    while d * d <= k:
        while k % d == 0:
            out.add(d)
            k //= d
        d += 1
    if k > 1:
        out.add(k)
    return out


def quotient_order_primes(r: SpectrumReport) -> set[int]:
    """Primes occurring as element orders in the quotients of the report."""
    primes: set[int] = set()
    for q in r.quotients:
        for k in q.fingerprint.histogram:
            primes |= _prime_factors(k)
    return primes
