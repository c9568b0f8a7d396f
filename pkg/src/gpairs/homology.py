"""Homology of presented groups: H1, certificates for H2 = 0, coinvariants, 5-term checks.

H2 is only ever certified to vanish or bounded above; its exact value is not
determined by a finite presentation in any computable way here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import words as W
from .enumerator.cosets import CosetTable, IncompleteTableError
from .enumerator.subgroups import QuotientRecord, SchreierRewriter
from .presentations import Presentation, quotient_extend, simplify
from .zlinalg import (AbelianInvariants, IntMatrix, abelian_invariants_from_matrix, in_row_lattice,
                      integer_kernel)


class H2Status(str, Enum):
    ZERO_BY_BALANCED = "ZERO_BY_BALANCED"
    ZERO_BY_KERNEL = "ZERO_BY_KERNEL"
    UPPER_BOUND = "UPPER_BOUND"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class H2Certificate:
    status: H2Status
    upper_bound_rank: int = 0

    def __post_init__(self):
        if self.is_zero and self.upper_bound_rank:
            raise ValueError("a zero certificate carries upper bound 0")

    @property
    def is_zero(self) -> bool:
        return self.status in (H2Status.ZERO_BY_BALANCED, H2Status.ZERO_BY_KERNEL)

    def to_json(self) -> dict:
        return {"status": self.status.value, "upper_bound_rank": self.upper_bound_rank}


@dataclass(frozen=True)
class SuperperfectCertificate:
    h1_trivial: bool
    h2_cert: H2Certificate

    @property
    def valid(self) -> bool:
        return self.h1_trivial and self.h2_cert.is_zero

    def to_json(self) -> dict:
        return {"valid": self.valid, "h1_trivial": self.h1_trivial, "h2": self.h2_cert.to_json()}


def exponent_matrix(p: Presentation) -> IntMatrix:
    """Row ``r`` is the exponent-sum vector of relator ``r`` (the boundary map of the presentation complex)."""
    return IntMatrix.from_rows([W.exponent_sums(r, p.ngens) for r in p.relators], p.ngens)


def h1(p: Presentation) -> AbelianInvariants:
    return abelian_invariants_from_matrix(exponent_matrix(p), p.ngens)


def h2_certificate(p: Presentation) -> H2Certificate:
    """Certify ``H2 = 0`` or bound the rank of a group surjecting onto it.

    A balanced presentation with finite H1 has ``H2 = 0``.  Otherwise the
    kernel of the exponent matrix is H2 of the presentation complex, which
    surjects onto ``H2(G)``.
    """
    m = exponent_matrix(p)
    if len(p.relators) == p.ngens and h1(p).is_finite:
        return H2Certificate(H2Status.ZERO_BY_BALANCED)
    k = integer_kernel(m).nrows
    if k == 0:
        return H2Certificate(H2Status.ZERO_BY_KERNEL)
    return H2Certificate(H2Status.UPPER_BOUND, k)


def superperfect_certificate(p: Presentation) -> SuperperfectCertificate:
    return SuperperfectCertificate(h1(p).is_trivial, h2_certificate(p))


def _check_normal(t: CosetTable):
    if not t.complete:
        raise IncompleteTableError(f"coset table is incomplete ({t.status})")
    if not t.is_normal():
        raise ValueError("subgroup is not normal")


def _coinvariant_relations(g: Presentation, k_table: CosetTable) -> tuple[SchreierRewriter, IntMatrix]:
    """Relation rows for ``H0(G, H1(K))`` over the Schreier generators of ``K``."""
    rw = SchreierRewriter(k_table)
    m = rw.rank
    rows = [W.exponent_sums(rw.rewrite(r, c), m) for c in range(k_table.coset_count) for r in g.relators]
    gens = rw.generator_words()
    for x in range(1, g.ngens + 1):
        for j, s in enumerate(gens):
            conj = W.conjugate(s, (x,))  # x^-1 s x lies in K
            row = W.exponent_sums(rw.rewrite(conj), m)
            row[j] -= 1
            rows.append(row)
    return rw, IntMatrix.from_rows(rows, m)


def coinvariants(g: Presentation, k_table: CosetTable) -> AbelianInvariants:
    """``H0(G, H1(K))``: H1 of the normal subgroup ``K`` with the conjugation action killed."""
    _check_normal(k_table)
    rw, rel = _coinvariant_relations(g, k_table)
    return abelian_invariants_from_matrix(rel, rw.rank)


@dataclass
class CheckResult:
    name: str
    status: str  # PASS / FAIL / SKIPPED
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "FAIL"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class FiveTermReport:
    h1_g: AbelianInvariants
    h1_q: AbelianInvariants
    coinvariants: AbelianInvariants
    h2_q: H2Certificate
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "h1_g": self.h1_g.to_json(),
            "h1_q": self.h1_q.to_json(),
            "coinvariants": self.coinvariants.to_json(),
            "h2_q": self.h2_q.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }


def five_term_check(g: Presentation, k_table: CosetTable, q: QuotientRecord) -> FiveTermReport:
    """Check the right end of ``H2(Q) -> H0(G, H1 K) -> H1(G) -> H1(Q) -> 0``.

    (i) ``H1(Q)`` from the permutation group equals ``H1(G)`` modulo the image
    of ``H1(K)``; (ii) when H2 of the quotient presentation is certified zero,
    the coinvariants map injectively into ``H1(G)``.
    """
    _check_normal(k_table)
    if q.source != g or q.order != k_table.coset_count:
        raise ValueError("quotient record does not match G/K")
    rw, rel = _coinvariant_relations(g, k_table)
    coinv = abelian_invariants_from_matrix(rel, rw.rank)
    h1g = h1(g)
    kgens = rw.generator_words()
    emat = [W.exponent_sums(s, g.ngens) for s in kgens]
    rmat = exponent_matrix(g).tolist()
    # H1(G) / im H1(K)
    h1q_lin = abelian_invariants_from_matrix(IntMatrix.from_rows(rmat + emat, g.ngens), g.ngens)
    h1q_perm = q.group.abelian_invariants()
    report = FiveTermReport(h1g, h1q_perm, coinv, H2Certificate(H2Status.INAPPLICABLE))
    report.checks.append(CheckResult(
        "exact_at_H1", "PASS" if h1q_lin == h1q_perm else "FAIL",
        f"H1(G)/im = {h1q_lin}, H1(Q) = {h1q_perm}"))

    qpres = simplify(quotient_extend(g, kgens))
    h2q = h2_certificate(qpres)
    report.h2_q = h2q
    if not h2q.is_zero:
        report.checks.append(CheckResult("injective_coinvariants", "SKIPPED",
                                         f"H2(Q) not certified zero ({h2q.status.value})"))
        return report
    # coinvariants -> H1(G) injective  <=>  every y with y.E in rowspace(R) lies in the relation lattice
    m = rw.rank
    stacked = IntMatrix.from_rows(emat + rmat, g.ngens)
    ker = integer_kernel(stacked)
    injective = all(in_row_lattice(list(v[:m]), rel) for v in ker.entries)
    detail = f"coinvariants {coinv}"
    if injective and coinv.is_finite and h1g.is_finite and h1q_perm.is_finite:
        balance = coinv.order * h1q_perm.order == h1g.order
        injective = injective and balance
        detail += f"; |coinv| * |H1 Q| = {coinv.order * h1q_perm.order}, |H1 G| = {h1g.order}"
    report.checks.append(CheckResult("injective_coinvariants", "PASS" if injective else "FAIL", detail))
    return report
