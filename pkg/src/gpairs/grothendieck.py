"""Fibre products ``P < G x G`` over ``G -> Q = <X | R, S>`` and their certification.

``P`` is generated by the diagonal pairs ``(x, x)`` and the pairs ``(s, 1)``;
it is never turned into a presentation.  A certificate bundles the evidence
that ``Q`` has no finite quotients up to a level, that ``H2(Q) = 0``, and that
``P`` maps onto each finite quotient of ``G`` (via the normal closure of the
image of ``S``) and of ``G x G`` at a smaller level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words as W
from .enumerator.cosets import DEFAULT_MAX_COSETS, todd_coxeter
from .enumerator.lowindex import DEFAULT_MAX_NODES, low_index_subgroups
from .enumerator.perms import PermGroup, evaluate_word
from .enumerator.subgroups import QuotientRecord, normal_core_quotient
from .homology import H2Certificate, h2_certificate
from .presentations import Presentation, PresentationError, direct_product, quotient_extend, simplify
from .spectrum import Fingerprint, IncompleteSpectrum, NoQuotientsCertificate, no_finite_quotients_certificate
from .words import Word

UNBOUNDED_AT_BUDGET = "UNBOUNDED_AT_BUDGET"

CAVEAT = ("Q-hat = 1 evidenced to level {n} only. Full Grothendieck-pair status of P < G x G "
          "follows from the Platonov-Tavgen criterion once Q has no nontrivial finite quotient "
          "at all; injectivity of the induced map of profinite completions is not checked "
          "mechanically.")


class QNotFinite(RuntimeError):
    pass


class ChainError(ValueError):
    pass


def _check_words(g: Presentation, s: Sequence[Sequence[int]]) -> tuple[Word, ...]:
    out = []
    for w in s:
        w = W.free_reduce(w)
        if any(not 1 <= abs(x) <= g.ngens for x in w):
            raise PresentationError(f"word {w} uses an undeclared generator")
        out.append(w)
    return tuple(out)


@dataclass(frozen=True)
class FibreProductSpec:
    g: Presentation
    extra_relators: tuple[Word, ...]
    ambient: Presentation
    generators_of_P: tuple[Word, ...]

    @property
    def q(self) -> Presentation:
        return quotient_extend(self.g, self.extra_relators, f"{self.g.name or 'G'} / <<S>>")

    @property
    def diagonal_generators(self) -> tuple[Word, ...]:
        return self.generators_of_P[:self.g.ngens]

    @property
    def kernel_generators(self) -> tuple[Word, ...]:
        return self.generators_of_P[self.g.ngens:]

    def formatted_generators(self) -> list[str]:
        return [self.ambient.format(w) for w in self.generators_of_P]


def fibre_product(g: Presentation, s: Sequence[Sequence[int]]) -> FibreProductSpec:
    """Generators ``(x, x)`` for each ``x`` in ``X`` then ``(s, 1)`` for each ``s`` in ``S``, as ambient words."""
    s = _check_words(g, s)
    if not s or any(not w for w in s):
        raise ValueError("S must be a nonempty list of nontrivial words")
    n = g.ngens
    ambient = direct_product(g, g)
    diag = tuple((i + 1, n + i + 1) for i in range(n))
    return FibreProductSpec(g, s, ambient, diag + s)


def fibre_index(spec: FibreProductSpec, max_cosets: int = DEFAULT_MAX_COSETS):
    """``[G x G : P] = |Q|`` when Todd-Coxeter finishes, else ``UNBOUNDED_AT_BUDGET``."""
    t = todd_coxeter(spec.q, (), max_cosets)
    return t.coset_count if t.complete else UNBOUNDED_AT_BUDGET


# ---------------------------------------------------------------- surjectivity

@dataclass(frozen=True)
class QuotientCheck:
    quotient: QuotientRecord
    fingerprint: Fingerprint
    passed: bool
    closure_order: int

    def to_json(self) -> dict:
        return {"order": self.quotient.order, "passed": self.passed, "closure_order": self.closure_order,
                "images": [list(x) for x in self.quotient.images]}


@dataclass
class SurjectivityReport:
    level: int
    checks: list[QuotientCheck]
    product_level: int
    product_checks: list[QuotientCheck]
    complete: bool = True
    nodes: int = 0

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks) and all(c.passed for c in self.product_checks)

    @property
    def first_failure(self) -> Optional[QuotientCheck]:
        for c in self.checks + self.product_checks:
            if not c.passed:
                return c
        return None

    def to_json(self) -> dict:
        fail = self.first_failure
        return {
            "level": self.level,
            "complete": self.complete,
            "all_pass": self.all_pass,
            "quotients_checked": len(self.checks),
            "failed": sum(not c.passed for c in self.checks),
            "product_level": self.product_level,
            "product_quotients_checked": len(self.product_checks),
            "product_failed": sum(not c.passed for c in self.product_checks),
            "first_failure": None if fail is None else fail.to_json(),
        }


def _normal_quotients(p: Presentation, n: int, max_nodes: int, workers: int):
    res = low_index_subgroups(p, n, max_nodes, normal_only=True, workers=workers)
    return [normal_core_quotient(p, t) for t in res.tables], res


def _sorted(checks: list[QuotientCheck]) -> list[QuotientCheck]:
    return sorted(checks, key=lambda c: (c.quotient.order, c.fingerprint.sort_key(), c.quotient.images))


def default_product_level(spec: FibreProductSpec, n: int) -> int:
    """Level for the direct ``G x G`` checks: 2 beyond four ambient generators, else ``min(n, 4)``."""
    return min(n, 2 if spec.ambient.ngens > 4 else 4)


def surjectivity_check(spec: FibreProductSpec, n: int, max_nodes: int = DEFAULT_MAX_NODES,
                       product_level: Optional[int] = None, workers: int = 1) -> SurjectivityReport:
    """K-density on every quotient of ``G`` of order at most ``n``, plus direct checks on ``G x G``.

    A quotient ``q: G -> F`` passes when the normal closure of ``q(S)`` is all
    of ``F``.  An ambient quotient passes when the images of the generators of
    ``P`` generate it.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    g = spec.g
    quotients, res = _normal_quotients(g, n, max_nodes, workers)
    if not res.complete:
        raise IncompleteSpectrum(f"quotient search of G incomplete at level {n} after {res.nodes} nodes")
    checks = []
    for q in quotients:
        closure = q.group.normal_closure([q.image(s) for s in spec.kernel_generators]).order()
        checks.append(QuotientCheck(q, Fingerprint.of(q.group), closure == q.order, closure))

    m = default_product_level(spec, n) if product_level is None else product_level
    product_checks = []
    nodes = res.nodes
    if m >= 1:
        amb, ares = _normal_quotients(spec.ambient, m, max_nodes, workers)
        nodes += ares.nodes
        if not ares.complete:
            raise IncompleteSpectrum(f"quotient search of G x G incomplete at level {m}")
        for q in amb:
            img = PermGroup(q.group.degree, tuple(q.image(w) for w in spec.generators_of_P)).order()
            product_checks.append(QuotientCheck(q, Fingerprint.of(q.group), img == q.order, img))
    return SurjectivityReport(n, _sorted(checks), m, _sorted(product_checks), True, nodes)


# ---------------------------------------------------------------- certificates

@dataclass
class PTCertificate:
    status: str  # VALID / INVALID / BUDGET
    level: int
    q_triviality: NoQuotientsCertificate
    h2: H2Certificate
    fibre: FibreProductSpec
    surjectivity: Optional[SurjectivityReport]
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.status == "VALID"

    @property
    def q_triviality_level(self) -> int:
        """Largest level at which ``Q`` is known to have no proper subgroup."""
        qt = self.q_triviality
        if qt.status == "VALID":
            return qt.level
        if qt.status == "REFUTED":
            return qt.witness.coset_count - 1
        return 0

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "status": self.status,
            "q_trivial_to": self.q_triviality_level,
            "level": self.level,
            "q_triviality": self.q_triviality.to_json(),
            "h2": self.h2.to_json(),
            "fibre_generators": self.fibre.formatted_generators(),
            "surjectivity": None if self.surjectivity is None else self.surjectivity.to_json(),
            "failures": list(self.failures),
            "caveat": CAVEAT.format(n=self.q_triviality_level),
        }


def _h2(q: Presentation, tietze: bool) -> H2Certificate:
    cert = h2_certificate(q)
    if tietze and not cert.is_zero:
        other = h2_certificate(simplify(q))
        if other.is_zero:
            return other
    return cert


def pt_certify(g: Presentation, s: Sequence[Sequence[int]], n: int, max_nodes: int = DEFAULT_MAX_NODES,
               product_level: Optional[int] = None, workers: int = 1, tietze: bool = False) -> PTCertificate:
    """Check the hypotheses of the Platonov-Tavgen criterion for ``G -> Q = <X | R, S>`` up to level ``n``.

    ``Q`` is used verbatim; with ``tietze=True`` a simplified presentation of
    ``Q`` is also tried for the H2 certificate.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    fibre = fibre_product(g, s)
    q = fibre.q
    failures = []
    budget = False
    qt = no_finite_quotients_certificate(q, n, max_nodes)
    if qt.status == "REFUTED":
        failures.append(f"Q has a subgroup of index {qt.witness.coset_count}")
    elif qt.status == "BUDGET":
        budget = True
    h2 = _h2(q, tietze)
    if not h2.is_zero:
        failures.append(f"H2(Q) not certified zero ({h2.status.value}, rank bound {h2.upper_bound_rank})")
    try:
        surj = surjectivity_check(fibre, n, max_nodes, product_level, workers)
        if not surj.all_pass:
            f = surj.first_failure
            failures.append(f"P misses a quotient of order {f.quotient.order}")
    except IncompleteSpectrum:
        surj = None
        budget = True
    status = "INVALID" if failures else "BUDGET" if budget else "VALID"
    return PTCertificate(status, n, qt, h2, fibre, surj, failures)


@dataclass
class ChainStep:
    index: int
    q_triviality: NoQuotientsCertificate
    h2_next: H2Certificate
    inclusion: list[int]  # position of each generator of P_i among those of P_{i+1}

    @property
    def valid(self) -> bool:
        return self.q_triviality.valid and self.h2_next.is_zero

    def to_json(self) -> dict:
        return {"step": self.index, "valid": self.valid, "q_triviality": self.q_triviality.to_json(),
                "h2_next": self.h2_next.to_json(), "inclusion": self.inclusion}


@dataclass
class ChainReport:
    level: int
    steps: list[ChainStep]

    @property
    def valid(self) -> bool:
        return all(st.valid for st in self.steps)

    def to_json(self) -> dict:
        return {"valid": self.valid, "level": self.level, "steps": [st.to_json() for st in self.steps]}


def nested_chain_certify(g: Presentation, chain: Sequence[Sequence[Sequence[int]]], n: int,
                         max_nodes: int = DEFAULT_MAX_NODES, tietze: bool = False) -> ChainReport:
    """Per step ``i``: ``Q_i`` has no proper subgroup of index at most ``n`` and ``H2(Q_{i+1}) = 0``.

    Those are the hypotheses under which ``P_i -> P_{i+1}`` induces an
    epimorphism of profinite completions.  A one-element chain checks ``Q_1``
    against itself.
    """
    if not chain:
        raise ChainError("empty chain")
    sets = [_check_words(g, s) for s in chain]
    for i in range(len(sets) - 1):
        missing = [w for w in sets[i] if w not in sets[i + 1]]
        if missing:
            raise ChainError(f"S_{i + 1} is not contained in S_{i + 2}: {g.format(missing[0])} missing")
    specs = [fibre_product(g, s) for s in sets]
    pairs = list(zip(range(len(specs)), range(1, len(specs)))) or [(0, 0)]
    steps = []
    for i, j in pairs:
        gens_j = specs[j].generators_of_P
        inclusion = [gens_j.index(w) for w in specs[i].generators_of_P]
        qt = no_finite_quotients_certificate(specs[i].q, n, max_nodes)
        steps.append(ChainStep(i + 1, qt, _h2(specs[j].q, tietze), inclusion))
    return ChainReport(n, steps)


@dataclass
class DiagonalReport:
    q_order: int
    image_order: int
    ambient_order: int
    diagonal: bool

    @property
    def passed(self) -> bool:
        return self.diagonal and self.image_order == self.q_order

    def to_json(self) -> dict:
        return {"passed": self.passed, "q_order": self.q_order, "image_order": self.image_order,
                "ambient_order": self.ambient_order}


def diagonal_image_check(spec: FibreProductSpec, max_cosets: int = DEFAULT_MAX_COSETS) -> DiagonalReport:
    """The image of ``P`` in ``Q x Q`` (regular action on each side) is the diagonal copy of ``Q``."""
    q = spec.q
    t = todd_coxeter(q, (), max_cosets)
    if not t.complete:
        raise QNotFinite(f"Q did not close within {max_cosets} cosets")
    m = t.coset_count
    rho = t.permutations()
    amb_images = [rho[i] for i in range(q.ngens)] * 2  # ambient generator k acts through factor k mod n

    def pair(w: Sequence[int]):
        left = evaluate_word([x for x in w if abs(x) <= q.ngens], amb_images, m)
        right = evaluate_word([x for x in w if abs(x) > q.ngens], amb_images, m)
        return left, right

    gens = [pair(w) for w in spec.generators_of_P]
    diagonal = all(a == b for a, b in gens)
    image = PermGroup(2 * m, tuple(a + tuple(m + y for y in b) for a, b in gens))
    q_order = normal_core_quotient(q, t).order
    return DiagonalReport(q_order, image.order(), q_order * q_order, diagonal)
