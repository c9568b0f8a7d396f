"""Named end-to-end computations over the corpus, each ending in pass or fail."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .corpus import corpus, free
from .enumerator.cosets import DEFAULT_MAX_COSETS, todd_coxeter
from .enumerator.lowindex import DEFAULT_MAX_NODES
from .enumerator.perms import order_histogram
from .enumerator.subgroups import commutator_subgroup_table, normal_core_quotient, reidemeister_schreier
from .grothendieck import pt_certify
from .homology import H2Status, h1, h2_certificate
from .spectrum import finite_quotients, no_finite_quotients_certificate, quotient_order_primes
from .zlinalg import AbelianInvariants


@dataclass
class RecipeResult:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    seconds: float = 0.0
    budget_exhausted: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((label, bool(ok), detail))
        return ok

    def to_json(self) -> dict:
        # wall-clock time stays out of JSON so that output is reproducible
        return {"recipe": self.name, "passed": self.passed, "budget_exhausted": self.budget_exhausted,
                "checks": [{"check": c, "passed": ok, "detail": d} for c, ok, d in self.checks]}

    def text(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.seconds:.2f} s)"]
        for c, ok, d in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {c}" + (f": {d}" if d else ""))
        return "\n".join(lines)


@dataclass
class Budget:
    level: Optional[int] = None
    max_nodes: int = DEFAULT_MAX_NODES
    max_cosets: int = DEFAULT_MAX_COSETS
    workers: int = 1


WEEKS_H1 = AbelianInvariants(0, (5, 5))
HIGMAN_LEVEL = 8


def weeks_h1(r: RecipeResult, b: Budget):
    inv = h1(corpus("weeks").presentation)
    r.check("h1(weeks) = Z/5 x Z/5", inv == WEEKS_H1, str(inv))


def _commutator_crosscheck(r: RecipeResult, b: Budget, name: str, h1_order: int, target: AbelianInvariants):
    g = corpus(name).presentation
    inv = h1(g)
    r.check(f"h1({name}) = Z/{h1_order}", inv == AbelianInvariants(0, (h1_order,)), str(inv))
    cert = h2_certificate(g)
    r.check(f"h2_certificate({name}) = ZERO_BY_BALANCED", cert.status == H2Status.ZERO_BY_BALANCED,
            cert.status.value)
    t = commutator_subgroup_table(g, b.max_cosets)
    if not t.complete:
        r.budget_exhausted = True
        r.check("commutator subgroup enumeration", False, t.status)
        return
    r.check(f"[G, G] has index {h1_order}", t.coset_count == h1_order, str(t.coset_count))
    r.check("coset table closes on every relator", t.relators_close())
    sub = reidemeister_schreier(g, t)
    sinv = h1(sub)
    r.check(f"h1([G, G]) = {target}", sinv == target,
            f"{sinv} from {sub.ngens} generators, {len(sub.relators)} relators")


def weeks_commutator(r: RecipeResult, b: Budget):
    _commutator_crosscheck(r, b, "orbifold_5_2(3)", 3, WEEKS_H1)


def gamma4_crosscheck(r: RecipeResult, b: Budget):
    target = h1(corpus("gamma4").presentation)
    r.check("h1(gamma4) has order 45", target.order == 45, str(target))
    _commutator_crosscheck(r, b, "fig8_orbifold(4)", 4, target)


def higman_cert(r: RecipeResult, b: Budget):
    g = corpus("higman").presentation
    n = b.level or HIGMAN_LEVEL
    r.check("h1(higman) trivial", h1(g).is_trivial, str(h1(g)))
    cert = h2_certificate(g)
    r.check("h2_certificate(higman) = ZERO_BY_BALANCED", cert.status == H2Status.ZERO_BY_BALANCED,
            cert.status.value)
    nq = no_finite_quotients_certificate(g, n, b.max_nodes)
    r.budget_exhausted = nq.status == "BUDGET"
    r.check(f"no subgroup of index 2..{n}", nq.valid, f"{nq.status} after {nq.nodes} search nodes")


def pt_f4_higman(r: RecipeResult, b: Budget):
    n = b.level or HIGMAN_LEVEL
    hig = corpus("higman").presentation
    f4 = free(4)
    cert = pt_certify(f4, hig.relators, n, b.max_nodes, workers=b.workers)
    r.budget_exhausted = cert.status == "BUDGET"
    r.check(f"pt_certify(F4, Higman relators, {n}) VALID", cert.valid, "; ".join(cert.failures) or cert.status)
    r.check("fibre product has 8 generators", len(cert.fibre.generators_of_P) == 8,
            str(len(cert.fibre.generators_of_P)))
    s = cert.surjectivity
    if s is not None:
        failed = sum(not c.passed for c in s.checks)
        r.check(f"every quotient of F4 of order <= {n} passes", s.complete and failed == 0,
                f"{len(s.checks)} quotients, {failed} failed; {len(s.product_checks)} quotients of "
                f"F4 x F4 at level {s.product_level}")
    neg = pt_certify(free(2), [(2,), (1, 1)], 2, b.max_nodes)
    wit = neg.q_triviality.witness
    r.check("pt_certify(F2, {b, a^2}, 2) INVALID", neg.status == "INVALID", "; ".join(neg.failures))
    r.check("negative control has the Z/2 witness", wit is not None and wit.coset_count == 2
            and normal_core_quotient(neg.fibre.q, wit).order == 2)


def triangle_spectra(r: RecipeResult, b: Budget):
    t233 = corpus("triangle(2,3,3)").presentation
    rep = finite_quotients(t233, 12, b.max_nodes)
    r.check("triangle(2,3,3) spectrum complete at 12", rep.complete)
    r.check("triangle(2,3,3) has a quotient of order 12", 12 in rep.orders(), str(rep.orders()))
    tc = todd_coxeter(t233, (), b.max_cosets)
    r.check("triangle(2,3,3) enumerates to 12 cosets", tc.complete and tc.coset_count == 12,
            str(tc.coset_count))
    t235 = corpus("triangle(2,3,5)").presentation
    rep = finite_quotients(t235, 60, b.max_nodes)
    r.check("triangle(2,3,5) spectrum complete at 60", rep.complete)
    orders = rep.orders()
    r.check("triangle(2,3,5) quotients: trivial and one of order 60", orders == [1, 60], str(orders))
    big = [q for q in rep.quotients if q.order == 60]
    if big:
        fp = big[0].fingerprint
        r.check("order-60 quotient is perfect", fp.is_perfect, str(fp.abelianization))
        hist = order_histogram(big[0].representative.group)
        r.check("element orders lie in {1, 2, 3, 5}", set(hist) <= {1, 2, 3, 5}, str(hist))
    primes = quotient_order_primes(rep)
    r.check("quotient_order_primes = {2, 3, 5}", primes == {2, 3, 5}, str(sorted(primes)))


RECIPES: dict[str, Callable[[RecipeResult, Budget], None]] = {
    "weeks-h1": weeks_h1,
    "weeks-commutator": weeks_commutator,
    "gamma4-crosscheck": gamma4_crosscheck,
    "higman-cert": higman_cert,
    "pt-f4-higman": pt_f4_higman,
    "triangle-spectra": triangle_spectra,
}


def run_recipe(name: str, budget: Optional[Budget] = None) -> RecipeResult:
    if name not in RECIPES:
        raise KeyError(f"unknown recipe {name!r}; known: {', '.join(RECIPES)}")
    res = RecipeResult(name)
    t0 = time.perf_counter()
    RECIPES[name](res, budget or Budget())
    res.seconds = time.perf_counter() - t0
    return res
