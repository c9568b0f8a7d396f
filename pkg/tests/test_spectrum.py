import json
import random
from itertools import product

import pytest
from oracles import closure, hom_count, signature, two_generated_signatures

from gpairs.corpus import corpus, free, triangle
from gpairs.enumerator.cosets import todd_coxeter
from gpairs.enumerator.perms import PermGroup, from_cycles
from gpairs.presentations import Presentation, quotient_extend, random_tietze
from gpairs.spectrum import (EXACT_ISO_CAP, Fingerprint, IncompleteSpectrum, IsoCapExceeded, compare_reports,
                             exact_iso, finite_quotients, no_finite_quotients_certificate, quotient_order_primes,
                             same_kernel, spectra_equal)
from gpairs.words import multiply

Z = free(1)


def cyclic(n):
    return PermGroup(n, (from_cycles(n, tuple(range(n))),))


def regular(elements):
    """Right regular representation on an explicit element list."""
    index = {g: i for i, g in enumerate(elements)}
    return [tuple(index[tuple(g[s[i]] for i in range(len(g)))] for g in elements) for s in elements]


# ---- finite quotients

def test_cyclic_spectrum():
    r = finite_quotients(Z, 4)
    assert r.complete and r.orders() == [1, 2, 3, 4]
    assert all(q.count == 1 and q.fingerprint.abelianization.torsion in ((), (q.order,)) for q in r.quotients)
    assert all(q.representative.group.is_abelian() for q in r.quotients)


def test_higman_spectrum():
    r = finite_quotients(corpus("higman").presentation, 8)
    assert r.complete and r.orders() == [1]
    assert quotient_order_primes(r) == set()


def test_a5_spectrum():
    p = triangle(2, 3, 5)
    r = finite_quotients(p, 60)
    assert r.complete and r.orders() == [1, 60]
    a5 = r.quotients[1]
    assert a5.fingerprint.is_perfect and set(a5.fingerprint.histogram) <= {1, 2, 3, 5}
    reg = todd_coxeter(p, [], 100)
    assert len(closure(reg.permutations(), 60)) == 60  # oracle: the whole group acts regularly
    assert quotient_order_primes(r) == {2, 3, 5}


def test_triangle_233_contains_full_group():
    r = finite_quotients(triangle(2, 3, 3), 12)
    assert 12 in r.orders()
    assert r.orders() == [1, 3, 12]


def test_cyclic_primes():
    assert quotient_order_primes(finite_quotients(Z, 6)) == {2, 3, 5}


def test_free2_level6_against_two_generated_groups():
    r = finite_quotients(free(2), 6)
    got = {signature(q.representative.group.elements()) for q in r.quotients}
    assert got == two_generated_signatures(6)
    assert r.orders() == [1, 2, 3, 4, 4, 5, 6, 6]


def test_free2_methods_agree():
    a = finite_quotients(free(2), 6)
    b = finite_quotients(free(2), 6, method="normal")
    assert [q.fingerprint for q in a.quotients] == [q.fingerprint for q in b.quotients]
    assert [q.count for q in a.quotients] == [q.count for q in b.quotients]


def test_counts_are_distinct_kernels():
    # F2 -> S3 surjections: 18, modulo Aut(S3) = 6 automorphisms gives 3 kernels
    s3 = [from_cycles(3, (0, 1, 2)), from_cycles(3, (0, 1)), from_cycles(3, (1, 2)), from_cycles(3, (0, 2)),
          from_cycles(3, (0, 2, 1)), tuple(range(3))]
    onto = sum(1 for x, y in product(s3, repeat=2) if len(closure([x, y], 3)) == 6)
    r = finite_quotients(free(2), 6)
    [cls] = [q for q in r.quotients if q.order == 6 and not q.fingerprint.abelianization.torsion == (6,)]
    assert cls.count == onto // 6 == 3


@pytest.mark.parametrize("name,n,m", [("free(2)", 6, 4), ("weeks", 12, 6), ("triangle(3,3,4)", 12, 6)])
def test_restriction_is_monotone(name, n, m):
    p = corpus(name).presentation
    big, small = finite_quotients(p, n).restrict(m), finite_quotients(p, m)
    assert [q.fingerprint for q in big.quotients] == [q.fingerprint for q in small.quotients]
    assert [q.count for q in big.quotients] == [q.count for q in small.quotients]


@pytest.mark.parametrize("name,n", [("weeks", 10), ("gamma4", 10), ("triangle(3,3,4)", 12), ("fig8_knot", 6)])
def test_representatives_satisfy_relators(name, n):
    p = corpus(name).presentation
    for q in finite_quotients(p, n).quotients:
        assert q.representative.satisfies_relators()
        assert q.representative.group.order() == q.order


def test_spectrum_json_schema():
    d = json.loads(json.dumps(finite_quotients(Z, 3).to_json()))
    assert d["level"] == 3 and d["complete"] is True
    assert [q["order"] for q in d["quotients"]] == [1, 2, 3]
    assert set(d["quotients"][0]) == {"order", "fingerprint", "count"}


def test_budget_is_flagged():
    r = finite_quotients(free(2), 6, max_nodes=30)
    assert not r.complete and r.budget_exhausted
    with pytest.raises(IncompleteSpectrum):
        compare_reports(r, r)


def test_level_validation():
    with pytest.raises(ValueError):
        finite_quotients(Z, 0)
    with pytest.raises(ValueError):
        finite_quotients(Z, 3, method="magic")


# ---- fingerprints and isomorphism

def test_fingerprint_invariants():
    f = Fingerprint.of(cyclic(6))
    assert f.histogram == {1: 1, 2: 1, 3: 2, 6: 2}
    assert f.derived_series_orders == (6, 1)
    with pytest.raises(ValueError):
        Fingerprint(5, f.abelianization, (5, 1), ((1, 1),))


def test_exact_iso_examples():
    v4 = PermGroup(4, (from_cycles(4, (0, 1)), from_cycles(4, (2, 3))))
    assert not exact_iso(cyclic(4), v4)
    s3 = [p for p in closure([from_cycles(3, (0, 1)), from_cycles(3, (0, 1, 2))], 3)]
    r1 = PermGroup(6, tuple(regular(sorted(s3))))
    r2 = PermGroup(6, tuple(regular(sorted(s3, reverse=True))))
    assert r1.order() == r2.order() == 6 and exact_iso(r1, r2)
    triv = PermGroup(1, ((0,),))
    assert exact_iso(triv, PermGroup(3, ((0, 1, 2),)))


def test_exact_iso_abelian_pairs():
    c2c4 = PermGroup(6, (from_cycles(6, (0, 1)), from_cycles(6, (2, 3, 4, 5))))
    c2c2c2 = PermGroup(6, (from_cycles(6, (0, 1)), from_cycles(6, (2, 3)), from_cycles(6, (4, 5))))
    c8 = cyclic(8)
    assert not exact_iso(c2c4, c2c2c2) and not exact_iso(c2c4, c8)
    c4c4 = PermGroup(8, (from_cycles(8, (0, 1, 2, 3)), from_cycles(8, (4, 5, 6, 7))))
    assert exact_iso(c4c4, c4c4)


def test_exact_iso_hard_pair():
    # Z/4 x Z/4 and Z/4 : Z/4 share order and element-order histogram; both act regularly on 16 points
    sd = Presentation(("x", "y"), ((1, 1, 1, 1), (2, 2, 2, 2), (-2, 1, 2, 1)))
    ab = Presentation(("x", "y"), ((1, 1, 1, 1), (2, 2, 2, 2), (1, 2, -1, -2)))
    g1 = PermGroup(16, tuple(todd_coxeter(sd, [], 100).permutations()))
    g2 = PermGroup(16, tuple(todd_coxeter(ab, [], 100).permutations()))
    assert g1.order() == g2.order() == 16
    assert Fingerprint.of(g1).histogram == Fingerprint.of(g2).histogram
    assert not exact_iso(g1, g2) and exact_iso(g1, g1)


def test_exact_iso_cap():
    a5 = PermGroup(5, (from_cycles(5, (0, 1, 2)), from_cycles(5, (0, 1, 2, 3, 4))))
    assert a5.order() == 60 <= EXACT_ISO_CAP
    assert exact_iso(a5, a5)
    s5 = PermGroup(5, (from_cycles(5, (0, 1)), from_cycles(5, (0, 1, 2, 3, 4))))
    with pytest.raises(IsoCapExceeded):
        exact_iso(s5, s5)


def test_same_kernel():
    r = finite_quotients(free(2), 2)
    qs = [q.representative for q in r.quotients]
    assert same_kernel(qs[0], qs[0])
    res = finite_quotients(free(2), 2, method="normal")
    [c2] = [q for q in res.quotients if q.order == 2]
    assert c2.count == 3


# ---- comparison

def test_spectra_equal_examples():
    assert spectra_equal(Z, Z, 10).equal
    c = spectra_equal(Z, free(2), 6)
    assert c.status == "UNEQUAL" and c.witness_side == 2
    assert not c.witness.representative.group.is_abelian() or len(c.witness.fingerprint.abelianization.torsion) > 1
    assert c.witness.order == 4  # Z/2 x Z/2 is the smallest non-cyclic quotient
    # oracle: F2 surjects onto S3 (brute force over pairs) while Z cannot
    s3 = list(closure([from_cycles(3, (0, 1)), from_cycles(3, (0, 1, 2))], 3))
    assert sum(1 for x, y in product(s3, repeat=2) if len(closure([x, y], 3)) == 6) == 18
    assert all(len(closure([x], 3)) < 6 for x in s3)


def test_weeks_with_redundant_relator():
    w = corpus("weeks").presentation
    w2 = quotient_extend(w, [multiply(w.relators[0], (1,), w.relators[1], (-1,))])
    assert len(w2.relators) == 3
    assert spectra_equal(w, w2, 10).equal


@pytest.mark.parametrize("a,b", [("weeks", "gamma4"), ("triangle(3,3,4)", "free(2)"), ("Z", "free(2)")])
def test_comparison_reflexive_and_symmetric(a, b):
    def get(n):
        return Z if n == "Z" else corpus(n).presentation
    ra, rb = finite_quotients(get(a), 6), finite_quotients(get(b), 6)
    assert compare_reports(ra, ra).equal and compare_reports(rb, rb).equal
    ab, ba = compare_reports(ra, rb), compare_reports(rb, ra)
    assert ab.status == ba.status
    if ab.witness is not None:
        assert ab.witness.fingerprint == ba.witness.fingerprint
        assert ab.witness_side != ba.witness_side


@pytest.mark.parametrize("seed", range(5))
def test_comparison_tietze_invariant(seed):
    rng = random.Random(seed)
    for name in ["weeks", "triangle(3,3,4)", "gamma4"]:
        p = corpus(name).presentation
        q = random_tietze(p, rng, 4)
        assert compare_reports(finite_quotients(p, 6), finite_quotients(q, 6)).equal


# ---- no finite quotients

def test_no_quotients_examples():
    h = no_finite_quotients_certificate(corpus("higman").presentation, 8)
    assert h.valid and h.status == "VALID"
    z = no_finite_quotients_certificate(Z, 2)
    assert z.status == "REFUTED" and z.witness.coset_count == 2
    assert no_finite_quotients_certificate(triangle(3, 3, 4), 2).valid
    assert not no_finite_quotients_certificate(triangle(3, 3, 4), 3).valid


def test_no_quotients_budget_is_not_refutation():
    c = no_finite_quotients_certificate(corpus("higman").presentation, 8, max_nodes=50)
    assert c.status == "BUDGET" and c.witness is None


def test_triangle_334_level2_against_hom_oracle():
    # no nontrivial hom to Z/2 or S2: count assignments into S2 satisfying the relators
    s2 = [(0, 1), (1, 0)]
    assert hom_count(list(product(s2, repeat=3)), triangle(3, 3, 4).relators, 2) == 1


def test_certificate_json():
    d = no_finite_quotients_certificate(Z, 2).to_json()
    assert d["status"] == "REFUTED" and d["witness"]["index"] == 2
