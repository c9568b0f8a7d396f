"""Finite-index subgroups: core quotients, Reidemeister-Schreier, the commutator subgroup."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .. import words as W
from ..presentations import Presentation
from ..words import Word
from ..zlinalg import IntMatrix, smith_normal_form
from .cosets import (DEFAULT_MAX_COSETS, CosetTable, coset_representatives, schreier_transversal_edges,
                     table_from_rows, todd_coxeter)
from .perms import Perm, PermGroup, evaluate_word, is_identity


class InfiniteAbelianization(ValueError):
    pass


@dataclass(frozen=True)
class QuotientRecord:
    """A finite quotient of ``source``: generator ``i`` maps to ``images[i]``."""

    source: Presentation
    images: tuple[Perm, ...]
    group: PermGroup
    order: int

    @classmethod
    def from_images(cls, source: Presentation, images: Sequence[Perm], degree: int) -> "QuotientRecord":
        g = PermGroup(degree, tuple(images))
        return cls(source, g.generators, g, g.order())

    def image(self, w: Sequence[int]) -> Perm:
        return evaluate_word(w, self.images, self.group.degree)

    def satisfies_relators(self) -> bool:
        return all(is_identity(self.image(r)) for r in self.source.relators)


def normal_core_quotient(p: Presentation, t: CosetTable) -> QuotientRecord:
    """The image of ``p`` acting on the cosets of ``t``: ``G / core(H)``."""
    t.require_complete()
    return QuotientRecord.from_images(p, t.permutations(), t.coset_count)


class SchreierRewriter:
    """Rewrites words of the subgroup into its Schreier generators.

    One generator per non-tree edge ``(coset, generator)`` of the transversal.
    """

    def __init__(self, t: CosetTable):
        t.require_complete()
        self.table = t
        self.reps = coset_representatives(t)
        tree = schreier_transversal_edges(t)
        self.edges: list[tuple[int, int]] = []
        self.index: dict[tuple[int, int], int] = {}
        for c in range(t.coset_count):
            for i in range(t.presentation.ngens):
                if (c, i) not in tree:
                    self.index[(c, i)] = len(self.edges)
                    self.edges.append((c, i))

    @property
    def rank(self) -> int:
        return len(self.edges)

    def generator_words(self) -> list[Word]:
        """Each Schreier generator as a word of the ambient group."""
        t = self.table
        return [W.multiply(self.reps[c], (i + 1,), W.inverse(self.reps[t.table[c][2 * i]]))
                for c, i in self.edges]

    def rewrite(self, w: Sequence[int], start: int = 0) -> Word:
        tab = self.table.table
        out = []
        c = start
        for x in w:
            if x > 0:
                k = self.index.get((c, x - 1))
                if k is not None:
                    out.append(k + 1)
                c = tab[c][2 * (x - 1)]
            else:
                d = tab[c][2 * (-x - 1) + 1]
                k = self.index.get((d, -x - 1))
                if k is not None:
                    out.append(-(k + 1))
                c = d
        return W.free_reduce(out)

    def presentation(self) -> Presentation:
        t = self.table
        p = t.presentation
        names = tuple(f"{p.generators[i]}_{c}" for c, i in self.edges)
        rels = [self.rewrite(r, c) for c in range(t.coset_count) for r in p.relators]
        return Presentation(names, tuple(rels), f"[{p.name or 'G'} : H] = {t.coset_count} subgroup")


def reidemeister_schreier(p: Presentation, t: CosetTable) -> Presentation:
    """Presentation of the subgroup of ``t`` on its Schreier generators.

    ``1 + index * (ngens - 1)`` generators and ``index * len(relators)``
    relators, less those rewriting to the identity.
    """
    return SchreierRewriter(t).presentation()


def abelianization_map(p: Presentation) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """``(moduli, images)``: ``H1 = prod Z/moduli[j]`` (0 = Z) and generator ``i`` maps to ``images[i]``."""
    m = IntMatrix.from_rows([W.exponent_sums(r, p.ngens) for r in p.relators], p.ngens)
    snf = smith_normal_form(m)
    d = list(snf.d) + [0] * (p.ngens - len(snf.d))
    keep = [j for j in range(p.ngens) if d[j] != 1]
    moduli = tuple(d[j] for j in keep)
    images = []
    for i in range(p.ngens):
        row = snf.v.entries[i]
        images.append(tuple(row[j] % d[j] if d[j] else row[j] for j in keep))
    return moduli, images


def commutator_subgroup_table(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Coset table of ``[G, G]``; refuses when ``H1`` is infinite.

    The kernel of ``G -> H1`` is generated by the Schreier generators of the
    regular action of ``H1``; those words are then enumerated by Todd-Coxeter
    and the index is checked against ``|H1|``.
    """
    moduli, images = abelianization_map(p)
    if any(m == 0 for m in moduli):
        raise InfiniteAbelianization(f"H1 of {p.name or 'the group'} is infinite")
    elements = list(product(*[range(m) for m in moduli]))
    pos = {e: k for k, e in enumerate(elements)}
    rows = []
    for e in elements:
        row = []
        for img in images:
            plus = tuple((a + b) % m for a, b, m in zip(e, img, moduli))
            minus = tuple((a - b) % m for a, b, m in zip(e, img, moduli))
            row += [pos[plus], pos[minus]]
        rows.append(row)
    from ._backend import kernels
    regular = table_from_rows(p, kernels.standardize(rows, 2 * p.ngens))
    kernel_gens = regular.subgroup_generators
    t = todd_coxeter(p, kernel_gens, max_cosets)
    if t.complete and t.coset_count != len(elements):
        raise AssertionError(f"commutator subgroup index {t.coset_count} != |H1| = {len(elements)}")
    return t
