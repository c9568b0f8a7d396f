"""Coset tables and Todd-Coxeter enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .. import words as W
from ..presentations import Presentation
from ..words import Word
from ._backend import kernels

COMPLETE = "COMPLETE"
BOUND_EXCEEDED = "BOUND_EXCEEDED"

DEFAULT_MAX_COSETS = 200_000


class IncompleteTableError(ValueError):
    pass


@dataclass(frozen=True)
class CosetTable:
    """Right action of a presented group on the cosets of a subgroup.

    ``table[c][2*i]`` is ``c`` times generator ``i``, ``table[c][2*i+1]`` is ``c``
    times its inverse.  Coset 0 is the subgroup itself; rows are in standard
    order (numbered by first appearance).
    """

    presentation: Presentation
    subgroup_generators: tuple[Word, ...]
    table: tuple[tuple[int, ...], ...]
    complete: bool = True
    status: str = COMPLETE
    cosets_defined: int = 0

    @property
    def coset_count(self) -> int:
        return len(self.table)

    index = coset_count

    def require_complete(self):
        if not self.complete:
            raise IncompleteTableError(f"coset table is incomplete ({self.status})")

    def act(self, coset: int, w: Sequence[int]) -> int:
        for col in W.to_columns(w):
            coset = self.table[coset][col]
        return coset

    def permutation(self, gen: int) -> tuple[int, ...]:
        """Image of generator ``gen`` (0-based) as a permutation of the cosets."""
        return tuple(row[2 * gen] for row in self.table)

    def permutations(self) -> list[tuple[int, ...]]:
        return [self.permutation(i) for i in range(self.presentation.ngens)]

    def relators_close(self) -> bool:
        """Every relator fixes every coset and every subgroup generator fixes coset 0."""
        if not self.complete:
            return False
        n = self.coset_count
        for c, row in enumerate(self.table):
            for x, y in enumerate(row):
                if not 0 <= y < n or self.table[y][x ^ 1] != c:
                    return False
        for r in self.presentation.relators:
            for c in range(n):
                if self.act(c, r) != c:
                    return False
        return all(self.act(0, w) == 0 for w in self.subgroup_generators)

    def is_normal(self) -> bool:
        """The subgroup is normal iff every Schreier generator fixes every coset."""
        self.require_complete()
        return all(self.act(c, w) == c for w in schreier_generators(self) for c in range(self.coset_count))

    def flat(self) -> tuple[int, ...]:
        return tuple(y for row in self.table for y in row)

    def sort_key(self):
        return (self.coset_count, self.flat())

    def to_json(self) -> dict:
        return {
            "index": self.coset_count if self.complete else None,
            "table": [list(r) for r in self.table],
            "subgroup": [self.presentation.format(w) for w in self.subgroup_generators],
            "status": self.status,
        }


def coset_representatives(t: CosetTable) -> list[Word]:
    """Shortest-first spanning-tree words: ``rep[c]`` takes coset 0 to ``c``."""
    t.require_complete()
    ngens = t.presentation.ngens
    reps: list[Optional[Word]] = [None] * t.coset_count
    reps[0] = ()
    queue = [0]
    for c in queue:
        for col in range(2 * ngens):
            d = t.table[c][col]
            if reps[d] is None:
                letter = col // 2 + 1
                reps[d] = reps[c] + ((letter if col % 2 == 0 else -letter),)
                queue.append(d)
    return reps  # type: ignore[return-value]


def schreier_transversal_edges(t: CosetTable) -> set[tuple[int, int]]:
    """Tree edges ``(c, gen)`` (positive generators) of the transversal from ``coset_representatives``."""
    reps = coset_representatives(t)
    tree = set()
    for c, w in enumerate(reps):
        if not w:
            continue
        prev = t.act(0, w[:-1])
        x = w[-1]
        if x > 0:
            tree.add((prev, x - 1))
        else:
            tree.add((c, -x - 1))
    return tree


def schreier_generators(t: CosetTable) -> list[Word]:
    """Free generators ``rep(c) x rep(c x)^-1`` of the subgroup, one per non-tree edge."""
    reps = coset_representatives(t)
    tree = schreier_transversal_edges(t)
    gens = []
    for c in range(t.coset_count):
        for i in range(t.presentation.ngens):
            if (c, i) in tree:
                continue
            d = t.table[c][2 * i]
            gens.append(W.multiply(reps[c], (i + 1,), W.inverse(reps[d])))
    return gens


def todd_coxeter(p: Presentation, subgroup: Sequence[Sequence[int]] = (),
                 max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of ``<subgroup>`` in ``p``.

    Returns an incomplete table with status ``BOUND_EXCEEDED`` when ``max_cosets``
    rows are not enough; this says nothing about the group itself.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    subgroup = tuple(W.free_reduce(w) for w in subgroup)
    ncols = 2 * p.ngens
    rels = [W.to_columns(r) for r in p.relators]
    sub = [W.to_columns(w) for w in subgroup if w]
    table, defined = kernels.coset_enumerate(ncols, rels, sub, max_cosets)
    if table is None:
        return CosetTable(p, subgroup, (), complete=False, status=BOUND_EXCEEDED, cosets_defined=defined)
    return CosetTable(p, subgroup, tuple(tuple(r) for r in table), cosets_defined=defined)


def table_from_rows(p: Presentation, rows: Sequence[Sequence[int]],
                    subgroup: Optional[Sequence[Word]] = None) -> CosetTable:
    """Wrap a complete standard table; subgroup generators default to Schreier generators."""
    t = CosetTable(p, (), tuple(tuple(r) for r in rows))
    if subgroup is None:
        subgroup = schreier_generators(t)
    return CosetTable(p, tuple(subgroup), t.table)
