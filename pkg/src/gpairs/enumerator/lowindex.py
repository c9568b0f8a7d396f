"""Low-index subgroups by backtracking over partial coset tables.

Each conjugacy class of subgroups of index at most ``max_index`` is reported
once, by its lexicographically least standard table.  The search tree can be
cut at a fixed depth and the subtrees explored independently (optionally in
worker processes); the merged result is sorted, so it does not depend on the
schedule.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .. import words as W
from ..presentations import Presentation
from ._backend import kernels
from .cosets import CosetTable, table_from_rows

DEFAULT_MAX_NODES = 10**8


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LowIndexResult:
    tables: tuple[CosetTable, ...]
    complete: bool
    nodes: int
    max_index: int
    normal_only: bool = False

    @property
    def status(self) -> str:
        return "COMPLETE" if self.complete else "BOUND_EXCEEDED"

    def __iter__(self):
        return iter(self.tables)

    def __len__(self):
        return len(self.tables)

    def indices(self) -> list[int]:
        return [t.coset_count for t in self.tables]


def relator_rotations_by_column(p: Presentation) -> list[list[list[int]]]:
    """Distinct rotations of every relator and its inverse, grouped by first column."""
    ncols = 2 * p.ngens
    seen = set()
    by_col: list[list[list[int]]] = [[] for _ in range(ncols)]
    for r in p.relators:
        for w in W.rotations(r) + W.rotations(W.inverse(r)):
            if w in seen or not w:
                continue
            seen.add(w)
            cols = W.to_columns(w)
            by_col[cols[0]].append(cols)
    for lst in by_col:
        lst.sort(key=lambda c: (len(c), c))
    return by_col


def _search(args):
    ncols, rel_by_col, max_index, max_nodes, prefix, split_depth, normal_only = args
    return kernels.low_index_search(ncols, rel_by_col, max_index, max_nodes, prefix, split_depth, normal_only)


def low_index_subgroups(p: Presentation, max_index: int, max_nodes: int = DEFAULT_MAX_NODES,
                        normal_only: bool = False, workers: int = 1, split_depth: int = 0) -> LowIndexResult:
    """All conjugacy classes of subgroups of index ``<= max_index``.

    With ``normal_only`` the search keeps only normal subgroups (each its own
    class), pruning much harder.  ``complete`` is False when the node budget
    ran out; the tables found so far are still returned.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    ncols = 2 * p.ngens
    rel_by_col = relator_rotations_by_column(p)
    if workers > 1 and not split_depth:
        split_depth = 3
    if split_depth:
        flats, nodes, exhausted, frontier = _search(
            (ncols, rel_by_col, max_index, max_nodes, [], split_depth, normal_only))
        jobs = [(ncols, rel_by_col, max_index, max_nodes, pre, 0, normal_only) for pre in frontier]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_search, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
        else:
            parts = [_search(j) for j in jobs]
        flats = list(flats)
        for f, nd, ex_, _ in parts:
            flats.extend(f)
            nodes += nd
            exhausted = exhausted or ex_
        exhausted = exhausted or nodes > max_nodes
    else:
        flats, nodes, exhausted, _ = _search(
            (ncols, rel_by_col, max_index, max_nodes, [], 0, normal_only))
    tables = []
    for flat in flats:
        n = len(flat) // ncols if ncols else 1
        rows = [list(flat[i * ncols:(i + 1) * ncols]) for i in range(n)]
        tables.append(table_from_rows(p, rows))
    tables.sort(key=CosetTable.sort_key)
    return LowIndexResult(tuple(tables), not exhausted, nodes, max_index, normal_only)


def normal_subgroups(p: Presentation, max_index: int, max_nodes: int = DEFAULT_MAX_NODES,
                     workers: int = 1) -> LowIndexResult:
    return low_index_subgroups(p, max_index, max_nodes, normal_only=True, workers=workers)
