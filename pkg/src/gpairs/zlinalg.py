"""Exact integer matrices: Smith normal form, left kernels, abelian invariants.

Entries are Python ints throughout, so coefficient growth never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        ents = tuple(tuple(int(x) for x in row) for row in self.entries)
        for row in ents:
            if len(row) != self.ncols:
                raise ValueError(f"row of length {len(row)} in matrix with {self.ncols} columns")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        return cls(tuple(rows), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.entries),
            other.ncols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(row[j] for row in self.entries) for j in range(self.ncols)),
                         self.nrows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def determinant(m: IntMatrix) -> int:
    """Fraction-free Bareiss elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SNFResult:
    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Return ``d, u, v`` with ``u @ m @ v == diag(d)`` and ``d[i] | d[i+1]``.

    Pivots on the smallest nonzero absolute value in the remaining block.
    """
    rows, cols = m.nrows, m.ncols
    a = m.tolist()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row[dst] -= q * row[src]
        ra, rs = a[dst], a[src]
        for k in range(cols):
            ra[k] -= q * rs[k]
        ua, us = u[dst], u[src]
        for k in range(rows):
            ua[k] -= q * us[k]

    def add_col(dst, src, q):  # col[dst] -= q * col[src]
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            p = a[t][t]
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    d = tuple(a[i][i] for i in range(min(rows, cols)))
    return SNFResult(d, IntMatrix(tuple(map(tuple, u)), rows), IntMatrix(tuple(map(tuple, v)), cols))


def _content_reduce(row: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in row:
        g = gcd(g, x)
    if g > 1:
        row = [x // g for x in row]
    # sign: first nonzero entry positive
    for x in row:
        if x:
            if x < 0:
                row = [-y for y in row]
            break
    return tuple(row)


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Lattice basis (as rows) of the left kernel ``{x : x @ m == 0}``."""
    snf = smith_normal_form(m)
    r = snf.rank
    rows = [_content_reduce(snf.u.entries[i]) for i in range(r, m.nrows)]
    return IntMatrix(tuple(rows), m.nrows)


def rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def in_row_lattice(vec: Sequence[int], m: IntMatrix) -> bool:
    """Whether ``vec`` is an integer combination of the rows of ``m``."""
    if len(vec) != m.ncols:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(m)
    # rowspace(m) = rowspace(diag(d) v^-1); test vec @ v against diag(d)
    w = [sum(vec[k] * snf.v.entries[k][j] for k in range(m.ncols)) for j in range(m.ncols)]
    for j, x in enumerate(w):
        dj = snf.d[j] if j < len(snf.d) else 0
        if dj == 0:
            if x:
                return False
        elif x % dj:
            return False
    return True


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/t1 + ... + Z/tk`` with ``t1 | t2 | ... | tk`` and every ``ti >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        if self.free_rank < 0 or any(t < 2 for t in tors):
            raise ValueError(f"invalid invariants {self.free_rank}, {tors}")
        if any(tors[i + 1] % tors[i] for i in range(len(tors) - 1)):
            raise ValueError(f"torsion {tors} is not a divisibility chain")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "AbelianInvariants":
        """From any list of cyclic orders (0 meaning Z), not necessarily a divisibility chain."""
        factors = list(factors)
        free = sum(1 for f in factors if f == 0)
        finite = [abs(f) for f in factors if f not in (0, 1, -1)]
        diag = IntMatrix(tuple(tuple(f if i == j else 0 for j in range(len(finite)))
                               for i, f in enumerate(finite)), len(finite))
        d = smith_normal_form(diag).d
        return cls(free, tuple(x for x in d if x > 1))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank == 1:
            parts.insert(0, "Z")
        elif self.free_rank > 1:
            parts.insert(0, f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


def abelian_invariants_from_matrix(m: IntMatrix, ambient_rank: int) -> AbelianInvariants:
    """Invariants of ``Z^ambient_rank / rowspace(m)``."""
    if m.ncols != ambient_rank:
        raise ValueError(f"matrix has {m.ncols} columns, ambient rank is {ambient_rank}")
    snf = smith_normal_form(m)
    return AbelianInvariants(ambient_rank - snf.rank, tuple(x for x in snf.d if x > 1))
