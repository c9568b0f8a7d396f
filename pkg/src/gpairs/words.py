"""Free group words.

A word is a tuple of nonzero ints: ``k`` stands for generator ``k - 1`` and
``-k`` for its inverse.  The empty tuple is the identity.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Word = Tuple[int, ...]


def free_reduce(w: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*ws: Sequence[int]) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return free_reduce(out)


def power(w: Sequence[int], n: int) -> Word:
    base = tuple(w) if n >= 0 else inverse(w)
    return free_reduce(base * abs(n))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``u^-1 v^-1 u v``."""
    return multiply(inverse(u), inverse(v), u, v)


def conjugate(w: Sequence[int], by: Sequence[int]) -> Word:
    """``by^-1 w by``."""
    return multiply(inverse(by), w, by)


def exponent_sums(w: Sequence[int], ngens: int) -> list[int]:
    sums = [0] * ngens
    for x in w:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return sums


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def cyclic_class_key(w: Sequence[int]) -> Word:
    """Canonical representative of ``w`` up to rotation and inversion."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    return min(rotations(w) + rotations(inverse(w)))


def relabel(w: Sequence[int], mapping: Sequence[int]) -> Word:
    """Send generator ``i`` to generator ``mapping[i]`` (both 0-based)."""
    return tuple((mapping[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in w)


def substitute(w: Sequence[int], images: Sequence[Sequence[int]]) -> Word:
    """Apply the free group homomorphism sending generator ``i`` to ``images[i]``."""
    out: list[int] = []
    for x in w:
        img = images[abs(x) - 1]
        out.extend(img if x > 0 else inverse(img))
    return free_reduce(out)


def to_columns(w: Sequence[int]) -> list[int]:
    """Coset-table column indices: ``2*i`` for generator ``i``, ``2*i + 1`` for its inverse."""
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w]


def format_word(w: Sequence[int], names: Sequence[str]) -> str:
    """Render with run-length exponents, e.g. ``a^2 b^-1``; the identity is ``1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = (j - i) * (1 if w[i] > 0 else -1)
        name = names[abs(w[i]) - 1]
        parts.append(name if n == 1 else f"{name}^{n}")
        i = j
    return " ".join(parts)
