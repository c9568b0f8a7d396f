"""Named groups.

Fixed presentations live in ``gpairs/data/*.grp``; families (free groups,
triangle groups, Dehn-filled knot orbifolds) are built from them on demand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .presentations import Presentation, parse_file, quotient_extend
from .words import power

# Largest spectrum level that is routine for each entry (low-index search in seconds).
SPECTRUM_LEVELS = {
    "free": 6,
    "triangle": 12,
    "weeks": 12,
    "gamma4": 12,
    "higman": 8,
    "fig8_knot": 10,
    "knot_5_2": 10,
    "fig8_orbifold": 12,
    "orbifold_5_2": 12,
}

FILE_ENTRIES = ("weeks", "gamma4", "higman", "fig8_knot", "knot_5_2")


class UnknownGroup(KeyError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    presentation: Presentation
    torsion_primes_pi0: Optional[frozenset] = None
    provenance: str = ""
    spectrum_level: int = 6


def data_text(filename: str) -> str:
    return resources.files("gpairs").joinpath("data", filename).read_text(encoding="utf-8")


def _from_file(key: str) -> CorpusEntry:
    doc = parse_file(data_text(f"{key}.grp"))
    return CorpusEntry(doc.presentation, doc.pi0, " ".join(doc.comments), SPECTRUM_LEVELS[key])


def _prime_divisors(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def free(n: int) -> Presentation:
    if n < 0:
        raise ValueError("rank must be nonnegative")
    letters = "abcdefghijklmnopqrstuvwxy"
    names = tuple(letters[i] if n <= len(letters) else f"x{i + 1}" for i in range(n))
    return Presentation(names, (), f"free({n})")


def triangle(p: int, q: int, r: int) -> Presentation:
    """``<a, b, c | a^p, b^q, c^r, abc>``."""
    return Presentation(("a", "b", "c"), ((1,) * p, (2,) * q, (3,) * r, (1, 2, 3)), f"triangle({p},{q},{r})")


def dehn_filled_orbifold(knot: Presentation, n: int, name: str) -> Presentation:
    """Kill the n-th power of the meridian (first generator) of a knot group."""
    return quotient_extend(knot, [power((1,), n)], name)


def corpus(name: str) -> CorpusEntry:
    key = name.strip().replace(" ", "")
    m = re.fullmatch(r"([a-z0-9_]+?)(?:\(([\d,]*)\))?", key)
    if not m:
        raise UnknownGroup(name)
    base, args = m.group(1), m.group(2)
    nums = [int(x) for x in args.split(",")] if args else []
    if base in FILE_ENTRIES and not nums:
        return _from_file(base)
    if base == "free" and len(nums) == 1:
        return CorpusEntry(free(nums[0]), frozenset(), "free group", SPECTRUM_LEVELS["free"])
    if base == "triangle" and len(nums) == 3:
        if any(x < 2 for x in nums):
            raise ValueError(f"triangle parameters must all be >= 2, got {tuple(nums)}")
        pi0 = frozenset(set().union(*(_prime_divisors(x) for x in nums)))
        return CorpusEntry(triangle(*nums), pi0, "triangle group <a,b,c | a^p, b^q, c^r, abc>",
                           SPECTRUM_LEVELS["triangle"])
    if base == "fig8_orbifold" and len(nums) == 1:
        knot = _from_file("fig8_knot").presentation
        return CorpusEntry(dehn_filled_orbifold(knot, nums[0], f"fig8_orbifold({nums[0]})"), None,
                           f"({nums[0]},0) Dehn filling of the figure-eight knot", SPECTRUM_LEVELS["fig8_orbifold"])
    if base == "orbifold_5_2" and len(nums) == 1:
        knot = _from_file("knot_5_2").presentation
        return CorpusEntry(dehn_filled_orbifold(knot, nums[0], f"orbifold_5_2({nums[0]})"), None,
                           f"({nums[0]},0) Dehn filling of the knot 5_2", SPECTRUM_LEVELS["orbifold_5_2"])
    raise UnknownGroup(name)


def names() -> list[str]:
    return ["weeks", "gamma4", "higman", "fig8_knot", "knot_5_2", "free(n)", "triangle(p,q,r)",
            "fig8_orbifold(n)", "orbifold_5_2(n)"]
