"""Finite presentations: the text format, combinators and Tietze helpers."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import words as W
from .words import Word

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class PresentationError(ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Presentation:
    """``<generators | relators>``; relators are stored cyclically reduced.

    Empty relators are dropped at construction.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if not _IDENT.match(g):
                raise PresentationError(f"bad generator name {g!r}")
        if len(set(gens)) != len(gens):
            raise PresentationError("duplicate generator names")
        rels = []
        for r in self.relators:
            r = W.cyclic_reduce(r)
            if any(abs(x) > len(gens) for x in r):
                raise PresentationError("relator uses an undeclared generator")
            if r:
                rels.append(r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return self.ngens - len(self.relators)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Sequence[int]) -> str:
        return W.format_word(w, self.generators)

    def renamed(self, name: Optional[str]) -> "Presentation":
        return Presentation(self.generators, self.relators, name)

    def __str__(self):
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


@dataclass(frozen=True)
class PresentationFile:
    presentation: Presentation
    pi0: Optional[frozenset] = None
    comments: tuple[str, ...] = field(default=())


def parse_word(text: str, names: Sequence[str], line: int = 1, col0: int = 1) -> Word:
    """Parse juxtaposed terms ``ident(^int)?``.

    Generator names are matched greedily (longest declared name first), so
    ``abab^-1`` splits into single letters when the generators are ``a b``.
    """
    by_len = sorted(range(len(names)), key=lambda i: -len(names[i]))
    out: list[int] = []
    i, n = 0, len(text)
    saw_term = False
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for gi in by_len:
            nm = names[gi]
            if text.startswith(nm, i):
                break
        else:
            m = re.match(r"[A-Za-z][A-Za-z0-9_]*", text[i:])
            if m:
                raise PresentationSyntaxError(f"undeclared generator in {m.group(0)!r}", line, col0 + i)
            raise PresentationSyntaxError(f"unexpected character {ch!r}", line, col0 + i)
        i += len(nm)
        exp = 1
        if i < n and text[i] == "^":
            m = re.match(r"\^([+-]?\d+)", text[i:])
            if not m:
                raise PresentationSyntaxError("expected signed integer after '^'", line, col0 + i)
            exp = int(m.group(1))
            i += m.end()
        letter = gi + 1
        out.extend([letter if exp > 0 else -letter] * abs(exp))
        saw_term = True
    if not saw_term:
        raise PresentationSyntaxError("empty word", line, col0)
    return W.free_reduce(out)


def parse_file(text: str) -> PresentationFile:
    gens: Optional[list[str]] = None
    rels: list[Word] = []
    name = None
    pi0 = None
    comments: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        indent = len(raw) - len(raw.lstrip())
        key, _, rest = stripped.partition(" ")
        rest_col = indent + len(key) + 2
        if gens is None:
            if key != "gens":
                raise PresentationSyntaxError("file must start with a 'gens' line", lineno, indent + 1)
            gens = rest.split()
            if not gens:
                raise PresentationSyntaxError("empty generator list", lineno, indent + 1)
            for g in gens:
                if not _IDENT.match(g):
                    raise PresentationSyntaxError(f"bad generator name {g!r}", lineno, rest_col + rest.find(g))
            if len(set(gens)) != len(gens):
                raise PresentationSyntaxError("duplicate generator name", lineno, rest_col)
        elif key == "rel":
            rels.append(parse_word(rest, gens, lineno, rest_col))
        elif key == "name":
            name = rest.strip()
            if len(name) >= 2 and name[0] == name[-1] == '"':
                name = name[1:-1]
        elif key == "pi0":
            try:
                pi0 = frozenset(int(t) for t in rest.split())
            except ValueError:
                raise PresentationSyntaxError("pi0 expects integers", lineno, rest_col) from None
            if not pi0:
                raise PresentationSyntaxError("pi0 expects integers", lineno, rest_col)
        elif key == "gens":
            raise PresentationSyntaxError("duplicate 'gens' line", lineno, indent + 1)
        else:
            raise PresentationSyntaxError(f"unknown directive {key!r}", lineno, indent + 1)
    if gens is None:
        raise PresentationSyntaxError("missing 'gens' line", 1, 1)
    return PresentationFile(Presentation(tuple(gens), tuple(rels), name), pi0, tuple(comments))


def parse_presentation(text: str) -> Presentation:
    return parse_file(text).presentation


def serialize(p: Presentation, pi0: Optional[Iterable[int]] = None) -> str:
    lines = ["gens " + " ".join(p.generators)]
    if p.name:
        lines.append(f"name {p.name}")
    if pi0:
        lines.append("pi0 " + " ".join(str(x) for x in sorted(pi0)))
    lines.extend("rel " + p.format(r) for r in p.relators)
    return "\n".join(lines) + "\n"


def parse_words(text: str, names: Sequence[str]) -> list[Word]:
    """One word per nonblank, non-comment line; an optional leading ``rel`` is ignored."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if s.startswith("rel "):
            s = s[4:]
            col += 4
        out.append(parse_word(s, names, lineno, col))
    return out


def direct_product(p1: Presentation, p2: Presentation) -> Presentation:
    """Generators renamed ``x_1`` / ``y_2``; relators R1, R2, then ``[x, y]`` for every pair."""
    n1 = p1.ngens
    gens = tuple(g + "_1" for g in p1.generators) + tuple(g + "_2" for g in p2.generators)
    shift = list(range(n1, n1 + p2.ngens))
    rels = list(p1.relators) + [W.relabel(r, shift) for r in p2.relators]
    for i in range(n1):
        for j in range(p2.ngens):
            rels.append(W.commutator((i + 1,), (n1 + j + 1,)))
    name = f"{p1.name or 'G1'} x {p2.name or 'G2'}"
    return Presentation(gens, tuple(rels), name)


def quotient_extend(p: Presentation, extra: Iterable[Sequence[int]], name: Optional[str] = None) -> Presentation:
    """``<X | R u S>``.  Words of S already present up to rotation/inversion are not repeated."""
    rels = list(p.relators)
    seen = {W.cyclic_class_key(r) for r in rels}
    for w in extra:
        if any(x == 0 or abs(x) > p.ngens for x in w):
            raise PresentationError("extra relator uses an undeclared generator")
        key = W.cyclic_class_key(w)
        if key and key not in seen:
            seen.add(key)
            rels.append(tuple(w))
    return Presentation(p.generators, tuple(rels), name if name is not None else p.name)


def _fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def central_extension(p: Presentation, powers: Sequence[int], name: Optional[str] = None) -> Presentation:
    """Adjoin a central ``z`` and replace relator ``r_i`` by ``r_i z^powers[i]``."""
    if len(powers) != len(p.relators):
        raise PresentationError(
            f"power vector has length {len(powers)}, presentation has {len(p.relators)} relators")
    z = p.ngens + 1
    gens = p.generators + (_fresh_name("z", p.generators),)
    rels = [W.multiply(r, W.power((z,), e)) for r, e in zip(p.relators, powers)]
    rels += [W.commutator((z,), (i + 1,)) for i in range(p.ngens)]
    return Presentation(gens, tuple(rels), name)


def add_generator(p: Presentation, definition: Sequence[int], name: Optional[str] = None) -> Presentation:
    """Tietze move: new generator ``t`` with defining relator ``t^-1 w``."""
    t = p.ngens + 1
    gens = p.generators + (name or _fresh_name("t", p.generators),)
    rel = W.multiply((-t,), definition)
    return Presentation(gens, p.relators + (rel,), p.name)


def eliminate_generator(p: Presentation, gen: int, image: Sequence[int]) -> Presentation:
    """Substitute ``image`` (a word avoiding ``gen``) for generator ``gen`` (0-based) and drop it."""
    if any(abs(x) - 1 == gen for x in image):
        raise PresentationError("image must not involve the eliminated generator")
    keep = [i for i in range(p.ngens) if i != gen]
    index = {old: new for new, old in enumerate(keep)}
    images = []
    for i in range(p.ngens):
        images.append(tuple(image) if i == gen else (i + 1,))
    rels = []
    for r in p.relators:
        r2 = W.substitute(r, images)
        rels.append(W.relabel(r2, [index.get(i, 0) for i in range(p.ngens)]))
    return Presentation(tuple(p.generators[i] for i in keep), tuple(rels), p.name)


def simplify(p: Presentation, max_length: int = 64) -> Presentation:
    """Tietze simplification: drop repeated relators and eliminate generators
    occurring exactly once in some relator (shortest such relator first).

    Deficiency never decreases; the group is unchanged.
    """
    while True:
        seen = set()
        rels = []
        for r in p.relators:
            key = W.cyclic_class_key(r)
            if key not in seen:
                seen.add(key)
                rels.append(r)
        p = Presentation(p.generators, tuple(rels), p.name)
        best = None
        for ri, r in enumerate(p.relators):
            if len(r) > max_length:
                continue
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g, c in sorted(counts.items()):
                if c == 1 and (best is None or len(r) < best[0]):
                    best = (len(r), ri, g)
        if best is None:
            return p
        _, ri, g = best
        r = p.relators[ri]
        k = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[k:] + r[:k]
        # rot = g^e * rest  =>  g = rest^-1 (e = 1) or g = rest (e = -1)
        rest = rot[1:]
        image = W.inverse(rest) if rot[0] > 0 else tuple(rest)
        others = tuple(x for i, x in enumerate(p.relators) if i != ri)
        p = eliminate_generator(Presentation(p.generators, others, p.name), g - 1, image)
        if p.ngens == 0:
            return p


def _random_word(rng, ngens: int, length: int) -> Word:
    return W.free_reduce(rng.choice((1, -1)) * rng.randint(1, ngens) for _ in range(length))


def random_tietze(p: Presentation, rng, moves: int = 1) -> Presentation:
    """Apply ``moves`` random Tietze transformations; the group is unchanged.

    Moves: append a consequence ``u r_i^{+-1} u^-1 r_j``; adjoin a generator
    with a random definition; rotate or invert a relator; permute relators.
    """
    for _ in range(moves):
        kind = rng.randrange(4)
        if kind == 0 and p.relators:
            r = rng.choice(p.relators)
            r = r if rng.random() < 0.5 else W.inverse(r)
            u = _random_word(rng, p.ngens, rng.randint(0, 3))
            extra = W.multiply(u, r, W.inverse(u), rng.choice(p.relators))
            if W.cyclic_reduce(extra):
                p = Presentation(p.generators, p.relators + (extra,), p.name)
        elif kind == 1 and p.ngens:
            p = add_generator(p, _random_word(rng, p.ngens, rng.randint(1, 4)))
        elif kind == 2 and p.relators:
            i = rng.randrange(len(p.relators))
            r = p.relators[i]
            k = rng.randrange(len(r))
            r = r[k:] + r[:k]
            if rng.random() < 0.5:
                r = W.inverse(r)
            rels = list(p.relators)
            rels[i] = r
            p = Presentation(p.generators, tuple(rels), p.name)
        else:
            rels = list(p.relators)
            rng.shuffle(rels)
            p = Presentation(p.generators, tuple(rels), p.name)
    return p
