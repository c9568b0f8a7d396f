"""Command-line front end.

Exit codes: 0 success or valid, 1 checked and refuted, 2 input error,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional

from . import corpus as corpus_mod
from .enumerator.cosets import DEFAULT_MAX_COSETS, todd_coxeter
from .enumerator.lowindex import DEFAULT_MAX_NODES, low_index_subgroups
from .enumerator.subgroups import InfiniteAbelianization, commutator_subgroup_table, reidemeister_schreier
from .grothendieck import pt_certify
from .homology import h1, h2_certificate, superperfect_certificate
from .presentations import Presentation, PresentationError, parse_file, parse_words, random_tietze, serialize
from .recipes import RECIPES, Budget, run_recipe
from .spectrum import IncompleteSpectrum, compare_reports, finite_quotients, no_finite_quotients_certificate

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_presentation(spec: str) -> Presentation:
    """A path to a presentation file, or a corpus name such as ``triangle(2,3,5)``."""
    path = Path(spec)
    if path.is_file():
        try:
            return parse_file(path.read_text(encoding="utf-8")).presentation
        except OSError as e:
            raise InputError(f"{spec}: {e}") from e
        except PresentationError as e:
            raise InputError(f"{spec}: {e}") from e
    try:
        return corpus_mod.corpus(spec).presentation
    except (KeyError, ValueError) as e:
        raise InputError(f"{spec}: not a file or corpus name ({e})") from e


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_h1(args) -> int:
    p = load_presentation(args.input)
    inv = h1(p)
    _emit(args, {"h1": inv.to_json()}, str(inv))
    return EXIT_OK


def cmd_h2(args) -> int:
    p = load_presentation(args.input)
    cert = h2_certificate(p)
    sp = superperfect_certificate(p)
    _emit(args, {"status": cert.status.value, "upper_bound_rank": cert.upper_bound_rank,
                 "h1": h1(p).to_json(), "superperfect": sp.valid},
          f"{cert.status.value}" + (f" (rank <= {cert.upper_bound_rank})" if cert.upper_bound_rank else "")
          + f"\nh1 = {h1(p)}\nsuperperfect: {sp.valid}")
    return EXIT_OK


def cmd_cosets(args) -> int:
    p = load_presentation(args.input)
    sub = parse_words(Path(args.subgroup).read_text(encoding="utf-8"), p.generators) if args.subgroup else []
    t = todd_coxeter(p, sub, args.max_cosets)
    payload = t.to_json()
    _emit(args, payload, f"{t.status}: {t.coset_count} cosets ({t.cosets_defined} defined)")
    return EXIT_OK if t.complete else EXIT_BUDGET


def cmd_lowindex(args) -> int:
    p = load_presentation(args.input)
    res = low_index_subgroups(p, args.level, args.max_nodes, normal_only=args.normal, workers=args.workers)
    payload = {"level": args.level, "status": res.status, "nodes": res.nodes,
               "tables": [t.to_json() for t in res.tables]}
    counts: dict[int, int] = {}
    for i in res.indices():
        counts[i] = counts.get(i, 0) + 1
    text = f"{res.status}: {len(res)} classes, by index {dict(sorted(counts.items()))}, {res.nodes} nodes"
    _emit(args, payload, text)
    return EXIT_OK if res.complete else EXIT_BUDGET


def cmd_commutator(args) -> int:
    p = load_presentation(args.input)
    try:
        t = commutator_subgroup_table(p, args.max_cosets)
    except InfiniteAbelianization as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REFUTED
    if not t.complete:
        _emit(args, {"status": t.status}, t.status)
        return EXIT_BUDGET
    sub = reidemeister_schreier(p, t)
    inv = h1(sub)
    payload = {"index": t.coset_count, "h1": inv.to_json(), "presentation": serialize(sub)}
    _emit(args, payload, f"index {t.coset_count}\nh1 = {inv}\n{serialize(sub)}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    p = load_presentation(args.input)
    rep = finite_quotients(p, args.level, args.max_nodes, method=args.method, workers=args.workers)
    lines = [f"level {rep.level}, {'complete' if rep.complete else 'INCOMPLETE (budget)'}"]
    for q in rep.quotients:
        fp = q.fingerprint
        lines.append(f"  order {fp.order:>4}  H1 {str(fp.abelianization):<16} count {q.count}"
                     + ("  UNRESOLVED" if q.unresolved else ""))
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK if rep.complete else EXIT_BUDGET


def cmd_compare(args) -> int:
    a, b = load_presentation(args.first), load_presentation(args.second)
    ra = finite_quotients(a, args.level, args.max_nodes, method=args.method)
    rb = finite_quotients(b, args.level, args.max_nodes, method=args.method)
    try:
        cmp = compare_reports(ra, rb)
    except IncompleteSpectrum as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    text = cmp.status
    if cmp.witness is not None:
        text += f": side {cmp.witness_side} has a quotient of order {cmp.witness.order} " \
                f"(H1 {cmp.witness.fingerprint.abelianization}) missing from the other"
    _emit(args, cmp.to_json(), text)
    return {"EQUAL": EXIT_OK, "UNEQUAL": EXIT_REFUTED}.get(cmp.status, EXIT_BUDGET)


def cmd_no_quotients(args) -> int:
    p = load_presentation(args.input)
    cert = no_finite_quotients_certificate(p, args.level, args.max_nodes)
    text = f"{cert.status} at level {cert.level} ({cert.nodes} nodes)"
    if cert.witness is not None:
        text += f"; witness subgroup of index {cert.witness.coset_count}"
    _emit(args, cert.to_json(), text)
    return {"VALID": EXIT_OK, "REFUTED": EXIT_REFUTED}.get(cert.status, EXIT_BUDGET)


def cmd_certify_pt(args) -> int:
    g = load_presentation(args.group)
    try:
        s = parse_words(Path(args.relators).read_text(encoding="utf-8"), g.generators)
    except OSError as e:
        raise InputError(f"{args.relators}: {e}") from e
    except PresentationError as e:
        raise InputError(f"{args.relators}: {e}") from e
    if not s:
        raise InputError(f"{args.relators}: no words")
    cert = pt_certify(g, s, args.level, args.max_nodes, workers=args.workers)
    payload = cert.to_json()
    text = "\n".join([f"{cert.status} at level {cert.level}"]
                     + [f"  {f}" for f in cert.failures]
                     + [f"  Q trivial to level {cert.q_triviality_level}",
                        f"  H2(Q): {cert.h2.status.value}",
                        f"  P generators: {', '.join(cert.fibre.formatted_generators())}",
                        "  " + payload["caveat"]])
    _emit(args, payload, text)
    return {"VALID": EXIT_OK, "INVALID": EXIT_REFUTED}.get(cert.status, EXIT_BUDGET)


def cmd_recipe(args) -> int:
    names = list(RECIPES) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in RECIPES:
        raise InputError(f"unknown recipe {args.name!r}; known: {', '.join(RECIPES)}, all")
    budget = Budget(args.level, args.max_nodes, args.max_cosets, args.workers)
    results = [run_recipe(n, budget) for n in names]
    if args.format == "json":
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
    else:
        print("\n".join(r.text() for r in results))
    if all(r.passed for r in results):
        return EXIT_OK
    return EXIT_BUDGET if any(r.budget_exhausted for r in results) else EXIT_REFUTED


def cmd_tietze(args) -> int:
    """Random Tietze moves must leave H1 and the truncated spectrum unchanged."""
    p = load_presentation(args.input)
    rng = random.Random(args.seed)
    q = random_tietze(p, rng, args.moves)
    base = finite_quotients(p, args.level, args.max_nodes)
    moved = finite_quotients(q, args.level, args.max_nodes)
    same_h1 = h1(p) == h1(q)
    cmp = compare_reports(base, moved)
    ok = same_h1 and cmp.equal
    payload = {"seed": args.seed, "moves": args.moves, "h1_equal": same_h1, "spectrum": cmp.to_json(),
               "presentation": serialize(q)}
    _emit(args, payload, f"h1 equal: {same_h1}; spectra {cmp.status}\n{serialize(q)}")
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_corpus(args) -> int:
    if not args.name:
        print("\n".join(corpus_mod.names()))
        return EXIT_OK
    try:
        e = corpus_mod.corpus(args.name)
    except (KeyError, ValueError) as ex:
        raise InputError(str(ex)) from ex
    text = serialize(e.presentation, e.torsion_primes_pi0)
    _emit(args, {"presentation": text, "pi0": sorted(e.torsion_primes_pi0 or []),
                 "provenance": e.provenance, "spectrum_level": e.spectrum_level}, text.rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-cosets", type=_positive, default=DEFAULT_MAX_COSETS)
    common.add_argument("--max-nodes", type=_positive, default=DEFAULT_MAX_NODES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=_positive, default=1)

    ap = argparse.ArgumentParser(prog="gpairs", description="Finitely presented groups: homology "
                                 "certificates, finite quotients, fibre products.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, level=None):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        if level is not None:
            sp.add_argument("--level", type=_positive, default=level)
        return sp

    add("h1", cmd_h1, "abelianization").add_argument("input")
    add("h2", cmd_h2, "H2 certificate and superperfect check").add_argument("input")
    sp = add("cosets", cmd_cosets, "Todd-Coxeter enumeration")
    sp.add_argument("input")
    sp.add_argument("--subgroup", help="file of subgroup generator words")
    sp = add("lowindex", cmd_lowindex, "conjugacy classes of subgroups of small index", level=4)
    sp.add_argument("input")
    sp.add_argument("--normal", action="store_true", help="normal subgroups only")
    add("commutator", cmd_commutator, "commutator subgroup presentation").add_argument("input")
    sp = add("spectrum", cmd_spectrum, "finite quotients up to --level", level=6)
    sp.add_argument("input")
    sp.add_argument("--method", choices=("lowindex", "normal"), default="lowindex")
    sp = add("compare", cmd_compare, "compare two truncated spectra", level=6)
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--method", choices=("lowindex", "normal"), default="lowindex")
    add("no-quotients", cmd_no_quotients, "certify no proper subgroup up to --level",
        level=6).add_argument("input")
    sp = add("certify-pt", cmd_certify_pt, "fibre-product certificate", level=4)
    sp.add_argument("group")
    sp.add_argument("relators", help="file with one extra relator per line")
    sp = add("recipe", cmd_recipe, "run a named end-to-end computation")
    sp.add_argument("name", help=f"one of {', '.join(RECIPES)}, all")
    sp.add_argument("--level", type=_positive, default=None)
    sp = add("tietze-check", cmd_tietze, "random Tietze moves preserve invariants", level=4)
    sp.add_argument("input")
    sp.add_argument("--moves", type=_positive, default=5)
    add("corpus", cmd_corpus, "print a corpus presentation").add_argument("name", nargs="?")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PresentationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except IncompleteSpectrum as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
