"""Command line: ``conicres symbol | bundle | selftest``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .bundles import ConicBundle, check_reciprocity, verify_theorem
from .errors import ConicResError, EvenCharacteristic, HypothesisViolation, NotPrime, SearchSpaceTooLarge
from .fields import canonical_nonsquare, format_elem, fq_make, is_prime
from .local import LocalElem
from .places import place_make
from .poly import format_poly, parse_poly
from .selftest import SUITES, run_suite
from .symbols import gysin_residue, hilbert_symbol_conic, hilbert_symbol_tame, main_lemma_check

SEED_ENV = "RESIDUE_SEED"
MAX_SEED = (1 << 64) - 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if p == 2:
        raise argparse.ArgumentTypeError("p = 2 is excluded: the theory assumes characteristic != 2")
    if p < 2 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if n <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {n}")
    return n


def _seed(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed {text!r} is not an integer")
    if not 0 <= n <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conicres", description="Hilbert symbols, residues and conic bundle checks over F_q(t).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, p_default=None):
        sp.add_argument("--p", type=_prime, required=p_default is None, default=p_default,
                        help="odd prime characteristic")
        sp.add_argument("--d", type=_positive, default=1, help="base field is F_{p^d}")
        sp.add_argument("--seed", type=_seed, default=None, help=f"default from ${SEED_ENV}, else 0")
        sp.add_argument("--precision", type=_positive, default=24, help="series precision for witnesses")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("symbol", help="Hilbert symbol and residue at one place")
    common(sp)
    sp.add_argument("--place", required=True, help="monic irreducible polynomial in t, or 'inf'")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = sub.add_parser("bundle", help="check residues of a diagonal conic bundle")
    common(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = sub.add_parser("selftest", help="seeded property suites")
    common(sp, p_default=3)
    sp.add_argument("--trials", type=_positive, default=100)
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return parser


def resolve_seed(flag) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    return _seed(env)


# -- rendering -----------------------------------------------------------------

def _elem_str(x) -> str:
    return str(x.n) if x.field.d == 1 else format_elem(x)


def _coord_str(c, terms=4) -> str:
    if c.is_zero():
        return "0"
    if c.form == "exact":
        return str(c.rat)
    cs = c.unit_coeffs
    parts = []
    for i, x in enumerate(cs[:terms]):
        if not x:
            continue
        e = c.val + i
        coeff = _elem_str(x)
        coeff = coeff if x.field.d == 1 or "+" not in coeff else f"({coeff})"
        mono = "pi" + (f"^{e}" if e != 1 else "")
        parts.append(coeff if e == 0 else (mono if coeff == "1" else f"{coeff}*{mono}"))
    return " + ".join(parts + [f"O(pi^{c.val + len(cs)})"])


def _class_str(cls) -> str:
    if cls.trivial:
        return "trivial"
    return f"nontrivial (class of {_elem_str(cls.representative)})"


def _rep_str(cls) -> str:
    return "1" if cls.trivial else _elem_str(canonical_nonsquare(cls.field))


# -- commands ------------------------------------------------------------------

def cmd_symbol(args, out) -> int:
    F = fq_make(args.p, args.d)
    place = place_make("inf" if args.place.strip() == "inf" else parse_poly(args.place, F), F)
    a = LocalElem.exact(place, parse_poly(args.a, F))
    b = LocalElem.exact(place, parse_poly(args.b, F))
    tame = hilbert_symbol_tame(a, b)
    try:
        conic, point = hilbert_symbol_conic(a, b, args.precision)
        skipped = False
    except SearchSpaceTooLarge:
        conic, point, skipped = None, None, True
    agree = None if skipped else (tame == conic)
    residue = gysin_residue(a, b)
    lemma = main_lemma_check(a, b) if a.nu() == 0 else None
    k = place.residue_field
    if args.format == "json":
        doc = {
            "p": args.p, "d": args.d, "place": str(place),
            "a": format_poly(a.rat.num), "b": format_poly(b.rat.num),
            "nu_a": a.nu(), "nu_b": b.nu(),
            "tame": tame.value, "conic": None if skipped else conic.value,
            "witness": None if point is None else [_coord_str(c) for c in point.coords],
            "agree": agree, "residue_trivial": residue.trivial, "residue_rep": _rep_str(residue.value),
            "main_lemma": None if lemma is None else {
                "rhs_trivial": lemma.rhs.trivial, "equal": lemma.equal},
        }
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        w = out.write
        w(f"place {place}, residue field F_{k.p}" + (f"^{k.d}" if k.d > 1 else "") + "\n")
        w(f"a = {format_poly(a.rat.num)}: nu = {a.nu()}, unit residue {_elem_str(a.unit_residue())}\n")
        w(f"b = {format_poly(b.rat.num)}: nu = {b.nu()}, unit residue {_elem_str(b.unit_residue())}\n")
        w(f"symbol (tame formula): {tame}\n")
        if skipped:
            w("symbol (conic search): skipped, residue field larger than the search limit\n")
        else:
            wit = "no point" if point is None else "point (" + ", ".join(_coord_str(c) for c in point.coords) + ")"
            w(f"symbol (conic search): {conic}, {wit}\n")
            w(f"agree: {'yes' if agree else 'NO'}\n")
        w(f"residue: {_class_str(residue.value)}\n")
        if lemma is not None:
            w(f"chi(a_bar)^nu(b): {_class_str(lemma.rhs.value)}; equal to residue: {'yes' if lemma.equal else 'NO'}\n")
    if agree is False or (lemma is not None and not lemma.equal):
        return 2
    return 0


def bundle_report(p: int, d: int, a_text: str, b_text: str, seed: int):
    F = fq_make(p, d)
    a, b = parse_poly(a_text, F), parse_poly(b_text, F)
    bundle = ConicBundle.from_polys(a, b)
    report = verify_theorem(bundle, reciprocity=False)
    report.reciprocity_ok = check_reciprocity(bundle, random.Random(f"{seed}:reciprocity"))
    return report


def bundle_json(report, p: int, d: int, seed: int) -> dict:
    bundle = report.bundle
    return {
        "p": p, "d": d, "a": format_poly(bundle.a), "b": format_poly(bundle.b),
        "components": [{
            "place": str(c.place), "tau": c.tau, "role": c.role,
            "alpha_trivial": c.alpha.trivial, "cover": c.fiber.cover,
            "residue_trivial": c.beta_residue.trivial, "residue_rep": _rep_str(c.beta_residue.value),
            "match": c.matches,
        } for c in report.components],
        "reciprocity_ok": report.reciprocity_ok,
        "remark13_ok": report.remark13_ok,
        "seed": seed,
    }


def cmd_bundle(args, out) -> int:
    seed = resolve_seed(args.seed)
    report = bundle_report(args.p, args.d, args.a, args.b, seed)
    doc = bundle_json(report, args.p, args.d, seed)
    if args.format == "json":
        out.write(json.dumps(doc) + "\n")
    else:
        w = out.write
        w(f"conic bundle x^2 - ({doc['a']}) y^2 - ({doc['b']}) z^2 over F_{args.p}"
          + (f"^{args.d}" if args.d > 1 else "") + "\n")
        rows = [("place", "tau", "role", "alpha", "cover", "residue", "match")]
        for c in doc["components"]:
            rows.append((c["place"], str(c["tau"]), c["role"],
                         "trivial" if c["alpha_trivial"] else "nontrivial", c["cover"],
                         "trivial" if c["residue_trivial"] else f"nontrivial ({c['residue_rep']})",
                         "yes" if c["match"] else "NO"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        for r in rows:
            w("  ".join(x.ljust(n) for x, n in zip(r, widths)).rstrip() + "\n")
        if not report.components:
            w("no components: a and b are constants\n")
        w(f"tau = 1 components, trivial residue only with trivial cover: {'yes' if doc['remark13_ok'] else 'NO'}\n")
        w(f"reciprocity, product of local symbols over all places = +1 [independent cross-check]: "
          f"{'ok' if doc['reciprocity_ok'] else 'FAILED'}\n")
        for note in report.hypothesis_notes:
            w(f"note: {note}\n")
    ok = report.all_match and report.reciprocity_ok
    return 0 if ok else 2


def cmd_selftest(args, out) -> int:
    seed = resolve_seed(args.seed)
    summary = run_suite(args.suite, args.p, args.d, trials=args.trials, seed=seed, precision=args.precision)
    if args.format == "json":
        out.write(summary.dumps() + "\n")
    else:
        w = out.write
        w(f"selftest suite={args.suite} p={args.p} d={args.d} seed={seed} trials={args.trials}\n")
        for r in summary.results:
            status = "pass" if r.ok else "FAIL"
            extra = f", {r.discarded} discarded" if r.discarded else ""
            w(f"  [{status}] {r.suite}/{r.name}: {r.passed}/{r.trials}{extra}\n")
            if r.counterexample:
                w(f"         counterexample: {r.counterexample}\n")
            if r.error:
                w(f"         error: {r.error}\n")
        w(f"{'all passed' if summary.ok else 'FAILURES'}\n")
    return 0 if summary.ok else 1


COMMANDS = {"symbol": cmd_symbol, "bundle": cmd_bundle, "selftest": cmd_selftest}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = resolve_seed(args.seed)
    except argparse.ArgumentTypeError as exc:
        print(f"error: ${SEED_ENV}: {exc}", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args, out)
    except HypothesisViolation as exc:
        factor = f" (offending factor: {exc.factor})" if exc.factor is not None else ""
        print(f"error: hypothesis violated: {exc}{factor}", file=sys.stderr)
        return 1
    except (EvenCharacteristic, NotPrime) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConicResError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
