"""Command-line front end: ``kummerlab <command> [options]``.

Exit codes: 0 on success, 2 when an input violates a precondition (the error
class name goes to stderr), 3 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .charnum import (
    PRINCIPAL,
    QuadChar,
    bernoulli,
    bernoulli_over_n_mod,
    euler,
    gen_bernoulli,
    load_bernoulli_cache,
    save_bernoulli_cache,
)
from .errors import InvariantViolation, KummerError, NotKummer
from .fermat import congruence_suite
from .lfunc import (
    LplSpec,
    build_Lpl,
    build_product_L,
    build_tilde_L,
    scan_exceptional,
    scan_irregular,
    structure_check,
)
from .mahler import KummerFn, classify
from .solver import find_fixed_point, find_two_zeros, find_zero, find_zero_degenerate

__all__ = ["main", "parse_char"]


def parse_char(text: str) -> tuple:
    """``principal``, ``D=<int>`` or a product joined by ``*`` or ``,``."""
    out = []
    for part in text.replace(",", "*").split("*"):
        part = part.strip()
        if part in ("principal", "1", "D=1"):
            out.append(PRINCIPAL)
        elif part.startswith("D="):
            out.append(QuadChar(int(part[2:])))
        else:
            raise ValueError(f"cannot parse character {part!r}")
    return tuple(out)


def _char_json(chars: tuple) -> dict:
    if len(chars) == 1:
        return chars[0].as_dict()
    return {"kind": "product", "factors": [c.as_dict() for c in chars]}


def _char_label(chars: tuple) -> str:
    return "*".join(c.label for c in chars)


def _build(args, N: int) -> KummerFn:
    chars = parse_char(args.char)
    specs = [LplSpec(args.p, args.l, c, N) for c in chars]
    if len(specs) == 1:
        return build_Lpl(specs[0])
    return build_product_L(specs)


def _header(args) -> dict:
    return {"p": args.p, "l": args.l, "char": _char_json(parse_char(args.char)), "precision": args.precision}


def _emit(args, record: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=False))
    else:
        for ln in lines:
            print(ln)


# commands ----------------------------------------------------------------------

def cmd_zero(args) -> None:
    n = args.precision
    if args.tilde:
        chars = parse_char(args.char)
        g = build_tilde_L(args.p, chars[0], n + 3)
        res = find_zero_degenerate(g, n)
        rec = _header(args)
        rec["zero_digits"] = list(res.digits.digits)
        rec["classification"] = {"delta": g.delta, "lambda": 1, "label": "WKSd"}
        _emit(args, rec, [f"p={args.p} l={args.l} char={args.char} tilde", f"delta={g.delta}", f"zero: {res.digits}"])
        return
    f = _build(args, n + 1)
    c = classify(f)
    res = find_zero(f, n, method=args.method)
    rec = _header(args)
    rec["zero_digits"] = list(res.digits.digits)
    rec["classification"] = c.as_dict()
    _emit(args, rec, [_class_line(args, c), f"zero: {res.digits}"])


def cmd_fixed_point(args) -> None:
    n = args.precision
    f = _build(args, n)
    c = classify(f)
    res = find_fixed_point(f, n)
    rec = _header(args)
    rec["fixed_digits"] = list(res.digits.digits)
    rec["classification"] = c.as_dict()
    _emit(args, rec, [_class_line(args, c), f"fixed: {res.digits}"])


def cmd_two_zeros(args) -> None:
    n = args.precision
    f = _build(args, n + 2)
    c = classify(f)
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else None
    z1, z2 = find_two_zeros(f, n, seeds)
    tau = find_fixed_point(f, n)
    rec = _header(args)
    rec["zero_digits"] = [list(z1.digits), list(z2.digits)]
    rec["fixed_digits"] = list(tau.digits.digits)
    rec["classification"] = c.as_dict()
    _emit(args, rec, [_class_line(args, c), f"zero1: {z1}", f"zero2: {z2}", f"fixed: {tau.digits}"])


def _class_line(args, c) -> str:
    lam = "-" if c.lambda_f is None else c.lambda_f
    label = c.label if c.product_label is None else f"{c.label} ({c.product_label})"
    return f"p={args.p} l={args.l} char={args.char} delta={c.delta_f} lambda={lam} ord_f0={c.ord_f0} label={label}"


def cmd_classify(args) -> None:
    f = _build(args, args.precision)
    c = classify(f)
    rec = _header(args)
    rec["classification"] = c.as_dict()
    _emit(args, rec, [_class_line(args, c)])


def cmd_scan(args) -> None:
    chars = parse_char(args.char)
    if len(chars) != 1:
        raise ValueError("scans take a single character")
    chi = chars[0]
    rng = range(args.pmin, args.pmax + 1)
    if args.kind == "irregular":
        res = scan_irregular(chi, rng, jobs=args.jobs, checkpoint=args.checkpoint)
    else:
        res = scan_exceptional(chi, rng, jobs=args.jobs, checkpoint=args.checkpoint)
    if args.json:
        for pr in res.pairs:
            rec = {"p": pr.p, "l": pr.l, "char": chi.as_dict(), "kind": args.kind}
            for k, v in vars(pr).items():
                if k not in ("p", "l", "D"):
                    rec["lambda" if k == "lambda_f" else k] = v
            print(json.dumps(rec))
        return
    for pr in res.pairs:
        print(pr.line())
    print("primes: " + " ".join(map(str, res.primes)))


def cmd_structure(args) -> None:
    chars = parse_char(args.char)
    r = structure_check(args.n, chars, bound=args.pmax)
    rec = {
        "n": args.n,
        "char": _char_json(chars),
        "value": str(r.value),
        "I": str(r.I),
        "S": str(r.S),
        "D": str(r.D),
        "cofactor": r.cofactor,
        "bound": r.bound,
        "irregular": [list(t) for t in r.irregular],
        "conjectures": r.conjectures,
    }
    if r.d_parts:
        rec["D_parts"] = {k: str(v) for k, v in r.d_parts.items()}
    lines = [
        f"n={args.n} char={_char_label(chars)} |L|={r.value}",
        f"I={r.I} S={r.S} D={r.D} cofactor={r.cofactor} (no prime factor <= {r.bound})",
    ]
    if r.d_parts:
        lines.append(" ".join(f"{k}={v}" for k, v in r.d_parts.items()))
    for c in r.conjectures:
        lines.append(f"conjecture p={c['p']} l={c['l']} ord={c['ord']} predicted={c['predicted']} agree={c['agree']}")
    _emit(args, rec, lines)


def cmd_congruences(args) -> None:
    chars = parse_char(args.char)
    rep = congruence_suite(args.p, args.l, chars[0], digits=args.precision)
    rec = _header(args)
    rec["checks"] = rep.checks
    rec["details"] = rep.details
    lines = [f"p={args.p} l={args.l} char={args.char}"]
    lines += [f"{k}: {'n/a' if v is None else ('pass' if v else 'FAIL')}" for k, v in rep.checks.items()]
    _emit(args, rec, lines)


def cmd_bernoulli(args) -> None:
    chars = parse_char(args.char)
    chi = chars[0]
    n = args.n
    if args.euler:
        if args.p:
            # E_n = -2 B_{n+1,chi_-4}/(n+1)
            v = bernoulli_over_n_mod(n + 1, QuadChar(-4), args.p, args.precision)
            value = str(-2 * v.residue % v.modulus)
        else:
            value = str(euler(n))
        name = f"E_{n}"
    elif args.p:
        v = bernoulli_over_n_mod(n, chi, args.p, args.precision)
        value = str(v.residue)
        name = f"B_{n}/{n}"
    else:
        b = bernoulli(n) if chi.is_principal else gen_bernoulli(n, chi)
        value = f"{b.numerator}/{b.denominator}" if b.denominator != 1 else str(b.numerator)
        name = f"B_{n}"
    rec = {"n": n, "char": chi.as_dict(), "name": name, "value": value}
    if args.p:
        rec.update(p=args.p, precision=args.precision)
    _emit(args, rec, [value])


COMMANDS = {
    "zero": cmd_zero,
    "fixed-point": cmd_fixed_point,
    "two-zeros": cmd_two_zeros,
    "classify": cmd_classify,
    "scan": cmd_scan,
    "structure": cmd_structure,
    "congruences": cmd_congruences,
    "bernoulli": cmd_bernoulli,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kummerlab", description="Zeros, fixed points and scans of p-adic L-functions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--l", type=int, default=0)
    common.add_argument("--char", default="principal")
    common.add_argument("--precision", type=int, default=10)
    common.add_argument("--method", choices=["coefficients", "values"], default="coefficients")
    common.add_argument("--pmax", type=int, default=200)
    common.add_argument("--json", action="store_true")
    common.add_argument("--cache", default=None, help="Bernoulli cache file")
    common.add_argument("--jobs", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "zero":
            sp.add_argument("--tilde", action="store_true", help="zero of L_{p,0}(s)/(ps)")
        if name == "two-zeros":
            sp.add_argument("--seeds", default=None)
        if name == "scan":
            sp.add_argument("--kind", choices=["irregular", "exceptional"], default="irregular")
            sp.add_argument("--pmin", type=int, default=2)
            sp.add_argument("--checkpoint", default=None)
        if name in ("structure", "bernoulli"):
            sp.add_argument("--n", type=int, required=True)
        if name == "bernoulli":
            sp.add_argument("--euler", action="store_true")
    return ap


def _needs_p(args) -> bool:
    return args.command in ("zero", "fixed-point", "two-zeros", "classify", "congruences")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    cache = os.environ.get("KUMMERLAB_CACHE") or args.cache
    try:
        if _needs_p(args) and args.p is None:
            raise ValueError("--p is required")
        if cache and os.path.exists(cache):
            load_bernoulli_cache(cache)
        COMMANDS[args.command](args)
        if cache:
            save_bernoulli_cache(cache)
    except (InvariantViolation, NotKummer) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (KummerError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
