"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 parse error, 3 internal
invariant violation (a 1/12-integrality failure during a scan).
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import covers, freealg, rozansky, surgery
from .laurent import ONE, LaurentPoly, NotDivisible, ParseError, format_poly, parse
from .theta import (
    ThetaElement,
    canonical_pair,
    format_theta,
    hair,
    in_lattice,
    parse_theta,
    reduce_dumbbell,
)

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class InvariantViolation(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from None


def _poly_arg(text: str, what: str) -> LaurentPoly:
    try:
        return parse(text)
    except ParseError as exc:
        raise ParseError(f"--{what}: {exc}") from None


def _theta_text(x: ThetaElement) -> str:
    text = format_theta(x)
    return text if not x.is_zero() else text + "0\n"


def _verdict_lines(x: ThetaElement, ks=(1, 2, 12)) -> list[str]:
    return [f"in_lattice k={k}: {'yes' if in_lattice(x, k) else 'no'}" for k in ks]


# --- commands --------------------------------------------------------------------------

def cmd_canon(args, out) -> int:
    try:
        parts = [int(p) for p in args.triple.split(",")]
    except ValueError:
        raise ParseError(f"--triple: expected three integers, got {args.triple!r}") from None
    if len(parts) != 3:
        raise ParseError(f"--triple: expected three integers, got {len(parts)}")
    m, n = canonical_pair(*parts)
    out.write(f"{m} {n} {Fraction(args.coeff)}\n")
    return EXIT_OK


def cmd_dumbbell(args, out) -> int:
    p = _poly_arg(args.p, "p")
    r = _poly_arg(args.r, "r")
    q = _poly_arg(args.q, "q")
    delta = _poly_arg(args.delta, "delta")
    out.write(_theta_text(reduce_dumbbell(p, r, q, delta)))
    return EXIT_OK


def cmd_hair(args, out) -> int:
    if args.theta:
        x = parse_theta(_read(args.theta))
    else:
        try:
            m, n = (int(v) for v in args.pair.split(","))
        except ValueError:
            raise ParseError(f"--pair: expected 'm,n', got {args.pair!r}") from None
        x = ThetaElement.basis(m, n)
    series = hair(x, args.degree)
    for (i, j), c in sorted(series.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        out.write(f"{i} {j} {c}\n")
    return EXIT_OK


def cmd_bch_verify(args, out) -> int:
    ok = True
    if freealg.zt_identity_check(3):
        out.write("Z(T)=exp([a,b]): OK\n")
    else:
        out.write("Z(T)=exp([a,b]): FAILED\n")
        ok = False
    bad = [p for p in range(1, args.max_p + 1)
           if freealg.bch_operator(p, 3) != freealg.ordered_exp_product(p, 3)]
    if bad:
        out.write(f"H(p)=BCH(p): FAILED for p={','.join(map(str, bad))}\n")
        ok = False
    else:
        out.write(f"H(p)=BCH(p): OK for p=1..{args.max_p}\n")
    return EXIT_OK if ok else EXIT_INVARIANT


def _split_delta_header(text: str) -> tuple[str, LaurentPoly | None]:
    delta = None
    for no, line in enumerate(text.splitlines(), 1):
        body = line.strip()
        if body.startswith("#") and body[1:].strip().startswith("delta:"):
            value = line[line.index("delta:") + len("delta:"):]
            try:
                delta = parse(value)
            except ParseError as exc:
                raise exc.at_line(no, line.index("delta:") + len("delta:")) from None
    return text, delta


def cmd_surgery(args, out) -> int:
    text, delta = _split_delta_header(_read(args.pairing))
    rows = rozansky.parse_matrix_rows(text)
    if len(rows) != 3:
        raise ValueError("the leaf pairing must be 3x3")
    if args.delta is not None:
        delta = _poly_arg(args.delta, "delta")
    delta = delta or ONE
    mu = parse_theta(_read(args.mu)) if args.mu else None
    c = surgery.ClasperData(tuple(tuple(r) for r in rows), delta, mu)
    result = surgery.surgery_delta(c)
    out.write(_theta_text(result))
    for line in _verdict_lines(result):
        out.write(line + "\n")
    return EXIT_OK


def cmd_phi(args, out) -> int:
    w = rozansky.parse_matrix(_read(args.matrix))
    v = rozansky.phi(w)
    out.write(_theta_text(v.value))
    out.write(f"in_twelfth: {'yes' if v.in_twelfth else 'no'}\n")
    out.write(f"in_half: {'yes' if v.in_half else 'no'}\n")
    out.write(f"casson: {v.casson} ({'integer' if v.casson_integral else 'not an integer'})\n")
    if not v.in_twelfth:
        raise InvariantViolation("value is not in the 1/12 lattice")
    return EXIT_OK


def cmd_scan(args, out) -> int:
    result = rozansky.scan(args.n, args.max_exp, args.workers)
    report = result.report()
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8")
    else:
        out.write(report)
    out.write(f"matrices: {result.total}\n")
    out.write(f"twelfth_failures: {len(result.twelfth_failures)}\n")
    out.write(f"half_failures: {len(result.half_failures)}\n")
    out.write(f"casson_failures: {len(result.casson_failures)}\n")
    for line in result.half_failures:
        out.write(f"half-failure: {line}\n")
    if result.twelfth_failures:
        repro = Path(args.out + ".repro" if args.out else "scan.repro")
        repro.write_text("\n".join(result.twelfth_failures) + "\n", encoding="utf-8")
        raise InvariantViolation(f"1/12-integrality failed; reproducer written to {repro}")
    return EXIT_OK


def cmd_cover(args, out) -> int:
    text = _read(args.delta).strip()
    delta = parse(text)
    data = covers.cover_data(delta, args.r, args.sigma)
    out.write(data.summary() + "\n")
    if args.theta:
        x = parse_theta(_read(args.theta))
        v = covers.casson_residue(x, delta, args.r)
        out.write(f"lift_value: {v.value}\n")
        out.write(f"divisible_by_r: {'yes' if v.divisible else 'no'}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="twoloop", description="Exact 2-loop diagram calculus.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("canon", help="canonical pair of an exponent triple")
    p.add_argument("--triple", required=True, help="m,n,k")
    p.add_argument("--coeff", default="1")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("dumbbell", help="reduce a dumbbell to the theta basis")
    p.add_argument("--p", required=True)
    p.add_argument("--r", default="1")
    p.add_argument("--q", required=True)
    p.add_argument("--delta", default="1")
    p.set_defaults(func=cmd_dumbbell)

    p = sub.add_parser("hair", help="hair map image, one 'i j coeff' line per a^i b^j")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", help="theta-element file")
    g.add_argument("--pair", help="m,n")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_hair)

    p = sub.add_parser("bch-verify", help="check Z(T)=exp([a,b]) and the H operator")
    p.add_argument("--max-p", type=int, default=4)
    p.set_defaults(func=cmd_bch_verify)

    p = sub.add_parser("surgery", help="2-loop change under clasper surgery")
    p.add_argument("--pairing", required=True, help="3x3 leaf pairing file")
    p.add_argument("--mu", help="theta-element file")
    p.add_argument("--delta", help="common denominator (overrides the file header)")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("phi", help="φ_n of a monomial matrix with verdicts")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("scan", help="run φ_n over all of 𝓜_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-exp", type=int, required=True)
    p.add_argument("--out", help="report file")
    p.add_argument("--workers", type=int, help=f"worker processes (default ${rozansky.WORKERS_ENV})")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cover", help="branched cover Alexander polynomial and quotient")
    p.add_argument("--delta", required=True, help="file holding Δ")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--sigma", type=Fraction)
    p.add_argument("--theta", help="difference of 2-loop parts, for the divisibility verdict")
    p.set_defaults(func=cmd_cover)
    return ap


_NEGATIVE = re.compile(r"-[\dt]")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--flag -1,2,0`` into ``--flag=-1,2,0`` so argparse keeps the value."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except InvariantViolation as exc:
        err.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT
    except (ValueError, ArithmeticError, NotDivisible) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
