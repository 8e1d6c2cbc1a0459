"""Command-line front end: `ordchain <command> ...`.

Exit status: 0 on success or a true verdict, 1 on a false/negative verdict,
2 on any error (bad usage, parse failure, violated precondition).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import finite
from .chain import ChainError, fmt
from .constructions import (
    ChainKind,
    dual_gamma,
    gamma_for,
    obstruction_certificate,
    sandwich,
    single_generator_test,
    validate_certificate,
)
from .factor import factor, format_factorization, verify_factorization
from .piecewise import (
    AuditFailure,
    Inapplicable,
    NotApplicable,
    classify,
    compose_all,
    image_gaps,
    extremum_audit,
    member_of,
    pw_equal,
    pw_image,
)
from .textio import format_map, parse_interval, parse_map, parse_maps, parse_subset


class Report:
    """Ordered key/value fields and map blocks, printed as text or porcelain."""

    def __init__(self, porcelain: bool):
        self.porcelain = porcelain
        self.lines: list[str] = []

    def field(self, key: str, value) -> None:
        value = fmt(value) if isinstance(value, (int, float)) or hasattr(value, "denominator") else str(value)
        self.lines.append(f"{key}={value}" if self.porcelain else f"{key} = {value}")

    def block(self, label: str, f) -> None:
        if self.porcelain:
            pieces = "; ".join(str(pc).removeprefix("piece ") for pc in f.pieces)
            self.lines.append(f"{label}=domain {f.domain} codomain {f.codomain}: {pieces}")
        else:
            self.lines.append(f"label {label}")
            self.lines.append(format_map(f).rstrip("\n"))

    def emit(self) -> None:
        if self.lines:
            print("\n".join(self.lines))


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _one_map(path: str):
    return parse_map(_read(path))


def cmd_check(args, rep: Report) -> int:
    f = _one_map(args.map)
    y = parse_subset(args.y) if args.y else parse_subset(str(f.domain))
    in_t = pw_image(f).issubset(y)
    in_o = member_of(f, "O", y)
    in_op = member_of(f, "OP", y)
    cl = classify(f)
    rep.field("image", pw_image(f))
    rep.field("T", _yes(in_t))
    rep.field("O", _yes(in_o))
    rep.field("OP", _yes(in_op))
    rep.field("class", cl.verdict)
    if cl.verdict != "neither":
        rep.field("ideal", cl.ideal)
        rep.field("overlap", "empty" if cl.overlap is None else "{" + fmt(cl.overlap) + "}")
    if cl.verdict == "orientation_proper":
        try:
            rep.field("audit", extremum_audit(f, y))
        except (AuditFailure, NotApplicable) as exc:
            rep.field("audit", f"fails: {exc}")
        try:
            gaps = image_gaps(f, y)
            rep.field("bounds", " ".join(str(g) for g in gaps))
        except (Inapplicable, AuditFailure) as exc:
            rep.field("bounds", f"n/a ({exc})")
    return 0 if in_op else 1


def cmd_compose(args, rep: Report) -> int:
    maps = [m for path in args.maps for m in parse_maps(_read(path))]
    if not maps:
        raise ChainError("nothing to compose")
    rep.block("composite", compose_all(maps))
    return 0


def _chain_kind(text: str) -> ChainKind:
    return ChainKind.of(parse_interval(text))


def _params(text: Optional[str]):
    return None if text is None else [p for p in text.split(",") if p.strip()]


def cmd_gamma(args, rep: Report) -> int:
    kind = _chain_kind(args.chain)
    if args.dual:
        params = _params(args.params)
        g = dual_gamma(kind, params[0] if params else None)
    else:
        g = gamma_for(kind, _params(args.params))
    rep.block("gamma", g)
    return 0


def cmd_test_generator(args, rep: Report) -> int:
    verdict = single_generator_test(_one_map(args.map))
    rep.field("generator", "true" if verdict.ok else "false")
    rep.field("reason", verdict.reason)
    return 0 if verdict.ok else 1


def cmd_sandwich(args, rep: Report) -> int:
    f = _one_map(args.map)
    params = _params(args.params) or []
    phi_hat, phi_tilde = sandwich(f, *params)
    kind = ChainKind.of(f.domain)
    target = gamma_for(kind, params or None)
    ok = pw_equal(compose_all([phi_hat, f, phi_tilde]), target)
    rep.block("phi_hat", phi_hat)
    rep.block("phi_tilde", phi_tilde)
    rep.field("verified", "true" if ok else "false")
    return 0 if ok else 1


def cmd_factor(args, rep: Report) -> int:
    alpha = _one_map(args.map)
    ytilde = parse_interval(args.ytilde) if args.ytilde else None
    F = factor(args.theorem, alpha, parse_subset(args.y), ytilde)
    verdict = verify_factorization(F)
    if rep.porcelain:
        for i, (f, lab) in enumerate(F.factors):
            rep.block(f"factor{i}.{lab}", f)
        rep.field("verified", "true" if verdict[0] else "false")
    else:
        rep.lines.append(format_factorization(F, verdict).rstrip("\n"))
    return 0 if verdict[0] else 1


def cmd_obstruct(args, rep: Report) -> int:
    G = [m for path in args.maps for m in parse_maps(_read(path))]
    X = parse_interval(args.x) if args.x else None
    cert = obstruction_certificate(G, parse_subset(args.y), X)
    for i, (_, gaps) in enumerate(cert.per_element):
        for gap in gaps:
            rep.field(f"bound.{i}.{gap.side}", gap.value)
    rep.field("a", cert.a)
    rep.field("b", cert.b)
    rep.field("h", cert.h)
    rep.field("side", cert.side)
    rep.block("alpha", cert.alpha)
    problems = validate_certificate(cert)
    rep.field("valid", "true" if not problems else "false; " + "; ".join(problems))
    return 0 if not problems else 1


def _ys(text: Optional[str]):
    if not text:
        return None
    return [int(t) for t in text.replace("{", "").replace("}", "").split(",") if t.strip()]


def cmd_finite(args, rep: Report) -> int:
    if args.finite_cmd == "count":
        maps = finite.enumerate_family(args.n, args.family, _ys(args.y))
        rep.field("count", len(maps))
        if args.list:
            rep.lines.extend(finite.format_finite(m) for m in sorted(maps))
        return 0
    if args.finite_cmd == "classify":
        cl = finite.fin_classify(finite.parse_finite(args.map))
        rep.field("class", cl.verdict)
        if cl.verdict != "neither":
            rep.field("ideal", "{1.." + fmt(cl.ideal.hi) + "}")
            rep.field("overlap", "empty" if cl.overlap is None else cl.overlap)
        return 0 if cl.verdict != "neither" else 1
    if args.finite_cmd == "relrank":
        y = _ys(args.y)
        S = finite.enumerate_family(args.n, args.super, y)
        A = finite.enumerate_family(args.n, args.sub, y)
        r, witness = finite.relative_rank(S, A)
        rep.field("r", r)
        rep.field("witness", " ".join(finite.format_finite(w) for w in sorted(witness)) or "none")
        return 0
    gens = finite.single_relative_generators(args.n, _ys(args.y))
    rep.field("count", len(gens))
    rep.lines.extend(finite.format_finite(g) for g in sorted(gens))
    return 0 if gens else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordchain", description=__doc__.splitlines()[0])
    p.add_argument("--porcelain", action="store_true", help="emit key=value lines")
    # also accepted after the subcommand; SUPPRESS keeps it from resetting the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="memberships, classification, audit and gap bounds", parents=[common])
    s.add_argument("map")
    s.add_argument("--y", help='restricted range, e.g. "(0,1)" or "{0} u [1,2)"')
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("compose", help="compose maps left to right", parents=[common])
    s.add_argument("maps", nargs="+")
    s.set_defaults(run=cmd_compose)

    s = sub.add_parser("gamma", help="print the generator for a chain", parents=[common])
    s.add_argument("--chain", required=True, help='e.g. "[0,1]", "[0,+inf)", "(-inf,0]"')
    s.add_argument("--params", help="comma-separated parameters, e.g. 1/3,2/3")
    s.add_argument("--dual", action="store_true", help="mirrored generator for (-inf,b]")
    s.set_defaults(run=cmd_gamma)

    s = sub.add_parser("test-generator", help="single relative generator criterion", parents=[common])
    s.add_argument("map")
    s.set_defaults(run=cmd_test_generator)

    s = sub.add_parser("sandwich", help="phi_hat, phi_tilde with phi_hat f phi_tilde = gamma", parents=[common])
    s.add_argument("map")
    s.add_argument("--params", help="generator parameters, e.g. 1/3,2/3")
    s.set_defaults(run=cmd_sandwich)

    s = sub.add_parser("factor", help="factor a map of OP(X,Y) over O(X,Y) and a generator", parents=[common])
    s.add_argument("map")
    s.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--ytilde")
    s.set_defaults(run=cmd_factor)

    s = sub.add_parser("obstruct", help="gap bounds and a map above all of them", parents=[common])
    s.add_argument("maps", nargs="*")
    s.add_argument("--y", required=True)
    s.add_argument("--x", help="the chain, when no maps are given (default the line)")
    s.set_defaults(run=cmd_obstruct)

    s = sub.add_parser("finite", help="brute-force oracle on 1 < ... < n", parents=[common])
    fsub = s.add_subparsers(dest="finite_cmd", required=True)
    c = fsub.add_parser("count", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--family", choices=("T", "O", "OP"), required=True)
    c.add_argument("--y")
    c.add_argument("--list", action="store_true")
    c = fsub.add_parser("classify", parents=[common])
    c.add_argument("map", help="e.g. [3,1,2]")
    c = fsub.add_parser("relrank", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--super", choices=("T", "O", "OP"), required=True)
    c.add_argument("--sub", choices=("T", "O", "OP"), required=True)
    c.add_argument("--y", help="comma-separated subset of 1..n")
    c = fsub.add_parser("generators", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--y")
    s.set_defaults(run=cmd_finite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report(args.porcelain)
    try:
        status = args.run(args, rep)
    except (ChainError, OSError, ValueError) as exc:
        rep.emit()
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    rep.emit()
    return status


if __name__ == "__main__":
    sys.exit(main())
