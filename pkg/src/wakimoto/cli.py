"""Command-line front end.

Subcommands: realize (emit the differential and free-field realization),
verify (run verification suites), screen (build and check screening
currents), ope (ad-hoc operator products in a small expression grammar).

Exit codes: 0 all checks pass, 1 a mathematical verification failed,
2 input or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Optional

from .coeffs import RatFunc
from .currents import (
    CurrentSet,
    build_wakimoto,
    check_pair,
    osp22_currents,
    sugawara_tensor,
    verify_current_algebra,
)
from .diffop import build_differential_realization, verify_realization
from .fields import PHI, FieldExpr, UnsupportedContraction
from .liealg import CartanTypeError, get_algebra, verify_jacobi
from .ope import central_charge, contract, free_field_tensor
from .render import (
    SCHEMA_REALIZATION,
    SCHEMA_REPORT,
    diffop_to_json,
    fieldexpr_to_json,
    latex_diffop,
    latex_fieldexpr,
    ope_to_json,
)
from .screening import (
    DirectionError,
    first_kind,
    naive_second_kind_failure,
    second_kind_b2,
    second_kind_mult_one,
    second_kind_osp22,
    verify_first_kind,
    verify_second_kind_b2,
    verify_second_kind_mult_one,
    verify_second_kind_osp22,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


class InputError(ValueError):
    pass


def _load(selector: str) -> CurrentSet:
    if selector.strip().upper() == "OSP22":
        return osp22_currents()
    rs, tab = get_algebra(selector)
    return build_wakimoto(rs, tab)


# ---------------------------------------------------------------------------
# expression grammar for `ope`
# ---------------------------------------------------------------------------
#
#   expr    := term (('+'|'-') term)*
#   term    := factor ('*' factor)*
#   factor  := NUMBER | NUMBER '/' NUMBER | atom | '(' expr ')' | '-' factor
#   atom    := NAME '[' label ']' | 'T' | 'Tfree' | 'd(' expr ')'
#   NAME    := E | H | F | beta | gamma | b | c | dphi | s | stilde
#
# Root labels: a simple-root index ("1"), a coefficient digit string
# ("11", "12"), "theta", or "alphaN" forms of the same.

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z]+|\[|\]|\(|\)|\+|-|\*|/)")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"parse error at position {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _root_position(cs: CurrentSet, label: str) -> int:
    rs = cs.rs
    label = label.strip().lower()
    if label.startswith("alpha"):
        label = label[5:]
    if label == "theta":
        return rs.root_index(rs.theta)
    if label.isdigit():
        if len(label) == 1 and int(label) <= rs.rank:
            root = tuple(1 if i == int(label) - 1 else 0 for i in range(rs.rank))
            return rs.root_index(root)
        if len(label) == rs.rank:
            root = tuple(int(ch) for ch in label)
            if rs.is_root(root) and all(c >= 0 for c in root):
                return rs.root_index(root)
    raise InputError(f"unknown root label {label!r}")


class _Parser:
    def __init__(self, cs: CurrentSet, text: str):
        self.cs = cs
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            raise InputError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise InputError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> FieldExpr:
        out = self.expr()
        if self.peek() is not None:
            raise InputError(f"trailing input from token {self.pos}: {self.peek()!r}")
        return out

    def expr(self) -> FieldExpr:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> FieldExpr:
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> FieldExpr:
        tok = self.peek()
        if tok == "-":
            self.take()
            return self.factor().scale(-1)
        if tok == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if tok is not None and tok.isdigit():
            self.take()
            num = int(tok)
            if self.peek() == "/":
                self.take()
                den = int(self.take())
                return FieldExpr.const(Fraction(num, den))
            return FieldExpr.const(num)
        return self.atom()

    def atom(self) -> FieldExpr:
        cs = self.cs
        name = self.take()
        if name == "d":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner.derivative(cs.ctx)
        if name == "T":
            return sugawara_tensor(cs)
        if name == "Tfree":
            return free_field_tensor(cs.ctx)
        self.take("[")
        label = self.take()
        self.take("]")
        if name in ("E", "F"):
            pos = _root_position(cs, label)
            return cs.currents[("e" if name == "E" else "f", cs.rs.pos_roots[pos])]
        if name == "H":
            i = int(label)
            if not 1 <= i <= cs.rs.rank:
                raise InputError(f"Cartan index {i} out of range")
            return cs.currents[("h", i - 1)]
        if name in ("beta", "gamma", "b", "c"):
            pos = _root_position(cs, label)
            kind = cs.ctx.beta_kind(pos) if name in ("beta", "b") else cs.ctx.gamma_kind(pos)
            return FieldExpr.prim(kind, pos)
        if name == "dphi":
            i = int(label)
            return FieldExpr.prim(PHI, i - 1)
        if name == "s":
            j = int(label) - 1
            return first_kind(cs, j).expr
        if name == "stilde":
            j = int(label) - 1
            s = second_kind_mult_one(cs, j)
            return s.expr
        raise InputError(f"unknown generator {name!r}")


def parse_expression(cs: CurrentSet, text: str) -> FieldExpr:
    return _Parser(cs, text).parse()


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _sweep_pairs(cs: CurrentSet, jobs: int, selector: str):
    labels = cs.labels()
    pairs = [(a, b) for a in labels for b in labels]
    if jobs <= 1:
        return verify_current_algebra(cs, pairs)
    from concurrent.futures import ProcessPoolExecutor

    chunks = [pairs[i::jobs] for i in range(jobs)]
    bad = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_sweep_worker, [(selector, c) for c in chunks]):
            bad.extend(part)
    return bad


def _sweep_worker(args):
    selector, pairs = args
    cs = _load(selector)
    out = []
    for a, b in pairs:
        for v in check_pair(cs, a, b):
            out.append((v.pair, v.order, v.detail))
    return out


def run_suite(cs: CurrentSet, suite: str, direction: Optional[int], jobs: int, selector: str = "B2"):
    """Returns (ok, details dict)."""
    rs = cs.rs
    if suite == "jacobi":
        bad = verify_jacobi(cs.tab)
        return not bad, {"violations": [str(t) for t in bad]}
    if suite == "realization":
        if cs.ctx.root_parity != (0,) * rs.n_pos:
            return True, {"skipped": "differential realization covers the bosonic algebras"}
        ops = build_differential_realization(rs, cs.tab, cs.polys)
        bad = verify_realization(ops, cs.tab)
        return not bad, {"violations": [str(t) for t in bad]}
    if suite == "currents":
        bad = _sweep_pairs(cs, jobs, selector)
        det = []
        for v in bad:
            if isinstance(v, tuple):
                det.append({"pair": str(v[0]), "order": v[1], "diff": v[2]})
            else:
                det.append({"pair": str(v.pair), "order": v.order, "diff": v.detail})
        return not det, {"violations": det}
    if suite == "sugawara":
        T = sugawara_tensor(cs)
        Tfree = free_field_tensor(cs.ctx)
        ok = T.equals(Tfree)
        k = RatFunc.k()
        t = cs.ctx.t()
        c_got = central_charge(cs.ctx, Tfree)
        c_want = k * rs.dim / t if cs.ctx.root_parity == (0,) * rs.n_pos else None
        details = {"sugawara_equals_free": ok, "central_charge": c_got.text()}
        if c_want is not None:
            details["central_charge_ok"] = c_got == c_want
            ok = ok and c_got == c_want
        return ok, details
    if suite == "screening-first":
        directions = [direction] if direction is not None else list(range(rs.rank))
        if cs.ctx.root_parity != (0,) * rs.n_pos:
            return True, {"skipped": "first-kind suite covers the bosonic algebras"}
        results = {}
        ok = True
        for j in directions:
            rep = verify_first_kind(cs, first_kind(cs, j))
            results[str(j + 1)] = _report_json(cs, rep)
            ok = ok and rep.ok
        return ok, results
    if suite == "screening-second":
        return _second_kind_suite(cs, direction)
    if suite == "naive-second-kind":
        j = direction if direction is not None else 1
        fail = naive_second_kind_failure(cs, j)
        return (
            fail.nonvanishing and fail.matches_expected_shape,
            {
                "third_order_pole": fail.third_order_pole.text(cs.ctx),
                "matches_expected_shape": fail.matches_expected_shape,
                "note": "a nonvanishing third-order pole is the expected outcome",
            },
        )
    raise InputError(f"unknown suite {suite!r}")


def _second_kind_suite(cs: CurrentSet, direction: Optional[int]):
    rs = cs.rs
    results = {}
    ok = True
    if cs.ctx.root_parity != (0,) * rs.n_pos:
        s = second_kind_osp22(cs)
        rep = verify_second_kind_osp22(cs, s)
        results["1"] = _report_json(cs, rep)
        return rep.ok, results
    directions = [direction] if direction is not None else list(range(rs.rank))
    for j in directions:
        if rs.theta[j] == 1:
            s = second_kind_mult_one(cs, j)
            rep = verify_second_kind_mult_one(cs, s)
        elif rs.name == "B2" and j == 1:
            s = second_kind_b2(cs)
            rep = verify_second_kind_b2(cs, s)
        else:
            results[str(j + 1)] = {
                "status": "unavailable",
                "reason": f"multiplicity {rs.theta[j]} direction without a series construction",
            }
            continue
        results[str(j + 1)] = _report_json(cs, rep)
        ok = ok and rep.ok
    return ok, results


def _report_json(cs: CurrentSet, rep):
    out = {}
    for c in rep.checks:
        kind, arg = c.label
        if kind in ("e", "f"):
            name = ("E" if kind == "e" else "F") + "[" + cs.rs.root_name(arg) + "]"
        elif kind == "h":
            name = f"H[{arg + 1}]"
        else:
            name = "T"
        entry = {"status": "ok" if c.ok else "fail"}
        if c.witness_text:
            entry["witness"] = c.witness_text
        if c.detail:
            entry["detail"] = c.detail
        out[name] = entry
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_realize(args) -> int:
    cs = _load(args.algebra)
    rs = cs.rs
    bosonic = cs.ctx.root_parity == (0,) * rs.n_pos
    ops = (
        build_differential_realization(rs, cs.tab, cs.polys)
        if bosonic and cs.polys is not None
        else None
    )
    names = {}
    for label in cs.labels():
        kind, arg = label
        if kind == "h":
            names[label] = f"H[{arg + 1}]"
        else:
            names[label] = ("E" if kind == "e" else "F") + f"[{rs.root_name(arg)}]"
    if args.format == "json":
        data = {
            "schema": SCHEMA_REALIZATION,
            "algebra": rs.name,
            "positive_roots": [list(a) for a in rs.pos_roots],
            "dual_coxeter": rs.hvee,
            "dimension": rs.dim,
            "currents": {
                names[lab]: fieldexpr_to_json(expr) for lab, expr in cs.currents.items()
            },
        }
        if ops is not None:
            data["differential_operators"] = {
                names[lab]: diffop_to_json(op) for lab, op in ops.items()
            }
        if cs.polys is not None:
            from .render import poly_to_json

            rnames = [rs.root_name(a) for a in rs.pos_roots]
            polys = cs.polys

            def fam(rows, col_names):
                return {
                    rnames[a]: {
                        col_names[b]: poly_to_json(rows[a][b])
                        for b in range(len(rows[a]))
                        if not rows[a][b].is_zero
                    }
                    for a in range(len(rows))
                }

            cartan_names = [str(i + 1) for i in range(rs.rank)]
            data["polynomials"] = {
                "V_plus": fam(polys.V_plus, rnames),
                "V_cartan": {
                    cartan_names[i]: {
                        rnames[b]: poly_to_json(polys.V_cartan[i][b])
                        for b in range(rs.n_pos)
                        if not polys.V_cartan[i][b].is_zero
                    }
                    for i in range(rs.rank)
                },
                "V_minus": fam(polys.V_minus, rnames),
                "P": fam(polys.P, cartan_names),
                "Q": fam(polys.Q, rnames),
                "S": fam(polys.S, rnames),
            }
        print(json.dumps(data, indent=2, sort_keys=True))
    elif args.format == "latex":
        lines = []
        if ops is not None:
            lines.append("% differential operator realization")
            for lab, op in ops.items():
                lines.append(f"{names[lab]} &= {latex_diffop(op)} \\\\")
        lines.append("% free-field currents")
        for lab, expr in cs.currents.items():
            lines.append(f"{names[lab]} &= {latex_fieldexpr(expr, cs.ctx)} \\\\")
        print("\n".join(lines))
    else:
        for lab, expr in cs.currents.items():
            print(f"{names[lab]} = {expr.text(cs.ctx)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cs = _load(args.algebra)
    suites = (
        ["jacobi", "realization", "currents", "sugawara", "screening-first", "screening-second"]
        if args.suite == "all"
        else [args.suite]
    )
    direction = args.direction - 1 if args.direction is not None else None
    report = {}
    ok = True
    for suite in suites:
        sok, details = run_suite(cs, suite, direction, args.jobs, args.algebra)
        report[suite] = {"status": "pass" if sok else "fail", "details": details}
        ok = ok and sok
    out = {"schema": SCHEMA_REPORT, "algebra": cs.rs.name, "suites": report}
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        for suite, entry in report.items():
            print(f"{suite}: {entry['status']}")
            if entry["status"] == "fail":
                print("  " + json.dumps(entry["details"], sort_keys=True)[:400])
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_screen(args) -> int:
    cs = _load(args.algebra)
    j = args.direction - 1
    if args.kind == "first":
        s = first_kind(cs, j)
        rep = verify_first_kind(cs, s) if args.verify else None
    else:
        if cs.ctx.root_parity != (0,) * cs.rs.n_pos:
            s = second_kind_osp22(cs)
            rep = verify_second_kind_osp22(cs, s) if args.verify else None
        elif cs.rs.theta[j] == 1:
            s = second_kind_mult_one(cs, j)
            rep = verify_second_kind_mult_one(cs, s) if args.verify else None
        else:
            s = second_kind_b2(cs)
            rep = verify_second_kind_b2(cs, s) if args.verify else None
    body = s.expr.body if s.is_series else s.expr
    data = {
        "schema": SCHEMA_REPORT,
        "algebra": cs.rs.name,
        "kind": s.kind,
        "direction": args.direction,
        "current": body.text(cs.ctx) if args.format != "latex" else latex_fieldexpr(body, cs.ctx),
        "series": s.is_series,
    }
    if rep is not None:
        data["checks"] = _report_json(cs, rep)
        data["status"] = "pass" if rep.ok else "fail"
    print(json.dumps(data, indent=2, sort_keys=True))
    if rep is not None and not rep.ok:
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_ope(args) -> int:
    cs = _load(args.algebra)
    A = parse_expression(cs, args.left)
    B = parse_expression(cs, args.right)
    res = contract(cs.ctx, A, B, max_order=args.max_order)
    if args.format == "json":
        print(json.dumps(ope_to_json(res, cs.ctx), indent=2, sort_keys=True))
    else:
        if not res.nonzero_orders():
            print("regular")
        for q in res.nonzero_orders():
            body = (
                latex_fieldexpr(res.order(q), cs.ctx)
                if args.format == "latex"
                else res.order(q).text(cs.ctx)
            )
            print(f"pole {q}: {body}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wakimoto",
        description="Free-field realizations of affine current algebras and their screening currents.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--algebra", default="B2", help="A1/A2/B2/..., OSP22, or a Cartan JSON path")
        p.add_argument("--format", choices=("text", "json", "latex"), default="json")
        p.add_argument("--max-order", type=int, default=4)
        p.add_argument(
            "--jobs",
            type=int,
            default=int(os.environ.get("WAKIMOTO_JOBS", "1")),
            help="parallel workers for the OPE sweep",
        )

    p = sub.add_parser("realize", help="emit the realization")
    common(p)
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument(
        "--suite",
        default="all",
        choices=(
            "all",
            "jacobi",
            "realization",
            "currents",
            "sugawara",
            "screening-first",
            "screening-second",
            "naive-second-kind",
        ),
    )
    p.add_argument("--direction", type=int, default=None, help="simple-root index (1-based)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("screen", help="build or verify a screening current")
    common(p)
    p.add_argument("--direction", type=int, required=True)
    p.add_argument("--kind", choices=("first", "second"), default="first")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=cmd_screen)

    p = sub.add_parser("ope", help="operator product of two expressions")
    common(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_ope)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, CartanTypeError, DirectionError, UnsupportedContraction) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
