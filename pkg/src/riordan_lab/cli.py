"""Command-line front end: show, invert, mul, verify, list.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
3 a mathematical precondition failed (non-invertible input, non-Riordan shape).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import identities
from .exact_arith import Context, NotInvertibleError, TruncatedSeries, as_poly
from .literals import LiteralError, parse_poly, parse_series_expr
from .riordan import (
    RiordanArray,
    RiordanError,
    riordan_from_matrix,
    riordan_inv,
    riordan_mul,
    riordan_new,
    riordan_to_matrix,
)
from .sequences import FAMILIES, family
from .triangle import LowerTriangular, from_toeplitz, lt_inverse, lt_mul

DEFAULT_ORDER = 12


class UsageError(Exception):
    pass


class PreconditionError(Exception):
    pass


# -- configuration ---------------------------------------------------------------


def _config(args) -> tuple[int, int, bool]:
    """(order, q_bound, q_bound_given)."""
    order = DEFAULT_ORDER if args.order is None else args.order
    if order < 2:
        raise UsageError("--order must be >= 2")
    given = args.q_bound is not None
    q_bound = args.q_bound if given else 2 * order + 4
    if q_bound < order:
        raise UsageError("--q-bound must be >= --order")
    return order, q_bound, given


# -- operand parsing -------------------------------------------------------------------


class _Operand(argparse.Action):
    """Collect --riordan/--toeplitz/--family/--matrix in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        ops = list(getattr(namespace, "operands", None) or [])
        ops.append((self.dest, values))
        namespace.operands = ops


def parse_riordan_literal(text: str, order: int, ctx: Context | None = None) -> RiordanArray:
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError(f"Riordan literal must look like 'f;h', got {text!r}")
    f = parse_series_expr(parts[0], order - 1, ctx=ctx)
    h = parse_series_expr(parts[1], order, ctx=ctx)
    return riordan_new(f, h)


def parse_toeplitz_literal(text: str, order: int) -> LowerTriangular:
    items = [s for s in (t.strip() for t in text.split(",")) if s]
    if not items:
        raise UsageError("empty Toeplitz literal")
    vals = [parse_poly(s) for s in items]
    vals += [as_poly(0)] * max(0, order - len(vals))
    return from_toeplitz(vals, order)


def _entries_from_json(data) -> list[list]:
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise UsageError("triangle JSON needs an 'entries' list of rows")
    rows = []
    for n, row in enumerate(entries):
        if not isinstance(row, list):
            raise UsageError(f"row {n} is not a list")
        rows.append([parse_poly(v) if isinstance(v, str) else as_poly(v) for v in row])
    return rows


def load_matrix_file(path: str, order: int | None):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    if "f" in data and "h" in data:
        f = TruncatedSeries([parse_poly(v) if isinstance(v, str) else as_poly(v) for v in data["f"]])
        h = TruncatedSeries([parse_poly(v) if isinstance(v, str) else as_poly(v) for v in data["h"]])
        R = riordan_new(f, h)
        if order is not None:
            if order > R.order:
                raise UsageError(f"{path} has order {R.order}, less than --order {order}")
            R = R.truncate(order)
        return R
    try:
        A = LowerTriangular(_entries_from_json(data))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if "order" in data and data["order"] != A.order:
        raise UsageError(f"{path}: 'order' is {data['order']} but there are {A.order} rows")
    if order is not None:
        if order > A.order:
            raise UsageError(f"{path} has order {A.order}, less than --order {order}")
        A = A.truncate(order)
    return A


def resolve_operand(kind: str, value: str, order: int, explicit_order: bool, ctx: Context | None):
    if kind == "riordan":
        return parse_riordan_literal(value, order, ctx)
    if kind == "toeplitz":
        return parse_toeplitz_literal(value, order)
    if kind == "family":
        if value not in FAMILIES:
            raise UsageError(f"unknown family {value!r}; try 'list --families'")
        return from_toeplitz(family(value, order), order)
    if kind == "matrix":
        return load_matrix_file(value, order if explicit_order else None)
    raise UsageError(f"unknown operand kind {kind}")


def _as_matrix(x, ctx) -> LowerTriangular:
    return riordan_to_matrix(x, ctx) if isinstance(x, RiordanArray) else x


# -- rendering ------------------------------------------------------------------


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def render_triangle(A: LowerTriangular, fmt: str) -> str:
    cells = [[str(v) for v in row] for row in A.rows]
    if fmt == "json":
        return json.dumps({"order": A.order, "entries": cells}) + "\n"
    if fmt == "csv":
        return _csv([row + [""] * (A.order - len(row)) for row in cells])
    widths = [max(len(cells[n][j]) for n in range(j, A.order)) for j in range(A.order)]
    lines = ["  ".join(c.rjust(widths[j]) for j, c in enumerate(row)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def render_riordan(R: RiordanArray, fmt: str) -> str:
    f = [str(c) for c in R.f]
    h = [str(c) for c in R.h]
    if fmt == "json":
        return json.dumps({"order": R.order, "f": f, "h": h}) + "\n"
    if fmt == "csv":
        return _csv([["f"] + f, ["h"] + h])
    return f"f: {', '.join(f)}\nh: {', '.join(h)}\n"


def render_sequence(name: str, values, fmt: str) -> str:
    vals = [str(v) for v in values]
    if fmt == "json":
        return json.dumps({"family": name, "order": len(vals), "values": vals}) + "\n"
    if fmt == "csv":
        return _csv([["n", "value"]] + [[n, v] for n, v in enumerate(vals)])
    return "".join(f"{n}: {v}\n" for n, v in enumerate(vals))


def render_result(result, fmt: str, as_riordan: bool, ctx) -> str:
    if as_riordan and isinstance(result, LowerTriangular):
        try:
            result = riordan_from_matrix(result, ctx)
        except (RiordanError, NotInvertibleError) as exc:
            raise PreconditionError(f"result is not Riordan-shaped: {exc}") from None
    if isinstance(result, RiordanArray):
        return render_riordan(result, fmt)
    return render_triangle(result, fmt)


def render_report(r: identities.IdentityReport, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return r.dumps(timing) + "\n"
    m = r.first_mismatch or {}
    if fmt == "csv":
        row = [r.id, r.verdict, r.order, r.q_bound, m.get("n", ""), m.get("j", ""), m.get("lhs", ""), m.get("rhs", "")]
        if timing:
            row.append(f"{r.elapsed_ms:.3f}")
        return _csv([row])
    line = f"{r.verdict.upper():4}  {r.id}  (order {r.order}, q-bound {r.q_bound})"
    if timing:
        line += f"  {r.elapsed_ms:.1f} ms"
    if r.first_mismatch:
        line += f"\n      first mismatch at n={m['n']}, j={m['j']}: lhs = {m['lhs']}, rhs = {m['rhs']}"
    return line + "\n"


# -- subcommands ---------------------------------------------------------------


def _operands(args, order, explicit, ctx, need: str):
    ops = getattr(args, "operands", None) or []
    if need == "one" and len(ops) != 1:
        raise UsageError(f"{args.command} takes exactly one of --riordan/--toeplitz/--family/--matrix")
    if need == "many" and len(ops) < 2:
        raise UsageError("mul needs at least two operands")
    return [resolve_operand(k, v, order, explicit, ctx) for k, v in ops]


def cmd_show(args) -> tuple[int, str]:
    order, D, given = _config(args)
    ctx = Context(D) if given else None
    ops = getattr(args, "operands", None) or []
    if len(ops) == 1 and ops[0][0] == "family" and not args.as_riordan:
        name = ops[0][1]
        if name not in FAMILIES:
            raise UsageError(f"unknown family {name!r}; try 'list --families'")
        return 0, render_sequence(name, family(name, order), args.format)
    (x,) = _operands(args, order, args.order is not None, ctx, "one")
    if isinstance(x, RiordanArray) and not args.as_riordan:
        x = riordan_to_matrix(x, ctx)
    return 0, render_result(x, args.format, args.as_riordan, ctx)


def cmd_invert(args) -> tuple[int, str]:
    order, D, given = _config(args)
    ctx = Context(D) if given else None
    (x,) = _operands(args, order, args.order is not None, ctx, "one")
    if isinstance(x, RiordanArray):
        result = riordan_inv(x, ctx)
        if not args.as_riordan and args.matrix_out:
            result = riordan_to_matrix(result, ctx)
    else:
        result = lt_inverse(x, ctx)
    return 0, render_result(result, args.format, args.as_riordan, ctx)


def cmd_mul(args) -> tuple[int, str]:
    order, D, given = _config(args)
    ctx = Context(D) if given else None
    xs = _operands(args, order, args.order is not None, ctx, "many")
    if all(isinstance(x, RiordanArray) for x in xs):
        result = xs[0]
        for x in xs[1:]:
            result = riordan_mul(result, x, ctx)
        if args.matrix_out:
            result = riordan_to_matrix(result, ctx)
    else:
        mats = [_as_matrix(x, ctx) for x in xs]
        if len({m.order for m in mats}) != 1:
            raise UsageError("operands have different orders: " + ", ".join(str(m.order) for m in mats))
        result = mats[0]
        for m in mats[1:]:
            result = lt_mul(result, m, ctx)
    return 0, render_result(result, args.format, args.as_riordan, ctx)


def _parse_params(items: Sequence[str] | None) -> dict:
    out = {}
    for item in items or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _load_table(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}") from None


def cmd_verify(args) -> tuple[int, str]:
    order, D, _ = _config(args)
    if args.pair:
        if args.ids or args.all:
            raise UsageError("--pair cannot be combined with identity ids")
        a, b = (_load_table(p) for p in args.pair)
        try:
            reports = [identities.pair_check(a, b, args.weight, order)]
        except identities.TableError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.all:
            ids = sorted(identities.CATALOG)
        elif args.ids:
            ids = []
            for pat in args.ids:
                found = identities.match_ids([pat])
                if not found:
                    raise UsageError(f"no identity matches {pat!r}")
                ids.extend(found)
            ids = sorted(set(ids))
        else:
            raise UsageError("give identity ids (globs allowed) or --all")
        params = _parse_params(args.param)
        if params:
            try:
                reports = [identities.run(i, order, D, params) for i in ids]
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            reports = identities.run_all(order, D, ids=ids, jobs=args.jobs)
    out = []
    if args.format == "csv":
        head = ["id", "verdict", "order", "q_bound", "n", "j", "lhs", "rhs"] + (["elapsed_ms"] if args.timing else [])
        out.append(_csv([head]))
    out += [render_report(r, args.format, args.timing) for r in reports]
    failed = [r.id for r in reports if not r.passed]
    if args.format == "pretty":
        out.append(f"{len(reports) - len(failed)} passed, {len(failed)} failed\n")
    return (1 if failed else 0), "".join(out)


def cmd_list(args) -> tuple[int, str]:
    if args.families:
        names = sorted(FAMILIES)
        if args.format == "json":
            return 0, "".join(json.dumps({"family": n}) + "\n" for n in names)
        return 0, "".join(n + "\n" for n in names)
    entries = identities.list_identities()
    if args.format == "json":
        return 0, "".join(json.dumps(e) + "\n" for e in entries)
    if args.format == "csv":
        return 0, _csv([["id", "anchor"]] + [[e["id"], e["anchor"]] for e in entries])
    width = max(len(e["id"]) for e in entries)
    return 0, "".join(f"{e['id']:<{width}}  {e['anchor']}\n" for e in entries)


# -- parser ----------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--order", type=int, default=d(None), help="truncation order N (default 12)")
    p.add_argument("--q-bound", type=int, default=d(None), help="q-adic truncation bound D (default 2N+4)")
    p.add_argument("--format", choices=("pretty", "json", "csv"), default=d("pretty"))
    p.add_argument("--output", default=d(None), help="write to this file instead of standard output")
    p.add_argument("--timing", action="store_true", default=d(False), help="include elapsed times")


def _add_operands(p: argparse.ArgumentParser):
    p.add_argument("--riordan", action=_Operand, metavar="F;H", help="Riordan pair, e.g. '1/(1-x);x/(1-x)'")
    p.add_argument("--toeplitz", action=_Operand, metavar="D0,D1,...", help="Toeplitz data [d_(n-j)]")
    p.add_argument("--family", action=_Operand, metavar="ID", help="sequence family as a Toeplitz matrix")
    p.add_argument("--matrix", action=_Operand, metavar="FILE", help="JSON triangle or Riordan pair")
    p.add_argument("--as-riordan", action="store_true", help="print the result as an (f, h) pair")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riordan-lab", description="Exact lower-triangular and Riordan array toolkit.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("show", help="render a triangle, Riordan array or sequence family")
    _add_common(p, suppress=True)
    _add_operands(p)
    p.set_defaults(func=cmd_show)

    for name, func, helptext in (("invert", cmd_invert, "invert one operand"), ("mul", cmd_mul, "multiply operands left to right")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p, suppress=True)
        _add_operands(p)
        p.add_argument("--as-matrix", dest="matrix_out", action="store_true", help="print Riordan results as matrices")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run identity checks")
    _add_common(p, suppress=True)
    p.add_argument("ids", nargs="*", help="identity ids or glob patterns")
    p.add_argument("--all", action="store_true", help="run the whole catalog")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="check parameter (JSON value)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--pair", nargs=2, metavar=("TABLE_A", "TABLE_B"), help="check two recurrence tables as an inverse pair")
    p.add_argument("--weight", default="q_factorial", choices=("q_factorial", "q_pochhammer", "factorial", "none"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list", help="list catalog identities")
    _add_common(p, suppress=True)
    p.add_argument("--families", action="store_true", help="list sequence family ids instead")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not hasattr(args, "as_riordan"):
        args.as_riordan = False
    if not hasattr(args, "matrix_out"):
        args.matrix_out = False
    try:
        code, text = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LiteralError, identities.UnknownIdentityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotInvertibleError, RiordanError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
