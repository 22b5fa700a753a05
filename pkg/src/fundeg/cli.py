"""``fundeg`` command line interface.

Exit codes: 0 success (including vacuous verifier runs), 1 a verifier
conclusion failed, 2 bad input, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Sequence

from . import __version__
from .chevalley import DEFAULT_CAP, THEOREMS, count_zeros, instance_from_json, verify
from .degree import analyze, degree_to_json, delta
from .errors import CapExceeded, FundegError, GroupMismatchError, ParseError
from .finite_field import parse_field_spec, poly_parse
from .functions import GroupFunction
from .groups import group_parse
from .nilpotency import conjecture_sweep, nu_cyclic_oracle, nu_via_delta, sweep_to_csv, sweep_to_json
from .random_instances import suite_json
from .rings_nc import nc_induced_function, nc_parse, ring_parse

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("FUNDEG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParseError(f"FUNDEG_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return
    for k, v in obj.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        elif isinstance(v, bool):
            v = "true" if v else "false"
        elif v is None:
            v = "-"
        out.write(f"{k}: {v}\n")


def _load_json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad {what} JSON: {exc}") from None


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _nvars_of(text: str, given: int | None) -> int:
    if given is not None:
        return given
    return max([int(v) for v in re.findall(r"x(\d+)", text)], default=1)


# -- subcommands ----------------------------------------------------------------


def cmd_degree(args, out) -> int:
    sources = [s for s in (args.table, args.input, args.poly, args.nc) if s is not None]
    if len(sources) != 1:
        raise ParseError("give exactly one of --table, --input, --poly, --nc")
    if args.table is not None or args.input is not None:
        if args.input is not None:
            f = GroupFunction.from_json(_read_file(args.input))
        else:
            if not args.domain:
                raise ParseError("--table needs --domain")
            dom = group_parse(args.domain)
            cod = group_parse(args.codomain) if args.codomain else dom
            f = GroupFunction.from_rows(dom, cod, _load_json_arg(args.table, "table"))
        extra = {}
    elif args.poly is not None:
        if not args.field:
            raise ParseError("--poly needs --field p,alpha")
        F = parse_field_spec(args.field)
        poly = poly_parse(F, _nvars_of(args.poly, args.nvars), args.poly)
        f = poly.induced_function()
        extra = {"pdeg": poly.pweight_degree(), "total_degree": poly.total_degree(), "poly": poly.render()}
    else:
        if not args.ring:
            raise ParseError("--nc needs --ring")
        R = ring_parse(args.ring)
        expr = nc_parse(args.nc, _nvars_of(args.nc, args.nvars), R)
        f = nc_induced_function(expr, R)
        extra = {"nc_degree": expr.degree(), "expression": expr.render()}
    rep = analyze(f, max_cells=args.cap)
    obj = {"domain": str(f.domain), "codomain": str(f.codomain), **rep.to_json(), **extra}
    _emit(obj, args.format, out)
    return EXIT_OK


def cmd_delta(args, out) -> int:
    A, B = group_parse(args.A), group_parse(args.B)
    _emit({"A": str(A), "B": str(B), "delta": degree_to_json(delta(A, B))}, args.format, out)
    return EXIT_OK


def cmd_nu(args, out) -> int:
    cyclic = (args.p, args.alpha, args.beta)
    if args.group is not None:
        if any(v is not None for v in cyclic):
            raise ParseError("give either --group/--n or --p/--alpha/--beta")
        if args.n is None:
            raise ParseError("--group needs --n")
        try:
            res = nu_via_delta(group_parse(args.group), args.n)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        _emit(res.to_json(), args.format, out)
        return EXIT_OK
    if any(v is None for v in cyclic):
        raise ParseError("nu needs --p, --alpha and --beta (or --group and --n)")
    try:
        oracle = nu_cyclic_oracle(args.p, args.alpha, args.beta)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    obj = oracle.to_json()
    if oracle.group.order <= 256:
        obj["nu_delta"] = degree_to_json(nu_via_delta(oracle.group, oracle.modulus).nu)
    _emit(obj, args.format, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    rows = conjecture_sweep(args.p_max, args.alpha_max, args.beta_max, noncyclic=args.noncyclic)
    fmt = args.format or "csv"
    out.write(sweep_to_json(rows) + "\n" if fmt == "json" else sweep_to_csv(rows))
    return EXIT_OK


def _instance_from_args(args):
    inline = args.field or args.ring or args.domain
    sources = [s for s in (args.file, args.instance, inline) if s]
    if len(sources) != 1:
        raise ParseError("give exactly one of an instance file, --instance, or inline --field/--ring/--domain")
    if args.file:
        return instance_from_json(_read_file(args.file))
    if args.instance:
        return instance_from_json(args.instance)
    if args.N is None:
        raise ParseError("inline instances need --N")
    obj = {"N": args.N}
    if args.theorem:
        obj["theorem"] = args.theorem
    if args.restriction:
        obj["restriction"] = _load_json_arg(args.restriction, "restriction")
    if args.field:
        obj["field"], obj["functions"] = args.field, args.poly or []
    elif args.ring:
        obj["ring"], obj["functions"] = args.ring, args.nc or []
    else:
        obj["group"] = args.domain
        if args.codomain:
            obj["codomain"] = args.codomain
        obj["functions"] = [_load_json_arg(t, "table") for t in args.table or []]
    if len([s for s in (args.field, args.ring, args.domain) if s]) > 1:
        raise ParseError("give only one of --field, --ring, --domain")
    return instance_from_json(obj)


def _default_theorem(system) -> str:
    return {"field": "warning1-pweight", "ring": "warning1-ring"}.get(system.kind, "warning1-group")


def cmd_verify(args, out) -> int:
    theorem, system = _instance_from_args(args)
    if args.theorem:
        if theorem and theorem != args.theorem:
            raise ParseError(f"--theorem {args.theorem} conflicts with instance theorem {theorem}")
        theorem = args.theorem
    theorem = theorem or _default_theorem(system)
    rep = verify(system, theorem, cap=args.cap or DEFAULT_CAP, threads=_threads(args))
    _emit(rep.to_json(), args.format, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_zeros(args, out) -> int:
    _, system = _instance_from_args(args)
    n = count_zeros(system, cap=args.cap or DEFAULT_CAP, threads=_threads(args))
    _emit({"domain": f"{system.base}^{system.N}", "zero_count": n}, args.format, out)
    return EXIT_OK


def cmd_suite(args, out) -> int:
    counts = None
    if args.count is not None:
        from .random_instances import FAMILIES

        counts = {name: args.count for name in FAMILIES}
    text = suite_json(args.seed, counts)
    out.write(text)
    return EXIT_OK if json.loads(text)["failures"] == 0 else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, fmt_default: str | None = "text") -> None:
    p.add_argument("--format", choices=["json", "text", "csv"], default=fmt_default)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: FUNDEG_THREADS or CPU count)")


def _add_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="instance JSON file")
    p.add_argument("--instance", help="inline instance JSON")
    p.add_argument("--theorem", choices=sorted(THEOREMS))
    p.add_argument("--field", help="p,alpha")
    p.add_argument("--poly", action="append", help="polynomial (repeatable)")
    p.add_argument("--ring", help="Zn or Mk(Zn)")
    p.add_argument("--nc", action="append", help="word polynomial (repeatable)")
    p.add_argument("--domain", help="coordinate group A of the domain A^N")
    p.add_argument("--codomain")
    p.add_argument("--table", action="append", help="function table JSON (repeatable)")
    p.add_argument("--N", type=int)
    p.add_argument("--restriction", help="JSON list of generator coordinate lists")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of domain points")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fundeg", description="Functional degree toolkit.")
    ap.add_argument("--version", action="version", version=f"fundeg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degree", help="functional degree of a table, polynomial or word polynomial")
    p.add_argument("--domain")
    p.add_argument("--codomain")
    p.add_argument("--table", help="JSON list of rows")
    p.add_argument("--input", help="function JSON file {domain, codomain, table}")
    p.add_argument("--field", help="p,alpha")
    p.add_argument("--poly")
    p.add_argument("--ring")
    p.add_argument("--nc")
    p.add_argument("--nvars", type=int)
    p.add_argument("--cap", type=int, default=None, help="max table entries held per search level")
    _add_common(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("delta", help="maximal degree of maps A -> B")
    p.add_argument("A")
    p.add_argument("B")
    _add_common(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("nu", help="nilpotency degree of the augmentation ideal")
    p.add_argument("--p", type=int)
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--group")
    p.add_argument("--n", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("sweep", help="compare nu methods with the conjectured closed form")
    p.add_argument("--p-max", type=int, default=3)
    p.add_argument("--alpha-max", type=int, default=2)
    p.add_argument("--beta-max", type=int, default=3)
    p.add_argument("--noncyclic", action="store_true")
    _add_common(p, fmt_default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check a theorem on an instance")
    _add_instance(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeros", help="count common zeros")
    _add_instance(p)
    _add_common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("suite", help="seeded randomized verifier suite (JSON)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, help="instances per family (default: 50, or 25 for restricted)")
    _add_common(p)
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CapExceeded as exc:
        print(f"fundeg: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, GroupMismatchError, ValueError) as exc:
        print(f"fundeg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FundegError as exc:
        print(f"fundeg: internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
