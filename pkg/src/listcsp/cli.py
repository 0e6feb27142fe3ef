"""Command-line interface: ``listcsp <command> ...``.

Results go to stdout (or ``-o``) as JSON documents; diagnostics go to
stderr. Exit codes: 0 affirmative, 1 negative answer (unsatisfiable, not
list-satisfiable, not a cover, decoding refused), 2 usage or input error,
3 budget or size cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from itertools import combinations

from . import io
from .config import resolve_cap
from .core import Assignment, evaluate_list, validate_instance
from .decoder import DecodeParams, ParameterWarning, decode_theorem
from .errors import (
    InvalidInput,
    NotRectangular,
    ParameterError,
    SizeCapExceeded,
    TriviallyUnsatisfiable,
    Uncoverable,
)
from .generators import (
    planted_instance,
    random_instance,
    random_partite_graph,
    random_rectangular_instance,
)
from .product import bipartite_product, direct_product, example1_instance, example1_lists, lift
from .reductions import (
    backmap_from_names,
    clique_to_csp,
    cover_to_lists,
    csp_to_exactcover,
    partition_system,
)
from .solver import DEFAULT_BUDGET, all_solutions, brute_list_solve, brute_min_cover, solve

OK, NO, USAGE, EXHAUSTED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE)


def _emit(text: str, path: str | None) -> None:
    if path:
        io.write_text(path, text)
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, path: str | None = None) -> None:
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", path)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_csp(path: str, check: bool = True):
    inst = io.parse_csp(io.read_text(path))
    if check:
        problems = validate_instance(inst)
        if problems:
            raise InvalidInput(f"{path}: " + "; ".join(problems))
    return inst


def _fraction(x) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# -- commands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family == "example1":
        inst = example1_instance(args.n)
        if args.lists_out:
            if args.t is None:
                raise InvalidInput("--lists-out needs --t")
            io.write_text(args.lists_out, io.serialize(example1_lists(args.n, args.t)))
    elif args.family == "clique":
        edges, parts = random_partite_graph(args.seed, args.k, args.part_size, args.p, args.planted)
        inst = clique_to_csp(edges, parts)
    elif args.rectangular:
        sat = {"yes": True, "no": False, "any": None}[args.satisfiable]
        inst = random_rectangular_instance(args.seed, args.vars, args.domain, args.density, sat)
        if sat:
            inst = inst[0]
    else:
        if args.satisfiable == "yes":
            inst, _ = planted_instance(args.seed, args.vars, args.domain, args.density, args.tightness)
        elif args.satisfiable == "any":
            inst = random_instance(args.seed, args.vars, args.domain, args.density, args.tightness)
        else:
            raise InvalidInput("--satisfiable no is supported together with --rectangular only")
    _emit(io.serialize(inst), args.output)
    return OK


def _product_summary(p) -> dict:
    sizes = [len(p.domain(s)) for s in p.variables]
    return {
        "shape": list(p.shape),
        "variables": len(p.variables),
        "constraints": sum(1 for _ in p.constraint_pairs()),
        "max_domain": max(sizes),
        "min_domain": min(sizes),
        "trivially_unsatisfiable": p.trivially_unsatisfiable,
    }


def _write_product_csp(p, path: str) -> None:
    inst, order = p.to_csp()
    note = "variables are subsets in order: " + " ".join(",".join(map(str, s)) for s in order)
    io.write_text(path, io.serialize_csp(type(inst)(inst.domains, inst.constraints, note)))


def cmd_product(args) -> int:
    inst = _load_csp(args.input)
    p = direct_product(inst, args.t, cap=args.cap, jobs=args.jobs)
    if args.csp_out:
        _write_product_csp(p, args.csp_out)
    status = OK
    if args.lift_out:
        sol = solve(inst)
        if sol is None:
            _note("base instance is unsatisfiable; nothing to lift")
            status = NO
        else:
            io.write_text(args.lift_out, io.serialize(lift(sol, p)))
    _emit_json(_product_summary(p), args.output)
    return status


def cmd_bipartite(args) -> int:
    inst = _load_csp(args.input)
    p = bipartite_product(inst, args.a, args.b, cap=args.cap, jobs=args.jobs)
    if args.csp_out:
        _write_product_csp(p, args.csp_out)
    _emit_json(_product_summary(p), args.output)
    return OK


def cmd_solve(args) -> int:
    inst = _load_csp(args.input)
    if args.count:
        n = len(all_solutions(inst))
        _emit_json({"solutions": n}, args.output)
        return OK if n else NO
    sol = solve(inst)
    if sol is None:
        _note("unsatisfiable")
        return NO
    _emit(io.serialize(sol), args.output)
    return OK


def cmd_list_solve(args) -> int:
    inst = _load_csp(args.input)
    res = brute_list_solve(inst, args.r, args.budget)
    _note(f"{res.status} after {res.nodes} nodes")
    if res.status == "budget":
        return EXHAUSTED
    if res.status == "none":
        return NO
    _emit(io.serialize(res.witness), args.output)
    return OK


def cmd_list_check(args) -> int:
    inst = _load_csp(args.input)
    m = io.parse_multiassignment(io.read_text(args.lists))
    keys = list(m)
    if keys and isinstance(keys[0], tuple):
        t = len(keys[0])
        report = direct_product(inst, t, cap=args.cap, jobs=args.jobs).evaluate_list(m)
    else:
        report = evaluate_list(inst, m)
    ok = report.list_satisfied
    if args.max is not None and report.max_size > args.max:
        ok = False
    if args.avg is not None and report.avg_size > args.avg:
        ok = False
    _emit_json({
        "list_satisfied": report.list_satisfied,
        "max_size": report.max_size,
        "avg_size": _fraction(report.avg_size),
        "within_bounds": ok,
    }, args.output)
    return OK if ok else NO


def _certificate_doc(cert) -> dict:
    doc = {"type": type(cert).__name__}
    for name in ("S", "T", "mode", "A", "b_prime"):
        if hasattr(cert, name):
            val = getattr(cert, name)
            doc[name] = list(val) if isinstance(val, tuple) else val
    if hasattr(cert, "blockers"):
        doc["blockers"] = [{"value": list(f.values), "blocker": list(tp)} for f, tp in cert.blockers]
    if hasattr(cert, "violations"):
        doc["violations"] = [{"inequality": n, "lhs": lhs, "rhs": rhs} for n, lhs, rhs in cert.violations]
    return doc


def cmd_decode(args) -> int:
    inst = _load_csp(args.input)
    m = io.parse_multiassignment(io.read_text(args.lists))
    keys = list(m)
    if not keys or not isinstance(keys[0], tuple):
        raise InvalidInput("decode needs a product-level multi-assignment")
    levels = range(1, max(args.r, args.q or 0) + 1)

    def per_level(value):
        return {} if value is None else {i: value for i in levels}

    params = DecodeParams(
        unit_b=args.unit_b,
        unit_b_prime=per_level(args.unit_b_prime),
        k=per_level(args.k),
        a_prime=per_level(args.a_prime),
        b_prime=per_level(args.b_prime),
    )
    with warnings.catch_warnings():
        # violations are reported below from the outcome
        warnings.simplefilter("ignore", ParameterWarning)
        out = decode_theorem(
            inst, m, args.r, a=args.a, b=args.b, q=args.q, override=args.override, params=params,
            samples=args.samples, strict_premises=args.strict_premises, seed=args.seed,
        )
    for w in out.warnings:
        _note(f"warning: parameter inequality {w[0]} violated ({w[1]} < {w[2]})")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for event in out.trace:
                fh.write(json.dumps(event, sort_keys=True, default=_jsonable) + "\n")
    if out.ok:
        _emit(io.serialize(out.assignment), args.output)
        return OK
    _note(f"decoding refused: {type(out.certificate).__name__}")
    _emit_json({"certificate": _certificate_doc(out.certificate)}, args.output)
    return NO


def _jsonable(x):
    if isinstance(x, Assignment):
        return {"variables": list(x.vars), "values": list(x.values)}
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return repr(x)


def cmd_reduce(args) -> int:
    inst = _load_csp(args.input)
    sc, _ = csp_to_exactcover(inst, cap=args.cap)
    _emit(io.serialize(sc), args.output)
    return OK


def cmd_verify_cover(args) -> int:
    sc = io.parse_setcover(io.read_text(args.input))
    problems = sc.validate()
    if problems:
        raise InvalidInput("; ".join(problems))
    if args.sets is None:
        limit = 2 * sc.k if args.limit is None else args.limit
        best = brute_min_cover(sc, limit)
        if best is None:
            _note(f"no cover with at most {limit} sets")
            _emit_json({"min_cover": None, "limit": limit}, args.output)
            return NO
        cover, doc = list(best.cover), {"min_cover": best.size, "exact_exists": best.exact}
    else:
        unknown = [s for s in args.sets if s not in sc.sets]
        if unknown:
            raise InvalidInput(f"unknown sets: {unknown}")
        cover, doc = list(args.sets), {}
    covers = sc.covers(cover)
    doc.update({
        "cover": sorted(cover),
        "covers": covers,
        "exact": sc.is_exact(cover),
        "size": len(cover),
        "within_k": len(cover) <= sc.k,
    })
    if covers and args.lists_out:
        try:
            lists = cover_to_lists(cover, backmap_from_names(sc), sc)
        except InvalidInput as exc:
            _note(f"cover does not map to lists: {exc}")
        else:
            io.write_text(args.lists_out, io.serialize(lists))
    _emit_json(doc, args.output)
    return OK if covers else NO


def cmd_verify_partition(args) -> int:
    ps = partition_system(args.kappa, args.rho, cap=args.cap)
    keys = sorted(ps.sets)
    if 2 ** len(keys) > resolve_cap(args.cap):
        raise SizeCapExceeded(f"2^{len(keys)} subcollections exceed the cap")
    bad = None
    checked = 0
    for size in range(len(keys) + 1):
        for chosen in combinations(keys, size):
            checked += 1
            if ps.covers(chosen) != ps.has_full_row(chosen):
                bad = chosen
                break
        if bad is not None:
            break
    doc = {"kappa": args.kappa, "rho": args.rho, "universe": len(ps.universe),
           "subcollections": checked, "holds": bad is None}
    if bad is not None:
        doc["counterexample"] = [list(k) for k in bad]
    _emit_json(doc, args.output)
    return OK if bad is None else NO


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--cap", type=int, default=None,
                        help="size cap for materialization (default: $LISTCSP_SIZE_CAP or 1e6)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for product domains")

    parser = _Parser(prog="listcsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = gsub.add_parser("example1", parents=[common], help="the unsatisfiable average-list family")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, help="product size for --lists-out")
    g.add_argument("--lists-out", help="also write the product list assignment")
    g = gsub.add_parser("clique", parents=[common], help="CSP of a random k-partite graph")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--part-size", type=int, required=True)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--planted", action="store_true", help="plant a multicolored clique")
    g.add_argument("--seed", type=int, required=True)
    g = gsub.add_parser("random", parents=[common], help="random instance")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--domain", type=int, required=True)
    g.add_argument("--density", type=float, default=0.6)
    g.add_argument("--tightness", type=float, default=0.5)
    g.add_argument("--satisfiable", choices=["yes", "no", "any"], default="any")
    g.add_argument("--rectangular", action="store_true")
    g.add_argument("--seed", type=int, required=True)
    gen.set_defaults(func=cmd_gen)

    p = sub.add_parser("product", parents=[common], help="t-wise direct product")
    p.add_argument("input")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--lift-out", help="write the lifted solution's singleton lists")
    p.add_argument("--csp-out", help="write the materialized product instance")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("bipartite", parents=[common], help="(a,b) bipartite direct product")
    p.add_argument("input")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--csp-out", help="write the materialized product instance")
    p.set_defaults(func=cmd_bipartite)

    p = sub.add_parser("solve", parents=[common], help="exact satisfiability")
    p.add_argument("input")
    p.add_argument("--count", action="store_true", help="count all solutions instead")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("list-solve", parents=[common], help="exact r-list satisfiability")
    p.add_argument("input")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_list_solve)

    p = sub.add_parser("list-check", parents=[common], help="check a (product) multi-assignment")
    p.add_argument("input")
    p.add_argument("--lists", required=True)
    p.add_argument("--max", type=int, help="also require max list size <= MAX")
    p.add_argument("--avg", type=_parse_fraction, help="also require mean list size <= AVG (e.g. 3/2)")
    p.set_defaults(func=cmd_list_check)

    p = sub.add_parser("decode", parents=[common], help="decode product lists into a solution")
    p.add_argument("input")
    p.add_argument("--lists", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", type=int, help="right list bound (default r)")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--override", action="store_true",
                   help="accept small subset sizes; violated inequalities become warnings")
    p.add_argument("--unit-b", type=int)
    p.add_argument("--unit-b-prime", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a-prime", type=int)
    p.add_argument("--b-prime", type=int)
    p.add_argument("--samples", type=int, default=200, help="premise pairs sampled (0: check all)")
    p.add_argument("--strict-premises", action="store_true", help="check every premise pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the recursion trace as JSON lines")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("reduce", help="reductions")
    rsub = p.add_subparsers(dest="target", required=True, parser_class=_Parser)
    r = rsub.add_parser("exactcover", parents=[common], help="rectangular CSP to set cover")
    r.add_argument("input")
    r.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="checks on covers and gadgets")
    vsub = p.add_subparsers(dest="target", required=True, parser_class=_Parser)
    v = vsub.add_parser("cover", parents=[common], help="check a cover, or find a minimum one")
    v.add_argument("input")
    v.add_argument("--sets", nargs="*", help="set names of the cover (omit to search)")
    v.add_argument("--limit", type=int, help="search limit (default 2k)")
    v.add_argument("--lists-out", help="write the multi-assignment the cover maps to")
    v.set_defaults(func=cmd_verify_cover)
    v = vsub.add_parser("partition-system", parents=[common], help="exhaustive covering check")
    v.add_argument("--kappa", type=int, required=True)
    v.add_argument("--rho", type=int, required=True)
    v.set_defaults(func=cmd_verify_partition)
    return parser


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", None) == 0:
        args.samples = None
    try:
        return args.func(args)
    except NotRectangular as exc:
        _note(f"error: {exc}")
        a, a2, b, b2 = exc.witness
        _note(json.dumps({"constraint": exc.constraint_index, "witness": [a, a2, b, b2]}))
        return USAGE
    except (SizeCapExceeded, TriviallyUnsatisfiable) as exc:
        _note(f"error: {exc}")
        return EXHAUSTED if isinstance(exc, SizeCapExceeded) else NO
    except Uncoverable as exc:
        _note(f"not coverable: {exc}")
        return NO
    except (InvalidInput, ParameterError, OSError) as exc:
        _note(f"error: {exc}")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
