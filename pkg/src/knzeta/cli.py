"""knzeta command line: dense-edges, conditions, polar, witness, eval, check.

Exit codes: 0 ok, 1 a check suite failed, 2 malformed input, 3 degenerate
domain, 4 unsupported domain, 5 parameters outside the convergence region.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import numerics, serialize
from .arrangement import SVariable, dense_edges, kn_arrangement, kn_infinity_flats, kn_variables
from .errors import KNError, MalformedInputError
from .zeta import (
    ConvergenceCondition,
    Domain,
    general_polar_report,
    i0_filter,
    independence_witness,
    kn_conditions,
    polar_report,
    verify_witness,
)

log = logging.getLogger("knzeta")

BUILTIN_DOMAINS = {"whole": Domain.whole, "simplex": Domain.simplex, "cube": Domain.cube}


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


def _domain(args) -> Domain:
    if args.domain is None:
        return Domain.whole(args.N)
    if args.domain in BUILTIN_DOMAINS:
        return BUILTIN_DOMAINS[args.domain](args.N)
    return serialize.domain_from_json(_load_json(args.domain), args.N)


def _emit(args, doc: dict, text: str):
    if args.format == "json":
        json.dump(doc, sys.stdout, ensure_ascii=False, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _needs_N(args):
    if args.N is None or args.N < 1:
        raise MalformedInputError("--N must be a positive integer")


# -- subcommands --------------------------------------------------------------------

def cmd_dense_edges(args) -> int:
    if args.arrangement:
        A = serialize.arrangement_from_json(_load_json(args.arrangement))
    else:
        _needs_N(args)
        A = kn_arrangement(args.N)
    flats = dense_edges(A)
    inf = kn_infinity_flats(A.N) if A.kind == "kn" else []
    doc = serialize.flats_to_json(A, flats, inf)
    lines = [f"arrangement {A.ident}: {len(flats)} affine dense edges"]
    for e in flats:
        lines.append(f"  dim {e.dim}  {e}  [{', '.join(map(str, sorted(e.containing)))}]")
    if A.kind == "kn":
        lines.append(f"{len(inf)} flats at infinity")
        lines += [f"  dim {e.dim}  {e}" for e in inf]
        c = doc["counts"]
        mark = "ok" if c["identity_holds"] else "MISMATCH"
        lines.append(f"count identity: 3*2^N - N - 3 = {c['expected_affine']}, "
                     f"2^N - 1 = {c['expected_infinity']}: {mark}")
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_conditions(args) -> int:
    _needs_N(args)
    conds = kn_conditions(args.N)
    doc = serialize.conditions_to_json(args.N, conds)
    lines = [f"{len(conds)} convergence conditions for N={args.N}"]
    lines += [f"  [{k}] {c}" for k, c in enumerate(conds, 1)]
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_polar(args) -> int:
    if args.arrangement:
        A = serialize.arrangement_from_json(_load_json(args.arrangement))
        if A.kind == "kn":
            args.N = A.N if args.N is None else args.N
        else:
            args.N = A.ambient_dim if args.N is None else args.N
    _needs_N(args)
    D = _domain(args)
    if args.arrangement and A.kind != "kn":
        if args.i0:
            raise MalformedInputError("--i0 applies to the KN arrangement only")
        report = general_polar_report(A, D)
    else:
        A = kn_arrangement(args.N)
        report = polar_report(args.N, D)
        if args.i0:
            report = i0_filter(report)
    doc = serialize.polar_to_json(report, A, D)
    lines = [f"polar report: {report.arrangement} over {report.domain}"
             f"{' (i0 variant)' if report.variant == 'i0' else ''}"]
    for r in report.records:
        flag = "contributes" if r.contributes else "no"
        lines.append(f"  {flag:12s} dim {r.flat_dim} trace {r.intersection_dim:2d}  "
                     f"{r.flat}  :  {r.condition}")
    lines.append(f"{len(report.contributing)} of {len(report.records)} flats contribute")
    lines.append("Gamma skeleton: " + " ".join(str(g) for g in report.gamma_factors))
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_witness(args) -> int:
    _needs_N(args)
    conds = kn_conditions(args.N)
    if args.all:
        picks = list(range(1, len(conds) + 1))
    elif args.condition is not None:
        if not 1 <= args.condition <= len(conds):
            raise MalformedInputError(f"condition index must be in 1..{len(conds)}")
        picks = [args.condition]
    else:
        raise MalformedInputError("give --condition INDEX or --all")
    rows = []
    for k in picks:
        c = conds[k - 1]
        w = independence_witness(args.N, c)
        rows.append((k, c, w, verify_witness(w, conds, c)))
    doc = serialize.witnesses_to_json(args.N, rows)
    lines = []
    for k, c, w, ok in rows:
        vals = ", ".join(f"{v}={q}" for v, q in w.items())
        lines.append(f"[{k}] {c}: {'verified' if ok else 'FAILED'}\n    {vals}")
    lines.append(f"{sum(r[3] for r in rows)}/{len(rows)} witnesses verified")
    _emit(args, doc, "\n".join(lines))
    return 0 if doc["all_verified"] else 1


def cmd_eval(args) -> int:
    _needs_N(args)
    if args.params is None:
        raise MalformedInputError("eval needs --params FILE")
    D = _domain(args)
    s = serialize.params_from_json(_load_json(args.params), args.N)
    log.info("sampling %d points over %s", args.samples, D.ident)
    r = numerics.eval_zeta_mc(args.N, D, s, samples=args.samples, seed=args.seed,
                              workers=args.workers)
    doc = serialize.eval_to_json(args.N, D, r)
    _emit(args, doc, f"estimate {r.estimate:.10g} +- {r.stderr:.3g} "
                     f"({r.samples} samples, seed {r.seed})")
    return 0


# -- check suites ------------------------------------------------------------------------

def _suite_selberg(samples: int, seed: int) -> list[dict]:
    rows = []
    for N, a, b, g in [(1, 2.0, 3.0, 0.0), (1, 1.5, 2.5, 0.0), (2, 2.0, 2.0, 1.0),
                       (2, 1.5, 2.0, 0.5), (2, 3.0, 1.5, 0.25)]:
        exact = numerics.selberg(N, a, b, g)
        r = numerics.eval_zeta_mc(N, Domain.cube(N), numerics.selberg_params(N, a, b, g),
                                  samples=samples, seed=seed)
        tol = max(3 * r.stderr, 1e-12 * abs(exact))
        rows.append({"case": f"S_{N}({a}, {b}, {g}) over Box_{N}", "oracle": exact,
                     "estimate": r.estimate, "stderr": r.stderr,
                     "passed": abs(r.estimate - exact) <= tol})
    for a, b in [(0.5, 0.5), (1.0, 2.0), (2.5, 3.5), (7.0, 0.75)]:
        got = numerics.selberg(1, a, b, 0.4)
        ref = numerics.beta_fn(a, b)
        rows.append({"case": f"S_1({a}, {b}, 0.4) = B({a}, {b})", "oracle": ref,
                     "estimate": got, "stderr": 0.0,
                     "passed": abs(got - ref) <= 1e-10 * abs(ref)})
    return rows


def _suite_mehta(samples: int, seed: int) -> list[dict]:
    rows = []
    for N, g in [(2, 0.5), (2, 1.0), (3, 0.5)]:
        exact = numerics.mehta(N, g)
        r = numerics.mehta_mc(N, g, samples=samples, seed=seed)
        rows.append({"case": f"F_{N}({g})", "oracle": exact, "estimate": r.estimate,
                     "stderr": r.stderr, "passed": abs(r.estimate - exact) <= 0.02 * exact})
    return rows


def _suite_divergence(samples: int, seed: int) -> list[dict]:
    rows = []
    cases = [
        (1, Domain.cube(1), SVariable.zero(1), True),
        (2, Domain.simplex(2), SVariable.zero(1), True),
        (2, Domain.simplex(2), SVariable.one(1, 2), False),
    ]
    for N, D, v, diverges in cases:
        base = {u: 0.0 for u in kn_variables(N)}
        cond = ConvergenceCondition({v}, -1)
        p = numerics.divergence_probe(N, D, cond, numerics.boundary_path(cond, base),
                                      samples=samples, seed=seed)
        first, last = p.results[0], p.results[-1]
        if diverges:
            ok = p.diverging
        else:
            ok = last.estimate - 3 * last.stderr <= 2 * (first.estimate + 3 * first.stderr)
        rows.append({"case": f"{v} -> -1 over {D.ident} ({'diverges' if diverges else 'bounded'})",
                     "oracle": 10.0 if diverges else 2.0, "estimate": p.growth,
                     "stderr": 0.0, "passed": ok,
                     "eps": list(p.eps), "estimates": p.estimates})
    return rows


SUITES = {"selberg": _suite_selberg, "mehta": _suite_mehta, "divergence": _suite_divergence}


def cmd_check(args) -> int:
    samples = args.samples if args.suite != "divergence" else min(args.samples, 200_000)
    rows = SUITES[args.suite](samples, args.seed)
    ok = all(r["passed"] for r in rows)
    doc = {"schema": serialize.SCHEMA, "command": "check", "suite": args.suite,
           "samples": samples, "seed": args.seed, "rows": rows, "passed": ok}
    lines = [f"suite {args.suite} ({samples} samples, seed {args.seed})"]
    for r in rows:
        lines.append(f"  {'PASS' if r['passed'] else 'FAIL'}  {r['case']}: "
                     f"oracle {r['oracle']:.10g}  estimate {r['estimate']:.10g}"
                     + (f" +- {r['stderr']:.3g}" if r["stderr"] else ""))
    _emit(args, doc, "\n".join(lines))
    return 0 if ok else 1


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10**6)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="knzeta", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dense-edges", parents=[common], help="dense edges of an arrangement")
    s.add_argument("--N", type=int)
    s.add_argument("--arrangement", metavar="FILE", help="ArrangementSpec JSON")
    s.set_defaults(func=cmd_dense_edges)

    s = sub.add_parser("conditions", parents=[common], help="KN convergence conditions")
    s.add_argument("--N", type=int, required=True)
    s.set_defaults(func=cmd_conditions)

    s = sub.add_parser("polar", parents=[common], help="polar report over a domain")
    s.add_argument("--N", type=int)
    s.add_argument("--arrangement", metavar="FILE", help="ArrangementSpec JSON (default KN)")
    s.add_argument("--domain", metavar="FILE",
                   help="DomainSpec JSON, or one of: " + ", ".join(BUILTIN_DOMAINS))
    s.add_argument("--i0", action="store_true", help="drop diagonal-only flats")
    s.set_defaults(func=cmd_polar)

    s = sub.add_parser("witness", parents=[common], help="independence witnesses")
    s.add_argument("--N", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--condition", type=int, metavar="INDEX", help="1-based, as in 'conditions'")
    g.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("eval", parents=[common], help="Monte Carlo evaluation")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--domain", metavar="FILE")
    s.add_argument("--params", metavar="FILE", help="params JSON")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("check", parents=[common], help="numerical oracle suites")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.set_defaults(func=cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except KNError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
