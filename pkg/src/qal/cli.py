"""Command-line entry point: verification suites, basis listings, reductions.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.
Output formats: table (default), json, csv; all deterministic for fixed
arguments and seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import graph_basis as gb
from . import pvb_family as fam
from . import pvh_checker as pvh
from . import quad_algebra as qa
from .report import VerificationReport


def _emit_rows(args, command: str, params: dict, header: list[str],
               rows: list[list], out) -> None:
    if args.format == "json":
        doc = {"command": command, "params": params,
               "rows": [dict(zip(header, r)) for r in rows]}
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        widths = [max(len(str(x)) for x in [h] + [r[t] for r in rows])
                  for t, h in enumerate(header)] if rows else [len(h) for h in header]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(str(x).ljust(w)
                                for x, w in zip(r, widths)).rstrip() + "\n")


def _emit_reports(args, command: str, params: dict,
                  reports: list[VerificationReport], out) -> int:
    if args.format == "json":
        if len(reports) == 1:
            json.dump(reports[0].to_json(), out, indent=2, sort_keys=True)
        else:
            doc = {"command": command, "params": params,
                   "reports": [r.to_json() for r in reports]}
            json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for r in reports:
            out.write(r.one_line() + "\n")
    return 0 if all(r.passed for r in reports) else 1


def _family(args) -> fam.AlgebraFamily:
    return fam.AlgebraFamily.parse(args.family, args.n)


def _presentation(args) -> qa.QuadraticPresentation:
    if getattr(args, "presentation", None):
        with open(args.presentation) as fh:
            return fam.load_presentation(json.load(fh))
    return fam.presentation(_family(args))


def _cmd_lah(args, out) -> int:
    rows = [[args.n, k, gb.lah(args.n, k)] for k in range(0, args.n + 1)]
    _emit_rows(args, "lah", {"n": args.n}, ["n", "k", "lah"], rows, out)
    return 0


def _cmd_stirling(args, out) -> int:
    rows = [[args.n, k, gb.stirling1(args.n, k), gb.stirling2(args.n, k)]
            for k in range(0, args.n + 1)]
    _emit_rows(args, "stirling", {"n": args.n},
               ["n", "k", "stirling1", "stirling2"], rows, out)
    return 0


_BASIS_ENUM = {
    "chain-gangs": gb.enumerate_chain_gangs,
    "updown": gb.enumerate_updown,
    "down": gb.enumerate_down,
    "up": gb.enumerate_up,
}


def _cmd_basis(args, out) -> int:
    monos = _BASIS_ENUM[args.kind](args.n, args.degree)
    if args.emit_dot:
        for t, m in enumerate(monos):
            out.write(m.forest(args.n).to_dot(name=f"m{t}") + "\n")
        return 0
    rows = [[t, str(m)] for t, m in enumerate(monos)]
    _emit_rows(args, "basis", {"kind": args.kind, "n": args.n,
                               "degree": args.degree},
               ["index", "monomial"], rows, out)
    return 0


def _cmd_reduce(args, out) -> int:
    mono, sign = gb.parse_wedge_word(args.monomial)
    if mono is None:
        combo = {}
    else:
        reducer = gb.prune_normal_form if args.rules == "prune" \
            else gb.lex_normal_form
        combo = reducer(mono)
        if sign < 0:
            combo = {m: -c for m, c in combo.items()}
    rows = [[str(c), str(m)] for m, c in sorted(combo.items())]
    _emit_rows(args, "reduce", {"rules": args.rules, "monomial": args.monomial},
               ["coeff", "monomial"], rows, out)
    return 0


def _cmd_hilbert(args, out) -> int:
    p = fam.presentation(_family(args))
    dual = qa.annihilator(p)
    rows = []
    for m in range(0, args.max_degree + 1):
        rows.append([m, qa.graded_dim(p, m, args.budget),
                     qa.graded_dim(dual, m, args.budget)])
    _emit_rows(args, "hilbert",
               {"family": args.family, "n": args.n,
                "max_degree": args.max_degree},
               ["degree", "dim_algebra", "dim_dual"], rows, out)
    return 0


def _verify_pvh(args) -> list[VerificationReport]:
    if getattr(args, "presentation", None):
        # user-supplied presentations: degree-2 only (the tool does not
        # search for global syzygies)
        return [pvh.degree2_report(_presentation(args))]
    return [pvh.pvh_report(_family(args), budget=args.budget)]


def _verify_coproduct(args) -> list[VerificationReport]:
    return [gb.coproduct_table_check(args.n)]


def _verify_confluence(args) -> list[VerificationReport]:
    return [gb.confluence_check(args.n, trials=args.trials, seed=args.seed)]


def _verify_euler(args) -> list[VerificationReport]:
    return [qa.koszul_euler_check(_presentation(args), args.max_degree,
                                  budget=args.budget)]


def _verify_psi(args) -> list[VerificationReport]:
    return [fam.psi_image_check(args.n)]


def _verify_degree2(args) -> list[VerificationReport]:
    return [pvh.degree2_report(_presentation(args))]


def _verify_lahstirling(args) -> list[VerificationReport]:
    mismatches = []
    for n in range(0, args.n + 1):
        for k in range(0, n + 1):
            by_enum = gb.lah_by_enumeration(n, k)
            by_identity = sum(gb.stirling1(n, l) * gb.stirling2(l, k)
                              for l in range(0, n + 1))
            if by_enum != by_identity or by_enum != gb.lah(n, k):
                mismatches.append({"n": n, "k": k, "enum": by_enum,
                                   "identity": by_identity,
                                   "recurrence": gb.lah(n, k)})
    return [VerificationReport(
        check="lah-stirling",
        params={"max_n": args.n},
        expected={"mismatches": 0},
        actual={"mismatches": len(mismatches)},
        payload={"failing": mismatches},
    )]


_VERIFIERS = {
    "pvh": _verify_pvh,
    "coproduct": _verify_coproduct,
    "confluence": _verify_confluence,
    "euler": _verify_euler,
    "psi": _verify_psi,
    "degree2": _verify_degree2,
    "lahstirling": _verify_lahstirling,
}


def _cmd_verify(args, out) -> int:
    if not getattr(args, "presentation", None) and args.n < 2:
        raise ValueError("--n is required (and must be >= 2)")
    reports = _VERIFIERS[args.what](args)
    return _emit_reports(args, f"verify-{args.what}",
                         {"n": getattr(args, "n", None)}, reports, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qal",
        description="Quadratic algebras of the pure virtual braid family: "
                    "graph-indexed bases, rewriting normal forms, and "
                    "exact verification of the quadraticity criterion.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default=None, fam_flag=False, degree=False,
               max_degree=False, seed=False):
        p.add_argument("--n", type=int, required=n_default is None,
                       default=n_default, help="strand count")
        if fam_flag:
            p.add_argument("--family", choices=["pvb", "pfb", "pb"],
                           default="pvb")
        if degree:
            p.add_argument("--degree", type=int, required=True)
        if max_degree:
            p.add_argument("--max-degree", type=int, default=3,
                           dest="max_degree")
        if seed:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=200)
        p.add_argument("--format", choices=["table", "json", "csv"],
                       default="table")
        p.add_argument("--budget", type=int, default=qa.DEFAULT_BUDGET,
                       help="largest admissible tensor-space dimension")

    p = sub.add_parser("lah", help="Lah number table")
    common(p)
    p.set_defaults(func=_cmd_lah)

    p = sub.add_parser("stirling", help="Stirling number tables")
    common(p)
    p.set_defaults(func=_cmd_stirling)

    p = sub.add_parser("basis", help="graph-indexed basis listings")
    p.add_argument("kind", choices=sorted(_BASIS_ENUM))
    common(p, degree=True)
    p.add_argument("--emit-dot", action="store_true", dest="emit_dot",
                   help="emit DOT digraphs instead of a listing")
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("reduce", help="normal form of a wedge monomial")
    p.add_argument("rules", choices=["prune", "lex"])
    p.add_argument("monomial", help='wedge word, e.g. "1>2,2>3,3>1"')
    common(p, n_default=0)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("what", choices=sorted(_VERIFIERS))
    common(p, n_default=0, fam_flag=True, max_degree=True, seed=True)
    p.add_argument("--presentation", metavar="FILE",
                   help="presentation JSON instead of --family/--n")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("hilbert", help="graded dimensions of A and its dual")
    common(p, fam_flag=True, max_degree=True)
    p.set_defaults(func=_cmd_hilbert)

    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except qa.SizeBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
