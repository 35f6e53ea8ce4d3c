"""Command-line interface: ``rdplab <subcommand> --char p ...``."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .catalog import SCHEMA, catalog_entries, reproduce_theorem_tables, verify_entry
from .derivations import Derivation, is_derivation_of, lifts_to_resolution
from .families import (
    ClassificationError, DeformationFamily, check_simultaneous_resolution, classify_singularity, short_label,
)
from .fields import FieldError
from .local import Inconclusive, NonIsolatedSingularity, tjurina
from .poly import PolyParseError, parse_poly
from .resolution import ResolutionError, SingularityClass, dual_graph, graph_type, resolve
from .univariate import ExtensionNeeded

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _common(parser):
    parser.add_argument("--char", type=int, required=True, metavar="P", help="characteristic (a prime)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--max-ext-degree", type=int, default=4, help="largest field extension searched")
    parser.add_argument("--degree-bound", type=int, default=6, help="degree bound for derivations")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampled parameter values")


def build_parser():
    parser = argparse.ArgumentParser(prog="rdplab", description="Rational double points in positive characteristic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tjurina", help="Tjurina number of a germ at the origin")
    _common(p)
    p.add_argument("poly")

    p = sub.add_parser("resolve", help="resolve by point blow-ups and print the dual graph")
    _common(p)
    p.add_argument("poly")

    p = sub.add_parser("classify", help="ADE type and co-index")
    _common(p)
    p.add_argument("poly")

    p = sub.add_parser("check-derivation", help="is-derivation and lifting test")
    _common(p)
    p.add_argument("poly")
    p.add_argument("--coeffs", required=True, metavar="A,B,C",
                   help="comma-separated coefficients of d/dx, d/dy, d/dz, e.g. y,-x,0")

    p = sub.add_parser("check-family", help="simultaneous resolution of a deformation family")
    _common(p)
    p.add_argument("poly", help="equation in x, y, z and parameters s (or s1, s2)")
    p.add_argument("--special", help="declared special fiber type, e.g. E_8^0")
    p.add_argument("--general", help="declared general fiber type, e.g. E_8^1")
    p.add_argument("--samples", type=int, default=8)

    p = sub.add_parser("verify-tables", help="reproduce the equisingular and non-lifting columns")
    _common(p)
    p.add_argument("--max-n", type=int, default=12, help="largest A/D subscript")
    p.add_argument("--types", nargs="*", default=None, help="restrict to letters or labels (A, D_6, E_8)")
    p.add_argument("--verify", action="store_true", help="run the full per-entry verification as well")
    return parser


def _label(text, p):
    if not text:
        return None
    graph, _, r = text.partition("^")
    return SingularityClass(graph, int(r or 0), p)


def _emit(args, payload, text):
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, "p": args.char, **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _run(args):
    p = args.char
    if args.command == "tjurina":
        tau = tjurina(parse_poly(args.poly, p))
        _emit(args, {"tjurina": tau}, str(tau))
        return EXIT_OK
    if args.command == "resolve":
        f = parse_poly(args.poly, p)
        tree = resolve(f, max_ext_degree=args.max_ext_degree)
        g = dual_graph(tree)
        gt = graph_type(g)
        _emit(args, {"resolution": tree.to_dict(), "dual_graph": g.to_dict(), "graph_type": gt},
              f"{gt}: {len(tree.curves)} curves, {len(tree.blowups)} blow-ups, depth {tree.depth}")
        return EXIT_OK
    if args.command == "classify":
        f = parse_poly(args.poly, p)
        cls = classify_singularity(f, tree=resolve(f, max_ext_degree=args.max_ext_degree))
        _emit(args, {"class": cls.label, "graph_type": cls.graph_type, "coindex": cls.coindex}, short_label(cls))
        return EXIT_OK
    if args.command == "check-derivation":
        f = parse_poly(args.poly, p)
        coeffs = [c.strip() for c in args.coeffs.split(",")]
        if len(coeffs) != 3:
            raise PolyParseError("--coeffs needs exactly three comma-separated polynomials", 0)
        D = Derivation.parse(coeffs, p)
        isd = is_derivation_of(D, f)
        res = lifts_to_resolution(f, D, tree=resolve(f, max_ext_degree=args.max_ext_degree))
        text = f"derivation: {isd}\nlifts: {res.lifts}"
        if not res.lifts:
            text += f"\nfirst failure: chart {res.failing_chart} at depth {res.failing_depth}"
        _emit(args, {"is_derivation": isd, **res.to_dict()}, text)
        return EXIT_OK if isd else EXIT_MISMATCH
    if args.command == "check-family":
        fam = DeformationFamily(parse_poly(args.poly, p), _label(args.special, p), _label(args.general, p), args.poly)
        samples = args.samples
        if args.seed is not None:
            samples = random.Random(args.seed).randint(3, max(3, samples))
        rep = check_simultaneous_resolution(fam, samples)
        gen = rep.general[0].cls if rep.general and rep.general[0].cls else None
        text = f"simultaneous resolution: {rep.ok}"
        if rep.special and rep.special.cls:
            text += f"\nspecial fiber: {short_label(rep.special.cls)}"
        if gen:
            text += f"\ngeneral fiber: {short_label(gen)}"
        for key, reports in rep.strata.items():
            text += f"\nstratum {key}: " + ", ".join(short_label(r.cls) if r.cls else "?" for r in reports)
        if rep.reason:
            text += f"\nreason: {rep.reason}"
        _emit(args, {"report": rep.to_dict()}, text)
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    if args.command == "verify-tables":
        table = reproduce_theorem_tables(p, max_n=args.max_n, types=args.types, degree_bound=args.degree_bound)
        payload = {"table": table.to_dict()}
        text = table.render()
        status = EXIT_OK
        if args.verify:
            reports = [verify_entry(e, args.degree_bound) for e in catalog_entries(p, args.types, args.max_n)]
            payload["entries"] = [r.to_dict() for r in reports]
            lines = [f"{r.entry:<10} tau={r.tjurina} = {r.curves}+{r.equisingular}+{r.nonlifting}  {r.status}"
                     for r in reports]
            text += "\n\n" + "\n".join(lines)
            if any(r.status == "inconclusive" for r in reports):
                status = EXIT_INCONCLUSIVE
            elif any(not r.ok for r in reports):
                status = EXIT_MISMATCH
        if table.mismatches:
            status = EXIT_MISMATCH
        elif table.inconclusive and status == EXIT_OK:
            status = EXIT_INCONCLUSIVE
        _emit(args, payload, text)
        return status
    raise AssertionError(args.command)  # pragma: no cover


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _run(args)
    except (PolyParseError, FieldError) as exc:
        print(f"rdplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Inconclusive, ExtensionNeeded) as exc:
        print(f"rdplab: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ResolutionError, NonIsolatedSingularity, ClassificationError) as exc:
        print(f"rdplab: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


def main():
    sys.exit(cli_main())
