"""Command-line front end.

Exit status: 0 on success, 1 when a yes/no question was asked and the answer
is no, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys

from . import report as rep
from .delsarte import (DelsarteMatrix, derive_weights, diagonal_aut, lattice_order_check,
                       loop_matrix, loop_quasismooth, main_family_type)
from .equation import EquationSyntaxError, parse_equation
from .exactmath import SingularMatrixError
from .rationality import Field, certify, delsarte_certificate
from .search import FILTERS, SearchSpec, SearchSpecError, run_search
from .singularities import (CANONICAL, TERMINAL, CapExceededError, CyclicQuotientType,
                            NotQuasismoothError, eqii_min, eqii_pointwise_holds, figure_rows,
                            loop_betas, reid_tai_failure)
from .wps import MonomialBasis, WeightSystem, count_monomials, enumerate_monomials

OK, NO, BAD_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# -- argument types -----------------------------------------------------------

def int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return values


def positive_list(text: str) -> tuple[int, ...]:
    values = int_list(text)
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"entries must be positive, got {text!r}")
    return values


def int_range(text: str) -> tuple[int | None, int]:
    """``lo..hi``, ``..hi`` (default lower end) or a single value ``n``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return (int(lo) if lo else None), int(hi)
        n = int(text)
        return n, n
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 3..9, got {text!r}")


def field_spec(text: str) -> Field:
    try:
        return Field.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _fmt_weights(ws) -> str:
    return ",".join(str(a) for a in ws)


def _yes_no(flag) -> str:
    return "unknown" if flag is None else ("true" if flag else "false")


def _emit_json(doc):
    print(json.dumps(doc, indent=2))


# -- subcommands ---------------------------------------------------------------

def _print_report(r, out=print):
    v = r.singularities
    out(f"weights: {_fmt_weights(r.weights)}")
    out(f"sorted weights: {_fmt_weights(sorted(r.weights, reverse=True))}")
    out(f"degree: {r.degree}")
    out(f"dimension: {r.dimension}")
    out(f"well-formed: {_yes_no(r.well_formed)}")
    out(f"fano: {_yes_no(r.fano)}")
    out(f"degree criterion: {_yes_no(r.degree_criterion)}")
    out(f"monomials: {r.monomial_count}")
    if r.dim_aut is not None:
        out(f"dim aut: {r.dim_aut}")
        out(f"moduli lower bound: {r.moduli_lower_bound}")
    out(f"quasismooth: {r.quasismooth}")
    if v is not None:
        out(f"klt: {_yes_no(v.klt)}")
        out(f"canonical: {_yes_no(v.canonical)}")
        out(f"terminal: {_yes_no(v.terminal)}")
        for subset, t, i, mode in v.witnesses:
            out(f"  {mode} fails on stratum {list(subset)}: {t} at i={i}")
        for subset, t in v.undecided:
            out(f"  undecided on stratum {list(subset)}: {t}")
    for c in r.certificates:
        out(f"certificate: {c.kind} {json.dumps(c.witness(), separators=(',', ':'))}")
    if not r.certificates:
        out("certificate: none")
    out(f"answers question: {_yes_no(r.answers_question)}")
    for note in r.notes:
        out(f"note: {note}")


def cmd_analyze(args) -> int:
    w = WeightSystem(args.weights, args.degree)
    r = certify(w, base_field=args.field)
    if args.json:
        echo = {"weights": list(args.weights), "degree": args.degree, "field": str(args.field)}
        _emit_json(rep.report_to_json(r, echo))
    else:
        _print_report(r)
    return OK


def _read_matrix(path) -> list[list[int]]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                rows.append([int(x) for x in line.replace(",", " ").split()])
            except ValueError:
                raise InputError(f"non-integer entry in {path}: {line!r}")
    return rows


def cmd_delsarte(args) -> int:
    if args.equation is not None:
        eq = parse_equation(args.equation)
        b = eq.delsarte_matrix()
        if len(eq.terms) > eq.nvars:
            print(f"note: using the first {eq.nvars} of {len(eq.terms)} terms")
    else:
        b = DelsarteMatrix(_read_matrix(args.matrix))
    der = derive_weights(b)
    det = b.det()
    group_order, ones_order = lattice_order_check(b)
    w = der.weight_system()
    cert = delsarte_certificate(w, b)
    doc = {"weights": der.weights, "degree": der.degree, "q": der.q, "det": det,
           "latticeOrder": group_order, "onesOrder": ones_order,
           "rational": cert is not None}
    if args.json:
        _emit_json(rep.encode(doc))
    else:
        print(f"weights: {_fmt_weights(der.weights)}")
        print(f"degree: {der.degree}")
        print(f"det: {det}")
        print(f"lattice order: {group_order}, order of B^-1(1,...,1): {ones_order}")
        print(f"DelsarteDet: {_yes_no(cert is not None)}")
    return OK if cert is not None else NO


def _loop_report(exps, field):
    b = loop_matrix(exps)
    w = derive_weights(b).weight_system()
    basis = MonomialBasis.from_monomials(w.weights, w.degree, b.rows)
    return b, w, certify(w, basis, delsarte=b, base_field=field)


def cmd_loop(args) -> int:
    b, w, r = _loop_report(args.type, args.field)
    rotations = []
    if min(args.type) >= 2:
        for k in range(len(args.type)):
            betas = loop_betas(args.type, k)
            m = eqii_min(betas)
            rotations.append({"rotation": k, "betas": betas, "infimum": m.infimum,
                              "attained": m.attained,
                              "passes": eqii_pointwise_holds(betas, TERMINAL)})
    if args.json:
        doc = rep.report_to_json(r, {"type": list(args.type)})
        doc["loop"] = rep.encode({"type": list(args.type), "det": b.det(),
                                  "quasismooth": loop_quasismooth(args.type),
                                  "eqii": rotations})
        _emit_json(doc)
        return OK
    print(f"type: [{_fmt_weights(args.type)}]")
    print(f"det: {b.det()}")
    _print_report(r)
    for row in rotations:
        print(f"eq-ii rotation {row['rotation']}: inf {row['infimum']}"
              f"{' attained' if row['attained'] else ''} -> {_yes_no(row['passes'])}")
    return OK


def cmd_main_family(args) -> int:
    if args.dim < 1:
        raise InputError("dimension must be at least 1")
    exps = main_family_type(args.dim)
    b, w, r = _loop_report(exps, Field())
    if args.json:
        _emit_json(rep.report_to_json(r, {"dim": args.dim}))
    else:
        print(f"type: [{_fmt_weights(exps)}]")
        print(f"det: {b.det()}")
        _print_report(r)
    return OK


def cmd_reid_tai(args) -> int:
    t = CyclicQuotientType(args.r, args.type)
    fail = reid_tai_failure(t, args.mode, cap=None if args.no_cap else args.cap)
    print(_yes_no(fail is None))
    if fail is not None:
        print(f"fails at i={fail}", file=sys.stderr)
    return OK if fail is None else NO


def cmd_monomials(args) -> int:
    if args.count_only:
        print(count_monomials(args.weights, args.degree))
        return OK
    basis = enumerate_monomials(WeightSystem(args.weights, args.degree))
    for m in basis:
        print(" ".join(str(e) for e in m))
    return OK


def cmd_eqii(args) -> int:
    if min(args.type) < 2:
        raise InputError("loop exponents must be at least 2")
    ok = True
    for k in range(len(args.type)):
        betas = loop_betas(args.type, k)
        m = eqii_min(betas, args.prefix)
        passes = eqii_pointwise_holds(betas, args.mode, args.prefix)
        ok &= passes
        print(f"rotation {k}: betas {list(betas)} inf {m.infimum}"
              f"{' attained' if m.attained else ''} -> {_yes_no(passes)}")
    print(_yes_no(ok))
    return OK if ok else NO


def cmd_figure(args) -> int:
    if not args.betas or all(b == 0 for b in args.betas):
        raise InputError("need at least one nonzero beta")
    rows = figure_rows(args.betas)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["x", "x_decimal", "f", "f_decimal", "kind"])
        for x, fx, kind in rows:
            writer.writerow([f"{x.numerator}/{x.denominator}", f"{float(x):.12g}",
                             str(fx), f"{float(fx):.12g}", kind])
    finally:
        if out is not sys.stdout:
            out.close()
    m = eqii_min(args.betas)
    print(f"infimum {m.infimum}{' attained' if m.attained else ''}", file=sys.stderr)
    return OK


def cmd_diag_aut(args) -> int:
    eq = parse_equation(args.equation)
    if args.weights is None:
        weights = derive_weights(eq.delsarte_matrix()).weights
    else:
        weights = args.weights
    if len(weights) != eq.nvars:
        raise InputError(f"{len(weights)} weights for {eq.nvars} variables")
    if len({sum(a * e for a, e in zip(weights, m)) for m in eq.exponents}) != 1:
        raise InputError("equation is not weighted-homogeneous")
    g = diagonal_aut(eq.exponents, weights)
    if g.continuous_rank:
        group = f"torus of rank {g.continuous_rank}" + (
            " x " + " x ".join(f"Z/{n}" for n in g.invariant_factors) if g.invariant_factors else "")
    elif g.is_trivial():
        group = "trivial"
    else:
        group = " x ".join(f"Z/{n}" for n in g.invariant_factors)
    if args.json:
        _emit_json(rep.encode({"weights": weights, "group": group,
                               "invariantFactors": g.invariant_factors,
                               "continuousRank": g.continuous_rank,
                               "generators": [{"exponents": list(t), "scalar": s}
                                              for t, s in g.generators]}))
        return OK
    print(f"weights: {_fmt_weights(weights)}")
    print(f"group: {group}")
    for t, s in g.generators:
        den = max(x.denominator for x in t)
        nums = ",".join(str(x * den) for x in t)
        print(f"generator: ({nums})/{den} acting by exp(2 pi i {s})")
    return OK


def _range(value, default):
    lo, hi = value if value is not None else default
    return (default[0] if lo is None else lo), hi


def cmd_search(args) -> int:
    filters = frozenset(f for f in args.require.split(",") if f) if args.require else frozenset()
    if args.kind == "loops":
        spec = SearchSpec("loop", filters, dims=_range(args.dims, (3, 3)),
                          exponents=_range(args.exponents, (2, 3)),
                          workers=args.workers, limit=args.limit)
    else:
        spec = SearchSpec("two-weight", filters, a_range=_range(args.a, (1, 6)),
                          c_range=_range(args.c, (1, 6)), k_range=_range(args.k, (2, 8)),
                          l_range=_range(args.l, (2, 8)), workers=args.workers,
                          limit=args.limit)
    result = run_search(spec)
    if args.json:
        for hit in result:
            doc = rep.report_to_json(hit.report, {"params": list(hit.params)})
            doc["params"] = rep.encode(hit.params)
            doc["via"] = hit.via
            print(json.dumps(doc))
    else:
        print(f"{'params':<32} {'n':>3} {'degree':>8} {'terminal':>9} {'rational':<14} weights")
        for hit in result:
            r = hit.report
            certs = ",".join(c.kind for c in r.certificates) or "-"
            term = _yes_no(None if r.singularities is None else r.singularities.terminal)
            print(f"{str(list(hit.params)):<32} {r.dimension:>3} {r.degree:>8} {term:>9} "
                  f"{certs:<14} {_fmt_weights(r.weights)}")
    summary = f"{len(result)} hits among {result.candidates} candidates"
    if result.truncated:
        summary += " (stopped at limit)"
    if not result.rows:
        summary += "; none found within bounds"
    print(summary, file=sys.stderr)
    return OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wphyper", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run every criterion on a weight system")
    a.add_argument("--weights", type=positive_list, required=True)
    a.add_argument("--degree", type=int, required=True)
    a.add_argument("--field", type=field_spec, default=Field(),
                   help="closed (default), nonclosed, or char=p")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("delsarte", help="weights and rationality of a Delsarte matrix")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--equation")
    src.add_argument("--matrix", help="file with one whitespace-separated row per line")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_delsarte)

    lp = sub.add_parser("loop", help="analyse the loop polynomial of a given type")
    lp.add_argument("--type", type=positive_list, required=True)
    lp.add_argument("--field", type=field_spec, default=Field())
    lp.add_argument("--json", action="store_true")
    lp.set_defaults(func=cmd_loop)

    mf = sub.add_parser("main-family", help="the loop family [2,...,2,3] in dimension N")
    mf.add_argument("--dim", type=int, required=True)
    mf.add_argument("--json", action="store_true")
    mf.set_defaults(func=cmd_main_family)

    rt = sub.add_parser("reid-tai", help="Reid-Tai test for 1/r(c_1,...,c_s)")
    rt.add_argument("--r", type=int, required=True)
    rt.add_argument("--type", type=int_list, required=True)
    rt.add_argument("--mode", choices=[CANONICAL, TERMINAL], default=TERMINAL)
    rt.add_argument("--cap", type=int, default=10 ** 6)
    rt.add_argument("--no-cap", action="store_true")
    rt.set_defaults(func=cmd_reid_tai)

    mo = sub.add_parser("monomials", help="monomials of a given weighted degree")
    mo.add_argument("--weights", type=positive_list, required=True)
    mo.add_argument("--degree", type=int, required=True)
    mo.add_argument("--count-only", action="store_true")
    mo.set_defaults(func=cmd_monomials)

    eq = sub.add_parser("eqii", help="exponent-only terminality test for a loop type")
    eq.add_argument("--type", type=positive_list, required=True)
    eq.add_argument("--prefix", type=int)
    eq.add_argument("--mode", choices=[CANONICAL, TERMINAL], default=TERMINAL)
    eq.set_defaults(func=cmd_eqii)

    fg = sub.add_parser("figure", help="CSV of sum frac(beta_j x) at breakpoints and midpoints")
    fg.add_argument("--betas", type=int_list, required=True)
    fg.add_argument("--out", default="-")
    fg.set_defaults(func=cmd_figure)

    da = sub.add_parser("diag-aut", help="diagonal automorphisms of an equation")
    da.add_argument("--equation", required=True)
    da.add_argument("--weights", type=positive_list,
                    help="defaults to the weights derived from the first terms")
    da.add_argument("--json", action="store_true")
    da.set_defaults(func=cmd_diag_aut)

    se = sub.add_parser("search", help="enumerate loop or two-weight families")
    se.add_argument("kind", choices=["loops", "two-weight"])
    se.add_argument("--dims", type=int_range, help="loops: dimension range, e.g. 3..9")
    se.add_argument("--exponents", type=int_range, help="loops: exponent range, e.g. 2..3")
    se.add_argument("--a", type=int_range)
    se.add_argument("--c", type=int_range)
    se.add_argument("--k", type=int_range)
    se.add_argument("--l", type=int_range)
    se.add_argument("--require", default="",
                    help="comma-separated filters: " + ",".join(sorted(FILTERS)))
    se.add_argument("--workers", type=int, default=1)
    se.add_argument("--limit", type=int)
    se.add_argument("--json", action="store_true", help="one JSON report per line")
    se.set_defaults(func=cmd_search)
    return p


_NUMBER_LIST = re.compile(r"^-\d+(,\s*-?\d+)*$")


def _glue_negative_lists(argv):
    # argparse would read "--betas -1,3" as two options
    out = []
    for arg in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMBER_LIST.match(arg):
            out[-1] = f"{out[-1]}={arg}"
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_lists(argv))
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    try:
        return args.func(args)
    except (InputError, EquationSyntaxError, SearchSpecError, SingularMatrixError,
            NotQuasismoothError, CapExceededError, ValueError) as e:
        print(f"wphyper {args.command}: error: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
