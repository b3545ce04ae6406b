"""Command line interface.

Ten subcommands over the bounds calculator, the P^1 decomposition, the
zero counters, the integrators, the special-fiber graph checker and the
brute-force verifiers.  Every report is a single JSON document on stdout
(sorted keys, so reruns are byte-identical); computation failures print a
structured JSON error to stderr and exit 1, usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .errors import PadicannError
from .padic import DEFAULT_PRECISION, PAdic

SCHEMA = "padicann/1"


# ---------------------------------------------------------------------------
# input/output helpers
# ---------------------------------------------------------------------------


def _read_job(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(report: dict, args, table: Optional[str] = None) -> None:
    """JSON to stdout, or to --out with any text rendering on stdout."""
    report = {"schema": SCHEMA, **report}
    text = _dump(report)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if table is not None:
            sys.stdout.write(table)
    else:
        sys.stdout.write(text)


def _rational(v) -> Fraction:
    return Fraction(str(v))


def _padic_in(obj, p: int, prec: int) -> PAdic:
    """Accept {"val","unit","prec"} dicts or plain rational literals."""
    if isinstance(obj, dict):
        return PAdic.from_json(obj, p)
    return PAdic.from_rational(_rational(obj), p, prec)


def _curve_from_obj(obj: dict, precision: Optional[int]):
    from .curves import HyperellipticCurve

    if precision is not None:
        obj = dict(obj, precision=precision)
    return HyperellipticCurve.from_json(obj)


def _matrix_from_obj(obj: dict):
    vm = obj.get("valuation_matrix")
    if vm is None:
        return None
    return [[_rational(x) for x in row] for row in vm]


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_bounds(args) -> int:
    from .bounds import bound_report

    rep = bound_report(args.p, args.e, args.q, args.g, args.r, args.d)
    _emit(rep.to_dict(), args, table=_bounds_table(rep))
    return 0


def _bounds_table(rep) -> str:
    head = " ".join(f"{k}={v}" for k, v in rep.inputs.items())
    lines = [head, ""]
    cols = ("t", "disks", "annuli", "points_on_disks", "points_on_annuli")
    rows = [
        [str(row["t"]), str(row["disks"]), str(row["annuli"]),
         str(row["points_on_disks"]),
         "-" if row.get("points_on_annuli") is None
         else str(row["points_on_annuli"])]
        for row in rep.per_t
    ]
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c)
              for i, c in enumerate(cols)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    for r in rows:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    lines.append("")

    def scalar(label, v):
        if v is None:
            return f"{label:<22}-"
        if hasattr(v, "note"):
            return f"{label:<22}unevaluated ({v.note})"
        return f"{label:<22}{v}"

    lines.append(scalar("N_local", rep.N_local))
    lines.append(scalar("R_rational", rep.R_rational))
    lines.append(scalar("torsion_bound", rep.torsion_bound))
    lines.append(scalar("improved_bound", rep.improved_bound))
    if rep.rholog is not None:
        lines.append(scalar("rho_log_total", rep.rholog.total))
    lines.append(scalar("density_lower", rep.density_lower))
    lines.append(scalar("min_unlikely_n", rep.min_unlikely_n))
    return "\n".join(lines) + "\n"


def _cmd_decompose(args) -> int:
    from .curves import decompose

    obj = _read_job(args.curve)
    curve = _curve_from_obj(obj, args.precision)
    dec = decompose(curve, _matrix_from_obj(obj))
    _emit(dec.to_json(), args)
    return 0


def _cmd_pullback(args) -> int:
    from .curves import decompose, pullback_differential

    job = _read_job(args.job)
    curve = _curve_from_obj(job["curve"], args.precision)
    dec = decompose(curve, _matrix_from_obj(job))
    idx = int(job["annulus_index"])
    if not 0 <= idx < len(dec.annuli):
        raise ValueError(f"annulus_index {idx} out of range "
                         f"(decomposition has {len(dec.annuli)} annuli)")
    ann = dec.annuli[idx]
    ld = pullback_differential(ann, [_rational(c) for c in job["u_tilde"]])
    support = ld.u.support()
    n1, n2 = ann.window
    inside = support is None or (n1 <= support[0] and support[1] <= n2)
    _emit(
        {
            "annulus_index": idx,
            "annulus": ann.to_json(),
            "pullback": {
                "u": ld.u.to_json(),
                "domain": [str(ld.domain[0]), str(ld.domain[1])],
            },
            "support": None if support is None else list(support),
            "window": list(ann.window),
            "inside_window": inside,
        },
        args,
    )
    return 0


def _cmd_count_zeros(args) -> int:
    from .series import LaurentPoly, count_zeros_valuation_range

    job = _read_job(args.job)
    L = LaurentPoly.from_json(job)
    lo, hi = (_rational(v) for v in job["window"])
    count = count_zeros_valuation_range(
        L, lo, hi,
        include_lo=bool(job.get("include_lo", False)),
        include_hi=bool(job.get("include_hi", False)),
    )
    _emit(
        {
            "count": count,
            "window": [str(lo), str(hi)],
            "include_lo": bool(job.get("include_lo", False)),
            "include_hi": bool(job.get("include_hi", False)),
        },
        args,
    )
    return 0


def _cmd_integrate(args) -> int:
    from .integration import (
        AnnulusIntegrand,
        abelian_integral_annulus,
        integrate_annulus,
        integrate_disk,
    )
    from .series import LaurentPoly

    job = _read_job(args.job)
    idef = job["integrand"]
    ell = LaurentPoly.from_json(idef["ell"])
    p, prec = ell.p, ell.prec
    if args.precision is not None:
        prec = args.precision
    xi0 = _padic_in(job["xi0"], p, prec)
    xi1 = _padic_in(job["xi1"], p, prec)
    mode = job.get("mode", "annulus")
    if mode == "disk":
        value = integrate_disk(ell, xi0, xi1)
    else:
        c = _padic_in(idef.get("c", 0), p, prec)
        a = idef.get("a")
        integrand = AnnulusIntegrand(
            ell, c,
            None if a is None else _padic_in(a, p, prec),
            tuple(_rational(v) for v in idef.get("domain", (0, 1))),
        )
        if mode == "annulus":
            value = integrate_annulus(integrand, xi0, xi1)
        elif mode == "abelian":
            value = abelian_integral_annulus(integrand, xi0, xi1)
        else:
            raise ValueError(f"unknown mode {mode!r}; "
                             f"expected disk, annulus or abelian")
    _emit({"mode": mode, "p": p, "value": value.to_json()}, args)
    return 0


def _cmd_graph_check(args) -> int:
    from .graphs import ArithGraph, check_specialfiber_bounds, classify

    with open(args.graph, "r", encoding="utf-8") as fh:
        graph = ArithGraph.from_json(fh.read())
    cls = classify(graph)
    report = check_specialfiber_bounds(graph)
    _emit(
        {
            "vertices": graph.n_vertices,
            "classification": {
                "minus_two_vertices": cls.N,
                "chains": [list(c) for c in cls.chains],
                "case2": list(cls.case2),
                "case3": list(cls.case3),
                "case4": list(cls.case4),
            },
            "bounds": report,
        },
        args,
    )
    return 0


def _cmd_search_points(args) -> int:
    from .oracle import search_rational_points

    coeffs = [_rational(c) for c in args.coeffs.split(",")]
    result = search_rational_points(coeffs, args.height)
    _emit(result.to_dict(), args)
    return 0


def _cmd_verify_cover(args) -> int:
    from .curves import decompose
    from .oracle import verify_decomposition_cover

    obj = _read_job(args.curve)
    curve = _curve_from_obj(obj, None)
    dec = decompose(curve, _matrix_from_obj(obj))
    report = verify_decomposition_cover(curve, dec, args.precision)
    _emit(report, args)
    return 0


def _cmd_verify_zeros(args) -> int:
    from .oracle import enumerate_padic_zeros
    from .series import LaurentPoly, count_zeros_valuation_range

    job = _read_job(args.job)
    L = LaurentPoly.from_json(job)
    lo, hi = (_rational(v) for v in job["window"])
    newton = count_zeros_valuation_range(L, lo, hi)
    oracle = enumerate_padic_zeros(L, L.p, (lo, hi), int(job.get("N", 6)))
    _emit(
        {
            "window": [str(lo), str(hi)],
            "newton_count": newton,
            "oracle_count": oracle,
            # Newton counts zeros in the algebraic closure; the oracle
            # enumerates Q_p only, so < is legitimate for irrational zeros.
            "match": newton == oracle,
        },
        args,
    )
    return 0


def _cmd_selftest(args) -> int:
    from . import selftest

    results = selftest.run_all()
    lines = []
    for r in results:
        lines.append(f"criterion {r.id:2d}: {'PASS' if r.ok else 'FAIL'}  {r.name}")
    failed = [r for r in results if not r.ok]
    lines.append(
        "all criteria passed" if not failed
        else f"{len(failed)} of {len(results)} criteria failed"
    )
    sys.stdout.write("\n".join(lines) + "\n")
    if getattr(args, "out", None):
        payload = {
            "schema": SCHEMA,
            "criteria": [
                {"id": r.id, "name": r.name, "ok": r.ok, "detail": r.detail}
                for r in results
            ],
            "ok": not failed,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_dump(payload))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicann",
        description="Uniform bounds and p-adic analytic machinery for "
                    "hyperelliptic curves of small rank.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", metavar="FILE", help="also write the JSON report here")
        return sp

    sp = add("bounds", _cmd_bounds, "full bound report for (p, e, q, g, r)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)

    sp = add("decompose", _cmd_decompose, "annulus/disk decomposition of P^1 for a curve")
    sp.add_argument("curve", help="curve JSON file: {p, f, precision?, valuation_matrix?}")
    sp.add_argument("--precision", type=int, default=None)

    sp = add("pullback", _cmd_pullback, "pull a differential back to one annulus")
    sp.add_argument("job", help="JSON file: {curve, annulus_index, u_tilde}")
    sp.add_argument("--precision", type=int, default=None)

    sp = add("count-zeros", _cmd_count_zeros, "Newton-polygon zero count on a window")
    sp.add_argument("job", help="JSON file: {p, terms, window, include_lo?, include_hi?}")

    sp = add("integrate", _cmd_integrate, "p-adic integral of a Laurent integrand")
    sp.add_argument("job", help="JSON file: {integrand, xi0, xi1, mode?}")
    sp.add_argument("--precision", type=int, default=None)

    sp = add("graph-check", _cmd_graph_check, "validate a special-fiber graph and its bounds")
    sp.add_argument("graph", help="graph JSON file: {vertices, edges}")

    sp = add("search-points", _cmd_search_points, "exhaustive rational point search on y^2 = f(x)")
    sp.add_argument("coeffs", help="comma-separated ascending coefficients of f")
    sp.add_argument("--height", type=int, required=True)

    sp = add("verify-cover", _cmd_verify_cover, "audit a decomposition as an exact cover of Z_p")
    sp.add_argument("curve", help="curve JSON file")
    sp.add_argument("--precision", type=int, required=True,
                    help="audit residue classes mod p^precision")

    sp = add("verify-zeros", _cmd_verify_zeros, "Newton count vs exhaustive Q_p enumeration")
    sp.add_argument("job", help="JSON file: {p, terms, window, N?}")

    add("selftest", _cmd_selftest, "run the acceptance criteria and print the matrix")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (PadicannError, ValueError, KeyError, TypeError,
            OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(_dump({
            "schema": SCHEMA,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }))
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
