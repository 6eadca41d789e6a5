"""osculate command line.

Exit codes: 0 success, 2 bad input (including budget exhaustion), 3 no
generic displacement found.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import closed_forms as cf
from .degree_pipeline import (
    TrivialConormalError,
    critical_valuations,
    multidegrees,
    polar_report,
    trop_conormal,
)
from .exact_linalg import IntegerMatrix, rank
from .jet_osculation import ToricEmbedding, check_global_osculation, jet_matrix
from .lattice_polytope import DegeneratePolytopeError, SingularVertexError, hull
from .matroid_bergman import DEFAULT_BUDGET, BudgetExceeded
from .tropical_cycle import NonGenericError

EXIT_OK, EXIT_INPUT, EXIT_NONGENERIC = 0, 2, 3


class InputError(ValueError):
    pass


def read_matrix(path: str, add_ones: bool = False) -> IntegerMatrix:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc.strerror}") from None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append([int(t) for t in line.split()])
        except ValueError:
            raise InputError(f"{path}:{lineno}: expected whitespace-separated integers") from None
    if not rows:
        raise InputError(f"{path}: parse error, no matrix rows found")
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{path}: rows have different lengths")
    if add_ones:
        rows.insert(0, [1] * len(rows[0]))
    elif any(x != 1 for x in rows[0]):
        raise InputError(f"{path}: first row must be all ones (pass --add-ones to prepend it)")
    return IntegerMatrix(rows)


def _embedding(args) -> ToricEmbedding:
    A = read_matrix(args.matrix, args.add_ones)
    try:
        return ToricEmbedding(A)
    except ValueError as exc:
        raise InputError(f"{args.matrix}: {exc}") from None


def _frac(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return x


# subcommands: each returns (lines, json payload)


def cmd_oscdim(args):
    E = _embedding(args)
    mk = rank(jet_matrix(E, args.k)) - 1
    return [f"The osculating dimension of order {args.k} is {mk}."], {"k": args.k, "m_k": mk}


def cmd_check_osculating(args):
    E = _embedding(args)
    rep = check_global_osculation(E, args.k)
    ranks = {",".join(map(str, v)): r for v, r in sorted(rep.vertex_ranks.items())}
    neg = "" if rep.globally_osculating else "not "
    lines = [f"vertex ({v}): jet rank {r}" for v, r in ranks.items()]
    lines.append(f"The embedding is {neg}globally {args.k}-osculating (m_k = {rep.m_k}, k-regular: {rep.k_regular}).")
    payload = {
        "k": args.k,
        "m_k": rep.m_k,
        "globally_osculating": rep.globally_osculating,
        "k_regular": rep.k_regular,
        "vertex_ranks": ranks,
    }
    return lines, payload


def cmd_trop_conormal(args):
    E = _embedding(args)
    F = trop_conormal(E, args.k, args.budget)
    dump = F.dump()
    if args.fan_dump:
        Path(args.fan_dump).write_text(dump)
    lines = [
        f"The tropical conormal variety of order {args.k} is a fan of dimension {F.dim} in R^{F.ambient} "
        f"with {len(F.cones)} maximal cones."
    ]
    if not args.fan_dump and not args.json:
        lines.append(dump.rstrip("\n"))
    return lines, {"k": args.k, "ambient": F.ambient, "dim": F.dim, "cones": len(F.cones), "lineality": len(F.lineality)}


def cmd_multidegrees(args):
    E = _embedding(args)
    delta = multidegrees(E, args.k, seed=args.seed, budget=args.budget)
    mk = rank(jet_matrix(E, args.k)) - 1
    return [f"The multidegrees of order {args.k} are {delta}."], {"k": args.k, "m_k": mk, "multidegrees": delta, "seed": args.seed}


def _report(args):
    E = _embedding(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return polar_report(E, args.k, seed=args.seed, budget=args.budget)


def _gdd_line(rep):
    if rep.gdd is None:
        return f"The sum of the polar degrees of order {rep.k} is {rep.polar_sum}."
    return f"The generic distance degree of order {rep.k} is {rep.gdd}."


def _dual_line(rep):
    return f"The dual variety of order {rep.k} is of degree {rep.dual_degree} and of codimension {rep.codim}."


def _payload(rep):
    d = rep.as_dict()
    d["polar_sum"] = rep.polar_sum
    return d


def cmd_polar(args):
    rep = _report(args)
    lines = [
        f"The toric variety is of degree {rep.degree}.",
        _gdd_line(rep),
        _dual_line(rep),
        f"The polar degrees of order {rep.k} are {rep.polar_degrees}.",
    ]
    return lines, _payload(rep)


def cmd_gdd(args):
    rep = _report(args)
    return [_gdd_line(rep)], _payload(rep)


def cmd_dual(args):
    rep = _report(args)
    return [_dual_line(rep)], _payload(rep)


def _int_list(text: str | None, name: str) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"{name}: expected integers separated by commas") from None


def cmd_critical_valuations(args):
    E = _embedding(args)
    pts = critical_valuations(E, u=_int_list(args.u, "--u"), nu=_int_list(args.nu, "--nu"), seed=args.seed, budget=args.budget)
    pts = sorted(pts, key=lambda t: (t[1], t[2]))
    lines = [f"point {[_frac(x) for x in p]} multiplicity {w}" for _, p, w in pts]
    total = sum(w for *_, w in pts)
    lines.append(f"The total intersection multiplicity is {total}.")
    payload = {
        "points": [{"point": [_frac(x) for x in p], "multiplicity": w} for _, p, w in pts],
        "total": total,
        "seed": args.seed,
    }
    return lines, payload


def cmd_bw(args):
    val = cf.bw_distance_degree(args.m, args.d, args.k)
    return [f"The Bombieri-Weyl distance degree of order {args.k} is {val}."], {"m": args.m, "d": args.d, "k": args.k, "bw": val}


def cmd_closed_form(args):
    k = args.k
    kind = args.kind
    if kind == "veronese":
        val = cf.veronese_gdd(args.m, args.d, k)
    elif kind == "curve":
        val = cf.gdd_curve(args.L, args.c1, k)
    elif kind == "surface":
        val = cf.gdd_surface(args.L2, args.c1L, args.c1sq, args.c2, k)
    elif kind == "threefold":
        val = cf.gdd_threefold(args.degrees, k)
    elif kind == "p1r":
        val = cf.p1r_gdd(args.d, k)
    else:
        E = _embedding(args)
        P = hull(E.exponents())
        if kind == "toric-surface":
            val = cf.toric_surface_gdd(P, k)
        else:
            val = cf.toric_threefold_gdd(P, k, case=args.case)
    return [f"The generic distance degree of order {k} is {val}."], {"k": k, "kind": kind, "gdd": val}


def _parse_coeffs(items) -> dict:
    f = {}
    for item in items:
        try:
            exp, coef = item.split(":")
            f[tuple(int(t) for t in exp.split(","))] = Fraction(coef)
        except ValueError:
            raise InputError(f"bad coefficient {item!r}; use e.g. 2,0,1:3/2") from None
    if not f or len({sum(a) for a in f}) != 1 or len({len(a) for a in f}) != 1:
        raise InputError("coefficients must share one number of variables and one total degree")
    return f


def cmd_eigencheck(args):
    f = _parse_coeffs(args.coeffs)
    v = [Fraction(t) for t in args.point.split(",")]
    if len(v) != len(next(iter(f))):
        raise InputError("point has the wrong number of coordinates")
    ok, lam = cf.is_order_k_eigenvector(f, v, args.k)
    neg = "" if ok else "not "
    line = f"The point is {neg}an eigenvector of order {args.k}"
    line += f" with eigenvalue {_frac(lam)}." if lam is not None else "."
    return [line], {"k": args.k, "eigenvector": ok, "eigenvalue": _frac(lam) if lam is not None else None}


# parser ----------------------------------------------------------------------


def _common(p, matrix=True, seed=False):
    p.add_argument("-k", type=int, default=1, help="order of osculation")
    p.add_argument("--json", action="store_true", help="print one key-sorted JSON object")
    p.add_argument("--threads", type=int, default=None, help="cap worker threads")
    if matrix:
        p.add_argument("--matrix", required=True, help="matrix file: integer rows, first row all ones")
        p.add_argument("--add-ones", action="store_true", help="prepend a row of ones")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of flats")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="displacement seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="osculate", description="Higher-order distance degrees of toric embeddings.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, seeded in [
        ("oscdim", cmd_oscdim, False),
        ("check-osculating", cmd_check_osculating, False),
        ("multidegrees", cmd_multidegrees, True),
        ("polar", cmd_polar, True),
        ("gdd", cmd_gdd, True),
        ("dual", cmd_dual, True),
    ]:
        p = sub.add_parser(name)
        _common(p, seed=seeded)
        p.set_defaults(func=fn)

    p = sub.add_parser("trop-conormal")
    _common(p)
    p.add_argument("--fan-dump", default=None, help="write the fan here instead of stdout")
    p.set_defaults(func=cmd_trop_conormal)

    p = sub.add_parser("critical-valuations")
    _common(p, seed=True)
    p.add_argument("--u", default=None, help="residues of u, comma separated")
    p.add_argument("--nu", default=None, help="valuations of u, comma separated")
    p.set_defaults(func=cmd_critical_valuations)

    p = sub.add_parser("bw")
    _common(p, matrix=False)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_bw)

    p = sub.add_parser("closed-form")
    kinds = p.add_subparsers(dest="kind", required=True)
    q = kinds.add_parser("veronese")
    _common(q, matrix=False)
    q.add_argument("-m", type=int, required=True)
    q.add_argument("-d", type=int, required=True)
    q = kinds.add_parser("curve")
    _common(q, matrix=False)
    q.add_argument("--L", type=int, required=True, help="degree of the curve")
    q.add_argument("--c1", type=int, required=True, help="degree of c1 (2 - 2g)")
    q = kinds.add_parser("surface")
    _common(q, matrix=False)
    for flag in ("--L2", "--c1L", "--c1sq", "--c2"):
        q.add_argument(flag, type=int, required=True)
    q = kinds.add_parser("threefold")
    _common(q, matrix=False)
    q.add_argument("--degrees", type=int, nargs=7, required=True, metavar="D", help="L^3 c1L^2 c1^2L c2L c1^3 c1c2 c3")
    q = kinds.add_parser("p1r")
    _common(q, matrix=False)
    q.add_argument("-d", type=int, nargs="+", required=True)
    q = kinds.add_parser("toric-surface")
    _common(q)
    q = kinds.add_parser("toric-threefold")
    _common(q)
    q.add_argument("--case", type=int, choices=(1, 2, 3, 4), default=None)
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("eigencheck")
    _common(p, matrix=False)
    p.add_argument("--coeffs", nargs="+", required=True, help="exponent:coefficient items, e.g. 2,0:1 0,2:5")
    p.add_argument("--point", required=True, help="comma separated coordinates")
    p.set_defaults(func=cmd_eigencheck)
    return ap


def _set_threads(n):
    if not n:
        return
    try:
        import numba

        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
    except ImportError:
        pass


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _set_threads(args.threads)
    try:
        lines, payload = args.func(args)
    except NonGenericError as exc:
        print(f"error: {exc}; try another --seed", file=err)
        return EXIT_NONGENERIC
    except BudgetExceeded as exc:
        print(f"error: {exc}; raise --budget", file=err)
        return EXIT_INPUT
    except (InputError, TrivialConormalError, DegeneratePolytopeError, SingularVertexError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        for line in lines:
            print(line, file=out)
        for w in payload.get("warnings", []) if isinstance(payload, dict) else []:
            print(f"warning: {w}", file=err)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
