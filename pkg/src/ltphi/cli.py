"""``ltp`` command-line front end.

Exit status: 0 on success, 1 on a domain error (a JSON error record is
printed), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import formal_group as fg
from . import monodromy as mono
from . import multivar as mv
from . import period as ring
from .padic import BaseFieldSpec, FElement, PrecisionError, element_to_text
from .series import BiSeries, TruncSeries

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- JSON helpers --------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "+inf" if obj > 0 else "-inf"
    if isinstance(obj, FElement):
        return element_to_text(obj)
    if isinstance(obj, (TruncSeries, BiSeries, mv.MultiElement)):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(args, obj):
    if isinstance(obj, str):
        text = obj if obj.endswith("\n") else obj + "\n"
    else:
        text = json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# -- field and input parsing -----------------------------------------------------

def _spec_from_args(args) -> BaseFieldSpec:
    p = args.p
    flavor = (args.flavor or "").lower()
    if args.eis:
        poly = tuple(int(c) for c in args.eis.split(","))
        return BaseFieldSpec.eisenstein(p, poly)
    if flavor in ("", "qp") and (args.h in (None, 1)):
        return BaseFieldSpec.qp(p)
    if flavor in ("", "unramified", "qp"):
        return BaseFieldSpec.unramified(p, args.h or 1)
    if flavor == "eisenstein":
        raise UsageError("--flavor eisenstein needs --eis <c0,c1,...,1>")
    raise UsageError(f"unknown flavor {args.flavor!r}")


def _series_from_args(args, spec, var="T") -> TruncSeries:
    if args.infile:
        data = _read_json(args.infile)
        if "field" in data:
            spec_in = BaseFieldSpec.from_json(data["field"])
            if spec_in != spec:
                raise ValueError("input series lives over a different field than the flags describe")
        s = TruncSeries.from_json(data, spec)
    elif args.coeffs:
        ints = [int(c) for c in args.coeffs.split(",")]
        s = TruncSeries.from_ints(spec, ints, kmin=args.kmin)
    else:
        raise UsageError("give a series with --in <file> or --coeffs c0,c1,...")
    return TruncSeries(spec, s.coeffs, s.kmin, s.D, var)


def _multi_from_args(args, spec) -> mv.MultiElement:
    if not args.infile:
        raise UsageError("give a multivariable element with --in <file>")
    data = _read_json(args.infile)
    if "field" not in data:
        data = {**data, "field": spec.to_json()}
    return mv.MultiElement.from_json(data)


def _unit(spec, c: int) -> FElement:
    return FElement.from_int(spec, c)


# -- fg ------------------------------------------------------------------------

def cmd_fg(args):
    spec = _spec_from_args(args)
    D, N = args.deg, args.prec
    op = args.op
    if op == "mul-by":
        a = args.a if args.a is not None else 1
        return fg.mult_by_a(spec, a, D, N).to_json()
    if op == "log":
        return fg.log_lt(spec, D, N).to_json()
    if op == "exp":
        return fg.exp_lt(spec, D, N).to_json()
    if op == "add":
        return fg.fg_add(spec, D, N).to_json()
    if op == "qk":
        if args.k is None:
            raise UsageError("fg qk needs --k")
        return fg.q_poly(spec, args.k).to_json()
    if op == "eval-torsion":
        if args.k is None:
            raise UsageError("fg eval-torsion needs --k")
        f = _series_from_args(args, spec)
        x = fg.eval_at_torsion(f, args.k, N)
        out = x.to_json()
        out["degree"] = x.field.degree
        try:
            out["val_p"] = x.val_p()
        except PrecisionError:
            out["val_p"] = None
        return out
    raise UsageError(f"unknown fg operation {op}")


# -- ring ----------------------------------------------------------------------

def cmd_ring(args):
    spec = _spec_from_args(args)
    D, N = args.deg, args.prec
    op = args.op
    if op == "mahler":
        q = args.q or spec.q
        level = args.level or 1
        if args.n is not None:
            w = ring.mahler_weight(args.n, level, q)
            bound = Fraction(args.n, q**level * (q - 1))
            return {"q": q, "n": args.n, "level": level, "weight": w, "bound": bound, "holds": w <= bound}
        n_max = args.nmax or q**8
        return ring.weight_bound_check(level, n_max, q)
    if op == "deep-norm":
        if args.n is None:
            raise UsageError("ring deep-norm needs --n")
        depth = args.level if args.level is not None else 1
        m = args.m or 0
        k = depth - m
        computed, closed = ring.deep_norm_exponent(spec, args.n, k, m)
        verdict = "PASS" if computed == closed else "FAIL"
        return f"{computed} == {closed}: {verdict}"
    x = _series_from_args(args, spec, ring.VAR)
    if op == "val":
        if args.r is None:
            raise UsageError("ring val needs --r")
        r = Fraction(args.r)
        out = {"r": r, "r_prime": ring.Radius(spec, r).rprime, "normalization": "V(u^i, r) = i/r'"}
        out["V"] = ring.gauss_val(x, r)
        if args.s is not None:
            out["s"] = Fraction(args.s)
            out["V_interval"] = ring.interval_val(x, r, Fraction(args.s))
        return out
    if op == "phi":
        return ring.phi_q(x, N).to_json()
    if op == "psi":
        return ring.psi_q(x).to_json()
    if op == "gamma":
        c = args.c if args.c is not None else 1
        return ring.gamma_act(x, _unit(spec, c), D, N).to_json()
    if op == "orbit":
        n = args.level if args.level is not None else 1
        K = args.order if args.order is not None else 4
        rep = ring.orbit_taylor(x, n, K, D, N)
        return {
            "level": n,
            "order": K,
            "w": [w.to_json() for w in rep.w],
            "certificates": [{
                "ell": c.ell, "val_ell": c.val_ell, "error_val": c.error_val, "bound": c.bound,
                "loss": c.loss, "precision_floor": c.precision_floor, "passed": c.passed,
            } for c in rep.certificates],
            "passed": rep.passed,
        }
    raise UsageError(f"unknown ring operation {op}")


# -- multi -----------------------------------------------------------------------

def cmd_multi(args):
    spec = _spec_from_args(args)
    D, N = args.deg, args.prec
    op = args.op
    x = _multi_from_args(args, spec)
    if op == "act":
        c = args.c if args.c is not None else 1
        return mv.gamma_act_multi(_unit(spec, c), x, D, N).to_json()
    if op == "partial":
        j = args.j if args.j is not None else 1
        return mv.partial_tau(j, x).to_json()
    if op == "decompose":
        parts = mv.taylor_decompose(x, N)
        return {"routes_agree": True,
                "parts": [{"index": list(i), "x_i": parts[i].to_json()["terms"]} for i in sorted(parts)]}
    if op == "antider":
        j = args.j if args.j is not None else 1
        return mv.antiderivative(j, x, N).to_json()
    raise UsageError(f"unknown multi operation {op}")


# -- mono ------------------------------------------------------------------------

def _connection_from_args(args, spec) -> mono.Connection:
    if args.infile:
        return mono.Connection.from_json(_read_json(args.infile))
    if spec.h < 2:
        spec = BaseFieldSpec.unramified(spec.p, 2)
    return mono.Connection.trivial(spec, args.d, args.deg)


def _solution_json(sol: mono.SolutionBasis):
    return {"H": mono.matrix_to_json(sol.H), "defect_val": sol.defect_val,
            "defect_zero": sol.defect_zero, "rank": sol.rank}


def cmd_mono(args):
    spec = _spec_from_args(args)
    N = args.prec
    op = args.op
    if op == "demo":
        if spec.h < 2:
            spec = BaseFieldSpec.unramified(spec.p, 2)
        rep = mono.demo(spec, args.d, args.deg, args.seed, N)
        return {"d": rep.d, "deg": rep.D, "seed": rep.seed, "flat_before": rep.flat_before,
                "flat_after": rep.flat_after, "gauged": rep.gauged.to_json(),
                "G": mono.matrix_to_json(rep.G), "solution": _solution_json(rep.solution),
                "GH_annihilated": rep.GH_annihilated, "passed": rep.passed}
    conn = _connection_from_args(args, spec)
    if op == "check":
        rep = mono.check_integrable(conn)
        return {"flat": rep.flat, "defect_val": rep.defect_val}
    if op == "solve":
        rep = mono.check_integrable(conn)
        if args.check_only:
            return {"flat": rep.flat, "defect_val": rep.defect_val}
        return _solution_json(mono.solve_H(conn, N))
    if op == "gauge":
        import random
        G = mono.random_gauge_matrix(conn.spec, conn.d, conn.D, random.Random(args.seed), conn.nvars)
        new = mono.gauge(conn, G, N)
        return {"G": mono.matrix_to_json(G), "connection": new.to_json()}
    raise UsageError(f"unknown mono operation {op}")


# -- parser ------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=3, help="residue characteristic")
    p.add_argument("--flavor", default=None, help="qp | unramified | eisenstein")
    p.add_argument("--h", type=int, default=None, help="residue degree (unramified flavor)")
    p.add_argument("--eis", default=None, help="Eisenstein polynomial c0,c1,...,1 (low to high)")
    p.add_argument("--prec", type=int, default=20, help="absolute precision in powers of the uniformizer")
    p.add_argument("--deg", type=int, default=10, help="truncation order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--coeffs", default=None, help="integer coefficients c0,c1,... of a one-variable input")
    p.add_argument("--kmin", type=int, default=0, help="index of the first entry of --coeffs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ltp", description="Lubin-Tate period-ring toolkit")
    top = parser.add_subparsers(dest="group", required=True)

    g = top.add_parser("fg", help="formal group")
    g.add_argument("op", choices=["mul-by", "log", "exp", "add", "qk", "eval-torsion"])
    _common(g)
    g.add_argument("--a", type=int, default=None)
    g.add_argument("--k", type=int, default=None)
    g.set_defaults(func=cmd_fg)

    r = top.add_parser("ring", help="one-variable period ring")
    r.add_argument("op", choices=["val", "phi", "psi", "gamma", "orbit", "mahler", "deep-norm"])
    _common(r)
    r.add_argument("--r", default=None)
    r.add_argument("--s", default=None)
    r.add_argument("--c", type=int, default=None)
    r.add_argument("--n", type=int, default=None)
    r.add_argument("--m", type=int, default=None, help="depth m for deep-norm (level = k + m)")
    r.add_argument("--q", type=int, default=None)
    r.add_argument("--level", type=int, default=None)
    r.add_argument("--order", type=int, default=None)
    r.add_argument("--nmax", type=int, default=None)
    r.set_defaults(func=cmd_ring)

    m = top.add_parser("multi", help="multivariable ring")
    m.add_argument("op", choices=["act", "partial", "decompose", "antider"])
    _common(m)
    m.add_argument("--c", type=int, default=None)
    m.add_argument("--j", type=int, default=None)
    m.set_defaults(func=cmd_multi)

    c = top.add_parser("mono", help="connections and solutions")
    c.add_argument("op", choices=["check", "solve", "gauge", "demo"])
    _common(c)
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--check-only", action="store_true")
    c.set_defaults(func=cmd_mono)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        result = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"ltp: usage error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ArithmeticError, OSError, KeyError, json.JSONDecodeError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
        return EXIT_DOMAIN
    _emit(args, result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
