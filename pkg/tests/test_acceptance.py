"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdicts are printed
in the terminal summary under "acceptance criteria".
"""

import contextlib
import io
import json
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from golden_cases import CASES, golden_path
from helpers import SPECS, rand_poly, rand_unit
from ltphi import formal_group as fg
from ltphi import monodromy as mono
from ltphi import multivar as mv
from ltphi import period as ring
from ltphi.cli import main
from ltphi.padic import BaseFieldSpec, FElement
from ltphi.series import TruncSeries

D_FG, N_FG = 30, 25
FG_SPECS = [SPECS["Q2"], SPECS["Q3"], SPECS["Q5"], SPECS["Q4"], SPECS["E3"]]


def _fg_checks(spec):
    a = FElement.from_vec(spec, (7,) + (2,) * (spec.d - 1))
    b = FElement.from_vec(spec, (5,) + (1,) * (spec.d - 1))
    A = fg.mult_by_a(spec, a, D_FG, N_FG)
    B = fg.mult_by_a(spec, b, D_FG, N_FG)
    log = fg.log_lt(spec, D_FG, N_FG)
    out = {
        "[a][b]=[ab]": A.compose(B) == fg.mult_by_a(spec, a * b, D_FG, N_FG),
        "[a]+[b]=[a+b]": fg.fg_sum(spec, A, B, D_FG, N_FG) == fg.mult_by_a(spec, a + b, D_FG, N_FG),
        "log[a]=a log": log.compose(A) == log.scale(a),
        "exp log=id": fg.exp_lt(spec, D_FG, N_FG).compose(log) == TruncSeries.monomial(spec, 1, D=D_FG),
    }
    pi_series = fg.mult_by_pi(spec)
    q = spec.q
    out["Q_{k+1}=Q_k[pi]"] = all(
        fg.q_poly(spec, k + 1) == fg.q_poly(spec, k).compose(pi_series) for k in range(1, 3 if q > 3 else 4)
    )
    out["deg Q_k"] = all(fg.q_poly(spec, k).top == q ** (k - 1) * (q - 1) for k in range(1, 5))
    return out


@pytest.mark.parametrize("spec", FG_SPECS, ids=lambda s: s.describe())
def test_c01_formal_group_suite(spec, criterion):
    checks = _fg_checks(spec)
    failed = [k for k, v in checks.items() if not v]
    ok = criterion(1, f"formal-group identities at D=30, N=25 over {spec.describe()}", not failed,
                   "failed: " + ", ".join(failed) if failed else "")
    assert ok


def test_c02_multiplicative_oracle(criterion):
    spec = SPECS["Q2"]
    D, N = 30, 25
    ok = True
    for a in (3, -1, 5, 12):
        table = {n: FElement.from_int(spec, _gen_binom(a, n)) for n in range(1, D + 1)}
        oracle = TruncSeries.from_dict(spec, table, D=D)
        ok &= fg.mult_by_a(spec, a, D, N) == oracle
    log_oracle = TruncSeries.from_dict(
        spec, {n: FElement.from_fraction(spec, Fraction((-1) ** (n - 1), n), N + 10) for n in range(1, D + 1)}, D=D)
    ok &= fg.log_lt(spec, D, N) == log_oracle
    add = fg.fg_add(spec, D, N)
    expected = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    for (i, j), c in add.terms.items():
        if i + j <= D:
            ok &= c == FElement.from_int(spec, expected.get((i, j), 0))
    assert criterion(2, "p=2 matches (1+T)^a-1, log(1+T) and X+Y+XY to D=30", ok)


def _gen_binom(a, n):
    if a >= 0:
        return comb(a, n)
    return (-1) ** n * comb(-a + n - 1, n)


def test_c03_torsion_valuations(criterion):
    rows = []
    ok = True
    for spec in (SPECS["Q3"], SPECS["E3"]):
        for k in (1, 2, 3):
            F = fg.torsion_field(spec, k, 20)
            got = F.gen().val_p()
            closed = Fraction(1, spec.q ** (k - 1) * (spec.q - 1) * spec.e)
            ok &= got == closed == F.gen_valuation_oracle()
            rows.append(f"{spec.describe()} k={k}: {got}")
    assert criterion(3, "val_p of torsion generators", ok, "; ".join(rows))


def _radii(spec):
    return [ring.r_level(spec, 1), ring.r_level(spec, 2), Fraction(7, 2)]


def test_c04_valuation_suite(criterion):
    spec = SPECS["Q3"]
    rng = random.Random(4)
    ok = True
    for r in _radii(spec):
        rp = ring.Radius(spec, r).rprime
        for i in range(-5, 6):
            ok &= ring.gauss_val(TruncSeries.monomial(spec, i, var=ring.VAR), r) == Fraction(i) / rp
    r = Fraction(7, 2)
    for _ in range(100):
        x = rand_poly(spec, rng, -3, 5)
        y = rand_poly(spec, rng, -2, 4)
        vx, vy = ring.gauss_val(x, r), ring.gauss_val(y, r)
        ok &= ring.gauss_val(x * y, r) == vx + vy
        s = x + y
        ok &= s.is_zero() or ring.gauss_val(s, r) >= min(vx, vy)
    D, N = 30, 25
    for _ in range(8):
        x = rand_poly(spec, rng, -2, 4)
        c = rand_unit(spec, rng)
        for r in _radii(spec):
            rp = ring.Radius(spec, r).rprime
            vx = ring.gauss_val(x, r)
            assert vx < Fraction(D + 1) / rp
            ok &= ring.gauss_val(ring.gamma_act(x, c, D, N), r) == vx
            ok &= ring.gauss_val(ring.phi_q(x, N), ring.Radius(spec, r).scaled(spec.q)) == vx
    assert criterion(4, "V(u^i), multiplicativity, ultrametric, gamma isometry, V(phi x, qr)", ok)


def test_c05_psi_suite(criterion):
    ok = True
    worst = None
    for spec in (SPECS["Q3"], SPECS["Q4"]):
        rng = random.Random(5)
        lo, hi = ring.r_level(spec, 1), ring.r_level(spec, 2)
        for _ in range(50):
            a = rand_poly(spec, rng, 0, 3)
            b = rand_poly(spec, rng, 0, 7)
            ok &= ring.psi_q(ring.phi_q(a)) == a
            ok &= ring.psi_q(ring.phi_q(a) * b) == a * ring.psi_q(b)
            psb = ring.psi_q(b)
            if psb.is_zero():
                continue
            gap = ring.interval_val(psb, lo / spec.q, hi / spec.q) - (ring.interval_val(b, lo, hi) - spec.h)
            ok &= gap >= 0
            worst = gap if worst is None or gap < worst else worst
    assert criterion(5, "psi phi = id, psi(phi(a) b) = a psi(b), V(psi x, I/q) >= V(x, I) - h", ok,
                     f"smallest slack {worst}")


def test_c06_norm_exponent_and_mahler(criterion):
    ok = True
    for spec in (SPECS["Q3"], SPECS["E3"]):
        for depth in range(1, 5):
            for m in range(depth + 1):
                for n in range(21):
                    computed, closed = ring.deep_norm_exponent(spec, n, depth - m, m)
                    ok &= computed == closed == Fraction(n, spec.e * spec.q ** (depth - 1) * (spec.q - 1))
    reports = [ring.weight_bound_check(level, q**8, q) for q in (2, 3) for level in (1, 2, 3)]
    ok &= all(r["passed"] for r in reports)
    ok &= ring.mahler_weight(13, 1, 2) == 4 and ring.mahler_weight(81, 2, 3) == 4
    worst = max(r["max_ratio"] for r in reports)
    assert criterion(6, "deep norm exponent and exhaustive Mahler weight bound", ok, f"max w/bound = {worst}")


def test_c07_orbit_certificates(criterion):
    ok = True
    K, D, N = 6, 12, 15
    rows = []
    for p in (3, 5):
        spec = BaseFieldSpec.qp(p)
        u = ring.u_series(spec)
        t = ring.t_F(spec, D, N)
        inputs = {"u": u, "u^2": u * u, "u^-1": TruncSeries.monomial(spec, -1, var=ring.VAR), "t_F": t}
        for n in (1, 2):
            for name, x in inputs.items():
                rep = ring.orbit_taylor(x, n, K, D, N)
                ok &= rep.passed
                if not rep.passed:
                    rows.append(f"p={p} n={n} {name}")
                if name == "t_F":
                    for k in range(K + 1):
                        ok &= rep.w[k] == t / factorial(k)
    assert criterion(7, "orbit certificates and w_k(t_F) = t_F/k!", ok, "failed: " + ", ".join(rows) if rows else "")


def _same_part(a, b):
    if a is None or b is None:
        return (a if b is None else b).is_zero()
    return a == b


def test_c08_taylor_decomposition(criterion):
    spec = SPECS["Q9"]
    rng = random.Random(8)
    D, prec = 8, 30
    ok = True
    for _ in range(25):
        x = mv.random_element(spec, D, rng, 20)
        formula = mv.taylor_formula(x, prec)
        extracted = mv.extract_coefficients(x)
        ok &= all(_same_part(formula.get(i), extracted.get(i)) for i in set(formula) | set(extracted))
        parts = mv.taylor_decompose(x, prec)
        ok &= all(mv.partial(j, part).is_zero() for part in parts.values() for j in range(1, spec.h))
        ok &= mv.reassemble(parts, spec, spec.h) == x
        ok &= mv.partial(1, mv.antiderivative(1, x, prec)) == x
    with pytest.raises(mv.ResidueDegreeError, match="requires F ≠ Q_p"):
        mv.antiderivative(1, mv.MultiElement.constant(SPECS["Q3"], 1), 5)
    assert criterion(8, "Taylor decomposition routes agree, sections and h=1 error", ok)


def test_c09_monodromy(criterion):
    spec = SPECS["Q9"]
    D, N = 8, 25
    Y1 = mv.MultiElement.variable(spec, 1)
    a = mv.MultiElement.constant(spec, FElement.from_vec(spec, (2, 1)))
    ok = True
    for D1 in (a, Y1, a + Y1 * Y1):
        conn = mono.Connection(spec, 1, {1: [[D1]]}, D)
        sol = mono.solve_H(conn, N)
        ok &= sol.defect_zero and sol.H[0][0] == mono.scalar_oracle(conn, N)
    rows = []
    for d in (1, 2, 3):
        rep = mono.demo(spec, d, D, seed=d, prec=N)
        ok &= rep.passed and rep.solution.defect_zero and rep.GH_annihilated
        rows.append(f"d={d}: defect {rep.solution.defect_val}")
    assert criterion(9, "scalar oracle and gauge round trip", ok, "; ".join(rows))


def _cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def _dump(series, N):
    return json.dumps(series.reduce_mod(N).to_json(), sort_keys=True)


def test_c10_precision_soundness(criterion):
    ok = True
    N = 15
    for spec in (SPECS["Q3"], SPECS["Q4"], SPECS["E3"]):
        a = FElement.from_vec(spec, (4,) + (1,) * (spec.d - 1))
        for build in (
            lambda M: fg.log_lt(spec, 12, M),
            lambda M: fg.exp_lt(spec, 12, M),
            lambda M: fg.mult_by_a(spec, a, 12, M),
            lambda M: ring.gamma_act(rand_poly(spec, random.Random(1), -2, 3), 7, 12, M),
            lambda M: ring.phi_q(TruncSeries.monomial(spec, -2, var=ring.VAR), M),
        ):
            ok &= _dump(build(N), N) == _dump(build(N + 5), N)
    spec = SPECS["Q9"]
    conn = mono.Connection(spec, 1, {1: [[mv.MultiElement.variable(spec, 1)]]}, 8)
    low, high = mono.solve_H(conn, N).H[0][0], mono.solve_H(conn, N + 5).H[0][0]
    cut = low.min_absprec()
    ok &= json.dumps(low.add_bigoh(cut).to_json()) == json.dumps(high.add_bigoh(cut).to_json())
    stale = [name for name, argv in CASES.items()
             if _cli(argv) != (0, golden_path(name).read_text(encoding="utf-8"))]
    ok &= not stale
    assert criterion(10, "rerun at N+5 truncates to the N result; CLI golden files stable", ok,
                     "stale: " + ", ".join(stale) if stale else f"{len(CASES)} golden files")
