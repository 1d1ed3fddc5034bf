"""Laurent-series model of the period rings in the variable u.

Elements are ``TruncSeries`` in ``u``.  Valuations use the normalisation
V(u^i, r) = i/r' with r' = r * e * p/(p-1) * (q-1)/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .formal_group import log_lt, mult_by_a, mult_by_pi, v_series
from .padic import INF, BaseFieldSpec, FElement, IndeterminateValuation, p_adic_exp
from .series import TruncSeries

VAR = "u"


@dataclass(frozen=True)
class Radius:
    spec: BaseFieldSpec
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r <= 0:
            raise ValueError("radius must be positive")

    @property
    def rprime(self) -> Fraction:
        s = self.spec
        return self.r * s.e * Fraction(s.p, s.p - 1) * Fraction(s.q - 1, s.q)

    def scaled(self, factor) -> "Radius":
        return Radius(self.spec, self.r * Fraction(factor))


def r_level(spec: BaseFieldSpec, k: int) -> Fraction:
    """r_k = p^(kh-1) (p-1)."""
    if k < 1:
        raise ValueError("level must be at least 1")
    return Fraction(spec.p ** (k * spec.h - 1) * (spec.p - 1))


def as_radius(spec, r) -> Radius:
    return r if isinstance(r, Radius) else Radius(spec, Fraction(r))


def u_series(spec: BaseFieldSpec, D=None) -> TruncSeries:
    return TruncSeries.monomial(spec, 1, D=D, var=VAR)


def gauss_val(x: TruncSeries, r):
    """V(x, r) = min_k val_p(a_k) + k/r'."""
    rad = as_radius(x.spec, r)
    rp = rad.rprime
    e = x.spec.e
    known = INF
    floors = []
    for k, c in x.items():
        if c.is_exact_zero():
            continue
        if c.is_zero():
            floors.append(Fraction(c.absprec, e) + Fraction(k) / rp)
            continue
        v = Fraction(c.val_pi(), e) + Fraction(k) / rp
        if known == INF or v < known:
            known = v
    for f in floors:
        if known == INF or f < known:
            raise IndeterminateValuation("a coefficient that is zero at its precision could be minimal")
    return known


def interval_val(x: TruncSeries, r, s):
    """V(x, [r; s]) as the smaller endpoint value."""
    if Fraction(r) > Fraction(s):
        raise ValueError("interval endpoints out of order")
    a = gauss_val(x, r)
    b = gauss_val(x, s)
    return min(a, b)


def _phi_negative_power(spec: BaseFieldSpec, k: int, prec: int) -> TruncSeries:
    """phi(u)^k for k < 0 as u^(qk) (1 + pi u^(1-q))^k, cut once the pi-power reaches ``prec``."""
    q = spec.q
    pi = FElement.uniformizer(spec)
    table = {}
    j = 0
    while j * 1 < prec:
        c = pi ** j * _binom_signed(k, j)
        idx = q * k + j * (1 - q)
        table[idx] = table[idx] + c if idx in table else c
        j += 1
    return TruncSeries.from_dict(spec, table, var=VAR).add_bigoh(prec)


def _binom_signed(k: int, j: int) -> int:
    """Generalised binomial coefficient C(k, j) for any integer k."""
    if k >= 0:
        return comb(k, j)
    return (-1) ** j * comb(-k + j - 1, j)


def phi_q(x: TruncSeries, prec: int | None = None) -> TruncSeries:
    """u -> [pi](u).  Negative powers need ``prec`` (their expansion is cut at pi^prec)."""
    spec = x.spec
    pos = TruncSeries.from_dict(spec, {k: c for k, c in x.items() if k >= 0}, D=x.D, var=VAR)
    out = pos.compose(mult_by_pi(spec)) if pos.coeffs else TruncSeries(spec, [], 0, x.D, VAR)
    out = TruncSeries(spec, out.coeffs, out.kmin, x.D, VAR) if x.D is not None else out
    neg = [(k, c) for k, c in x.items() if k < 0]
    if neg:
        if prec is None:
            raise ValueError("phi of a Laurent element needs a precision")
        for k, c in neg:
            out = out + _phi_negative_power(spec, k, prec).scale(c)
    return out


def psi_q(x: TruncSeries) -> TruncSeries:
    """f_0 in the decomposition x = sum_{i<q} phi(f_i) u^i, solved from the top degree down."""
    return psi_decompose(x)[0]


def psi_decompose(x: TruncSeries) -> list[TruncSeries]:
    spec = x.spec
    if x.D is not None:
        raise ValueError("psi is defined here on polynomials in u only")
    if x.kmin < 0 and x.coeffs:
        raise ValueError("psi is defined here on polynomials in u only")
    q = spec.q
    work = {k: c for k, c in x.items()}
    parts: list[dict] = [dict() for _ in range(q)]
    phi_u = mult_by_pi(spec)
    phi_cache = {0: TruncSeries.constant(spec, 1, var=VAR)}

    def phi_pow(m):
        if m not in phi_cache:
            phi_cache[m] = phi_pow(m - 1) * phi_u
        return phi_cache[m]

    for n in range(x.top, -1, -1):
        c = work.get(n)
        if c is None or c.is_exact_zero():
            continue
        m, i = divmod(n, q)
        parts[i][m] = c
        basis = phi_pow(m)
        for kk, b in basis.items():
            idx = kk + i
            work[idx] = work[idx] - c * b if idx in work else -(c * b)
        work[n] = FElement.zero(spec).add_bigoh(c.absprec) if c.absprec is not None else FElement.zero(spec)
    leftover = [c for c in work.values() if not c.is_zero()]
    if leftover:
        raise ArithmeticError("decomposition left a remainder")
    return [TruncSeries.from_dict(spec, parts[i], var=VAR) for i in range(q)]


def gamma_act(x: TruncSeries, c, D: int, prec: int) -> TruncSeries:
    """u -> [c](u) for a unit c of O_F, truncated at u^D."""
    spec = x.spec
    if isinstance(c, int):
        c = FElement.from_int(spec, c)
    if c.valuation() != 0:
        raise ValueError("the Galois action needs a unit c")
    bracket = mult_by_a(spec, c, D + 2 * max(0, -x.kmin) + 2, prec)
    bracket = TruncSeries(spec, bracket.coeffs, bracket.kmin, bracket.D, VAR)
    out = x.compose(bracket, D=D, cap=prec)
    return out


def t_F(spec: BaseFieldSpec, D: int, prec: int) -> TruncSeries:
    """t_F = log_LT(u)."""
    lam = log_lt(spec, D, prec)
    return TruncSeries(spec, lam.coeffs, lam.kmin, lam.D, VAR)


def partial(x: TruncSeries) -> TruncSeries:
    """d/du."""
    return x.derivative()


def nabla(x: TruncSeries, D: int, prec: int) -> TruncSeries:
    """t_F * v(u) * d/du."""
    spec = x.spec
    t = t_F(spec, D, prec)
    v = v_series(spec, D, prec)
    v = TruncSeries(spec, v.coeffs, v.kmin, v.D, VAR)
    return (t * v).truncate(D) * partial(x)


def coeff_min_val_p(x: TruncSeries):
    """Smallest p-adic valuation among coefficients (inexact zeros count with their precision)."""
    e = x.spec.e
    vals = [Fraction(c.valuation(), e) for c in x.coeffs if not c.is_exact_zero()]
    return min(vals) if vals else INF


@dataclass
class OrbitCertificate:
    ell: FElement
    val_ell: Fraction
    order: int
    error_val: object
    bound: object
    loss: object
    precision_floor: object
    passed: bool


@dataclass
class OrbitReport:
    w: list
    certificates: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)


def orbit_taylor(x: TruncSeries, n: int, K: int, D: int, prec: int, samples=None) -> OrbitReport:
    """w_k = nabla^k(x)/k! for k <= K, with certificates against gamma_c(x) for c = exp(ell).

    ``samples`` are elements ell with val_p(ell) >= n/e and > 1/(p-1); by default
    pi^m and (1 + pi) pi^m with the smallest admissible m >= n.
    """
    spec = x.spec
    e, p = spec.e, spec.p
    x = x.truncate(D) if x.D is None or x.D > D else x
    pi = FElement.uniformizer(spec)
    if samples is None:
        m = n
        while Fraction(m, e) <= Fraction(1, p - 1):
            m += 1
        samples = [pi ** m, (pi + 1) * pi ** m]
    w = [x]
    k = 0
    tail_floor = Fraction(prec, e)
    # carry the expansion past K until terms are below the working precision
    val_min = min(Fraction(s.val_pi(), e) for s in samples)
    while True:
        k += 1
        nxt = nabla(w[-1], D, prec)
        nxt = nxt / k
        w.append(nxt)
        if k > K and k * val_min + _floor_val(nxt) >= tail_floor:
            break
        if k > K + 8 * (prec + 4):
            break
    certs = []
    for ell in samples:
        vl = Fraction(ell.val_pi(), e)
        if not (vl >= Fraction(n, e) and vl > Fraction(1, p - 1)):
            raise ValueError("sample outside the convergence range of exp")
        c = p_adic_exp(ell.add_bigoh(prec + 4 * e) if ell.exact else ell, prec)
        direct = gamma_act(x, c, D, prec)
        approx = TruncSeries(spec, [], 0, D, VAR)
        power = FElement.one(spec)
        for kk in range(K + 1):
            approx = approx + w[kk].scale(power)
            power = power * ell
        diff = direct - approx
        err = coeff_min_val_p(diff)
        tail = [kk * vl + _floor_val(w[kk]) for kk in range(K + 1, len(w))]
        bound = min(tail) if tail else INF
        floor = min(Fraction(diff.min_absprec(), e), tail_floor) if diff.min_absprec() != INF else tail_floor
        target = min(bound, floor)
        loss = (K + 1) * vl - bound if bound != INF else 0
        certs.append(OrbitCertificate(ell, vl, K, err, bound, loss, floor, err >= target))
    return OrbitReport(w[:K + 1], certs)


def _floor_val(x: TruncSeries):
    v = coeff_min_val_p(x)
    return Fraction(10**9) if v == INF else v


def mahler_weight(n: int, level: int, q: int) -> int:
    """w_{n,l} = sum_{i>=l} n_i (q^(i-l) - 1)/(q-1) over the base-q digits n_i of n."""
    if n < 0 or level < 1:
        raise ValueError("need n >= 0 and level >= 1")
    total = 0
    i = 0
    while n:
        n, digit = divmod(n, q)
        if i >= level:
            total += digit * (q ** (i - level) - 1) // (q - 1)
        i += 1
    return total


def weight_bound_check(level: int, n_max: int, q: int) -> dict:
    """Check w_{n,l} <= n/(q^l (q-1)) for every 0 <= n < n_max."""
    denom = q**level * (q - 1)
    worst = None
    failures = []
    for n in range(n_max):
        w = mahler_weight(n, level, q)
        if w * denom > n:
            failures.append(n)
        if n:
            ratio = Fraction(w * denom, n)
            worst = ratio if worst is None or ratio > worst else worst
    return {"q": q, "level": level, "checked": n_max, "failures": failures,
            "max_ratio": worst if worst is not None else Fraction(0), "passed": not failures}


def deep_norm_exponent(spec: BaseFieldSpec, n: int, k: int, m: int):
    """(V(u^n, r_{k+m}) by the Gauss valuation, closed form n/(e q^(k+m-1) (q-1)))."""
    if k < 0 or m < 0 or k + m < 1:
        raise ValueError("need k, m >= 0 and k + m >= 1")
    depth = k + m
    computed = gauss_val(TruncSeries.monomial(spec, n, var=VAR), r_level(spec, depth)) if n else Fraction(0)
    closed = Fraction(n, spec.e * spec.q ** (depth - 1) * (spec.q - 1))
    return computed, closed
