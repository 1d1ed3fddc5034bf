"""Lubin-Tate formal group for the coordinate [pi](T) = T^q + pi*T.

Endomorphisms, logarithm and exponential, the group law, the invariant
differential's inverse ``v``, the tower Q_k and evaluation in the torsion
fields F[X]/(Q_k).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .padic import INF, BaseFieldSpec, FElement, PrecisionError
from .series import BiSeries, TruncSeries

_RETRIES = 5


def _pi(spec: BaseFieldSpec) -> FElement:
    return FElement.uniformizer(spec)


def _adaptive(build, prec: int, extra: int, what: str):
    """Run ``build(work)`` with growing working precision until every coefficient reaches ``prec``."""
    for _ in range(_RETRIES):
        res = build(prec + extra)
        if res.min_absprec() >= prec:
            return res.add_bigoh(prec)
        extra *= 2
    raise PrecisionError(f"{what}: precision {prec} not reached")


def mult_by_pi(spec: BaseFieldSpec, D: int | None = None) -> TruncSeries:
    """Exactly T^q + pi*T (as a polynomial)."""
    if D is not None and D < spec.q:
        raise ValueError(f"order {D} is below q = {spec.q}")
    one = FElement.one(spec)
    return TruncSeries.from_dict(spec, {1: _pi(spec), spec.q: one})


def _pi_binomial_terms(spec: BaseFieldSpec, n: int):
    """Pairs (m, c) with c = [T^n] ([pi](T))^m for m < n."""
    q = spec.q
    pi = _pi(spec)
    out = []
    for j in range(1, n):
        m = n - j * (q - 1)
        if m < j:
            break
        out.append((m, pi ** (m - j) * comb(m, j)))
    return out


def _mult_by_a_work(spec, a: FElement, D: int, work: int) -> TruncSeries:
    pi = _pi(spec)
    q = spec.q
    a = a.add_bigoh(work)
    coeffs = {1: a}
    for n in range(2, D + 1):
        partial = TruncSeries.from_dict(spec, coeffs, D=n)
        rhs = (partial ** q).coeff(n)
        for m, c in _pi_binomial_terms(spec, n):
            rhs = rhs - coeffs[m] * c
        coeffs[n] = rhs / (pi ** n - pi)
    return TruncSeries.from_dict(spec, coeffs, D=D)


def _felement_key(a: FElement):
    return (a.vec, a.shift, a.absprec)


@lru_cache(maxsize=256)
def _mult_by_a_cached(spec, key, D, prec):
    vec, shift, absprec = key
    a = FElement(spec, vec, shift, absprec)
    if a.valuation() < 0:
        raise ValueError("[a] needs a in O_F")
    if absprec is not None:
        # [a] mod T^(D+1) only depends on a mod pi^A once D < q^A, since [a] - [a'] goes through [pi^A]
        if D >= spec.q ** absprec:
            raise PrecisionError(f"[a] to order {D} needs a beyond pi^{absprec}")
        a = FElement.make(spec, a.vec, a.shift, None)
        prec = min(prec, absprec)
    return _adaptive(lambda w: _mult_by_a_work(spec, a, D, w), prec, D + 2, "[a](T)")


def mult_by_a(spec: BaseFieldSpec, a, D: int, prec: int) -> TruncSeries:
    """The endomorphism [a](T) mod T^(D+1), coefficients known mod pi^prec."""
    if isinstance(a, int):
        a = FElement.from_int(spec, a)
    elif isinstance(a, Fraction):
        a = FElement.from_fraction(spec, a, prec + D)
    return _mult_by_a_cached(spec, _felement_key(a), D, prec)


def _log_work(spec, D: int, work: int) -> TruncSeries:
    pi = _pi(spec)
    lam = {1: FElement.one(spec, work)}
    for n in range(2, D + 1):
        acc = FElement.zero(spec).add_bigoh(work)
        for m, c in _pi_binomial_terms(spec, n):
            if m in lam:
                acc = acc + lam[m] * c
        lam[n] = acc / (pi - pi ** n)
    return TruncSeries.from_dict(spec, lam, D=D)


@lru_cache(maxsize=64)
def log_lt(spec: BaseFieldSpec, D: int, prec: int) -> TruncSeries:
    """log_LT(T) mod T^(D+1) from the functional equation log([pi]T) = pi*log(T)."""
    if D < 1:
        raise ValueError("order must be at least 1")
    return _adaptive(lambda w: _log_work(spec, D, w), prec, D + 2, "log_LT")


@lru_cache(maxsize=64)
def q_poly(spec: BaseFieldSpec, k: int) -> TruncSeries:
    """Q_0 = T, Q_1 = [pi](T)/T, Q_{k+1} = Q_k([pi](T)); exact polynomials."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    if k == 0:
        return TruncSeries.monomial(spec, 1)
    if k == 1:
        return TruncSeries.from_dict(spec, {0: _pi(spec), spec.q - 1: FElement.one(spec)})
    return q_poly(spec, k - 1).compose(mult_by_pi(spec))


@lru_cache(maxsize=256)
def q_poly_trunc(spec: BaseFieldSpec, k: int, D: int) -> TruncSeries:
    """Q_k mod T^(D+1) without building the full polynomial."""
    if k <= 1:
        return q_poly(spec, k).truncate(D)
    return q_poly_trunc(spec, k - 1, D).compose(mult_by_pi(spec), D=D)


def log_lt_product(spec: BaseFieldSpec, D: int, prec: int) -> TruncSeries:
    """Independent route: T * prod_k Q_k(T)/pi, multiplied until the next factor is 1 to precision.

    Every factor is exact; the declared precision of the truncated product is
    its smallest coefficient valuation plus the valuation of (next factor - 1).
    """
    pi = _pi(spec)
    prod = TruncSeries.monomial(spec, 1, D=D)
    k = 1
    while True:
        factor = q_poly_trunc(spec, k, D).map_coeffs(lambda c: c / pi)
        prod = (prod * factor).truncate(D)
        k += 1
        nxt = (q_poly_trunc(spec, k, D).map_coeffs(lambda c: c / pi) - 1)
        eps = nxt.gauss_min_val()
        floor = prod.gauss_min_val()
        if floor + eps >= prec:
            return prod.add_bigoh(prec)
        if k > 4 * (prec + D) + 16:
            raise PrecisionError("product formula did not stabilise")


def _exp_work(spec, D: int, work: int) -> TruncSeries:
    lam_full = log_lt(spec, D, work)
    E = TruncSeries.monomial(spec, 1, D=1)
    d = 1
    while d < D:
        d = min(2 * d, D)
        E = TruncSeries(spec, E.coeffs, E.kmin, d)
        lam = lam_full.truncate(d)
        resid = lam.compose(E) - TruncSeries.monomial(spec, 1, D=d)
        slope = lam.derivative().compose(E)
        E = (E - resid * slope.inverse()).truncate(d)
    return E


@lru_cache(maxsize=64)
def exp_lt(spec: BaseFieldSpec, D: int, prec: int) -> TruncSeries:
    """Compositional inverse of log_LT by Newton iteration."""
    if D < 1:
        raise ValueError("order must be at least 1")
    return _adaptive(lambda w: _exp_work(spec, D, w), prec, 2 * D + 4, "exp_LT")


def _add_work(spec, D: int, work: int) -> BiSeries:
    lam = log_lt(spec, D, work)
    ex = exp_lt(spec, D, work)
    s = BiSeries.from_univariate(lam, 0, D) + BiSeries.from_univariate(lam, 1, D)
    acc = BiSeries(spec, {}, D).add_constant(ex.coeff(D))
    for m in range(D - 1, 0, -1):
        acc = (acc * s).add_constant(ex.coeff(m))
    return acc * s


@lru_cache(maxsize=32)
def fg_add(spec: BaseFieldSpec, D: int, prec: int) -> BiSeries:
    """X (+) Y = exp(log X + log Y), truncated at total degree D."""
    return _adaptive(lambda w: _add_work(spec, D, w), prec, 3 * D + 4, "group law")


def fg_sum(spec: BaseFieldSpec, a: TruncSeries, b: TruncSeries, D: int, prec: int) -> TruncSeries:
    """a(T) (+) b(T) for series without constant term."""
    return fg_add(spec, D, prec).compose(a.truncate(D), b.truncate(D))


@lru_cache(maxsize=32)
def v_series(spec: BaseFieldSpec, D: int, prec: int) -> TruncSeries:
    """v(T) = d(T (+) U)/dU at U = 0."""
    return fg_add(spec, D + 1, prec).d_second_at_zero().truncate(D)


# -- torsion fields ---------------------------------------------------------

def newton_polygon_slopes(poly: TruncSeries):
    """Slopes (as p-adic valuations of roots, with multiplicities) from the lower convex hull."""
    pts = [(k, c.val_p()) for k, c in poly.items() if not c.is_exact_zero()]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((-(Fraction(y2) - Fraction(y1)) / (x2 - x1), x2 - x1))
    return out


class TorsionField:
    """F_k = F[X]/(Q_k) with X the class of the level-k torsion generator."""

    def __init__(self, spec: BaseFieldSpec, k: int, prec: int):
        if k < 1:
            raise ValueError("torsion level must be at least 1")
        self.spec = spec
        self.level = k
        self.prec = prec
        self.modulus = q_poly(spec, k)
        self.degree = self.modulus.top

    def element(self, coeffs) -> "TorsionElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            return self.reduce(coeffs)
        zero = FElement.zero(self.spec)
        return TorsionElement(self, tuple(coeffs) + (zero,) * (self.degree - len(coeffs)))

    def reduce(self, coeffs) -> "TorsionElement":
        coeffs = list(coeffs)
        n = self.degree
        mod = [self.modulus.coeff(i) for i in range(n)]
        for top in range(len(coeffs) - 1, n - 1, -1):
            c = coeffs[top]
            if c.is_exact_zero():
                continue
            base = top - n
            for i in range(n):
                if not mod[i].is_exact_zero():
                    coeffs[base + i] = coeffs[base + i] - c * mod[i]
            coeffs[top] = FElement.zero(self.spec)
        return self.element(coeffs[:n])

    def gen(self) -> "TorsionElement":
        return self.element([FElement.zero(self.spec), FElement.one(self.spec)])

    def one(self) -> "TorsionElement":
        return self.element([FElement.one(self.spec)])

    def gen_inverse(self) -> "TorsionElement":
        """X^-1 = -R(X)/pi where Q_k = pi + X*R(X)."""
        pi = _pi(self.spec)
        return self.element([-(self.modulus.coeff(i + 1) / pi) for i in range(self.degree)])

    def gen_valuation_oracle(self) -> Fraction:
        slopes = newton_polygon_slopes(self.modulus)
        if len(slopes) != 1:
            raise ArithmeticError("Q_k is expected to have a single Newton slope")
        return slopes[0][0]


class TorsionElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: TorsionField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _lift(self, other):
        if isinstance(other, TorsionElement):
            return other
        if isinstance(other, int):
            other = FElement.from_int(self.field.spec, other)
        return self.field.element([other])

    def __add__(self, other):
        other = self._lift(other)
        return TorsionElement(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TorsionElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        spec = self.field.spec
        a = TruncSeries(spec, self.coeffs, 0, None)
        b = TruncSeries(spec, other.coeffs, 0, None)
        prod = a * b
        n = 2 * self.field.degree - 1
        return self.field.reduce([prod._raw(i) for i in range(n)])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def add_bigoh(self, absprec: int) -> "TorsionElement":
        return TorsionElement(self.field, [c.add_bigoh(absprec) for c in self.coeffs])

    def val_p(self):
        """p-adic valuation from the Eisenstein basis 1, X, ..., X^(n-1)."""
        spec = self.field.spec
        n = self.field.degree
        best = INF
        for i, c in enumerate(self.coeffs):
            if c.is_exact_zero():
                continue
            v = Fraction(c.val_pi(), spec.e) + Fraction(i, n * spec.e)
            best = v if best == INF else min(best, v)
        return best

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        other = self._lift(other)
        return (self - other).is_zero()

    __hash__ = None

    def inverse(self) -> "TorsionElement":
        """Newton iteration from the leading monomial."""
        field = self.field
        spec = field.spec
        n = field.degree
        best = None
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            w = n * c.val_pi() + i
            if best is None or w < best[0]:
                best = (w, i, c)
        if best is None:
            raise ZeroDivisionError("element is zero at its precision")
        _, i0, c0 = best
        work = field.prec + 2 * (best[0] // n + 1)
        x = self.add_bigoh(work)
        y = (field.gen_inverse() ** i0 * field.element([c0.inverse(field.prec)])).add_bigoh(work)
        for _ in range(64):
            err = field.one() - x * y
            if err.is_zero():
                return y
            y = y + y * err
        raise PrecisionError("inverse did not converge")

    def to_json(self) -> dict:
        from .series import coeff_json
        return {"level": self.field.level,
                "coeffs": {str(i): coeff_json(c) for i, c in enumerate(self.coeffs) if not c.is_exact_zero()}}


def eval_at_torsion(f: TruncSeries, k: int, prec: int) -> TorsionElement:
    """Substitute the level-k generator for the variable of ``f``."""
    spec = f.spec
    field = torsion_field(spec, k, prec)
    n = field.degree
    acc = field.element([])
    pos = [c for kk, c in f.items() if kk >= 0]
    if pos:
        X = field.gen()
        for kk in range(f.top, -1, -1):
            acc = acc * X + field.element([f._raw(kk)])
    if f.kmin < 0:
        Xi = field.gen_inverse()
        neg = field.element([])
        for kk in range(f.kmin, 0):
            neg = (neg + field.element([f._raw(kk)])) * Xi
        acc = acc + neg
    if f.D is not None:
        if any(c.valuation() < 0 for c in f.coeffs):
            raise PrecisionError("truncated series with non-integral coefficients has an unbounded tail")
        tail = f.D + 1
        acc = TorsionElement(field, [c.add_bigoh(-(-(tail - i) // n)) for i, c in enumerate(acc.coeffs)])
    return acc


@lru_cache(maxsize=64)
def torsion_field(spec: BaseFieldSpec, k: int, prec: int) -> TorsionField:
    return TorsionField(spec, k, prec)


__all__ = [
    "mult_by_pi", "mult_by_a", "log_lt", "log_lt_product", "exp_lt", "fg_add", "fg_sum",
    "v_series", "q_poly", "q_poly_trunc", "TorsionField", "TorsionElement", "torsion_field",
    "eval_at_torsion", "newton_polygon_slopes",
]
