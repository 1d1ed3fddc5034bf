"""Multivariable series in Y_0, ..., Y_{h-1} over an unramified base field.

Y_j plays the role of the j-th Frobenius conjugate of u.  Only Y_0 may carry
negative exponents.  Truncation is by total degree.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .formal_group import log_lt, mult_by_a, v_series
from .padic import INF, BaseFieldSpec, FElement, IndeterminateValuation, element_from_text, element_to_text
from .period import as_radius
from .series import TruncSeries, _min_opt


class ResidueDegreeError(ValueError):
    pass


def _check_spec(spec: BaseFieldSpec):
    if spec.ramified:
        raise ValueError("multivariable rings need an unramified base field")


class MultiElement:
    __slots__ = ("spec", "terms", "D", "nvars")

    def __init__(self, spec: BaseFieldSpec, terms: dict, D=None, nvars=None):
        _check_spec(spec)
        self.spec = spec
        self.nvars = spec.h if nvars is None else nvars
        self.D = D
        clean = {}
        for k, c in terms.items():
            k = tuple(k)
            if len(k) != self.nvars:
                raise ValueError(f"exponent {k} has the wrong number of variables")
            if any(x < 0 for x in k[1:]):
                raise ValueError("only Y_0 may carry negative exponents")
            if c.is_exact_zero() or (D is not None and sum(k) > D):
                continue
            clean[k] = c
        self.terms = clean

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, spec, D=None):
        return cls(spec, {}, D)

    @classmethod
    def constant(cls, spec, c, D=None):
        if isinstance(c, int):
            c = FElement.from_int(spec, c)
        return cls(spec, {(0,) * spec.h: c}, D)

    @classmethod
    def variable(cls, spec, j: int, D=None):
        exp = [0] * spec.h
        exp[j] = 1
        return cls(spec, {tuple(exp): FElement.one(spec)}, D)

    @classmethod
    def from_univariate(cls, s: TruncSeries, j: int, nvars=None, D=None):
        spec = s.spec
        n = spec.h if nvars is None else nvars
        terms = {}
        for k, c in s.items():
            exp = [0] * n
            exp[j] = k
            terms[tuple(exp)] = c
        return cls(spec, terms, _min_opt(D, s.D), n)

    def _like(self, terms, D="same"):
        return MultiElement(self.spec, terms, self.D if D == "same" else D, self.nvars)

    # -- access -----------------------------------------------------------
    def coeff(self, exp) -> FElement:
        return self.terms.get(tuple(exp), FElement.zero(self.spec))

    def min_absprec(self):
        ps = [c.absprec for c in self.terms.values() if c.absprec is not None]
        return min(ps) if ps else INF

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def __repr__(self):
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"Y{j}^{e}" for j, e in enumerate(k) if e)
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        tail = "" if self.D is None else f" + O(deg {self.D + 1})"
        return (" + ".join(parts) or "0") + tail

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, MultiElement):
            if other.spec != self.spec or other.nvars != self.nvars:
                raise ValueError("incompatible multivariable elements")
            return other
        if isinstance(other, (int, FElement)):
            c = FElement.from_int(self.spec, other) if isinstance(other, int) else other
            return MultiElement(self.spec, {(0,) * self.nvars: c}, None, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return self._like(out, _min_opt(self.D, other.D))

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiElement":
        if isinstance(c, int):
            c = FElement.from_int(self.spec, c)
        return self._like({k: c * x for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FElement)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        D = _result_order(self, other)
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                if D is not None and sum(k) > D:
                    continue
                prod = ca * cb
                out[k] = out[k] + prod if k in out else prod
        return self._like(out, D)

    def __rmul__(self, other):
        if isinstance(other, (int, FElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        result = MultiElement(self.spec, {(0,) * self.nvars: FElement.one(self.spec)}, None, self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, D) -> "MultiElement":
        return self._like(self.terms, D if self.D is None else min(D, self.D))

    def add_bigoh(self, absprec) -> "MultiElement":
        return self._like({k: c.add_bigoh(absprec) for k, c in self.terms.items()})

    def map_coeffs(self, fn) -> "MultiElement":
        return self._like({k: fn(c) for k, c in self.terms.items()})

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        D = _min_opt(self.D, other.D)
        for k in set(self.terms) | set(other.terms):
            if D is not None and sum(k) > D:
                continue
            if not (self.coeff(k) == other.coeff(k)):
                return False
        return True

    __hash__ = None

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.spec.to_json(),
            "deg": self.D,
            "terms": [{"exp": list(k), "coeff": element_to_text(c)} for k, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data: dict, spec=None) -> "MultiElement":
        if spec is None:
            spec = BaseFieldSpec.from_json(data["field"])
        terms = {}
        for t in data["terms"]:
            c = t["coeff"]
            c = FElement.from_int(spec, c) if isinstance(c, int) else element_from_text(spec, c)
            k = tuple(int(x) for x in t["exp"])
            terms[k] = terms[k] + c if k in terms else c
        D = data.get("deg")
        return cls(spec, terms, None if D is None else int(D))


def _lowest_degree(x: MultiElement):
    degs = [sum(k) for k, c in x.terms.items()]
    return min(degs) if degs else INF


def _low(x: MultiElement):
    """Lowest degree a nonzero term of x could have."""
    low = _lowest_degree(x)
    if x.D is not None:
        low = min(low, x.D + 1)
    return low


def _result_order(a: MultiElement, b: MultiElement):
    la, lb = _low(a), _low(b)
    if la == INF or lb == INF:
        return None
    bounds = []
    if a.D is not None:
        bounds.append(a.D + lb)
    if b.D is not None:
        bounds.append(b.D + la)
    return min(bounds) if bounds else None


# -- substitutions ----------------------------------------------------------

def substitute(x: MultiElement, series: list, D: int) -> MultiElement:
    """Y_j -> series[j](Y_j); each series[j] is univariate in its own variable with zero constant term."""
    spec = x.spec
    n = x.nvars
    powers: list[dict] = [dict() for _ in range(n)]

    def power(j, k):
        if k not in powers[j]:
            s = series[j]
            if k == 0:
                val = TruncSeries.constant(spec, 1)
            elif k > 0:
                val = (power(j, k - 1) * s).truncate(D)
            else:
                inv = s.inverse(D - k + 2)
                val = (inv ** (-k)).truncate(D)
            powers[j][k] = val
        return powers[j][k]

    out = MultiElement(spec, {}, D, n)
    for exp, c in x.terms.items():
        term = MultiElement(spec, {(0,) * n: c}, None, n)
        for j, k in enumerate(exp):
            if k:
                term = term * MultiElement.from_univariate(power(j, k), j, n, D)
        out = out + term.truncate(D)
    return out.truncate(D)


def _twisted(s: TruncSeries, j: int) -> TruncSeries:
    if j == 0:
        return s
    # exact coefficients are only fixed by sigma when they lie in Z_p
    return s.map_coeffs(lambda c: c if c.exact and not any(c.vec[1:]) else c.sigma(j))


def gamma_act_multi(c, x: MultiElement, D: int, prec: int) -> MultiElement:
    """Y_j -> [c]^{sigma^j}(Y_j)."""
    spec = x.spec
    if isinstance(c, int):
        c = FElement.from_int(spec, c)
    if c.valuation() != 0:
        raise ValueError("the Galois action needs a unit c")
    lowest0 = min((k[0] for k in x.terms), default=0)
    bracket = mult_by_a(spec, c, D + 2 * max(0, -lowest0) + 2, prec)
    return substitute(x, [_twisted(bracket, j) for j in range(x.nvars)], D)


def phi_q_multi(x: MultiElement, D: int | None = None) -> MultiElement:
    """Y_j -> sigma^j(pi) Y_j + Y_j^q; with pi = p every variable maps by Y^q + pY."""
    spec = x.spec
    if any(k[0] < 0 for k in x.terms):
        raise ValueError("phi on Laurent terms in Y_0 is handled by the one-variable ring")
    pi = FElement.uniformizer(spec)
    subs = []
    for j in range(x.nvars):
        pij = pi if pi.exact else pi.sigma(j)
        subs.append(TruncSeries.from_dict(spec, {1: pij, spec.q: FElement.one(spec)}))
    if D is None:
        top = max((sum(k) for k in x.terms), default=0)
        D = x.D if x.D is not None else top * spec.q
    return substitute(x, subs, D)


def partial(j: int, x: MultiElement) -> MultiElement:
    """Formal d/dY_j."""
    out = {}
    for k, c in x.terms.items():
        if k[j] == 0:
            continue
        nk = list(k)
        nk[j] -= 1
        out[tuple(nk)] = c * k[j]
    return x._like(out, None if x.D is None else x.D - 1)


def partial_tau(j: int, x: MultiElement) -> MultiElement:
    if j == 0:
        raise ValueError("partial_tau is indexed by non-identity embeddings (j >= 1)")
    if not 0 < j < x.nvars:
        raise ValueError(f"variable index {j} out of range")
    return partial(j, x)


def t_tau(spec: BaseFieldSpec, j: int, D: int, prec: int, nvars=None) -> MultiElement:
    """sigma^j-twisted log_LT evaluated at Y_j."""
    return MultiElement.from_univariate(_twisted(log_lt(spec, D, prec), j), j, nvars)


def v_tau(spec: BaseFieldSpec, j: int, D: int, prec: int, nvars=None) -> MultiElement:
    return MultiElement.from_univariate(_twisted(v_series(spec, D, prec), j), j, nvars)


def nabla_tau(j: int, x: MultiElement, D: int, prec: int) -> MultiElement:
    """t_j v_j d/dY_j."""
    spec = x.spec
    tv = (t_tau(spec, j, D, prec, x.nvars) * v_tau(spec, j, D, prec, x.nvars)).truncate(D)
    return (tv * partial(j, x)).truncate(D)


def gauss_val_multi(x: MultiElement, r):
    """min over monomials of val_p(coeff) + sum_j i_j p^j / r' (weight p^j derived for Y_j)."""
    rp = as_radius(x.spec, r).rprime
    p = x.spec.p
    known = INF
    floors = []
    for k, c in x.terms.items():
        w = sum(Fraction(e * p**j) for j, e in enumerate(k)) / rp
        if c.is_zero():
            floors.append(Fraction(c.absprec) + w)
            continue
        v = Fraction(c.val_pi()) + w
        known = v if known == INF else min(known, v)
    if any(known == INF or f < known for f in floors):
        raise IndeterminateValuation("a coefficient that is zero at its precision could be minimal")
    return known


# -- Taylor decomposition ---------------------------------------------------

def _multi_indices(n: int, top: int):
    for total in range(top + 1):
        for comp in _compositions(total, n):
            yield comp


def _compositions(total: int, n: int):
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def _fact(idx) -> int:
    out = 1
    for i in idx:
        out *= factorial(i)
    return out


def extract_coefficients(x: MultiElement) -> dict:
    """x_i by reading off the coefficient of Y_E0^i (a series in Y_0 only)."""
    spec = x.spec
    n = x.nvars
    out: dict = {}
    for k, c in x.terms.items():
        i = k[1:]
        out.setdefault(i, {})[(k[0],) + (0,) * (n - 1)] = c
    return {i: MultiElement(spec, t, None if x.D is None else x.D - sum(i), n) for i, t in out.items()}


def taylor_formula(x: MultiElement, prec: int) -> dict:
    """x_i = (1/i!) sum_k (-1)^|k| Y^k/k! d^(k+i) x with the base point at 0."""
    spec = x.spec
    n = x.nvars
    if n < 2:
        raise ValueError("the decomposition needs h >= 2")
    top = x.D if x.D is not None else max((sum(k[1:]) for k in x.terms), default=0)
    work_x = x.map_coeffs(lambda c: c.add_bigoh(prec) if c.exact else c)
    derivs = {(0,) * (n - 1): work_x}

    def deriv(idx):
        if idx not in derivs:
            j = next(t for t, e in enumerate(idx) if e)
            prev = list(idx)
            prev[j] -= 1
            derivs[idx] = partial(j + 1, deriv(tuple(prev)))
        return derivs[idx]

    out = {}
    for i in _multi_indices(n - 1, top):
        acc = MultiElement(spec, {}, None, n)
        for k in _multi_indices(n - 1, top - sum(i)):
            d = deriv(tuple(a + b for a, b in zip(k, i)))
            if not d.terms:
                continue
            mono = {(0,) + k: FElement.from_int(spec, (-1) ** sum(k))}
            term = MultiElement(spec, mono, None, n) * d
            acc = acc + term.map_coeffs(lambda c, kf=_fact(k): c / kf)
        acc = acc.map_coeffs(lambda c, f=_fact(i): c / f)
        if x.D is not None:
            acc = acc.truncate(x.D - sum(i))
        if acc.terms:
            out[i] = acc
    return out


class DecompositionMismatch(ArithmeticError):
    pass


def taylor_decompose(x: MultiElement, prec: int) -> dict:
    """Both routes, compared coefficient by coefficient; returns the formula route."""
    if x.nvars < 2:
        raise ValueError("the decomposition needs h >= 2")
    formula = taylor_formula(x, prec)
    extracted = extract_coefficients(x)
    for i in set(formula) | set(extracted):
        a = formula.get(i, MultiElement(x.spec, {}, None, x.nvars))
        b = extracted.get(i, MultiElement(x.spec, {}, None, x.nvars))
        if not (a == b):
            raise DecompositionMismatch(f"formula and extraction disagree at index {i}")
    return formula


def reassemble(parts: dict, spec: BaseFieldSpec, nvars: int, D=None) -> MultiElement:
    out = MultiElement(spec, {}, D, nvars)
    for i, xi in parts.items():
        mono = MultiElement(spec, {(0,) + tuple(i): FElement.one(spec)}, None, nvars)
        out = out + mono * xi
    return out


def antiderivative(j: int, x: MultiElement, prec: int) -> MultiElement:
    """Termwise integration in Y_j, j >= 1."""
    if x.nvars < 2 or x.spec.h < 2:
        raise ResidueDegreeError("antiderivative in a conjugate variable requires F ≠ Q_p")
    if not 0 < j < x.nvars:
        raise ValueError(f"variable index {j} out of range")
    out = {}
    for k, c in x.terms.items():
        m = k[j] + 1
        nk = list(k)
        nk[j] = m
        if c.exact and c.spec.p ** _vp(m, c.spec.p) != m:
            c = c.add_bigoh(prec)
        out[tuple(nk)] = c / m
    return x._like(out, None if x.D is None else x.D + 1)


def _vp(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def random_element(spec: BaseFieldSpec, D: int, rng, prec: int, laurent: int = 0, density=0.6) -> MultiElement:
    """Random element with O_F coefficients known mod p^prec."""
    n = spec.h
    terms = {}
    for exp in _multi_indices(n, D):
        if rng.random() < density:
            vec = tuple(rng.randrange(spec.p**prec) for _ in range(spec.d))
            terms[exp] = FElement.make(spec, vec, 0, prec)
    for k in range(1, laurent + 1):
        vec = tuple(rng.randrange(spec.p**prec) for _ in range(spec.d))
        terms[(-k,) + (0,) * (n - 1)] = FElement.make(spec, vec, 0, prec)
    return MultiElement(spec, terms, D, n)


__all__ = [
    "MultiElement", "gamma_act_multi", "phi_q_multi", "partial", "partial_tau", "nabla_tau",
    "t_tau", "v_tau", "gauss_val_multi", "taylor_decompose", "taylor_formula", "extract_coefficients",
    "reassemble", "antiderivative", "ResidueDegreeError", "DecompositionMismatch", "substitute",
    "random_element",
]
