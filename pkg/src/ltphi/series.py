"""Truncated power / Laurent series in one variable with FElement coefficients.

A series stores coefficients for indices ``kmin .. kmin + len(coeffs) - 1``.
``D`` is the truncation order (terms of degree > D are unknown); ``D is None``
marks an exact polynomial or Laurent polynomial.
"""

from __future__ import annotations

from .kernels import BIG, conv_trunc, minplus_trunc
from .padic import (INF, BaseFieldSpec, FElement, IndeterminateValuation, PrecisionError, SpecMismatch,
                    element_from_text, element_to_text)


class TruncationError(ValueError):
    """A requested coefficient lies beyond the truncation order."""


def _min_opt(*xs):
    xs = [x for x in xs if x is not None]
    return min(xs) if xs else None


class TruncSeries:
    __slots__ = ("spec", "coeffs", "kmin", "D", "var")

    def __init__(self, spec: BaseFieldSpec, coeffs, kmin: int = 0, D=None, var: str = "T"):
        coeffs = list(coeffs)
        if D is not None:
            top = D - kmin + 1
            if top <= 0:
                coeffs = []
                kmin = D + 1
            elif len(coeffs) > top:
                coeffs = coeffs[:top]
            else:
                coeffs += [FElement.zero(spec)] * (top - len(coeffs))
        else:
            while coeffs and coeffs[-1].is_exact_zero():
                coeffs.pop()
            lead = 0
            while lead < len(coeffs) and coeffs[lead].is_exact_zero():
                lead += 1
            if lead:
                coeffs = coeffs[lead:]
                kmin += lead
            if not coeffs:
                kmin = 0
        self.spec = spec
        self.coeffs = tuple(coeffs)
        self.kmin = kmin
        self.D = D
        self.var = var

    # -- construction -----------------------------------------------------
    @classmethod
    def from_ints(cls, spec, ints, kmin=0, D=None, absprec=None, var="T") -> "TruncSeries":
        return cls(spec, [FElement.from_int(spec, c, absprec) for c in ints], kmin, D, var)

    @classmethod
    def from_dict(cls, spec, table: dict, D=None, var="T") -> "TruncSeries":
        if not table:
            return cls(spec, [], 0, D, var)
        lo, hi = min(table), max(table)
        zero = FElement.zero(spec)
        return cls(spec, [table.get(k, zero) for k in range(lo, hi + 1)], lo, D, var)

    @classmethod
    def monomial(cls, spec, k: int, coeff=None, D=None, var="T") -> "TruncSeries":
        c = FElement.one(spec) if coeff is None else coeff
        return cls(spec, [c], k, D, var)

    @classmethod
    def constant(cls, spec, c, D=None, var="T") -> "TruncSeries":
        if isinstance(c, int):
            c = FElement.from_int(spec, c)
        return cls(spec, [c], 0, D, var)

    def _like(self, coeffs, kmin, D) -> "TruncSeries":
        return TruncSeries(self.spec, coeffs, kmin, D, self.var)

    # -- access -----------------------------------------------------------
    @property
    def top(self) -> int:
        return self.kmin + len(self.coeffs) - 1

    @property
    def is_poly(self) -> bool:
        return self.D is None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def coeff(self, k: int) -> FElement:
        if self.D is not None and k > self.D:
            raise TruncationError(f"coefficient {k} beyond truncation order {self.D}")
        i = k - self.kmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return FElement.zero(self.spec)

    __getitem__ = coeff

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.kmin + i, c

    def val_T(self):
        """Lowest index whose coefficient is not an exact zero (INF for the zero series)."""
        for k, c in self.items():
            if not c.is_exact_zero():
                return k
        return INF

    def min_absprec(self):
        ps = [c.absprec for c in self.coeffs if c.absprec is not None]
        return min(ps) if ps else INF

    def gauss_min_val(self):
        """min over coefficients of the pi-valuation (lower bound when inexact zeros are present)."""
        return min((c.valuation() for c in self.coeffs), default=INF)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = [f"({c!r})*{self.var}^{k}" for k, c in self.items() if not c.is_exact_zero()]
        tail = "" if self.D is None else f" + O({self.var}^{self.D + 1})"
        return (" + ".join(terms) or "0") + tail

    # -- ring operations --------------------------------------------------
    def _check(self, other: "TruncSeries"):
        if other.spec != self.spec:
            raise SpecMismatch("series over different base fields")

    def _promote(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        if isinstance(other, (int, FElement)):
            return TruncSeries.constant(self.spec, other, None, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        D = _min_opt(self.D, other.D)
        lo = min(self.kmin, other.kmin) if self.coeffs and other.coeffs else (
            self.kmin if self.coeffs else other.kmin)
        hi = max(self.top, other.top)
        if D is not None:
            hi = min(hi, D)
            lo = min(lo, D + 1)
        coeffs = []
        for k in range(lo, hi + 1):
            a = self._raw(k)
            b = other._raw(k)
            coeffs.append(a + b)
        return self._like(coeffs, lo, D)

    __radd__ = __add__

    def _raw(self, k) -> FElement:
        i = k - self.kmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return FElement.zero(self.spec)

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.kmin, self.D)

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "TruncSeries":
        if isinstance(c, int):
            c = FElement.from_int(self.spec, c)
        return self._like([c * x for x in self.coeffs], self.kmin, self.D)

    def __mul__(self, other):
        if isinstance(other, (int, FElement)):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        return mul_series(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, FElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.constant(self.spec, 1, None, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, D: int) -> "TruncSeries":
        D = D if self.D is None else min(D, self.D)
        return self._like(self.coeffs, self.kmin, D)

    def add_bigoh(self, absprec: int) -> "TruncSeries":
        return self._like([c.add_bigoh(absprec) for c in self.coeffs], self.kmin, self.D)

    def reduce_mod(self, absprec: int) -> "TruncSeries":
        """add_bigoh, then drop negative-index terms that vanish at that precision."""
        out = self.add_bigoh(absprec)
        coeffs, kmin = list(out.coeffs), out.kmin
        while coeffs and kmin < 0 and coeffs[0].is_zero():
            coeffs.pop(0)
            kmin += 1
        return self._like(coeffs, kmin, self.D)

    def map_coeffs(self, fn) -> "TruncSeries":
        return self._like([fn(c) for c in self.coeffs], self.kmin, self.D)

    def shift_T(self, k: int) -> "TruncSeries":
        """Multiply by T^k."""
        return self._like(self.coeffs, self.kmin + k, None if self.D is None else self.D + k)

    def derivative(self) -> "TruncSeries":
        coeffs = [c * k for k, c in self.items()]
        if not coeffs:
            return self._like([], 0, None if self.D is None else self.D - 1)
        # the T^0 term disappears; keep indexing aligned
        return self._like(coeffs, self.kmin - 1, None if self.D is None else self.D - 1)._drop_index(-1, self.kmin - 1)

    def _drop_index(self, k, kmin):
        if self.kmin <= k <= self.top:
            coeffs = list(self.coeffs)
            coeffs[k - self.kmin] = FElement.zero(self.spec)
            return self._like(coeffs, self.kmin, self.D)
        return self

    def inverse(self, D=None, cap=None) -> "TruncSeries":
        """Multiplicative inverse of a series whose lowest coefficient has known valuation.

        ``D`` bounds the output truncation (required for polynomials); ``cap``
        is the relative precision used to invert an exact non-monomial lead.
        """
        k0 = self.val_T()
        if k0 == INF:
            raise ZeroDivisionError("inverse of the zero series")
        c0 = self.coeff(k0)
        if not any(c0.vec):
            raise IndeterminateValuation("leading coefficient is zero at its precision")
        if self.D is not None:
            Dout = self.D - 2 * k0
            if D is not None:
                Dout = min(Dout, D)
        else:
            if D is None:
                raise TruncationError("inverting a polynomial needs an output truncation order")
            Dout = D
        n = Dout + k0
        if n < 0:
            return self._like([], -k0, Dout)
        inv0 = c0.inverse(cap)
        h = [self.coeff(k0 + i) * inv0 for i in range(1, n + 1) if self.D is None or k0 + i <= self.D]
        b = [FElement.one(self.spec)]
        for m in range(1, n + 1):
            acc = FElement.zero(self.spec)
            for i in range(1, min(m, len(h)) + 1):
                hi = h[i - 1]
                if not hi.is_exact_zero():
                    acc = acc + hi * b[m - i]
            b.append(-acc)
        return self._like([x * inv0 for x in b], -k0, Dout)

    def __truediv__(self, other):
        if isinstance(other, (int, FElement)):
            if isinstance(other, int):
                other = FElement.from_int(self.spec, other)
            return self._like([c / other for c in self.coeffs], self.kmin, self.D)
        if isinstance(other, TruncSeries):
            D = self.D if self.D is not None else None
            return self * other.inverse(D)
        return NotImplemented

    def compose(self, g: "TruncSeries", D=None, cap=None) -> "TruncSeries":
        """self(g) for g with an exactly vanishing constant term."""
        self._check(g)
        vg = g.val_T()
        if vg == INF:
            if g.D is None:
                raise ValueError("cannot substitute the exact zero series")
            # g vanishes to its truncation order
            vg = g.D + 1
        if vg < 1:
            raise ValueError("substituted series must have zero constant term")
        bounds = []
        if self.D is not None:
            bounds.append((self.D + 1) * vg - 1)
        if g.D is not None and self.coeffs:
            # g is only known to g.D; powers g^k with k >= 1 inherit that
            low = max(self.kmin, 1) if self.top >= 1 else None
            if low is not None:
                bounds.append(g.D + (low - 1) * vg)
        if D is not None:
            bounds.append(D)
        Dout = min(bounds) if bounds else None
        trunc = Dout
        spec = self.spec
        result = TruncSeries(spec, [], 0, None, self.var)
        # nonnegative part by Horner
        pos = [(k, c) for k, c in self.items() if k >= 0]
        if pos:
            gt = g if trunc is None else g.truncate(trunc)
            acc = TruncSeries(spec, [], 0, None, self.var)
            for k in range(pos[-1][0], -1, -1):
                acc = acc * gt
                if trunc is not None:
                    acc = acc.truncate(trunc)
                acc = acc + self._raw(k)
            result = acc
        neg = [(k, c) for k, c in self.items() if k < 0]
        if neg:
            if trunc is None:
                raise TruncationError("Laurent composition needs a truncation order")
            ginv = g.inverse(trunc + (-self.kmin) * vg, cap)
            acc = TruncSeries(spec, [], 0, None, self.var)
            for k in range(self.kmin, 0):
                acc = (acc + self._raw(k)) * ginv
                acc = acc.truncate(trunc)
            result = result + acc
        if Dout is not None:
            result = result.truncate(Dout)
        return result

    __call__ = compose

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, FElement)):
            other = TruncSeries.constant(self.spec, other)
        if not isinstance(other, TruncSeries) or other.spec != self.spec:
            return False
        D = _min_opt(self.D, other.D)
        lo = min(self.kmin, other.kmin)
        hi = max(self.top, other.top)
        if D is not None:
            hi = min(hi, D)
        for k in range(lo, hi + 1):
            if not (self._raw(k) == other._raw(k)):
                return False
        return True

    __hash__ = None

    def agrees_to(self, other, D) -> bool:
        return self.truncate(D) == other.truncate(D)

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.spec.to_json(),
            "variable": self.var,
            "kmin": self.kmin,
            "deg": self.D,
            "coeffs": {str(k): coeff_json(c) for k, c in self.items() if not c.is_exact_zero()},
        }

    @classmethod
    def from_json(cls, data: dict, spec=None) -> "TruncSeries":
        if spec is None:
            spec = BaseFieldSpec.from_json(data["field"])
        table = {int(k): coeff_from_json(v, spec) for k, v in data["coeffs"].items()}
        s = cls.from_dict(spec, table, None, data.get("variable", "T"))
        D = data.get("deg")
        if D is not None:
            s = TruncSeries(spec, s.coeffs, s.kmin if table else int(data.get("kmin", 0)), int(D), s.var)
            if table and int(data.get("kmin", s.kmin)) < s.kmin:
                pad = s.kmin - int(data["kmin"])
                s = TruncSeries(spec, [FElement.zero(spec)] * pad + list(s.coeffs), int(data["kmin"]), int(D), s.var)
        return s


def coeff_json(c: FElement) -> str:
    return element_to_text(c)


def coeff_from_json(v, spec) -> FElement:
    if isinstance(v, int):
        return FElement.from_int(spec, v)
    return element_from_text(spec, v)


def _pack(spec: BaseFieldSpec, coeffs):
    """Common shift, integer vectors, absolute-precision and valuation arrays."""
    shifts = [c.shift for c in coeffs if not c.is_exact_zero()]
    s = min(shifts) if shifts else 0
    vecs, precs, vals = [], [], []
    for c in coeffs:
        if c.is_exact_zero():
            vecs.append(spec.zero_vec())
            precs.append(BIG)
            vals.append(BIG)
            continue
        vecs.append(spec.vec_scale_pi(c.vec, c.shift - s) if any(c.vec) else spec.zero_vec())
        precs.append(BIG if c.absprec is None else c.absprec - s)
        v = c.valuation()
        vals.append(BIG if v == INF else v - s)
    return s, vecs, precs, vals


def _low_T(x: TruncSeries):
    """Lowest index a nonzero term of x could have."""
    v = x.val_T()
    if x.D is not None:
        v = min(v, x.D + 1)
    return v


def mul_series(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    spec = a.spec
    va_T, vb_T = _low_T(a), _low_T(b)
    if va_T == INF or vb_T == INF:
        return TruncSeries(spec, [], 0, None, a.var)
    bounds = []
    if a.D is not None:
        bounds.append(a.D + vb_T)
    if b.D is not None:
        bounds.append(b.D + va_T)
    D = min(bounds) if bounds else None
    if a.val_T() == INF or b.val_T() == INF:
        return TruncSeries(spec, [], 0, D, a.var)
    kmin = a.kmin + b.kmin
    n = len(a.coeffs) + len(b.coeffs) - 1
    if D is not None:
        n = min(n, D - kmin + 1)
    if n <= 0:
        return TruncSeries(spec, [], kmin, D, a.var)
    sa, veca, pa, vala = _pack(spec, a.coeffs)
    sb, vecb, pb, valb = _pack(spec, b.coeffs)
    # the relative arrays are offsets from sa/sb; the min-plus works on those
    out_prec = minplus_trunc(pa, vala, pb, valb, n)
    shift = sa + sb
    finite = [x for x in out_prec if x < BIG // 2]
    if finite and len(finite) == len(out_prec):
        mod = spec.p ** (spec.digits_needed(max(finite)) + 1)
    else:
        mod = 0
    d = spec.d
    if d == 1:
        prod = conv_trunc([v[0] for v in veca], [v[0] for v in vecb], n, mod)
        vecs = [(x,) for x in prod]
    else:
        S = 2 * d - 1
        fa = [0] * (len(veca) * S)
        for k, v in enumerate(veca):
            fa[k * S:k * S + d] = v
        fb = [0] * (len(vecb) * S)
        for k, v in enumerate(vecb):
            fb[k * S:k * S + d] = v
        prod = conv_trunc(fa, fb, n * S, mod)
        vecs = [tuple(spec.reduce_poly(prod[k * S:(k + 1) * S])) for k in range(n)]
    coeffs = []
    for vec, pr in zip(vecs, out_prec):
        if pr >= BIG // 2:
            coeffs.append(FElement.make(spec, vec, shift, None))
        else:
            coeffs.append(FElement.make(spec, vec, shift, shift + pr))
    return TruncSeries(spec, coeffs, kmin, D, a.var)


def variable(spec, D=None, var="T") -> TruncSeries:
    return TruncSeries.monomial(spec, 1, None, D, var)


__all__ = ["TruncSeries", "TruncationError", "mul_series", "variable", "coeff_json", "PrecisionError"]


class BiSeries:
    """Two-variable power series truncated at total degree D (None for polynomials)."""

    __slots__ = ("spec", "terms", "D")

    def __init__(self, spec: BaseFieldSpec, terms: dict, D=None):
        self.spec = spec
        self.D = D
        self.terms = {k: c for k, c in terms.items()
                      if not c.is_exact_zero() and (D is None or k[0] + k[1] <= D)}

    @classmethod
    def from_univariate(cls, s: TruncSeries, slot: int, D=None) -> "BiSeries":
        terms = {}
        for k, c in s.items():
            if k < 0:
                raise ValueError("Laurent terms are not supported in two variables")
            terms[(k, 0) if slot == 0 else (0, k)] = c
        return cls(s.spec, terms, _min_opt(D, s.D))

    def coeff(self, i: int, j: int) -> FElement:
        return self.terms.get((i, j), FElement.zero(self.spec))

    def __add__(self, other: "BiSeries") -> "BiSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return BiSeries(self.spec, out, _min_opt(self.D, other.D))

    def __neg__(self):
        return BiSeries(self.spec, {k: -c for k, c in self.terms.items()}, self.D)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: FElement) -> "BiSeries":
        return BiSeries(self.spec, {k: c * x for k, x in self.terms.items()}, self.D)

    def add_constant(self, c: FElement) -> "BiSeries":
        out = dict(self.terms)
        out[(0, 0)] = out[(0, 0)] + c if (0, 0) in out else c
        return BiSeries(self.spec, out, self.D)

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        D = _min_opt(self.D, other.D)
        if not self.terms or not other.terms:
            return BiSeries(self.spec, {}, D)
        # Kronecker flattening: (i, j) -> i * L + j with L above every j that can occur
        jmax = max(k[1] for k in self.terms) + max(k[1] for k in other.terms)
        L = jmax + 1
        fa = TruncSeries.from_dict(self.spec, {i * L + j: c for (i, j), c in self.terms.items()})
        fb = TruncSeries.from_dict(self.spec, {i * L + j: c for (i, j), c in other.terms.items()})
        prod = mul_series(fa, fb)
        out = {}
        for k, c in prod.items():
            i, j = divmod(k, L)
            if D is None or i + j <= D:
                out[(i, j)] = c
        return BiSeries(self.spec, out, D)

    def compose(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        """self(a(T), b(T)) for series a, b without constant term."""
        if a.val_T() < 1 or b.val_T() < 1:
            raise ValueError("substituted series must have zero constant term")
        bounds = [x.D for x in (a, b) if x.D is not None]
        if self.D is not None:
            bounds.append((self.D + 1) * min(a.val_T(), b.val_T()) - 1)
        Dout = min(bounds) if bounds else None
        imax = max((k[0] for k in self.terms), default=0)
        jmax = max((k[1] for k in self.terms), default=0)
        one = TruncSeries.constant(self.spec, 1, Dout, a.var)
        apow = [one]
        for _ in range(imax):
            apow.append((apow[-1] * a).truncate(Dout) if Dout is not None else apow[-1] * a)
        bpow = [one]
        for _ in range(jmax):
            bpow.append((bpow[-1] * b).truncate(Dout) if Dout is not None else bpow[-1] * b)
        rows: dict[int, dict[int, FElement]] = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(i, {})[j] = c
        total = TruncSeries(self.spec, [], 0, Dout, a.var)
        for i, row in rows.items():
            inner = TruncSeries(self.spec, [], 0, Dout, a.var)
            for j, c in row.items():
                inner = inner + bpow[j].scale(c)
            total = total + apow[i] * inner
        return total if Dout is None else total.truncate(Dout)

    def swap(self) -> "BiSeries":
        return BiSeries(self.spec, {(j, i): c for (i, j), c in self.terms.items()}, self.D)

    def d_second_at_zero(self) -> TruncSeries:
        """The series T -> d/dY F(T, Y) evaluated at Y = 0."""
        table = {i: c for (i, j), c in self.terms.items() if j == 1}
        D = None if self.D is None else self.D - 1
        return TruncSeries.from_dict(self.spec, table, D)

    def add_bigoh(self, absprec: int) -> "BiSeries":
        return BiSeries(self.spec, {k: c.add_bigoh(absprec) for k, c in self.terms.items()}, self.D)

    def min_absprec(self):
        ps = [c.absprec for c in self.terms.values() if c.absprec is not None]
        return min(ps) if ps else INF

    def __eq__(self, other):
        if not isinstance(other, BiSeries) or other.spec != self.spec:
            return False
        D = _min_opt(self.D, other.D)
        for k in set(self.terms) | set(other.terms):
            if D is not None and k[0] + k[1] > D:
                continue
            if not (self.coeff(*k) == other.coeff(*k)):
                return False
        return True

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "field": self.spec.to_json(),
            "variables": ["X", "Y"],
            "deg": self.D,
            "coeffs": {f"{i},{j}": coeff_json(c) for (i, j), c in sorted(self.terms.items())},
        }
