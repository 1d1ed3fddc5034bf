"""Exact arithmetic in O_F and F with absolute precision in powers of pi_F.

O_F is modelled as Z_p[x]/(f) where f is either a monic lift of an irreducible
polynomial over F_p (unramified case, pi_F = p) or an Eisenstein polynomial
(totally ramified case, pi_F = class of x).  Elements are coordinate vectors
on the basis 1, x, ..., x^(d-1).

Precision is always *absolute* and counted in powers of pi_F.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

INF = math.inf

FLAVORS = ("Qp", "unramified", "eisenstein")


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the requested precision."""


class IndeterminateValuation(PrecisionError):
    """The element is zero at its precision but not known to be exactly zero."""


class SpecMismatch(ValueError):
    pass


def vp(n: int, p: int) -> float | int:
    """p-adic valuation of a rational integer (INF for 0)."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _irreducible_mod_p(poly: tuple[int, ...], p: int) -> bool:
    from sympy import Poly, symbols

    x = symbols("x")
    return Poly(list(reversed(poly)), x, modulus=p).is_irreducible


def default_unramified_poly(p: int, h: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree h over F_p (low-to-high coefficients)."""
    if h == 1:
        return (0, 1)
    for code in range(p**h):
        coeffs = []
        c = code
        for _ in range(h):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        poly = tuple(coeffs) + (1,)
        if _irreducible_mod_p(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {h} mod {p}")  # pragma: no cover


@dataclass(frozen=True)
class BaseFieldSpec:
    """The base field F: prime, flavor and defining polynomial (monic, low-to-high)."""

    p: int
    flavor: str
    h: int = 1
    e: int = 1
    poly: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.h < 1 or self.e < 1:
            raise ValueError("h and e must be >= 1")
        if self.h > 1 and self.e > 1:
            raise ValueError("mixed extensions (e > 1 and h > 1) are not supported")
        poly = tuple(int(c) for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        d = len(poly) - 1
        if self.flavor == "Qp":
            if (self.h, self.e, poly) != (1, 1, (0, 1)):
                raise ValueError("Qp flavor takes no extension data")
        elif self.flavor == "unramified":
            if self.e != 1 or d != self.h:
                raise ValueError("unramified polynomial must have degree h")
            if self.h > 1 and not _irreducible_mod_p(poly, self.p):
                raise ValueError(f"{poly} is not irreducible mod {self.p}")
        else:
            if self.h != 1 or d != self.e or self.e < 2:
                raise ValueError("Eisenstein polynomial must have degree e >= 2")
            p = self.p
            if any(c % p for c in poly[:-1]) or poly[0] % (p * p) == 0:
                raise ValueError(f"{poly} is not Eisenstein at {p}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def qp(cls, p: int) -> "BaseFieldSpec":
        return cls(p, "Qp")

    @classmethod
    def unramified(cls, p: int, h: int, poly=None) -> "BaseFieldSpec":
        if h == 1:
            return cls(p, "Qp")
        if poly is None:
            poly = default_unramified_poly(p, h)
        return cls(p, "unramified", h=h, e=1, poly=tuple(poly))

    @classmethod
    def eisenstein(cls, p: int, poly) -> "BaseFieldSpec":
        poly = tuple(poly)
        return cls(p, "eisenstein", h=1, e=len(poly) - 1, poly=poly)

    # -- derived data -----------------------------------------------------
    @property
    def d(self) -> int:
        return len(self.poly) - 1

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def ramified(self) -> bool:
        return self.flavor == "eisenstein"

    def describe(self) -> str:
        if self.flavor == "Qp":
            return f"Q_{self.p}"
        if self.flavor == "unramified":
            return f"Q_{self.q} (unramified, f={list(self.poly)})"
        return f"Q_{self.p}(pi), Eisenstein f={list(self.poly)}"

    def to_json(self) -> dict:
        return {"p": self.p, "flavor": self.flavor, "h": self.h, "e": self.e, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, data: dict) -> "BaseFieldSpec":
        return cls(int(data["p"]), data["flavor"], int(data.get("h", 1)), int(data.get("e", 1)),
                   tuple(int(c) for c in data.get("poly", (0, 1))))

    # -- coordinate-vector arithmetic ---------------------------------------
    def zero_vec(self) -> tuple[int, ...]:
        return (0,) * self.d

    def int_vec(self, n: int) -> tuple[int, ...]:
        return (n,) + (0,) * (self.d - 1)

    def digits_needed(self, r) -> int:
        """Number of p-adic digits that determine an element modulo pi^r."""
        if r <= 0:
            return 0
        return _ceil_div(int(r), self.e)

    def reduce_poly(self, c: list[int]) -> list[int]:
        """Reduce a coefficient list of any length modulo f (exact integer arithmetic)."""
        d = self.d
        if len(c) <= d:
            return c + [0] * (d - len(c))
        c = list(c)
        f = self.poly
        for k in range(len(c) - 1, d - 1, -1):
            ck = c[k]
            if ck:
                base = k - d
                for i in range(d):
                    if f[i]:
                        c[base + i] -= ck * f[i]
        return c[:d]

    def vec_mul(self, a, b, mod: int = 0) -> tuple[int, ...]:
        d = self.d
        if d == 1:
            r = a[0] * b[0]
            return ((r % mod) if mod else r,)
        c = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    c[i + j] += ai * bj
        c = self.reduce_poly(c)
        if mod:
            c = [x % mod for x in c]
        return tuple(c)

    def vec_add(self, a, b) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b))

    def vec_val(self, a) -> float | int:
        """pi-adic valuation of an exact coordinate vector."""
        if self.ramified:
            e, p = self.e, self.p
            return min((e * vp(c, p) + i for i, c in enumerate(a)), default=INF)
        return min((vp(c, self.p) for c in a), default=INF)

    def vec_reduce(self, a, r) -> tuple[int, ...]:
        """Canonical representative of a modulo pi^r."""
        if r is None:
            return tuple(a)
        if r <= 0:
            return self.zero_vec()
        p = self.p
        if self.ramified:
            e = self.e
            return tuple(c % p ** _ceil_div(r - i, e) if r - i > 0 else 0 for i, c in enumerate(a))
        m = p**r
        return tuple(c % m for c in a)

    @cached_property
    def _pi_powers(self) -> list[tuple[int, ...]]:
        return [self.int_vec(1)]

    def pi_power_vec(self, k: int) -> tuple[int, ...]:
        """Exact coordinates of pi^k, k >= 0."""
        if not self.ramified:
            return self.int_vec(self.p**k)
        pw = self._pi_powers
        x = tuple(1 if i == 1 else 0 for i in range(self.d))
        while len(pw) <= k:
            pw.append(self.vec_mul(pw[-1], x))
        return pw[k]

    def vec_scale_pi(self, a, k: int) -> tuple[int, ...]:
        if k == 0:
            return tuple(a)
        if not self.ramified:
            m = self.p**k
            return tuple(c * m for c in a)
        return self.vec_mul(a, self.pi_power_vec(k))

    @cached_property
    def _eis_data(self):
        p, f = self.p, self.poly
        u0 = f[0] // p
        w = tuple(-f[i + 1] for i in range(self.e))
        return u0, w

    def vec_div_pi(self, a, k: int, r: int) -> tuple[int, ...]:
        """a / pi^k modulo pi^r, assuming pi^k divides a (a given modulo pi^(r+k))."""
        if k == 0:
            return self.vec_reduce(a, r)
        if not self.ramified:
            m = self.p**k
            return self.vec_reduce(tuple(c // m for c in a), r)
        p = self.p
        mod = p ** (self.digits_needed(r + k) + 1)
        u0, w = self._eis_data
        u0inv = pow(u0, -1, mod)
        a = tuple(c % mod for c in a)
        for _ in range(k):
            c0 = a[0]
            if c0 % p:
                raise PrecisionError("vector is not divisible by pi")
            t = (c0 // p) * u0inv % mod
            a = tuple((a[i + 1] if i + 1 < self.d else 0) + t * w[i] for i in range(self.d))
            a = tuple(c % mod for c in a)
        return self.vec_reduce(a, r)

    def vec_inv(self, a, r: int) -> tuple[int, ...]:
        """Inverse of a unit modulo pi^r (Newton iteration from the residue field)."""
        if r <= 0:
            return self.zero_vec()
        p = self.p
        if self.vec_val(self.vec_reduce(a, 1)) != 0:
            raise PrecisionError("element is not a unit")
        if self.ramified or self.d == 1:
            y = self.int_vec(pow(a[0] % p, -1, p))
        else:
            y = self.vec_pow(tuple(c % p for c in a), self.q - 2, p)
        mod = p ** (self.digits_needed(r) + 1)
        known = 1
        two = self.int_vec(2)
        while known < r:
            ay = self.vec_mul(a, y, mod)
            y = self.vec_mul(y, tuple(t - s for t, s in zip(two, ay)), mod)
            known *= 2
        return self.vec_reduce(y, r)

    def vec_pow(self, a, n: int, mod: int = 0) -> tuple[int, ...]:
        result = self.int_vec(1)
        base = tuple(a)
        while n:
            if n & 1:
                result = self.vec_mul(result, base, mod)
            base = self.vec_mul(base, base, mod)
            n >>= 1
        return result

    def vec_eval_poly(self, coeffs, z, mod: int = 0) -> tuple[int, ...]:
        """Evaluate an integer polynomial (low-to-high) at the O_F vector z."""
        acc = self.zero_vec()
        for c in reversed(coeffs):
            acc = self.vec_mul(acc, z, mod)
            acc = (acc[0] + c,) + tuple(acc[1:])
            if mod:
                acc = tuple(t % mod for t in acc)
        return acc

    # -- Frobenius --------------------------------------------------------
    def sigma_root(self, r: int) -> tuple[int, ...]:
        """The root of f congruent to x^p modulo p, to precision p^r."""
        if self.ramified:
            raise ValueError("Frobenius is only available on unramified specs")
        return _sigma_root(self, max(int(r), 1))

    def vec_sigma(self, a, r: int, power: int = 1) -> tuple[int, ...]:
        """sigma^power applied to a, modulo pi^r."""
        if self.ramified:
            raise ValueError("Frobenius is only available on unramified specs")
        power %= self.h
        if self.d == 1 or power == 0:
            return self.vec_reduce(a, r)
        mod = self.p**r
        z = self.sigma_root(r)
        out = tuple(a)
        for _ in range(power):
            acc = self.zero_vec()
            for c in reversed(out):
                acc = self.vec_mul(acc, z, mod)
                acc = ((acc[0] + c) % mod,) + tuple(acc[1:])
            out = acc
        return self.vec_reduce(out, r)


@lru_cache(maxsize=None)
def _sigma_root(spec: BaseFieldSpec, r: int) -> tuple[int, ...]:
    p = spec.p
    mod = p ** (r + 1)
    x = tuple(1 if i == 1 else 0 for i in range(spec.d))
    z = spec.vec_pow(x, p, p)
    fprime = tuple(i * c for i, c in enumerate(spec.poly))[1:]
    known = 1
    while known < r + 1:
        fz = spec.vec_eval_poly(spec.poly, z, mod)
        dz = spec.vec_eval_poly(fprime, z, mod)
        inv = spec.vec_inv(dz, r + 1)
        corr = spec.vec_mul(fz, inv, mod)
        z = tuple((s - t) % mod for s, t in zip(z, corr))
        known *= 2
    return spec.vec_reduce(z, r)


class FElement:
    """pi^shift * vec with absolute precision ``absprec`` (None = exact).

    Inexact elements are normalised: ``vec`` is a unit reduced modulo
    pi^(absprec - shift), or zero with ``shift == absprec``.
    """

    __slots__ = ("spec", "vec", "shift", "absprec")

    def __init__(self, spec, vec, shift, absprec):
        self.spec = spec
        self.vec = vec
        self.shift = shift
        self.absprec = absprec

    # -- construction -----------------------------------------------------
    @classmethod
    def make(cls, spec: BaseFieldSpec, vec, shift: int = 0, absprec=None) -> "FElement":
        vec = tuple(vec)
        if absprec is None:
            if not any(vec):
                return cls(spec, spec.zero_vec(), 0, None)
            if not spec.ramified:
                g = 0
                for c in vec:
                    g = math.gcd(g, c)
                k = vp(g, spec.p)
                if k:
                    m = spec.p**k
                    vec = tuple(c // m for c in vec)
                    shift += k
            return cls(spec, vec, shift, None)
        absprec = int(absprec)
        r = absprec - shift
        vec = spec.vec_reduce(vec, r)
        v = spec.vec_val(vec)
        if v == INF:
            return cls(spec, spec.zero_vec(), absprec, absprec)
        if v:
            vec = spec.vec_div_pi(vec, v, r - v)
        return cls(spec, vec, shift + v, absprec)

    @classmethod
    def from_int(cls, spec, n: int, absprec=None) -> "FElement":
        return cls.make(spec, spec.int_vec(int(n)), 0, absprec)

    @classmethod
    def from_fraction(cls, spec, x, absprec: int) -> "FElement":
        x = Fraction(x)
        den = cls.from_int(spec, x.denominator)
        num = cls.from_int(spec, x.numerator, absprec + den.valuation())
        return num / den

    @classmethod
    def zero(cls, spec) -> "FElement":
        return cls(spec, spec.zero_vec(), 0, None)

    @classmethod
    def one(cls, spec, absprec=None) -> "FElement":
        return cls.make(spec, spec.int_vec(1), 0, absprec)

    @classmethod
    def uniformizer(cls, spec, absprec=None) -> "FElement":
        return cls.make(spec, spec.int_vec(1), 1, absprec)

    @classmethod
    def from_vec(cls, spec, vec, absprec=None) -> "FElement":
        return cls.make(spec, tuple(int(c) for c in vec), 0, absprec)

    def _coerce(self, other) -> "FElement":
        if isinstance(other, FElement):
            if other.spec != self.spec:
                raise SpecMismatch("elements live over different base fields")
            return other
        if isinstance(other, int):
            return FElement.from_int(self.spec, other)
        if isinstance(other, Fraction):
            if self.absprec is None:
                raise PrecisionError("cannot coerce a fraction next to an exact element")
            return FElement.from_fraction(self.spec, other, self.absprec)
        return NotImplemented

    # -- predicates -------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.absprec is None

    def is_exact_zero(self) -> bool:
        return self.absprec is None and not any(self.vec)

    def is_zero(self) -> bool:
        """True if zero at the known precision."""
        return not any(self.vec)

    def valuation(self):
        """Lower bound for the pi-valuation (exact unless the element is an inexact zero)."""
        if not any(self.vec):
            return INF if self.absprec is None else self.absprec
        if self.absprec is None:
            return self.shift + self.spec.vec_val(self.vec)
        return self.shift

    def val_pi(self):
        """The pi_F-adic valuation; +inf for exact zero."""
        if not any(self.vec) and self.absprec is not None:
            raise IndeterminateValuation(f"zero modulo pi^{self.absprec}")
        return self.valuation()

    def val_p(self):
        """Valuation normalised by val_p(p) = 1."""
        v = self.val_pi()
        return v if v == INF else Fraction(v, self.spec.e)

    @property
    def relprec(self):
        if self.absprec is None:
            return INF
        return self.absprec - self.valuation()

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return FElement(self.spec, tuple(-c for c in self.vec), self.shift, self.absprec) \
            if self.absprec is None else FElement.make(self.spec, tuple(-c for c in self.vec), self.shift, self.absprec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_exact_zero():
            return self
        if self.is_exact_zero():
            return other
        spec = self.spec
        ap = _min_prec(self.absprec, other.absprec)
        s = min(self.shift, other.shift)
        a = spec.vec_scale_pi(self.vec, self.shift - s)
        b = spec.vec_scale_pi(other.vec, other.shift - s)
        return FElement.make(spec, spec.vec_add(a, b), s, ap)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        spec = self.spec
        if self.is_exact_zero() or other.is_exact_zero():
            return FElement.zero(spec)
        ap = None
        if self.absprec is not None:
            ap = self.absprec + other.valuation()
        if other.absprec is not None:
            b = other.absprec + self.valuation()
            ap = b if ap is None else min(ap, b)
        return FElement.make(spec, spec.vec_mul(self.vec, other.vec), self.shift + other.shift, ap)

    __rmul__ = __mul__

    def _pi_unit_sign(self):
        """If exact and equal to +-pi^k, return the sign, else None."""
        if self.absprec is None and self.vec[1:] == (0,) * (self.spec.d - 1) and abs(self.vec[0]) == 1:
            return self.vec[0]
        return None

    def inverse(self, relprec=None) -> "FElement":
        spec = self.spec
        if self.is_exact_zero():
            raise ZeroDivisionError("division by exact zero")
        if not any(self.vec):
            raise IndeterminateValuation("division by an element indistinguishable from zero")
        sign = self._pi_unit_sign()
        if sign is not None:
            return FElement(spec, spec.int_vec(sign), -self.shift, None)
        if self.absprec is None:
            if relprec is None:
                raise PrecisionError("inverting an exact element needs a precision cap")
            v = self.valuation()
            w = v - self.shift
            unit = spec.vec_div_pi(self.vec, w, relprec) if w else spec.vec_reduce(self.vec, relprec)
            r = relprec
        else:
            v = self.shift
            unit = self.vec
            r = self.absprec - self.shift
            if relprec is not None:
                r = min(r, relprec)
        return FElement.make(spec, spec.vec_inv(unit, r), -v, -v + r)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_exact_zero():
            if other.is_zero():
                raise ZeroDivisionError("division by zero")
            return self
        if other.exact and other._pi_unit_sign() is None:
            if self.exact:
                raise PrecisionError("exact quotient is not representable; cap the dividend first")
            if not any(self.vec):
                return FElement.make(self.spec, self.spec.zero_vec(), 0, self.absprec - other.valuation())
            return self * other.inverse(self.relprec)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return (self.inverse()) ** (-n)
        result = FElement.one(self.spec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- precision --------------------------------------------------------
    def add_bigoh(self, absprec: int) -> "FElement":
        """Lower the absolute precision to ``absprec`` (no-op if already lower)."""
        ap = absprec if self.absprec is None else min(self.absprec, absprec)
        if self.absprec is None:
            if self.is_exact_zero():
                return FElement.make(self.spec, self.vec, absprec, absprec)
            return FElement.make(self.spec, self.vec, self.shift, ap)
        if ap == self.absprec:
            return self
        if not any(self.vec):
            return FElement(self.spec, self.vec, ap, ap)
        return FElement.make(self.spec, self.vec, self.shift, ap)

    def sigma(self, power: int = 1) -> "FElement":
        spec = self.spec
        if spec.d == 1 or power % spec.h == 0 or not any(self.vec):
            return self
        if self.absprec is None:
            raise PrecisionError("Frobenius of an exact element needs a precision cap")
        r = self.absprec - self.shift
        return FElement.make(spec, spec.vec_sigma(self.vec, r, power), self.shift, self.absprec)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (SpecMismatch, PrecisionError):
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def identical(self, other: "FElement") -> bool:
        return (self.spec == other.spec and self.vec == other.vec
                and self.shift == other.shift and self.absprec == other.absprec)

    def digits(self) -> list[tuple[int, ...]]:
        """Base-p digits (least significant first) of each unit coordinate."""
        p = self.spec.p
        out = []
        r = self.relprec
        for i, c in enumerate(self.vec):
            if r == INF:
                n = abs(c).bit_length() + 1
            else:
                n = self.spec.digits_needed(r - i) if self.spec.ramified else int(r)
            ds = []
            for _ in range(n):
                c, dgt = divmod(c, p)
                ds.append(dgt)
            out.append(tuple(ds))
        return out

    def to_fraction(self) -> Fraction:
        """Rational representative (Qp flavor only): p^shift * unit."""
        if self.spec.d != 1:
            raise ValueError("rational representative only exists over Q_p")
        return Fraction(self.vec[0]) * Fraction(self.spec.p) ** self.shift

    def __repr__(self):
        spec = self.spec
        if self.is_exact_zero():
            return "0"
        unit = self.vec[0] if spec.d == 1 else list(self.vec)
        big = "" if self.absprec is None else f" + O(pi^{self.absprec})"
        if not any(self.vec):
            return f"O(pi^{self.absprec})"
        return f"pi^{self.shift}*{unit}{big}"

    # -- serialisation ----------------------------------------------------
    def to_json(self, with_spec: bool = True) -> dict:
        if self.absprec is None:
            rec = {"exact": True, "coords": [str(c) for c in self.vec], "shift": self.shift}
        else:
            rec = {"digits": [_digit_string(ds) for ds in self.digits()],
                   "prec": self.absprec - self.shift, "shift": self.shift}
        if with_spec:
            rec = {**self.spec.to_json(), **rec}
        return rec

    @classmethod
    def from_json(cls, data: dict, spec: BaseFieldSpec | None = None) -> "FElement":
        if spec is None:
            spec = BaseFieldSpec.from_json(data)
        shift = int(data.get("shift", 0))
        if data.get("exact"):
            return cls.make(spec, tuple(int(c) for c in data["coords"]), shift, None)
        p = spec.p
        vec = []
        for s in data["digits"]:
            n = 0
            for ch in reversed(s):
                n = n * p + int(ch, 36)
            vec.append(n)
        vec += [0] * (spec.d - len(vec))
        return cls.make(spec, tuple(vec), shift, shift + int(data["prec"]))


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _digit_string(ds) -> str:
    if any(d >= 36 for d in ds):
        raise ValueError("digit strings support p < 36")
    return "".join(_DIGITS[d] for d in ds)


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def teichmuller(spec: BaseFieldSpec, residue, absprec: int) -> FElement:
    """Teichmuller representative of a residue class (vector mod p, or an int)."""
    if isinstance(residue, int):
        residue = spec.int_vec(residue)
    residue = tuple(c % spec.p for c in residue) + (0,) * (spec.d - len(residue))
    if spec.ramified:
        # residue field is F_p: the lift lives in Z_p
        residue = spec.int_vec(residue[0])
    if not any(residue):
        return FElement.zero(spec)
    q = spec.q
    mod = spec.p ** (spec.digits_needed(absprec) + 1)
    w = residue
    for _ in range(absprec + 2):
        nxt = spec.vec_pow(w, q, mod)
        if nxt == w:
            break
        w = nxt
    return FElement.make(spec, w, 0, absprec)


def frobenius_sigma(x: FElement, power: int = 1) -> FElement:
    if x.spec.ramified:
        raise ValueError("Frobenius is only available on unramified specs")
    return x.sigma(power)


def p_adic_exp(ell: FElement, absprec: int) -> FElement:
    """exp(ell) as an element of O_F^x, for val_p(ell) > 1/(p-1)."""
    spec = ell.spec
    if ell.is_exact_zero():
        return FElement.one(spec, absprec)
    if ell.val_p() <= Fraction(1, spec.p - 1):
        raise ValueError("exp converges only for val_p(ell) > 1/(p-1)")
    vl = ell.val_p()
    slope = vl - Fraction(1, spec.p - 1)
    work = absprec + 2 * spec.e
    ell = ell.add_bigoh(work + 64) if ell.exact else ell
    total = FElement.one(spec, work)
    term = FElement.one(spec, work + 64)
    k = 1
    # val_p(ell^k/k!) >= k*slope + 1/(p-1), increasing in k
    while (k * slope + Fraction(1, spec.p - 1)) * spec.e < work:
        term = term * ell / FElement.from_int(spec, k)
        total = total + term
        k += 1
    return total.add_bigoh(absprec)


def p_adic_log(c: FElement, absprec: int) -> FElement:
    """log(c) for c a principal unit (c = 1 mod pi)."""
    spec = c.spec
    x = c - 1
    if x.valuation() < 1:
        raise ValueError("log is implemented for principal units only")
    if x.is_exact_zero():
        return FElement.zero(spec)
    vx = x.val_pi()
    work = absprec + 4 * spec.e + 8
    x = x.add_bigoh(work)
    total = FElement.zero(spec)
    power = FElement.one(spec)
    k = 1
    while True:
        power = power * x
        # val_pi(x^k / k) = k*vx - e*vp(k) bounds the tail from below
        if k * vx - spec.e * math.log(k, spec.p) > work:
            break
        term = power / FElement.from_int(spec, k)
        total = total + term if k % 2 else total - term
        k += 1
    return total.add_bigoh(absprec)


_TEXT_RE = re.compile(
    r"^\s*(?:pi\^(?P<shift>-?\d+)\*)?(?P<unit>-?\d+|\((?:\s*-?\d+\s*,?)+\))?"
    r"\s*(?:\+?\s*O\(pi\^(?P<prec>-?\d+)\))?\s*$")


def element_to_text(x: FElement) -> str:
    """Compact text: ``pi^S*UNIT + O(pi^N)``; exact integers over Q_p print as plain integers."""
    spec = x.spec
    if x.is_exact_zero():
        return "0"
    if not any(x.vec):
        return f"O(pi^{x.absprec})"
    if x.exact and spec.d == 1 and x.shift >= 0:
        return str(x.vec[0] * spec.p**x.shift)
    unit = str(x.vec[0]) if spec.d == 1 else "(" + ",".join(str(c) for c in x.vec) + ")"
    head = unit if x.shift == 0 else f"pi^{x.shift}*{unit}"
    return head if x.exact else f"{head} + O(pi^{x.absprec})"


def element_from_text(spec: BaseFieldSpec, s: str) -> FElement:
    m = _TEXT_RE.match(s)
    if not m or (m.group("unit") is None and m.group("prec") is None):
        raise ValueError(f"cannot parse field element {s!r}")
    shift = int(m.group("shift") or 0)
    prec = m.group("prec")
    unit = m.group("unit")
    if unit is None:
        vec = spec.zero_vec()
    elif unit.startswith("("):
        vec = tuple(int(t) for t in unit.strip("()").split(",") if t.strip())
        vec = vec + (0,) * (spec.d - len(vec))
        if len(vec) != spec.d:
            raise ValueError(f"expected {spec.d} coordinates in {s!r}")
    else:
        vec = spec.int_vec(int(unit))
    if prec is None:
        return FElement.make(spec, vec, shift, None)
    prec = int(prec)
    if unit is None:
        return FElement(spec, spec.zero_vec(), prec, prec)
    return FElement.make(spec, vec, shift, prec)
