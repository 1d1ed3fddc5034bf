"""Integrable connections over the multivariable ring and their solution matrices.

Convention: ``D_j`` is the matrix of the j-th derivation, and a solution
matrix satisfies d_j(H) + D_j H = 0 for every j in 1..h-1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial

from .multivar import MultiElement, _multi_indices, antiderivative, partial
from .padic import INF, BaseFieldSpec, FElement, element_from_text, element_to_text

Matrix = list  # list of rows of MultiElement


# -- matrix helpers -----------------------------------------------------------

def mat_zero(spec, d, D=None, nvars=None):
    return [[MultiElement(spec, {}, D, nvars) for _ in range(d)] for _ in range(d)]


def mat_identity(spec, d, D=None, nvars=None):
    n = spec.h if nvars is None else nvars
    one = {(0,) * n: FElement.one(spec)}
    return [[MultiElement(spec, one if i == j else {}, D, n) for j in range(d)] for i in range(d)]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a: Matrix) -> Matrix:
    return [[-x for x in r] for r in a]


def mat_mul(a: Matrix, b: Matrix, D=None) -> Matrix:
    n, m, l = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(l):
            acc = None
            for k in range(m):
                if not a[i][k].terms or not b[k][j].terms:
                    continue
                t = a[i][k] * b[k][j]
                acc = t if acc is None else acc + t
            if acc is None:
                acc = MultiElement(a[0][0].spec, {}, _mat_order(a, b), a[0][0].nvars)
            row.append(acc if D is None else acc.truncate(D))
        out.append(row)
    return out


def _mat_order(a, b):
    orders = [x.D for r in a for x in r if x.D is not None] + [x.D for r in b for x in r if x.D is not None]
    return min(orders) if orders else None


def mat_map(a: Matrix, fn) -> Matrix:
    return [[fn(x) for x in r] for r in a]


def mat_partial(j: int, a: Matrix) -> Matrix:
    return mat_map(a, lambda x: partial(j, x))


def mat_truncate(a: Matrix, D) -> Matrix:
    return mat_map(a, lambda x: x.truncate(D))


def mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for r in a for x in r)


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_min_val(a: Matrix):
    """Smallest coefficient valuation (inexact zeros count with their precision; INF when exactly zero)."""
    best = INF
    for r in a:
        for x in r:
            for c in x.terms.values():
                v = c.valuation()
                best = v if best == INF else min(best, v)
    return best


def _constant_part(a: Matrix):
    n = a[0][0].nvars
    zero = (0,) * n
    return [[x.coeff(zero) for x in r] for r in a]


def _field_inverse(m, prec: int):
    """Gauss-Jordan over F with pivots of least valuation."""
    d = len(m)
    spec = m[0][0].spec
    a = [list(r) + [FElement.one(spec) if i == j else FElement.zero(spec) for j in range(d)] for i, r in enumerate(m)]
    for col in range(d):
        piv = None
        for r in range(col, d):
            if not a[r][col].is_zero() and (piv is None or a[r][col].valuation() < a[piv][col].valuation()):
                piv = r
        if piv is None:
            raise ZeroDivisionError("constant term of the matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse(prec)
        a[col] = [x * inv for x in a[col]]
        for r in range(d):
            if r != col and not a[r][col].is_exact_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[d:] for r in a]


def mat_inverse(g: Matrix, D: int, prec: int) -> Matrix:
    """Inverse via the constant term and a Neumann series in the positive-degree part."""
    spec = g[0][0].spec
    n = g[0][0].nvars
    d = len(g)
    c0 = _field_inverse(_constant_part(g), prec)
    zero = (0,) * n
    c0m = [[MultiElement(spec, {zero: c}, None, n) for c in r] for r in c0]
    nil = mat_truncate(mat_mul(c0m, g), D)
    nil = mat_sub(nil, mat_identity(spec, d, None, n))
    # (I + N)^-1 = sum (-N)^k, N of positive degree
    acc = mat_identity(spec, d, D, n)
    power = mat_identity(spec, d, D, n)
    for _ in range(D):
        power = mat_truncate(mat_mul(power, mat_neg(nil)), D)
        if mat_is_zero(power):
            break
        acc = mat_add(acc, power)
    return mat_truncate(mat_mul(acc, c0m), D)


# -- connections ----------------------------------------------------------------

@dataclass
class Connection:
    spec: BaseFieldSpec
    d: int
    mats: dict  # j -> d x d matrix of MultiElement, j in 1..h-1
    D: int
    nvars: int = field(default=None)

    def __post_init__(self):
        if self.nvars is None:
            self.nvars = self.spec.h
        if self.nvars < 2:
            raise ValueError("connections need at least one conjugate variable (h >= 2)")
        for j in range(1, self.nvars):
            self.mats.setdefault(j, mat_zero(self.spec, self.d, self.D, self.nvars))
            self.mats[j] = mat_truncate(self.mats[j], self.D)

    @property
    def indices(self):
        return list(range(1, self.nvars))

    @classmethod
    def trivial(cls, spec, d, D, nvars=None):
        return cls(spec, d, {}, D, nvars)

    def to_json(self) -> dict:
        return {
            "field": self.spec.to_json(),
            "d": self.d,
            "h": self.nvars,
            "deg": self.D,
            "matrices": {str(j): [[_entry_json(x) for x in r] for r in m] for j, m in sorted(self.mats.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Connection":
        spec = BaseFieldSpec.from_json(data["field"])
        d = int(data["d"])
        D = int(data["deg"])
        n = int(data.get("h", spec.h))
        mats = {}
        for j, m in data.get("matrices", {}).items():
            if len(m) != d or any(len(r) != d for r in m):
                raise ValueError(f"matrix {j} is not {d} x {d}")
            mats[int(j)] = [[_entry_from_json(spec, t, D, n) for t in r] for r in m]
        return cls(spec, d, mats, D, n)


def _entry_json(x: MultiElement):
    return [{"exp": list(k), "coeff": element_to_text(c)} for k, c in sorted(x.terms.items())]


def _entry_from_json(spec, terms, D, n) -> MultiElement:
    out = {}
    for t in terms:
        c = t["coeff"]
        c = FElement.from_int(spec, c) if isinstance(c, int) else element_from_text(spec, c)
        out[tuple(int(e) for e in t["exp"])] = c
    return MultiElement(spec, out, D, n)


def matrix_to_json(m: Matrix):
    return [[_entry_json(x) for x in r] for r in m]


@dataclass
class IntegrabilityReport:
    defect_val: object
    flat: bool


def check_integrable(conn: Connection) -> IntegrabilityReport:
    """d_i(D_j) + D_i D_j must be symmetric in (i, j)."""
    worst = INF
    flat = True
    D = conn.D - 1
    for i in conn.indices:
        for j in conn.indices:
            if j <= i:
                continue
            lhs = mat_add(mat_partial(i, conn.mats[j]), mat_mul(conn.mats[i], conn.mats[j], D))
            rhs = mat_add(mat_partial(j, conn.mats[i]), mat_mul(conn.mats[j], conn.mats[i], D))
            diff = mat_truncate(mat_sub(lhs, rhs), D)
            if not mat_is_zero(diff):
                flat = False
            v = mat_min_val(diff)
            worst = v if worst == INF else min(worst, v)
    return IntegrabilityReport(worst, flat)


class NotFlat(ValueError):
    pass


def d_multi(conn: Connection, k, cache=None) -> Matrix:
    """D_0 = 1, D_{k + e_j} = d_j(D_k) + D_j D_k."""
    k = tuple(k)
    if cache is None:
        cache = {}
    if k in cache:
        return cache[k]
    if not any(k):
        res = mat_identity(conn.spec, conn.d, conn.D, conn.nvars)
    else:
        j = next(t for t, e in enumerate(k) if e)
        prev = list(k)
        prev[j] -= 1
        base = d_multi(conn, prev, cache)
        var = j + 1
        order = conn.D - sum(prev) - 1
        res = mat_add(mat_partial(var, base), mat_mul(conn.mats[var], base, order))
        res = mat_truncate(res, order)
    cache[k] = res
    return res


@dataclass
class SolutionBasis:
    H: Matrix
    defect_val: object
    defect_zero: bool
    rank: int


def _factorial_divide(x: MultiElement, n: int, prec: int) -> MultiElement:
    if n == 1:
        return x
    p = x.spec.p

    def div(c):
        if c.exact and not _is_p_power(n, p):
            c = c.add_bigoh(prec)
        return c / n
    return x.map_coeffs(div)


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def solve_H(conn: Connection, prec: int) -> SolutionBasis:
    """H = sum_k (-1)^|k| D_k Y^k / k! with the base point at 0."""
    if len(conn.indices) > 1:
        rep = check_integrable(conn)
        if not rep.flat:
            raise NotFlat("connection is not integrable")
    spec, d, n, D = conn.spec, conn.d, conn.nvars, conn.D
    cache: dict = {}
    H = mat_zero(spec, d, D, n)
    for k in _multi_indices(n - 1, D):
        Dk = d_multi(conn, k, cache)
        mono = MultiElement(spec, {(0,) + tuple(k): FElement.from_int(spec, (-1) ** sum(k))}, None, n)
        kf = 1
        for e in k:
            kf *= factorial(e)
        term = mat_map(Dk, lambda x: _factorial_divide((mono * x).truncate(D), kf, prec))
        H = mat_add(H, term)
    H = mat_truncate(H, D)
    dv, dz = solution_defect(conn, H)
    return SolutionBasis(H, dv, dz, d)


def solution_defect(conn: Connection, H: Matrix):
    worst = INF
    zero = True
    for j in conn.indices:
        res = mat_add(mat_partial(j, H), mat_mul(conn.mats[j], H, conn.D - 1))
        res = mat_truncate(res, conn.D - 1)
        if not mat_is_zero(res):
            zero = False
        v = mat_min_val(res)
        worst = v if worst == INF else min(worst, v)
    return worst, zero


def gauge(conn: Connection, G: Matrix, prec: int) -> Connection:
    """D'_j = G^-1 D_j G + G^-1 d_j(G)."""
    Gi = mat_inverse(G, conn.D, prec)
    D = conn.D
    mats = {}
    for j in conn.indices:
        a = mat_mul(mat_mul(Gi, conn.mats[j], D), G, D)
        b = mat_mul(Gi, mat_partial(j, G), D - 1)
        mats[j] = mat_truncate(mat_add(a, b), D - 1)
    return Connection(conn.spec, conn.d, mats, D - 1, conn.nvars)


def annihilated(m: Matrix, indices) -> bool:
    return all(mat_is_zero(mat_partial(j, m)) for j in indices)


def sol_rank(conn: Connection, prec: int):
    sol = solve_H(conn, prec)
    const = _constant_part(sol.H)
    _field_inverse(const, prec)
    columns = [[sol.H[i][c] for i in range(conn.d)] for c in range(conn.d)]
    return conn.d, columns, sol


def scalar_oracle(conn: Connection, prec: int) -> MultiElement:
    """For d = 1: exp(-A) with d_j A = D_j and A(0) = 0, via per-variable antiderivatives."""
    if conn.d != 1:
        raise ValueError("the scalar oracle needs d = 1")
    if len(conn.indices) != 1:
        raise ValueError("the scalar oracle is implemented for a single conjugate variable")
    spec, n, D = conn.spec, conn.nvars, conn.D
    A = antiderivative(1, conn.mats[1][0][0], prec).truncate(D)
    zero = (0,) * n
    if not A.coeff(zero).is_zero():
        raise ValueError("antiderivative must vanish at the origin")
    minus_a = -A
    out = MultiElement(spec, {zero: FElement.one(spec)}, D, n)
    power = MultiElement(spec, {zero: FElement.one(spec)}, None, n)
    for m in range(1, D + 1):
        power = (power * minus_a).truncate(D)
        out = out + _factorial_divide(power, factorial(m), prec)
    return out


def random_gauge_matrix(spec, d, D, rng: random.Random, nvars=None, coeff_bound=None) -> Matrix:
    """Unipotent constant term plus random integral terms of positive degree in the conjugate variables and Y_0."""
    n = spec.h if nvars is None else nvars
    bound = spec.p**3 if coeff_bound is None else coeff_bound
    G = []
    for i in range(d):
        row = []
        for j in range(d):
            terms = {}
            if i == j:
                terms[(0,) * n] = FElement.one(spec)
            elif j > i:
                terms[(0,) * n] = FElement.from_int(spec, rng.randrange(bound))
            for exp in _multi_indices(n, min(D, 3)):
                if sum(exp) == 0 or rng.random() > 0.5:
                    continue
                vec = tuple(rng.randrange(bound) for _ in range(spec.d))
                terms[exp] = FElement.make(spec, vec, 0, None)
            row.append(MultiElement(spec, terms, D, n))
        G.append(row)
    return G


@dataclass
class DemoReport:
    d: int
    D: int
    seed: int
    solution: SolutionBasis
    gauged: Connection
    G: Matrix
    GH_annihilated: bool
    flat_before: bool
    flat_after: bool

    @property
    def passed(self) -> bool:
        return self.solution.defect_zero and self.GH_annihilated and self.flat_after


def demo(spec: BaseFieldSpec, d: int, D: int, seed: int, prec: int, base: Connection | None = None) -> DemoReport:
    """Gauge a flat connection by a random G, solve, and check H^-1 G H' is free of the conjugate variables."""
    rng = random.Random(seed)
    conn = base if base is not None else Connection.trivial(spec, d, D)
    G = random_gauge_matrix(spec, d, conn.D, rng, conn.nvars)
    new = gauge(conn, G, prec)
    sol = solve_H(new, prec)
    if base is None:
        C = mat_mul(G, sol.H, new.D)
    else:
        H0 = solve_H(conn, prec).H
        C = mat_mul(mat_inverse(H0, new.D, prec), mat_mul(G, sol.H, new.D), new.D)
    C = mat_truncate(C, new.D)
    ok = annihilated(C, new.indices)
    return DemoReport(d, new.D, seed, sol, new, G, ok,
                      check_integrable(conn).flat, check_integrable(new).flat)


__all__ = [
    "Connection", "check_integrable", "d_multi", "solve_H", "solution_defect", "gauge", "sol_rank",
    "scalar_oracle", "demo", "DemoReport", "SolutionBasis", "NotFlat", "mat_inverse", "mat_mul",
    "mat_identity", "mat_equal", "annihilated", "random_gauge_matrix", "matrix_to_json",
]
