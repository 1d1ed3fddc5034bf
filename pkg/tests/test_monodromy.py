import random
from fractions import Fraction
from math import factorial

import pytest

from helpers import SPECS
from ltphi import monodromy as mono
from ltphi import multivar as mv
from ltphi.padic import BaseFieldSpec, FElement

Q9 = SPECS["Q9"]
Y1 = mv.MultiElement.variable(Q9, 1)
D, N = 8, 25


def const(c):
    return mv.MultiElement.constant(Q9, c)


def scalar(entry):
    return mono.Connection(Q9, 1, {1: [[entry]]}, D)


def series_in_y1(table):
    return mv.MultiElement(Q9, {(0, k): c for k, c in table.items()}, None, 2)


def test_iterated_matrices_for_y1():
    conn = scalar(Y1)
    assert mono.d_multi(conn, (2,))[0][0] == const(1) + Y1 * Y1
    assert mono.d_multi(conn, (3,))[0][0] == Y1.scale(FElement.from_int(Q9, 3)) + Y1 ** 3


def test_solution_for_y1_is_gaussian():
    H = mono.solve_H(scalar(Y1), N).H[0][0]
    expected = {2 * m: FElement.from_fraction(Q9, Fraction((-1) ** m, 2**m * factorial(m)), N + 10)
                for m in range(D // 2 + 1)}
    assert H == series_in_y1(expected).truncate(H.D)


def test_constant_connection():
    a = FElement.from_vec(Q9, (2, 1))
    conn = scalar(const(a))
    for k in range(1, 5):
        assert mono.d_multi(conn, (k,))[0][0] == const(a ** k)
    H = mono.solve_H(conn, N).H[0][0]
    expected = {k: (-a) ** k / FElement.from_int(Q9, factorial(k)).add_bigoh(N) for k in range(D + 1)}
    assert H == series_in_y1(expected).truncate(H.D)


def test_zero_connection_solution_is_identity():
    sol = mono.solve_H(mono.Connection.trivial(Q9, 2, D), N)
    assert mono.mat_equal(sol.H, mono.mat_identity(Q9, 2, D))
    assert sol.defect_zero


@pytest.mark.parametrize("entry", ["a", "Y1", "a+Y1^2"])
def test_scalar_oracle(entry):
    a = const(FElement.from_vec(Q9, (2, 1)))
    D1 = {"a": a, "Y1": Y1, "a+Y1^2": a + Y1 * Y1}[entry]
    conn = scalar(D1)
    assert mono.solve_H(conn, N).H[0][0] == mono.scalar_oracle(conn, N)


def test_non_flat_connection_rejected():
    spec = BaseFieldSpec.unramified(3, 3)
    Y1_, Y2_ = mv.MultiElement.variable(spec, 1), mv.MultiElement.variable(spec, 2)
    z = mv.MultiElement.constant(spec, 0)
    o = mv.MultiElement.constant(spec, 1)
    A = [[z, o], [z, z]]
    B = [[Y1_, z], [z, Y2_]]
    conn = mono.Connection(spec, 2, {1: A, 2: B}, 6)
    assert not mono.check_integrable(conn).flat
    with pytest.raises(mono.NotFlat):
        mono.solve_H(conn, N)


def test_gauge_inverse_round_trip():
    G = mono.random_gauge_matrix(Q9, 2, D, random.Random(2))
    Gi = mono.mat_inverse(G, D, N)
    assert mono.mat_equal(mono.mat_mul(G, Gi, D), mono.mat_identity(Q9, 2, D))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_gauge_demo(d):
    rep = mono.demo(Q9, d, D, seed=d, prec=N)
    assert rep.flat_after
    assert rep.solution.defect_zero
    assert rep.GH_annihilated


def test_gauge_demo_over_nontrivial_base():
    a = const(FElement.from_vec(Q9, (2, 1)))
    base = mono.Connection(Q9, 2, {1: [[Y1, const(1)], [const(0), a]]}, D)
    assert mono.demo(Q9, 2, D, seed=5, prec=N, base=base).passed


def test_connection_json_round_trip():
    conn = scalar(const(3) + Y1 * Y1)
    back = mono.Connection.from_json(conn.to_json())
    assert back.D == conn.D and back.mats[1][0][0] == conn.mats[1][0][0]


def test_scalar_oracle_needs_rank_one():
    with pytest.raises(ValueError):
        mono.scalar_oracle(mono.Connection.trivial(Q9, 2, D), N)
