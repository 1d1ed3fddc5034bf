from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SPECS
from ltphi import formal_group as fg
from ltphi.padic import FElement, PrecisionError
from ltphi.series import TruncSeries

Q2, Q3, Q4, E3 = SPECS["Q2"], SPECS["Q3"], SPECS["Q4"], SPECS["E3"]
D, N = 12, 12


def poly(spec, ints):
    return TruncSeries.from_ints(spec, ints)


def test_first_tower_polynomial_p3():
    assert fg.q_poly(Q3, 1) == poly(Q3, [3, 0, 1])


def test_second_tower_polynomial_p2():
    assert fg.q_poly(Q2, 2) == poly(Q2, [2, 2, 1])


@pytest.mark.parametrize("spec", [Q2, Q3, E3], ids=lambda s: s.describe())
def test_tower_constant_term_is_uniformizer(spec):
    for k in range(1, 6 if spec.q == 2 else 4):
        assert fg.q_poly(spec, k).coeff(0) == FElement.uniformizer(spec)


@pytest.mark.parametrize("spec, ints", [(Q2, [0, 2, 1]), (Q3, [0, 3, 0, 1]), (Q4, [0, 2, 0, 0, 1])],
                         ids=["Q2", "Q3", "Q4"])
def test_multiplication_by_pi(spec, ints):
    assert fg.mult_by_pi(spec) == poly(spec, ints)


def test_mult_by_three_p2():
    assert fg.mult_by_a(Q2, 3, 6, N) == TruncSeries.from_ints(Q2, [0, 3, 3, 1], D=6)


def test_log_coefficients_p2():
    log = fg.log_lt(Q2, D, N)
    for n in range(1, D + 1):
        assert log.coeff(n) == FElement.from_fraction(Q2, Fraction((-1) ** (n - 1), n), N + 8)


def test_exp_coefficients_p2():
    ex = fg.exp_lt(Q2, D, N)
    for n in range(1, D + 1):
        assert ex.coeff(n) == FElement.from_fraction(Q2, Fraction(1, factorial(n)), N + 20)


def test_invariant_vector_field_p2():
    assert fg.v_series(Q2, 8, N) == TruncSeries.from_ints(Q2, [1, 1], D=8)


@pytest.mark.parametrize("spec", [Q3, Q4, E3], ids=lambda s: s.describe())
def test_log_matches_product_formula(spec):
    assert fg.log_lt_product(spec, D, N) == fg.log_lt(spec, D, N)


@pytest.mark.parametrize("spec", [Q3, E3], ids=lambda s: s.describe())
def test_log_of_pi_endomorphism(spec):
    log = fg.log_lt(spec, D, N)
    assert log.compose(fg.mult_by_pi(spec)) == log.scale(FElement.uniformizer(spec))


units = st.integers(-40, 40).filter(lambda a: a % 3 != 0)


@given(units, units)
@settings(max_examples=15)
def test_endomorphisms_compose(a, b):
    A, B = fg.mult_by_a(Q3, a, D, N), fg.mult_by_a(Q3, b, D, N)
    assert A.compose(B) == fg.mult_by_a(Q3, a * b, D, N)
    assert A.compose(fg.mult_by_pi(Q3)) == fg.mult_by_pi(Q3).compose(A).truncate(D)


@given(units)
@settings(max_examples=15)
def test_log_linearises_endomorphisms(a):
    log = fg.log_lt(E3, D, N)
    assert log.compose(fg.mult_by_a(E3, a, D, N)) == log.scale(FElement.from_int(E3, a))


@given(units, units)
@settings(max_examples=10)
def test_group_law_adds_endomorphisms(a, b):
    A, B = fg.mult_by_a(Q3, a, 8, N), fg.mult_by_a(Q3, b, 8, N)
    assert fg.fg_sum(Q3, A, B, 8, N) == fg.mult_by_a(Q3, a + b, 8, N)


def test_group_law_is_symmetric_with_unit():
    F = fg.fg_add(Q3, 6, N)
    assert F.swap() == F
    assert F.coeff(1, 0) == FElement.one(Q3) and F.coeff(0, 1) == FElement.one(Q3)
    assert F.coeff(0, 0).is_zero()


def test_inexact_multiplier_precision_limit():
    a = FElement.from_int(Q3, 2, 2)
    with pytest.raises(PrecisionError):
        fg.mult_by_a(Q3, a, 12, N)


@pytest.mark.parametrize("spec", [Q3, E3], ids=lambda s: s.describe())
@pytest.mark.parametrize("k", [1, 2])
def test_torsion_generator_is_a_root(spec, k):
    F = fg.torsion_field(spec, k, N)
    assert fg.eval_at_torsion(fg.q_poly(spec, k), k, N).is_zero()
    assert (F.gen() * F.gen_inverse()) == 1
    slopes = fg.newton_polygon_slopes(fg.q_poly(spec, k))
    assert max(s for s, _ in slopes) == F.gen().val_p()


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=6), st.lists(st.integers(-30, 30), min_size=1, max_size=6))
@settings(max_examples=15)
def test_evaluation_is_a_ring_map(f, g):
    f, g = poly(Q3, f), poly(Q3, g)
    lhs = fg.eval_at_torsion(f * g, 2, N)
    rhs = fg.eval_at_torsion(f, 2, N) * fg.eval_at_torsion(g, 2, N)
    assert lhs == rhs
    assert fg.eval_at_torsion(f + g, 2, N) == fg.eval_at_torsion(f, 2, N) + fg.eval_at_torsion(g, 2, N)


def test_torsion_level_checked():
    with pytest.raises(ValueError):
        fg.TorsionField(Q3, 0, N)
