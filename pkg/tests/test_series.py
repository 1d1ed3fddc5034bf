import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import SPECS
from ltphi.padic import FElement
from ltphi.series import BiSeries, TruncSeries, TruncationError

Q3, Q4 = SPECS["Q3"], SPECS["Q4"]
coeff_lists = st.lists(st.integers(-500, 500), min_size=1, max_size=10)


def schoolbook(a, b, D):
    out = {}
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= D:
                out[i + j] = out.get(i + j, 0) + x * y
    return out


@given(coeff_lists, coeff_lists, st.integers(0, 12))
def test_product_matches_schoolbook(a, b, D):
    x = TruncSeries.from_ints(Q3, a, D=D)
    y = TruncSeries.from_ints(Q3, b, D=D)
    expected = {k: FElement.from_int(Q3, v) for k, v in schoolbook(a, b, D).items()}
    assert x * y == TruncSeries.from_dict(Q3, expected, D=D)


@given(coeff_lists, coeff_lists)
def test_exact_polynomial_product_commutes(a, b):
    x = TruncSeries.from_ints(Q4, a)
    y = TruncSeries.from_ints(Q4, b)
    assert x * y == y * x
    assert (x * y).top == x.top + y.top or (x * y).is_zero()


@given(coeff_lists)
def test_inverse_of_unit_series(a):
    a = [1] + a
    x = TruncSeries.from_ints(Q3, a, D=10)
    assert (x * x.inverse()).truncate(10) == TruncSeries.constant(Q3, 1, D=10)


def test_laurent_inverse():
    x = TruncSeries.from_ints(Q3, [0, 0, 1, 4], D=12)
    y = x.inverse()
    assert y.kmin == -2
    assert (x * y).truncate(8) == TruncSeries.constant(Q3, 1, D=8)


def test_polynomial_inverse_needs_order():
    with pytest.raises(TruncationError):
        TruncSeries.from_ints(Q3, [1, 1]).inverse()


@given(coeff_lists, coeff_lists, coeff_lists)
def test_composition_is_associative(a, b, c):
    f = TruncSeries.from_ints(Q3, a, D=8)
    g = TruncSeries.from_ints(Q3, [0] + b, D=8)
    h = TruncSeries.from_ints(Q3, [0] + c, D=8)
    assert f.compose(g).compose(h) == f.compose(g.compose(h))


def test_derivative():
    x = TruncSeries.from_ints(Q3, [5, 1, 2, 7])
    assert x.derivative() == TruncSeries.from_ints(Q3, [1, 4, 21])


@given(coeff_lists, st.integers(-4, 4))
def test_json_round_trip(a, kmin):
    x = TruncSeries.from_ints(Q4, a, kmin=kmin, D=kmin + 20, absprec=9)
    assert TruncSeries.from_json(x.to_json()) == x


def test_bivariate_product_and_swap():
    X = BiSeries(Q3, {(1, 0): FElement.one(Q3)}, D=4)
    Y = BiSeries(Q3, {(0, 1): FElement.one(Q3)}, D=4)
    XY = X * Y
    assert XY.coeff(1, 1) == FElement.one(Q3)
    assert XY.swap() == XY
    assert (X + Y).swap() == X + Y
