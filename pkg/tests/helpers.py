"""Shared builders for tests."""

import random

from ltphi.padic import BaseFieldSpec, FElement
from ltphi.series import TruncSeries

SPECS = {
    "Q2": BaseFieldSpec.qp(2),
    "Q3": BaseFieldSpec.qp(3),
    "Q5": BaseFieldSpec.qp(5),
    "Q4": BaseFieldSpec.unramified(2, 2),
    "Q9": BaseFieldSpec.unramified(3, 2),
    "E3": BaseFieldSpec.eisenstein(3, (-3, 0, 1)),
}


def rand_vec(spec, rng, bound):
    return tuple(rng.randrange(-bound, bound + 1) for _ in range(spec.d))


def rand_integral(spec, rng, bound=50):
    """Exact element of O_F with small coordinates."""
    return FElement.make(spec, rand_vec(spec, rng, bound), 0, None)


def rand_unit(spec, rng, bound=50):
    while True:
        x = rand_integral(spec, rng, bound)
        if not x.is_zero() and x.valuation() == 0:
            return x


def rand_poly(spec, rng, lo=0, hi=6, bound=30, var="u"):
    """Exact Laurent polynomial with indices lo..hi and a nonzero top coefficient."""
    table = {k: rand_integral(spec, rng, bound) for k in range(lo, hi + 1)}
    while table[hi].is_zero():
        table[hi] = rand_integral(spec, rng, bound)
    return TruncSeries.from_dict(spec, table, var=var)


def rng(seed=0):
    return random.Random(seed)
