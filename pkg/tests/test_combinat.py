from fractions import Fraction
from itertools import product
from math import comb

import pytest

from motivic_dt.combinat import (
    almost_primitive_orbits,
    central_binomial,
    compositions,
    divisors,
    is_almost_primitive,
    mobius,
)
from motivic_dt.dtpipe import euler_dt_two_loop


def _period(a):
    """Smallest p with a equal to its rotation by p."""
    return next(p for p in range(1, len(a) + 1) if len(a) % p == 0 and a == a[p:] + a[:p])


def _brute_almost_primitive(m, d):
    out = []
    for a in product(range((m - 1) * d + 1), repeat=d):
        if sum(a) != (m - 1) * d:
            continue
        p = _period(a)
        if p == d or (m % 2 == 0 and 2 * p == d and p % 2 == 1):
            out.append(a)
    return out


def test_orbit_examples():
    (orb,) = almost_primitive_orbits(2, 1)
    assert orb.representative == (1,) and orb.min_degree == 0 and orb.size == 1
    two = almost_primitive_orbits(2, 2)
    assert [(o.representative, o.size, o.min_degree) for o in two] == [((0, 2), 2, 0), ((1, 1), 1, 1)]
    assert almost_primitive_orbits(1, 2) == []


def test_almost_primitive_clause():
    assert is_almost_primitive((1, 1), 2)
    assert not is_almost_primitive((1, 1), 3)
    assert is_almost_primitive((0, 2, 1, 0, 2, 1), 4)
    assert not is_almost_primitive((1, 1, 1, 1), 2)


@pytest.mark.parametrize("m, d", [(m, d) for m in (1, 2, 3) for d in range(1, 7)])
def test_orbit_sizes_sum_to_filter_count(m, d):
    orbits = almost_primitive_orbits(m, d)
    assert sum(o.size for o in orbits) == len(_brute_almost_primitive(m, d))


@pytest.mark.parametrize("m, d", [(m, d) for m in (1, 2, 3) for d in range(1, 7)])
def test_stars_and_bars(m, d):
    assert len(list(compositions((m - 1) * d, d))) == comb((m - 1) * d + d - 1, d - 1)


@pytest.mark.parametrize("d", range(1, 7))
def test_orbit_count_matches_moebius_formula(d):
    orbits = almost_primitive_orbits(2, d)
    assert Fraction((-1) ** (d * d + 1) * len(orbits), d) == euler_dt_two_loop(d)


def test_number_theory():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    assert [central_binomial(n) for n in range(5)] == [1, 2, 6, 20, 70]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [euler_dt_two_loop(d) for d in range(1, 5)] == [1, -1, 1, -2]
    with pytest.raises(ValueError):
        mobius(0)
