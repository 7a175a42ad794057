from fractions import Fraction
from math import factorial

import pytest
from flint import fmpz_poly
from hypothesis import given, settings
from hypothesis import strategies as st

from motivic_dt.motive import L, ONE, V, Motive, adams, class_gl, lefschetz_pow
from motivic_dt.quiver import Quiver, a2_quiver, loop_quiver
from motivic_dt.qtorus import (
    GradedSeries,
    SeriesError,
    dilate,
    factorize_by_slope,
    invert,
    mul,
    mul_quantum,
    pleth_exp,
    pleth_log,
    quantum_product,
)
from motivic_dt.stability import CentralCharge

from conftest import DENOMINATORS, QUIVERS, laurent, series


@st.composite
def tame(draw):
    """Laurent polynomial in v over one of the usual denominators."""
    return draw(laurent(max_len=3)) / draw(st.sampled_from(DENOMINATORS[:4]))


def ray_series(Q, N, direction):
    """sum_k L^{k^2/2} / [GL_k] t^{k e}"""
    coeffs = {}
    for k in range(N + 1):
        d = tuple(k * x for x in direction)
        coeffs[d] = lefschetz_pow(k * k, half=True) / class_gl(k)
    return GradedSeries(Q, N, coeffs)


def naive_exp(a: GradedSeries) -> GradedSeries:
    """exp(sum_k psi^k(a)/k) from the exponential series itself."""
    Q, N = a.quiver, a.N
    P = {}
    for d, m in a.items():
        for k in range(1, N // sum(d) + 1):
            kd = tuple(k * x for x in d)
            P[kd] = P.get(kd, Motive(0)) + adams(k, m) * Fraction(1, k)
    P = GradedSeries(Q, N, P)
    out, power = GradedSeries.one(Q, N), GradedSeries.one(Q, N)
    for j in range(1, N + 1):
        power = mul(power, P)
        out = out + power.scale(Fraction(1, factorial(j)))
    return out


def test_a2_coefficient():
    Q = a2_quiver()
    prod = mul_quantum(ray_series(Q, 2, (0, 1)), ray_series(Q, 2, (1, 0)))
    expected = V / (V - V.inverse()) ** 2
    assert prod[(1, 1)] == expected == lefschetz_pow(3, half=True) / (L - 1) ** 2


def test_unit_laws(a2):
    a = ray_series(a2, 3, (1, 1))
    one = GradedSeries.one(a2, 3)
    assert mul_quantum(a, one) == a == mul_quantum(one, a)
    assert quantum_product([a]) == a


def test_exp_examples():
    Q = loop_quiver(0)
    assert pleth_exp(GradedSeries.zero(Q, 5)) == GradedSeries.one(Q, 5)
    t = GradedSeries.monomial(Q, 5, (1,))
    assert pleth_exp(t) == GradedSeries(Q, 5, {(d,): 1 for d in range(6)})
    x = V / (L - 1)
    A = pleth_exp(GradedSeries.monomial(Q, 4, (1,), x))
    assert adams(2, x) == -L / (L ** 2 - 1)
    assert A[(2,)] == (x * x + adams(2, x)) / 2 == L / ((L - 1) * (L ** 2 - 1))
    # the first terms of sum_d L^{d^2/2}/[GL_d] t^d
    assert A[(2,)] == lefschetz_pow(4, half=True) / class_gl(2)


def test_errors():
    Q = loop_quiver(0)
    with pytest.raises(SeriesError):
        pleth_exp(GradedSeries.one(Q, 3))
    with pytest.raises(SeriesError):
        pleth_log(GradedSeries(Q, 3, {(0,): 2}))
    with pytest.raises(SeriesError):
        factorize_by_slope(GradedSeries.zero(Q, 3), CentralCharge.trivial(1))
    with pytest.raises(SeriesError):
        invert(GradedSeries.zero(Q, 3))
    with pytest.raises(SeriesError):
        mul(GradedSeries.one(Q, 3), GradedSeries.one(Q, 2))


def test_factorization_shapes():
    Q = a2_quiver()
    N = 6
    t1, t2, t12 = (ray_series(Q, N, e) for e in [(1, 0), (0, 1), (1, 1)])
    A = mul_quantum(t2, t1)
    up = factorize_by_slope(A, CentralCharge(((1, 1), (0, 1))))
    assert [s for _, s in up] == [t2, t1]
    down = factorize_by_slope(A, CentralCharge(((0, 1), (1, 1))))
    assert [s for _, s in down] == [t1, t12, t2]
    flat = factorize_by_slope(A, CentralCharge.trivial(2))
    assert len(flat) == 1 and flat[0][1] == A


def test_serialization_roundtrip(a2):
    a = mul_quantum(ray_series(a2, 3, (0, 1)), ray_series(a2, 3, (1, 0)))
    assert GradedSeries.from_records(a2, 3, a.to_records()) == a


# properties


@given(series(constant=0, coeff=tame()))
@settings(max_examples=150)
def test_exp_matches_exponential_series(a):
    assert pleth_exp(a) == naive_exp(a)


@given(st.data())
@settings(max_examples=150)
def test_exp_turns_sums_into_products(data):
    a = data.draw(series(constant=0, coeff=tame()))
    b = data.draw(series(quiver=a.quiver, N=a.N, constant=0, coeff=tame()))
    assert pleth_exp(a + b) == mul(pleth_exp(a), pleth_exp(b))


@given(series(constant=0, coeff=tame()))
@settings(max_examples=150)
def test_log_exp_roundtrip(a):
    assert pleth_log(pleth_exp(a)) == a


@given(series(constant=1, coeff=tame()))
@settings(max_examples=150)
def test_exp_log_roundtrip(b):
    assert pleth_exp(pleth_log(b)) == b


@given(series(constant=0, coeff=laurent(max_len=3).map(lambda m: m / (L - 1))))
@settings(max_examples=100)
def test_exp_denominators_are_cyclotomic(a):
    N = a.N
    budget = fmpz_poly([1])
    for n in range(1, N + 1):
        budget *= fmpz_poly([-1] + [0] * (2 * n - 1) + [1]) ** (N + 1)
    for _, m in pleth_exp(a).items():
        assert int(m.den.content()) == 1
        assert budget % m.den == 0


@given(st.data())
@settings(max_examples=150)
def test_quantum_product_associative(data):
    a = data.draw(series(constant=1, coeff=tame(), max_terms=4))
    b = data.draw(series(quiver=a.quiver, N=a.N, constant=data.draw(st.integers(0, 2)), coeff=tame(), max_terms=4))
    c = data.draw(series(quiver=a.quiver, N=a.N, constant=1, coeff=tame(), max_terms=4))
    assert mul_quantum(mul_quantum(a, b), c) == mul_quantum(a, mul_quantum(b, c))


SYMMETRIC = Quiver.from_edges(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])


@given(st.sampled_from([loop_quiver(0), loop_quiver(3), SYMMETRIC]), st.data())
@settings(max_examples=100)
def test_quantum_equals_commutative_without_form(Q, data):
    a = data.draw(series(quiver=Q, coeff=tame()))
    b = data.draw(series(quiver=Q, N=a.N, coeff=tame()))
    assert mul_quantum(a, b) == mul(a, b)


@st.composite
def charge_for(draw, n):
    vals = []
    for _ in range(n):
        vals.append((draw(st.integers(-3, 3)), draw(st.integers(1, 3))))
    return CentralCharge(tuple(vals))


@given(st.sampled_from([QUIVERS["a2"], QUIVERS["kronecker"], QUIVERS["cyclic3"], QUIVERS["loop2"]]), st.data())
@settings(max_examples=150)
def test_factorization_recomposes(Q, data):
    A = data.draw(series(quiver=Q, constant=1, coeff=tame()))
    zeta = data.draw(charge_for(Q.n))
    factors = factorize_by_slope(A, zeta)
    keys = [k for k, _ in factors]
    assert keys == sorted(keys, reverse=True)
    for key, S in factors:
        assert S.constant() == ONE
    product = quantum_product([S for _, S in factors]) if factors else GradedSeries.one(Q, A.N)
    assert product == A


@given(series(constant=0, coeff=tame()), st.data())
@settings(max_examples=60)
def test_truncation_stability(a, data):
    M = data.draw(st.integers(0, a.N))
    assert pleth_exp(a).restrict(M) == pleth_exp(a.restrict(M))
    b = pleth_exp(a)
    assert pleth_log(b).restrict(M) == pleth_log(b.restrict(M))
    assert mul_quantum(b, b).restrict(M) == mul_quantum(b.restrict(M), b.restrict(M))


@given(series(constant=1, coeff=tame()))
@settings(max_examples=60)
def test_invert(a):
    assert mul(a, invert(a)) == GradedSeries.one(a.quiver, a.N)


def test_dilate():
    Q = loop_quiver(0)
    a = GradedSeries(Q, 3, {(1,): 1, (2,): V})
    assert dilate(a, 2) == GradedSeries(Q, 3, {(1,): L ** 2, (2,): V * L ** 4})
