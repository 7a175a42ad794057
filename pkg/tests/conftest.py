from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from motivic_dt.motive import L, V, Motive
from motivic_dt.quiver import Quiver, a2_quiver, loop_quiver
from motivic_dt.qtorus import GradedSeries
from motivic_dt.quiver import dim_vectors

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_int = st.integers(-4, 4)

# denominators that actually occur: products of cyclotomic-type factors in L
DENOMINATORS = [Motive(1), L - 1, L + 1, L ** 2 - 1, V ** 3 + 1, L ** 3 - 1, (L - 1) ** 2]


@st.composite
def laurent(draw, max_len=4):
    coeffs = draw(st.lists(small_int, min_size=1, max_size=max_len))
    shift = draw(st.integers(-3, 3))
    return Motive(coeffs, 1, shift)


@st.composite
def motives(draw):
    """Random elements of Q(v), including ones with nontrivial denominators."""
    num = draw(laurent())
    if draw(st.booleans()):
        den = draw(st.sampled_from(DENOMINATORS))
    else:
        den = draw(laurent(max_len=3))
        if not den:
            den = Motive(1)
    scale = Fraction(1, draw(st.integers(1, 3)))
    return num * scale / den


def nonzero(strategy):
    return strategy.filter(lambda m: not m.is_zero())


QUIVERS = {
    "one-vertex": loop_quiver(0),
    "loop2": loop_quiver(2),
    "a2": a2_quiver(),
    "kronecker": Quiver.from_edges(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]),
    "cyclic3": Quiver.from_edges(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]),
}


@st.composite
def series(draw, quiver=None, N=None, constant=0, coeff=None, max_terms=5):
    """A truncated series with the given constant term and a few random coefficients."""
    Q = quiver if quiver is not None else draw(st.sampled_from(list(QUIVERS.values())))
    N = N if N is not None else draw(st.integers(1, 4 if Q.n < 3 else 3))
    vecs = dim_vectors(Q.n, N)[1:]
    support = draw(st.lists(st.sampled_from(vecs), max_size=max_terms, unique=True))
    coeffs = {d: draw(coeff if coeff is not None else motives()) for d in support}
    coeffs[(0,) * Q.n] = Motive(constant)
    return GradedSeries(Q, N, coeffs)


@pytest.fixture
def a2():
    return a2_quiver()
