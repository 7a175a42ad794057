"""Truncated N^{Q0}-graded power series with Motive coefficients.

Series are truncated by total degree ``|d| <= N``.  Besides the commutative
product there is the quantum-torus product, twisted by
``L^{<d, d'>/2}`` for the antisymmetrized Euler form of the quiver.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .motive import ONE, ZERO, Motive, MotiveError, adams, lefschetz_pow, parse_motive
from .quiver import DimVector, Quiver, antisym_form, dim_vectors
from .stability import CentralCharge, SlopeKey, slope_key


class SeriesError(ValueError):
    pass


def _deg(d: DimVector) -> int:
    return sum(d)


def _add(d: DimVector, e: DimVector) -> DimVector:
    return tuple(x + y for x, y in zip(d, e))


def _sub(d: DimVector, e: DimVector) -> DimVector | None:
    out = tuple(x - y for x, y in zip(d, e))
    return None if any(x < 0 for x in out) else out


def _order(d: DimVector):
    return (_deg(d), d)


@lru_cache(maxsize=None)
def _form_matrix(Q: Quiver) -> tuple[tuple[int, ...], ...]:
    n = Q.n
    basis = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    return tuple(tuple(antisym_form(Q, basis[i], basis[j]) for j in range(n)) for i in range(n))


def _pairing(B, d: DimVector, e: DimVector) -> int:
    return sum(d[i] * B[i][j] * e[j] for i in range(len(d)) if d[i] for j in range(len(e)) if e[j])


class GradedSeries:
    """Immutable truncated series ``sum_d c_d t^d``; absent keys are zero."""

    __slots__ = ("quiver", "N", "_c")

    def __init__(self, quiver: Quiver, N: int, coeffs: Mapping | None = None):
        if N < 0:
            raise SeriesError("truncation bound must be nonnegative")
        self.quiver = quiver
        self.N = N
        c: dict[DimVector, Motive] = {}
        for d, m in (coeffs or {}).items():
            d = quiver.check_dim(d)
            if _deg(d) > N:
                continue
            m = m if isinstance(m, Motive) else Motive(m)
            if m:
                c[d] = m
        self._c = c

    @classmethod
    def _trusted(cls, quiver: Quiver, N: int, coeffs: dict) -> "GradedSeries":
        s = object.__new__(cls)
        s.quiver, s.N = quiver, N
        s._c = {d: m for d, m in coeffs.items() if m}
        return s

    @classmethod
    def one(cls, quiver: Quiver, N: int) -> "GradedSeries":
        return cls._trusted(quiver, N, {(0,) * quiver.n: ONE})

    @classmethod
    def zero(cls, quiver: Quiver, N: int) -> "GradedSeries":
        return cls._trusted(quiver, N, {})

    @classmethod
    def monomial(cls, quiver: Quiver, N: int, d: Sequence[int], coeff=ONE) -> "GradedSeries":
        return cls(quiver, N, {tuple(d): coeff})

    def __getitem__(self, d: Sequence[int]) -> Motive:
        return self._c.get(tuple(d), ZERO)

    def items(self) -> list[tuple[DimVector, Motive]]:
        return sorted(self._c.items(), key=lambda kv: _order(kv[0]))

    def support(self) -> list[DimVector]:
        return [d for d, _ in self.items()]

    def constant(self) -> Motive:
        return self[(0,) * self.quiver.n]

    def _check(self, other: "GradedSeries") -> None:
        if not isinstance(other, GradedSeries):
            raise TypeError("expected a GradedSeries")
        if other.quiver != self.quiver or other.N != self.N:
            raise SeriesError("series live over different quivers or truncations")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self.quiver == other.quiver and self.N == other.N and self._c == other._c

    def __hash__(self):
        return hash((self.N, frozenset(self._c.items())))

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check(other)
        out = dict(self._c)
        for d, m in other._c.items():
            out[d] = out.get(d, ZERO) + m
        return GradedSeries._trusted(self.quiver, self.N, out)

    def __neg__(self) -> "GradedSeries":
        return GradedSeries._trusted(self.quiver, self.N, {d: -m for d, m in self._c.items()})

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + (-other)

    def scale(self, m) -> "GradedSeries":
        return GradedSeries._trusted(self.quiver, self.N, {d: c * m for d, c in self._c.items()})

    def restrict(self, N: int) -> "GradedSeries":
        if N > self.N:
            raise SeriesError("cannot extend a truncated series")
        return GradedSeries._trusted(self.quiver, N, {d: m for d, m in self._c.items() if _deg(d) <= N})

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        return mul(self, other)

    def __repr__(self) -> str:
        body = ", ".join(f"{list(d)}: {m}" for d, m in self.items())
        return f"GradedSeries(N={self.N}, {{{body}}})"

    def to_records(self) -> list[dict]:
        return [{"d": list(d), "coeff": str(m)} for d, m in self.items()]

    @classmethod
    def from_records(cls, quiver: Quiver, N: int, records: Iterable[Mapping]) -> "GradedSeries":
        coeffs = {}
        for r in records:
            coeffs[tuple(r["d"])] = parse_motive(r["coeff"])
        return cls(quiver, N, coeffs)


def _convolve(a: GradedSeries, b: GradedSeries, twist) -> GradedSeries:
    a._check(b)
    N = a.N
    acc: dict[DimVector, list[Motive]] = defaultdict(list)
    bitems = list(b._c.items())
    for d1, c1 in a._c.items():
        k1 = _deg(d1)
        for d2, c2 in bitems:
            if k1 + _deg(d2) > N:
                continue
            term = c1 * c2
            if twist is not None:
                w = twist(d1, d2)
                if w:
                    term = term * lefschetz_pow(w, half=True)
            acc[_add(d1, d2)].append(term)
    out = {}
    for d, terms in acc.items():
        s = ZERO
        for t in terms:
            s = s + t
        out[d] = s
    return GradedSeries._trusted(a.quiver, N, out)


def mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """Commutative (convolution) product."""
    return _convolve(a, b, None)


def mul_quantum(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """Quantum-torus product: ``t^d * t^e = L^{<d,e>/2} t^{d+e}``."""
    B = _form_matrix(a.quiver)
    if not any(any(row) for row in B):
        return mul(a, b)
    return _convolve(a, b, lambda d, e: _pairing(B, d, e))


def quantum_product(factors: Sequence[GradedSeries]) -> GradedSeries:
    """Ordered quantum product, left to right."""
    if not factors:
        raise SeriesError("empty product")
    out = factors[0]
    for f in factors[1:]:
        out = mul_quantum(out, f)
    return out


def invert(a: GradedSeries) -> GradedSeries:
    """Multiplicative inverse for the commutative product."""
    c0 = a.constant()
    if not c0:
        raise SeriesError("constant term is not invertible")
    inv0 = c0.inverse()
    out = {(0,) * a.quiver.n: inv0}
    terms = [(d, m) for d, m in a._c.items() if _deg(d) > 0]
    for d in dim_vectors(a.quiver.n, a.N)[1:]:
        s = ZERO
        for e, m in terms:
            rest = _sub(d, e)
            if rest is not None and rest in out:
                s = s + m * out[rest]
        if s:
            out[d] = -(s * inv0)
    return GradedSeries._trusted(a.quiver, a.N, out)


def dilate(a: GradedSeries, k: int, weight: Sequence[int] | None = None) -> GradedSeries:
    """Substitute ``t^d -> L^{k (w.d)} t^d``; ``w`` defaults to all ones (``t -> L^k t``)."""
    w = tuple(weight) if weight is not None else (1,) * a.quiver.n
    if len(w) != a.quiver.n:
        raise SeriesError("weight vector length does not match the quiver")
    return GradedSeries._trusted(
        a.quiver,
        a.N,
        {d: m * lefschetz_pow(k * sum(x * y for x, y in zip(w, d))) for d, m in a._c.items()},
    )


def _adams_series(a: GradedSeries) -> dict[DimVector, Motive]:
    """``sum_{n >= 1} psi^n(a) / n``, with ``psi^n`` placing ``adams(n, a_d)`` at ``n d``."""
    out: dict[DimVector, Motive] = {}
    for d, m in a._c.items():
        k = _deg(d)
        for n in range(1, a.N // k + 1):
            nd = tuple(n * x for x in d)
            term = adams(n, m) * Fraction(1, n)
            out[nd] = out.get(nd, ZERO) + term
    return {d: m for d, m in out.items() if m}


def _integral_content(m: Motive) -> bool:
    return int(m.den.content()) == 1


def pleth_exp(a: GradedSeries) -> GradedSeries:
    """Plethystic exponential ``Sym(a) = exp(sum_n psi^n(a)/n)``.

    The exponential is evaluated with the Euler operator ``t d/dt`` (which
    multiplies ``t^d`` by ``|d|``): ``|d| B_d = sum_e |e| P_e B_{d-e}``.
    """
    if a.constant():
        raise SeriesError("plethystic exponential needs a vanishing constant term")
    P = _adams_series(a)
    weighted = [(e, m * _deg(e)) for e, m in P.items()]
    n = a.quiver.n
    out: dict[DimVector, Motive] = {(0,) * n: ONE}
    for d in dim_vectors(n, a.N)[1:]:
        s = ZERO
        for e, m in weighted:
            rest = _sub(d, e)
            if rest is not None and rest in out:
                s = s + m * out[rest]
        if s:
            out[d] = s * Fraction(1, _deg(d))
    if all(_integral_content(m) for m in a._c.values()):
        bad = [d for d, m in out.items() if not _integral_content(m)]
        if bad:
            raise MotiveError(f"rational coefficients did not cancel in Sym at {bad[0]}")
    return GradedSeries._trusted(a.quiver, a.N, out)


def sigma_powers(m: Motive, n: int) -> list[Motive]:
    """``[sigma^0(m), ..., sigma^n(m)]`` via Newton's identity ``j s_j = sum_k psi^k s_{j-k}``."""
    psi = [None] + [adams(k, m) for k in range(1, n + 1)]
    out = [ONE]
    for j in range(1, n + 1):
        s = ZERO
        for k in range(1, j + 1):
            s = s + psi[k] * out[j - k]
        out.append(s * Fraction(1, j))
    return out


def pleth_log(b: GradedSeries) -> GradedSeries:
    """Inverse of :func:`pleth_exp`, solved degree by degree.

    With ``a_e`` known for ``|e| < k``, every ``d`` of degree ``k`` gets
    ``a_d = b_d - [prod_{|e| < k} sum_n sigma^n(a_e) t^{n e}]_d``.
    """
    if b.constant() != ONE:
        raise SeriesError("plethystic logarithm needs constant term 1")
    Q, N = b.quiver, b.N
    n = Q.n
    running = GradedSeries.one(Q, N)
    a: dict[DimVector, Motive] = {}
    for k in range(1, N + 1):
        level = [d for d in dim_vectors(n, k) if _deg(d) == k]
        new = {}
        for d in level:
            ad = b[d] - running[d]
            if ad:
                new[d] = ad
        for d, ad in new.items():
            sig = sigma_powers(ad, N // k)
            factor = GradedSeries._trusted(
                Q, N, {tuple(j * x for x in d): s for j, s in enumerate(sig)}
            )
            running = mul(running, factor)
        a.update(new)
    return GradedSeries._trusted(Q, N, a)


def factorize_by_slope(A: GradedSeries, zeta: CentralCharge) -> list[tuple[SlopeKey, GradedSeries]]:
    """Write ``A`` as the ordered quantum product of ray series, slopes decreasing.

    Each factor ``S_mu`` has constant term 1 and is supported on the ray of
    slope ``mu``; rays whose factor is exactly 1 are omitted.  Rays are solved
    degree by degree: ``S_{mu(d), d}`` is ``A_d`` minus all ordered products of
    lower-degree ray terms summing to ``d``.
    """
    if A.constant() != ONE:
        raise SeriesError("slope factorization needs constant term 1")
    Q, N = A.quiver, A.N
    if len(zeta) != Q.n:
        raise SeriesError("charge length does not match the quiver")
    n = Q.n
    B = _form_matrix(Q)
    zero = (0,) * n
    vecs = dim_vectors(n, N)[1:]
    key_of = {d: slope_key(zeta, d) for d in vecs}
    keys = sorted(set(key_of.values()), reverse=True)
    ray_index = {k: i for i, k in enumerate(keys)}
    R = len(keys)
    S: list[dict[DimVector, Motive]] = [{} for _ in range(R)]

    # F[j][d]: coefficient at d of S_j * S_{j+1} * ... * S_{R-1}; F[R] is the unit.
    F: list[dict[DimVector, Motive]] = [{zero: ONE} for _ in range(R + 1)]

    def tail(j: int, d: DimVector, include_self: bool) -> Motive:
        total = ZERO
        for e, c in S[j].items():
            if e == d and not include_self:
                continue
            rest = _sub(d, e)
            if rest is None:
                continue
            f = F[j + 1].get(rest)
            if f is None or not f:
                continue
            w = _pairing(B, e, rest)
            term = c * f
            if w:
                term = term * lefschetz_pow(w, half=True)
            total = total + term
        return total

    for k in range(1, N + 1):
        level = [d for d in vecs if _deg(d) == k]
        # ordered products of strictly smaller pieces
        H: dict[tuple[int, DimVector], Motive] = {}
        for d in level:
            acc = ZERO
            for j in range(R - 1, -1, -1):
                acc = acc + tail(j, d, include_self=False)
                H[(j, d)] = acc
            idx = ray_index[key_of[d]]
            s = A[d] - H[(0, d)]
            if s:
                S[idx][d] = s
        for d in level:
            idx = ray_index[key_of[d]]
            s = S[idx].get(d, ZERO)
            for j in range(R):
                val = H[(j, d)] + (s if j <= idx else ZERO)
                if val:
                    F[j][d] = val

    out = []
    for key, coeffs in zip(keys, S):
        if not coeffs:
            continue
        series = dict(coeffs)
        series[zero] = ONE
        out.append((key, GradedSeries._trusted(Q, N, series)))
    return out
