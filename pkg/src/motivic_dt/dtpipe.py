"""Donaldson-Thomas invariants of quivers (with potential, via a cut).

Pipeline: stacky generating series -> slope factorization in the quantum
torus -> plethystic logarithm per ray, multiplied by ``v - 1/v``.
Closed-form checks for loop quivers and the A2 quiver live here too.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .combinat import almost_primitive_orbits, central_binomial, divisors, mobius
from .motive import (
    ONE,
    V,
    L,
    Motive,
    PoleError,
    class_gl,
    class_proj,
    euler_specialize,
    lefschetz_pow,
    parse_motive,
)
from .quiver import (
    DimVector,
    Potential,
    Quiver,
    a2_quiver,
    cut_weight,
    dim_vectors,
    euler_form,
    loop_quiver,
    rep_space_weight,
    validate_cut,
)
from .qtorus import (
    GradedSeries,
    dilate,
    factorize_by_slope,
    invert,
    mul,
    mul_quantum,
    pleth_exp,
    pleth_log,
    quantum_product,
)
from .stability import CentralCharge, SlopeKey, is_generic, slope_key

log = logging.getLogger(__name__)

CONVENTION = "commutative-Sym"
# 1 / (L^{1/2} - L^{-1/2}) and its inverse
DT_FACTOR = V - V.inverse()


class PipelineError(ValueError):
    pass


# relation classes


class RelationClassProvider:
    """Class of ``{M in Y_d : dW/d(alpha)(M) = 0 for alpha in C}`` per dimension vector."""

    name = "abstract"
    potential: Potential | None = None

    def prepare(self, Q: Quiver, cut: Sequence[str], N: int) -> None:
        pass

    def __call__(self, Q: Quiver, cut: Sequence[str], d: DimVector) -> Motive:
        raise NotImplementedError


class NoRelations(RelationClassProvider):
    """W = 0: the relation variety is all of Y_d, an affine space."""

    name = "none"

    def __call__(self, Q, cut, d):
        return lefschetz_pow(rep_space_weight(Q, d) - cut_weight(Q, cut, d))


class CommutingVariety(RelationClassProvider):
    """Commuting pairs of matrices: the 3-loop quiver with ``W = [x, y] z`` cut at ``z``."""

    name = "feit-fine"

    def __init__(self):
        self._series: GradedSeries | None = None

    def prepare(self, Q, cut, N):
        if Q.n != 1 or len(Q.arrows) != 3:
            raise PipelineError("feit-fine applies to the 3-loop quiver only")
        if self._series is None or self._series.N < N:
            self._series = feit_fine_series(N, Q)

    def __call__(self, Q, cut, d):
        if self._series is None or sum(d) > self._series.N:
            self.prepare(Q, cut, sum(d))
        return self._series[d] * class_gl(d[0])


class UserTable(RelationClassProvider):
    name = "user-table"

    def __init__(self, table: Mapping[DimVector, Motive]):
        self.table = {tuple(k): v if isinstance(v, Motive) else parse_motive(v) for k, v in table.items()}

    def prepare(self, Q, cut, N):
        missing = [d for d in dim_vectors(Q.n, N)[1:] if d not in self.table]
        if missing:
            raise PipelineError(f"user-table has no class for dimension vector {list(missing[0])}")

    def __call__(self, Q, cut, d):
        if not any(d):
            return ONE
        try:
            return self.table[tuple(d)]
        except KeyError:
            raise PipelineError(f"user-table has no class for dimension vector {list(d)}") from None


def make_provider(name: str, table: Mapping | None = None) -> RelationClassProvider:
    if name == "none":
        return NoRelations()
    if name == "feit-fine":
        return CommutingVariety()
    if name == "user-table":
        if table is None:
            raise PipelineError("provider user-table needs a table of classes")
        return UserTable(table)
    raise PipelineError(f"unknown relation class provider {name!r}")


def commuting_potential(Q: Quiver | None = None) -> Potential:
    """``W = [x, y] z = xyz - yxz`` on the 3-loop quiver."""
    Q = Q or loop_quiver(3)
    return Potential(Q, ((1, ("x", "y", "z")), (-1, ("y", "x", "z"))))


# series


def stacky_series(
    Q: Quiver,
    provider: RelationClassProvider,
    cut: Sequence[str] = (),
    N: int = 4,
    potential: Potential | None = None,
) -> GradedSeries:
    """``A_d = L^{(d,d)/2 + cut weight} [relation variety] / [G_d]``."""
    cut = tuple(cut)
    for a in cut:
        Q.arrow(a)
    W = potential if potential is not None else provider.potential
    if W is not None and not validate_cut(W, cut):
        raise PipelineError(f"{sorted(cut)} is not a cut of the potential")
    provider.prepare(Q, cut, N)
    coeffs: dict[DimVector, Motive] = {}
    for d in dim_vectors(Q.n, N):
        if not any(d):
            coeffs[d] = ONE
            continue
        half = euler_form(Q, d, d) + 2 * cut_weight(Q, cut, d)
        gd = ONE
        for x in d:
            gd = gd * class_gl(x)
        coeffs[d] = lefschetz_pow(half, half=True) * provider(Q, cut, d) / gd
    return GradedSeries(Q, N, coeffs)


def a_series(m: int, N: int) -> GradedSeries:
    """``A^(m)(t) = sum_d L^{(m+1) d^2 / 2} / [GL(d)] t^d``; any integer m."""
    Q = loop_quiver(0)
    return GradedSeries(
        Q, N, {(d,): lefschetz_pow((m + 1) * d * d, half=True) / class_gl(d) for d in range(N + 1)}
    )


def feit_fine_series(N: int, Q: Quiver | None = None) -> GradedSeries:
    """``sum_d [C_d] / [GL(d)] t^d = Sym(L^2 / (L - 1) sum_{d>=1} t^d)``."""
    Q = Q or loop_quiver(3)
    gen = GradedSeries(Q, N, {(d,): L ** 2 / (L - 1) for d in range(1, N + 1)})
    return pleth_exp(gen)


# DT tables


@dataclass
class DtTable:
    entries: dict[DimVector, Motive]
    N: int
    charge: CentralCharge | None = None
    generic: bool | None = None
    generic_bound: int | None = None
    convention: str = CONVENTION
    rays: list[SlopeKey] = field(default_factory=list)

    def __post_init__(self):
        self.entries = {tuple(d): m for d, m in self.entries.items() if m and any(d)}

    def __getitem__(self, d) -> Motive:
        return self.entries.get(tuple(d), Motive(0))

    def items(self) -> list[tuple[DimVector, Motive]]:
        return sorted(self.entries.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def restrict(self, N: int) -> dict[DimVector, Motive]:
        return {d: m for d, m in self.entries.items() if sum(d) <= N}

    def to_records(self, euler: bool = True) -> list[dict]:
        out = []
        for d, m in self.items():
            rec = {"d": list(d), "dt": str(m)}
            if euler:
                rec["euler"] = euler_text(m)
            out.append(rec)
        return out

    @staticmethod
    def entries_from_records(records) -> dict[DimVector, Motive]:
        return {tuple(r["d"]): parse_motive(r["dt"]) for r in records}


def euler_text(m: Motive) -> str:
    try:
        return str(euler_specialize(m))
    except PoleError:
        return "pole"


def _log_factor(series: GradedSeries) -> dict[DimVector, Motive]:
    return {d: c * DT_FACTOR for d, c in pleth_log(series).items()}


def dt_from_series(
    A: GradedSeries, zeta: CentralCharge, jobs: int = 1
) -> tuple[dict[DimVector, Motive], list[SlopeKey]]:
    factors = factorize_by_slope(A, zeta)
    keys = [k for k, _ in factors]
    series = [s for _, s in factors]
    if jobs > 1 and len(series) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_log_factor, series))
    else:
        parts = [_log_factor(s) for s in series]
    out: dict[DimVector, Motive] = {}
    for p in parts:
        out.update(p)
    return out, keys


def dt_invariants(
    Q: Quiver,
    provider: RelationClassProvider,
    cut: Sequence[str] = (),
    zeta: CentralCharge | None = None,
    N: int = 4,
    potential: Potential | None = None,
    jobs: int = 1,
) -> DtTable:
    zeta = zeta or CentralCharge.trivial(Q.n)
    if len(zeta) != Q.n:
        raise PipelineError("charge length does not match the quiver")
    A = stacky_series(Q, provider, cut, N, potential)
    entries, keys = dt_from_series(A, zeta, jobs)
    bound = max(N, 1)
    generic = is_generic(zeta, Q, bound)
    if not generic:
        log.warning("stability condition is not generic up to degree %d", bound)
    return DtTable(entries, N, zeta, generic, bound, CONVENTION, keys)


def sym_of_dt(Q: Quiver, N: int, entries: Mapping[DimVector, Motive]) -> GradedSeries:
    """``Sym(DT / (L^{1/2} - L^{-1/2}))`` for entries on one ray."""
    return pleth_exp(GradedSeries(Q, N, {d: m / DT_FACTOR for d, m in entries.items() if sum(d) <= N}))


def recompose(Q: Quiver, N: int, table: DtTable, zeta: CentralCharge) -> GradedSeries:
    """Ordered quantum product of ``Sym(DT_mu / (v - 1/v))`` over decreasing slopes."""
    by_ray: dict[SlopeKey, dict[DimVector, Motive]] = {}
    for d, m in table.restrict(N).items():
        by_ray.setdefault(slope_key(zeta, d), {})[d] = m
    factors = [sym_of_dt(Q, N, by_ray[k]) for k in sorted(by_ray, reverse=True)]
    if not factors:
        return GradedSeries.one(Q, N)
    return quantum_product(factors)


# closed forms


def reineke_closed_form(m: int, d: int) -> Motive:
    """DT of the m-loop quiver from cyclic orbits of almost primitive tuples."""
    if m < 2 or d < 1:
        raise ValueError("closed form needs m >= 2 and d >= 1")
    total = Motive(0)
    for orb in almost_primitive_orbits(m, d):
        total = total + lefschetz_pow(-orb.min_degree)
    prefactor = lefschetz_pow((m - 1) * d * d + 1, half=True)
    return prefactor * (1 - L.inverse()) / (1 - lefschetz_pow(-d)) * total


def euler_dt_two_loop(d: int) -> Fraction:
    """``(1 / 2d^2) sum_{n | d} (-1)^{n+1} mu(d/n) binom(2n, n)``."""
    if d < 1:
        raise ValueError("d must be positive")
    s = sum((-1) ** (n + 1) * mobius(d // n) * central_binomial(n) for n in divisors(d))
    return Fraction(s, 2 * d * d)


def loop_dt(m: int, N: int, jobs: int = 1) -> DtTable:
    return dt_invariants(loop_quiver(m), NoRelations(), (), None, N, jobs=jobs)


def check_functional_equation(m: int, N: int) -> bool:
    """``A(L t) - A(t) = L^{(m+1)/2} t A(L^m t)`` coefficient by coefficient."""
    A = a_series(m, N)
    Q = A.quiver
    lhs = dilate(A, 1) - A
    t = GradedSeries.monomial(Q, N, (1,), lefschetz_pow(m + 1, half=True))
    rhs = mul(t, dilate(A, m))
    return lhs == rhs


def b_series(m: int, N: int) -> GradedSeries:
    A = a_series(m, N)
    return mul(dilate(A, 1), invert(A))


def b_series_check(m: int, N: int, dt: Mapping[DimVector, Motive] | None = None) -> bool:
    """Check both descriptions of ``B(t) = A(L t) / A(t)`` for the m-loop quiver.

    ``B = Sym(sum_d L^{1/2} [P^{d-1}] DT_d t^d)`` with DT from the pipeline, and
    ``B = 1 + L^{(m+1)/2} t prod_{i<m} B(L^i t)``.  For m = 0, 1 the closed forms
    ``1 + L^{1/2} t`` and ``sum_d L^d t^d`` are checked as well.
    """
    if m < 0:
        raise ValueError("B-series is defined for m >= 0")
    B = b_series(m, N)
    Q = B.quiver
    if dt is None:
        dt = loop_dt(m, N).entries
    gen = GradedSeries(Q, N, {(d,): V * class_proj(d - 1) * dt.get((d,), Motive(0)) for d in range(1, N + 1)})
    ok = pleth_exp(gen) == B
    prod = GradedSeries.one(Q, N)
    for i in range(m):
        prod = mul(prod, dilate(B, i))
    t = GradedSeries.monomial(Q, N, (1,), lefschetz_pow(m + 1, half=True))
    ok = ok and (GradedSeries.one(Q, N) + mul(t, prod)) == B
    if m == 0:
        ok = ok and B == GradedSeries(Q, N, {(0,): ONE, (1,): V})
    elif m == 1:
        ok = ok and B == GradedSeries(Q, N, {(d,): L ** d for d in range(N + 1)})
    return ok


def a2_ray_series(N: int, direction: Sequence[int]) -> GradedSeries:
    """``A^(0)(t^e)`` on the A2 quiver for a primitive direction e."""
    Q = a2_quiver()
    coeffs = {}
    for k in range(N + 1):
        d = tuple(k * x for x in direction)
        if sum(d) <= N:
            coeffs[d] = lefschetz_pow(k * k, half=True) / class_gl(k)
    return GradedSeries(Q, N, coeffs)


def check_dilog_identity(N: int) -> bool:
    """``A(t2) * A(t1) = A(t1) * A(t1 t2) * A(t2)`` in the A2 quantum torus."""
    t1 = a2_ray_series(N, (1, 0))
    t2 = a2_ray_series(N, (0, 1))
    t12 = a2_ray_series(N, (1, 1))
    return mul_quantum(t2, t1) == quantum_product([t1, t12, t2])


def check_wall_crossing(Q: Quiver, N: int, charges: Sequence[CentralCharge], provider=None) -> bool:
    """Every charge recomposes its DT table to the same stacky series."""
    provider = provider or NoRelations()
    A = stacky_series(Q, provider, (), N)
    for zeta in charges:
        table = dt_invariants(Q, provider, (), zeta, N)
        if recompose(Q, N, table, zeta) != A:
            return False
    return True


CHECKS: dict[str, Callable[..., bool]] = {}


def _register(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn

    return deco


@_register("dilog")
def _check_dilog(N: int = 6, **_) -> bool:
    return check_dilog_identity(N)


@_register("functional-equation")
def _check_fe(N: int = 6, m: int = 2, **_) -> bool:
    return check_functional_equation(m, N)


@_register("b-series")
def _check_b(N: int = 6, m: int = 2, **_) -> bool:
    return b_series_check(m, N)


@_register("closed-form")
def _check_closed_form(N: int = 4, m: int = 2, **_) -> bool:
    table = loop_dt(m, N)
    return all(table[(d,)] == reineke_closed_form(m, d) for d in range(1, N + 1))


@_register("euler-two-loop")
def _check_euler(N: int = 6, **_) -> bool:
    table = loop_dt(2, N)
    return all(euler_specialize(table[(d,)]) == euler_dt_two_loop(d) for d in range(1, N + 1))


@_register("commuting-variety")
def _check_commuting(N: int = 4, **_) -> bool:
    Q = loop_quiver(3)
    table = dt_invariants(Q, CommutingVariety(), ("z",), None, N, potential=commuting_potential(Q))
    return all(table[(d,)] == lefschetz_pow(3, half=True) for d in range(1, N + 1)) and len(table.entries) == N


@_register("wall-crossing")
def _check_wc(N: int = 4, **_) -> bool:
    charges = [
        CentralCharge(((1, 1), (0, 1))),
        CentralCharge(((0, 1), (1, 1))),
    ]
    return check_wall_crossing(a2_quiver(), N, charges)
