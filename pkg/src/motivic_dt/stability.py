"""Rational central charges, exact slope order and bounded genericity checks.

A charge assigns ``zeta_i = a_i + b_i * sqrt(-1)`` with rational parts to each
vertex, lying in the extended upper half plane (``b > 0``, or ``b = 0`` and
``a < 0``).  Slopes are never turned into numbers: comparing two rays is the
sign of a 2x2 determinant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Sequence

from .quiver import DimVector, Quiver, antisym_form, dim_vectors


class StabilityError(ValueError):
    pass


class Order(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _in_half_plane(a: Fraction, b: Fraction) -> bool:
    return b > 0 or (b == 0 and a < 0)


@dataclass(frozen=True)
class CentralCharge:
    values: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        vals = tuple((Fraction(a), Fraction(b)) for a, b in self.values)
        for i, (a, b) in enumerate(vals):
            if not _in_half_plane(a, b):
                raise StabilityError(f"charge at vertex {i} is {a} + {b}i, outside the upper half plane")
        object.__setattr__(self, "values", vals)

    @classmethod
    def king(cls, theta: Sequence) -> "CentralCharge":
        """King charge ``zeta_i = -theta_i + sqrt(-1)``."""
        return cls(tuple((-Fraction(t), Fraction(1)) for t in theta))

    @classmethod
    def trivial(cls, n: int) -> "CentralCharge":
        return cls.king([0] * n)

    def __len__(self) -> int:
        return len(self.values)


def charge(zeta: CentralCharge, d: Sequence[int]) -> tuple[Fraction, Fraction]:
    if len(d) != len(zeta):
        raise StabilityError("dimension vector length does not match the charge")
    if not any(d):
        raise StabilityError("the charge of the zero vector has no argument")
    re = sum((a * x for (a, _), x in zip(zeta.values, d)), Fraction(0))
    im = sum((b * x for (_, b), x in zip(zeta.values, d)), Fraction(0))
    return re, im


@total_ordering
@dataclass(frozen=True)
class SlopeKey:
    """Primitive integer direction ``(p, q)`` of a ray in the upper half plane.

    Keys are ordered by argument, i.e. by slope.
    """

    p: int
    q: int

    def _cross(self, other: "SlopeKey") -> int:
        return self.p * other.q - self.q * other.p

    def __lt__(self, other: "SlopeKey") -> bool:
        # arg(self) < arg(other) iff other is counterclockwise from self
        return self._cross(other) > 0

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def _ray(re: Fraction, im: Fraction) -> SlopeKey:
    den = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
    p, q = int(re * den), int(im * den)
    g = gcd(abs(p), q)
    return SlopeKey(p // g, q // g)


def slope_key(zeta: CentralCharge, d: Sequence[int]) -> SlopeKey:
    return _ray(*charge(zeta, d))


def slope_compare(zeta: CentralCharge, d: Sequence[int], e: Sequence[int]) -> Order:
    kd, ke = slope_key(zeta, d), slope_key(zeta, e)
    if kd == ke:
        return Order.EQUAL
    return Order.LESS if kd < ke else Order.GREATER


def rays(zeta: CentralCharge, bound: int) -> dict[SlopeKey, list[DimVector]]:
    """Nonzero dimension vectors with ``|d| <= bound`` grouped by ray."""
    groups: dict[SlopeKey, list[DimVector]] = {}
    for d in dim_vectors(len(zeta), bound)[1:]:
        groups.setdefault(slope_key(zeta, d), []).append(d)
    return groups


def is_generic(zeta: CentralCharge, Q: Quiver, bound: int) -> bool:
    """Check genericity on all dimension vectors of total degree <= bound.

    Genericity is a condition on all of N^Q0; this is a necessary test only.
    """
    if bound < 1:
        raise StabilityError("bound must be positive")
    if len(zeta) != Q.n:
        raise StabilityError("charge length does not match the quiver")
    for vecs in rays(zeta, bound).values():
        for i, d in enumerate(vecs):
            for e in vecs[i + 1:]:
                if antisym_form(Q, d, e) != 0:
                    return False
    return True
