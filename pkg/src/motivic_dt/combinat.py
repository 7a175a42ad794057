"""Cyclic orbits of compositions, Moebius function, central binomials.

Enumeration here is exhaustive on purpose: these routines serve as an
independent check on the series computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator


@dataclass(frozen=True)
class CyclicOrbit:
    representative: tuple[int, ...]
    size: int
    min_degree: int


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to ``total`` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def rotations(a: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [a[k:] + a[:k] for k in range(len(a))]


def is_primitive(a: tuple[int, ...]) -> bool:
    """Trivial stabilizer under cyclic rotation."""
    return all(a[k:] + a[:k] != a for k in range(1, len(a)))


def is_almost_primitive(a: tuple[int, ...], m: int) -> bool:
    d = len(a)
    if is_primitive(a):
        return True
    if m % 2 == 0 and d % 4 == 2:
        half = d // 2
        return a[:half] == a[half:] and is_primitive(a[:half])
    return False


def degree(a: tuple[int, ...]) -> int:
    d = len(a)
    return sum((d - i) * x for i, x in enumerate(a, start=1))


def almost_primitive_tuples(m: int, d: int) -> list[tuple[int, ...]]:
    return [a for a in compositions((m - 1) * d, d) if is_almost_primitive(a, m)]


def almost_primitive_orbits(m: int, d: int) -> list[CyclicOrbit]:
    """C_d-orbits on almost primitive tuples in N^d with entries summing to (m-1)d."""
    if d < 1:
        raise ValueError("d must be positive")
    if m < 1:
        raise ValueError("m must be positive")
    seen: dict[tuple[int, ...], CyclicOrbit] = {}
    for a in almost_primitive_tuples(m, d):
        rots = set(rotations(a))
        rep = min(rots)
        if rep not in seen:
            seen[rep] = CyclicOrbit(rep, len(rots), min(degree(r) for r in rots))
    return [seen[k] for k in sorted(seen)]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("Moebius function is defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def central_binomial(n: int) -> int:
    return comb(2 * n, n)


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]
