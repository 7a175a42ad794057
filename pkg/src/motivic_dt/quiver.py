"""Quivers, dimension vectors, Euler forms, potentials and cuts.

Path convention: an arrow sequence ``(a1, a2, ..., an)`` is walked head to
tail, ``a1`` first, so it denotes the composite ``an o ... o a1`` and acts on
representations as the matrix product ``M_an @ ... @ M_a1``.  Cycles and the
paths returned by :func:`cyclic_derivative` use this one convention.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

DimVector = tuple[int, ...]


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _arrow: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("vertex ids must be unique")
        index = {v: i for i, v in enumerate(self.vertices)}
        arrows = {}
        for a in self.arrows:
            if a.id in arrows:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            if a.source not in index or a.target not in index:
                raise QuiverError(f"arrow {a.id!r} references an unknown vertex")
            arrows[a.id] = a
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_arrow", arrows)

    @classmethod
    def from_edges(cls, vertices: Sequence, edges: Iterable[tuple]) -> "Quiver":
        """Build from ``(id, source, target)`` triples."""
        return cls(tuple(vertices), tuple(Arrow(str(i), str(s), str(t)) for i, s, t in edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex_index(self, v: str) -> int:
        return self._index[v]

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._arrow[arrow_id]
        except KeyError:
            raise QuiverError(f"unknown arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._arrow

    def endpoints(self, arrow_id: str) -> tuple[int, int]:
        a = self.arrow(arrow_id)
        return self._index[a.source], self._index[a.target]

    def arrow_pairs(self) -> list[tuple[int, int]]:
        return [(self._index[a.source], self._index[a.target]) for a in self.arrows]

    def check_dim(self, d: Sequence[int]) -> DimVector:
        d = tuple(int(x) for x in d)
        if len(d) != self.n:
            raise QuiverError(f"dimension vector {d} has length {len(d)}, expected {self.n}")
        if any(x < 0 for x in d):
            raise QuiverError(f"dimension vector {d} has negative entries")
        return d


def loop_quiver(m: int, names: Sequence[str] | None = None) -> Quiver:
    """One vertex with ``m`` loops (``x``, ``y``, ``z`` for m <= 3)."""
    if names is None:
        names = ["x", "y", "z"][:m] if m <= 3 else [f"a{i}" for i in range(m)]
    return Quiver.from_edges(["0"], [(nm, "0", "0") for nm in names])


def a2_quiver() -> Quiver:
    return Quiver.from_edges(["1", "2"], [("a", "1", "2")])


def dim_vectors(n: int, bound: int) -> list[DimVector]:
    """All dimension vectors of total degree <= bound, ordered by degree then lexicographically."""
    out = []
    for total in range(bound + 1):
        out.extend(vectors_of_degree(n, total))
    return out


def vectors_of_degree(n: int, total: int) -> list[DimVector]:
    if n == 0:
        return [()] if total == 0 else []
    if n == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in vectors_of_degree(n - 1, total - first):
            out.append((first,) + rest)
    return sorted(out)


def sub_vectors(d: DimVector) -> Iterator[DimVector]:
    return product(*(range(x + 1) for x in d))


def euler_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    if len(d) != Q.n or len(e) != Q.n:
        raise QuiverError("dimension vector length does not match the quiver")
    val = sum(x * y for x, y in zip(d, e))
    for i, j in Q.arrow_pairs():
        val -= d[i] * e[j]
    return val


def antisym_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    return euler_form(Q, d, e) - euler_form(Q, e, d)


def rep_space_weight(Q: Quiver, d: Sequence[int]) -> int:
    """Dimension of the representation space: sum of d_i d_j over arrows i -> j."""
    Q.check_dim(d)
    return sum(d[i] * d[j] for i, j in Q.arrow_pairs())


def cut_weight(Q: Quiver, cut: Iterable[str], d: Sequence[int]) -> int:
    Q.check_dim(d)
    total = 0
    for aid in cut:
        i, j = Q.endpoints(aid)
        total += d[i] * d[j]
    return total


# potentials


Path = tuple[str, ...]


def canonical_rotation(cycle: Sequence[str]) -> Path:
    cycle = tuple(cycle)
    return min(cycle[k:] + cycle[:k] for k in range(len(cycle)))


@dataclass(frozen=True)
class Potential:
    """Integer combination of cycles up to rotation; terms are merged and sorted."""

    quiver: Quiver
    terms: tuple[tuple[int, Path], ...] = ()

    def __post_init__(self):
        merged: dict[Path, int] = defaultdict(int)
        for coeff, cycle in self.terms:
            cycle = tuple(str(a) for a in cycle)
            _check_cycle(self.quiver, cycle)
            merged[canonical_rotation(cycle)] += int(coeff)
        object.__setattr__(self, "terms", tuple((c, p) for p, c in sorted(merged.items()) if c != 0))

    @classmethod
    def zero(cls, Q: Quiver) -> "Potential":
        return cls(Q, ())

    def is_zero(self) -> bool:
        return not self.terms


def _check_cycle(Q: Quiver, cycle: Path) -> None:
    if not cycle:
        raise QuiverError("potential cycles must be nonempty")
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if Q.arrow(a).target != Q.arrow(b).source:
            raise QuiverError(f"cycle {'.'.join(cycle)} is not composable at {a} -> {b}")


def cyclic_derivative(W: Potential, alpha: str) -> list[tuple[int, Path]]:
    """Formal sum of paths ``target(alpha) -> source(alpha)``, one per occurrence of ``alpha``.

    For an occurrence ``C = u alpha v`` the contribution is the path ``v u``,
    i.e. the rest of the cycle read starting just after ``alpha``.
    """
    W.quiver.arrow(alpha)
    acc: dict[Path, int] = defaultdict(int)
    for coeff, cycle in W.terms:
        for k, a in enumerate(cycle):
            if a == alpha:
                acc[cycle[k + 1:] + cycle[:k]] += coeff
    return [(c, p) for p, c in sorted(acc.items()) if c != 0]


def validate_cut(W: Potential, cut: Iterable[str]) -> bool:
    cut = set(cut)
    for a in cut:
        W.quiver.arrow(a)
    return all(sum(1 for a in cycle if a in cut) == 1 for _, cycle in W.terms)
