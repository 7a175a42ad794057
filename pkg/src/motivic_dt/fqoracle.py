"""Brute-force point counts of quiver representation varieties over F_q.

Only tiny instances are in reach; the counts are an independent check on
motivic classes that are polynomial in L.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .motive import Motive, MotiveError, eval_at_L, is_integral_in_L
from .quiver import DimVector, Potential, Quiver, cyclic_derivative, validate_cut

MAX_SEARCH = 10 ** 8
_CHUNK = 1 << 16


class OracleError(ValueError):
    pass


class BudgetError(OracleError):
    """The brute-force search would exceed the enumeration cap."""


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


@dataclass(frozen=True)
class CountRequest:
    quiver: Quiver
    d: DimVector
    q: int
    potential: Potential | None = None
    cut: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "d", self.quiver.check_dim(self.d))
        object.__setattr__(self, "cut", tuple(self.cut))
        if not _is_prime(self.q) or self.q > 5:
            raise OracleError(f"q = {self.q} must be a prime <= 5")
        for a in self.cut:
            self.quiver.arrow(a)
        if self.potential is not None and not validate_cut(self.potential, self.cut):
            raise OracleError("cut is not valid for the potential")
        if self.search_size() > MAX_SEARCH:
            raise BudgetError(f"search space needs {self.search_size()} tuples, cap is {MAX_SEARCH}")

    def free_arrows(self) -> list[str]:
        return [a.id for a in self.quiver.arrows if a.id not in self.cut]

    def shape(self, arrow_id: str) -> tuple[int, int]:
        """Matrix shape (rows, cols) = (d_target, d_source)."""
        i, j = self.quiver.endpoints(arrow_id)
        return self.d[j], self.d[i]

    def search_size(self) -> int:
        size = 1
        for a in self.free_arrows():
            r, c = self.shape(a)
            size *= self.q ** (r * c)
        return size


def _relations(req: CountRequest) -> list[tuple[int, list[tuple[int, tuple[str, ...]]]]]:
    """For each cut arrow: (vertex where the empty path sits, cyclic derivative terms)."""
    if req.potential is None:
        return []
    out = []
    for a in req.cut:
        i, j = req.quiver.endpoints(a)
        out.append((j, cyclic_derivative(req.potential, a)))
    return out


def _count_block(req: CountRequest, start: int, stop: int) -> int:
    q = req.q
    arrows = req.free_arrows()
    shapes = [req.shape(a) for a in arrows]
    sizes = [r * c for r, c in shapes]
    total_entries = sum(sizes)
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), total_entries), dtype=np.int64)
    rem = idx.copy()
    for k in range(total_entries):
        digits[:, k] = rem % q
        rem //= q
    mats = {}
    pos = 0
    for a, (r, c), s in zip(arrows, shapes, sizes):
        mats[a] = digits[:, pos:pos + s].reshape(len(idx), r, c)
        pos += s
    ok = np.ones(len(idx), dtype=bool)
    for vertex, terms in _relations(req):
        if not terms:
            continue
        acc = None
        for coeff, path in terms:
            if path:
                m = mats[path[0]]
                for b in path[1:]:
                    m = np.matmul(mats[b], m) % q
            else:
                n = req.d[vertex]
                m = np.broadcast_to(np.eye(n, dtype=np.int64), (len(idx), n, n))
            term = (coeff * m) % q
            acc = term if acc is None else (acc + term) % q
        ok &= ~acc.reshape(len(idx), -1).any(axis=1)
    return int(ok.sum())


def count_representations(req: CountRequest, jobs: int = 1) -> int:
    """Number of F_q-points of the relation variety (all tuples when there is no potential)."""
    for a in req.cut:
        if req.potential is not None:
            for _, path in cyclic_derivative(req.potential, a):
                if any(b in req.cut for b in path):
                    raise OracleError("relations must not involve cut arrows")
    total = req.search_size()
    if not _relations(req):
        return total
    bounds = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]
    if jobs > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            counts = pool.map(_count_block, [req] * len(bounds), *zip(*bounds))
            return sum(counts)
    return sum(_count_block(req, s, e) for s, e in bounds)


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def count_gl(n: int, q: int) -> int:
    """|GL_n(F_q)| by enumerating all n x n matrices."""
    if n < 0 or not _is_prime(q):
        raise OracleError("need n >= 0 and q prime")
    if n == 0:
        return 1
    if q ** (n * n) > MAX_SEARCH:
        raise OracleError("GL enumeration exceeds the search cap")
    count = 0
    for entries in product(range(q), repeat=n * n):
        rows = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if _rank_mod_p(rows, q) == n:
            count += 1
    return count


def verify_motive_count(motive: Motive, req: CountRequest, jobs: int = 1) -> bool:
    if not is_integral_in_L(motive):
        raise MotiveError(f"{motive} is not a function of L; cannot compare with point counts")
    return eval_at_L(motive, req.q) == Fraction(count_representations(req, jobs))
