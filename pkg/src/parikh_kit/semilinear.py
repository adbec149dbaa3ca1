"""Linear and semilinear subsets of N^d in generator form.

A linear set is ``base + periods*``; a semilinear set is a finite union of
linear sets of a common dimension. Only the generator representation is
supported, so complement (and hence exact equality) is unavailable; use
:func:`sl_equal_up_to` for bounded comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .diophantine import Vector, solve_nonneg_system
from .errors import DimensionError

IntMatrix = tuple[tuple[int, ...], ...]


def vec(values: Iterable[int]) -> Vector:
    out = tuple(int(v) for v in values)
    if any(v < 0 for v in out):
        raise ValueError(f"vector {out} has a negative entry")
    return out


def zero(d: int) -> Vector:
    return (0,) * d


def unit(d: int, k: int) -> Vector:
    return tuple(int(i == k) for i in range(d))


def vadd(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    out = tuple(tuple(int(v) for v in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionError("ragged matrix")
    if any(v < 0 for r in out for v in r):
        raise ValueError("matrices must be nonnegative")
    return out


def matvec(M: IntMatrix, x: Vector) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, x) if a) for row in M)


def identity(d: int) -> IntMatrix:
    return tuple(unit(d, i) for i in range(d))


@dataclass(frozen=True)
class LinearSet:
    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        base = vec(self.base)
        periods = sorted({vec(p) for p in self.periods if any(p)})
        if any(len(p) != len(base) for p in periods):
            raise DimensionError("period and base dimensions differ")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(periods))

    @property
    def dimension(self) -> int:
        return len(self.base)

    def __contains__(self, x) -> bool:
        return linear_member(self, tuple(x))


@dataclass(frozen=True)
class SemilinearSet:
    dimension: int
    components: tuple[LinearSet, ...] = ()

    def __post_init__(self):
        comps = []
        seen = set()
        for c in self.components:
            if not isinstance(c, LinearSet):
                c = LinearSet(*c)
            if c.dimension != self.dimension:
                raise DimensionError(
                    f"component of dimension {c.dimension} in a set of dimension {self.dimension}"
                )
            if c not in seen:
                seen.add(c)
                comps.append(c)
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def empty(cls, d: int) -> SemilinearSet:
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> SemilinearSet:
        return cls(d, (LinearSet(zero(d), tuple(unit(d, k) for k in range(d))),))

    @classmethod
    def points(cls, d: int, pts: Iterable[Sequence[int]]) -> SemilinearSet:
        return cls(d, tuple(LinearSet(tuple(p)) for p in pts))

    def is_empty(self) -> bool:
        return not self.components

    def __contains__(self, x) -> bool:
        return sl_member(self, tuple(x))

    def to_dict(self) -> dict:
        return {
            "dim": self.dimension,
            "components": [
                {"base": list(c.base), "periods": [list(p) for p in c.periods]}
                for c in self.components
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> SemilinearSet:
        d = int(data["dim"])
        comps = [
            LinearSet(tuple(c["base"]), tuple(tuple(p) for p in c.get("periods", [])))
            for c in data.get("components", [])
        ]
        return cls(d, tuple(comps))


def _check_dim(S: SemilinearSet, d: int) -> None:
    if S.dimension != d:
        raise DimensionError(f"expected dimension {d}, got {S.dimension}")


# -- membership ---------------------------------------------------------------


def linear_member(L: LinearSet, x: Vector) -> bool:
    d = len(x)
    r = tuple(xi - ci for xi, ci in zip(x, L.base))
    if any(v < 0 for v in r):
        return False
    units = set()
    others = []
    for p in L.periods:
        nz = [k for k in range(d) if p[k]]
        if len(nz) == 1 and p[nz[0]] == 1:
            units.add(nz[0])
        else:
            others.append(p)
    # coordinates some period from index j on can still change
    touched = [set(units) for _ in range(len(others) + 1)]
    for j in range(len(others) - 1, -1, -1):
        touched[j] = touched[j + 1] | {k for k in range(d) if others[j][k]}
    memo: dict[tuple[int, Vector], bool] = {}

    def rec(j: int, r: Vector) -> bool:
        if any(r[k] for k in range(d) if k not in touched[j]):
            return False
        if j == len(others):
            return True
        key = (j, r)
        if key in memo:
            return memo[key]
        p = others[j]
        cur = r
        ok = False
        while True:
            if rec(j + 1, cur):
                ok = True
                break
            cur = tuple(a - b for a, b in zip(cur, p))
            if any(v < 0 for v in cur):
                break
        memo[key] = ok
        return ok

    return rec(0, r)


def sl_member(S: SemilinearSet, x: Sequence[int]) -> bool:
    x = tuple(x)
    if len(x) != S.dimension:
        raise DimensionError(f"vector of length {len(x)} tested against dimension {S.dimension}")
    return any(linear_member(c, x) for c in S.components)


# -- Boolean and linear operations --------------------------------------------


def sl_union(S1: SemilinearSet, S2: SemilinearSet) -> SemilinearSet:
    _check_dim(S2, S1.dimension)
    return SemilinearSet(S1.dimension, S1.components + S2.components)


def sl_union_all(d: int, sets: Iterable[SemilinearSet]) -> SemilinearSet:
    comps: list[LinearSet] = []
    for S in sets:
        _check_dim(S, d)
        comps.extend(S.components)
    return SemilinearSet(d, tuple(comps))


def _solve_projected(
    A: list[list[int]], b: list[int], ncols: int, keep: Sequence[int]
) -> tuple[list[Vector], list[Vector]]:
    """Solve ``A y = b`` and project the solution set onto ``keep``.

    Rows whose only other variable is a discarded unit slack that can always
    absorb the difference are removed first; this is exact and keeps the
    block-free constraints produced by the pipeline small.
    """
    keep_set = set(keep)
    rows = set(range(len(A)))
    cols = set(range(ncols))
    changed = True
    while changed:
        changed = False
        for j in sorted(cols - keep_set):
            nz = [i for i in rows if A[i][j]]
            if not nz:
                cols.discard(j)
                changed = True
                break
            if len(nz) != 1 or A[nz[0]][j] not in (1, -1):
                continue
            i = nz[0]
            others = [A[i][k] for k in cols if k != j]
            if A[i][j] == -1:
                ok = all(v >= 0 for v in others) and b[i] <= 0
            else:
                ok = all(v <= 0 for v in others) and b[i] >= 0
            if ok:
                rows.discard(i)
                cols.discard(j)
                changed = True
                break
    col_order = sorted(cols)
    row_order = sorted(rows)
    sub = [[A[i][j] for j in col_order] for i in row_order]
    rhs = [b[i] for i in row_order]
    if not sub:
        sol_min = [zero(len(col_order))]
        sol_basis = [unit(len(col_order), k) for k in range(len(col_order))]
    else:
        sol = solve_nonneg_system(sub, rhs)
        sol_min, sol_basis = list(sol.minimal), list(sol.basis)
    pos = {j: k for k, j in enumerate(col_order)}

    def project(y: Vector) -> Vector:
        return tuple(y[pos[j]] if j in pos else 0 for j in keep)

    basis = sorted({project(h) for h in sol_basis} - {zero(len(keep))})
    minimal = sorted({project(m) for m in sol_min})
    # drop minimal points already generated by another one
    if basis:
        pruned: list[Vector] = []
        for m in minimal:
            if not any(
                o != m and linear_member(LinearSet(o, tuple(basis)), m) for o in minimal
            ):
                pruned.append(m)
        minimal = pruned
    return minimal, basis


def _lin_combo(vectors: Sequence[Vector], coeffs: Vector, d: int) -> Vector:
    out = [0] * d
    for v, c in zip(vectors, coeffs):
        if c:
            for k in range(d):
                out[k] += c * v[k]
    return tuple(out)


def _intersect_linear(L1: LinearSet, L2: LinearSet) -> list[LinearSet]:
    d = L1.dimension
    if not L1.periods:
        return [L1] if linear_member(L2, L1.base) else []
    if not L2.periods:
        return [L2] if linear_member(L1, L2.base) else []
    if len(L2.periods) < len(L1.periods):
        L1, L2 = L2, L1
    P1, P2 = L1.periods, L2.periods
    # L1.base + P1 lam = L2.base + P2 mu ; keep lam
    A = [[p[k] for p in P1] + [-q[k] for q in P2] for k in range(d)]
    b = [L2.base[k] - L1.base[k] for k in range(d)]
    minimal, basis = _solve_projected(A, b, len(P1) + len(P2), range(len(P1)))
    periods = tuple(_lin_combo(P1, h, d) for h in basis)
    return [LinearSet(vadd(L1.base, _lin_combo(P1, m, d)), periods) for m in minimal]


def sl_intersect(S1: SemilinearSet, S2: SemilinearSet) -> SemilinearSet:
    _check_dim(S2, S1.dimension)
    comps: list[LinearSet] = []
    for L1 in S1.components:
        for L2 in S2.components:
            comps.extend(_intersect_linear(L1, L2))
    return SemilinearSet(S1.dimension, tuple(comps))


def sl_linear_image(S: SemilinearSet, M: Sequence[Sequence[int]]) -> SemilinearSet:
    """Image of ``S`` under ``x -> M x`` for a nonnegative matrix ``M``."""
    M = matrix(M)
    if M and len(M[0]) != S.dimension:
        raise DimensionError(f"matrix has {len(M[0])} columns, set has dimension {S.dimension}")
    comps = [
        LinearSet(matvec(M, c.base), tuple(matvec(M, p) for p in c.periods))
        for c in S.components
    ]
    return SemilinearSet(len(M), tuple(comps))


def sl_linear_preimage(S: SemilinearSet, M: Sequence[Sequence[int]], n: int) -> SemilinearSet:
    """All ``x`` in N^n with ``M x`` in ``S``."""
    M = matrix(M)
    if len(M) != S.dimension or any(len(row) != n for row in M):
        raise DimensionError(f"matrix must be {S.dimension}x{n}")
    comps: list[LinearSet] = []
    for c in S.components:
        P = c.periods
        A = [list(M[k]) + [-p[k] for p in P] for k in range(S.dimension)]
        minimal, basis = _solve_projected(A, list(c.base), n + len(P), range(n))
        comps.extend(LinearSet(m, tuple(basis)) for m in minimal)
    return SemilinearSet(n, tuple(comps))


def sl_sum(S1: SemilinearSet, S2: SemilinearSet) -> SemilinearSet:
    """Minkowski sum."""
    _check_dim(S2, S1.dimension)
    comps = [
        LinearSet(vadd(a.base, b.base), a.periods + b.periods)
        for a in S1.components
        for b in S2.components
    ]
    return SemilinearSet(S1.dimension, tuple(comps))


def sl_product(S1: SemilinearSet, S2: SemilinearSet) -> SemilinearSet:
    """Cartesian product ``S1 x S2`` in N^(d1+d2)."""
    d1, d2 = S1.dimension, S2.dimension
    comps = [
        LinearSet(
            a.base + b.base,
            tuple(p + zero(d2) for p in a.periods) + tuple(zero(d1) + q for q in b.periods),
        )
        for a in S1.components
        for b in S2.components
    ]
    return SemilinearSet(d1 + d2, tuple(comps))


def sl_without_zero(S: SemilinearSet) -> SemilinearSet:
    """``S`` minus the zero vector, still in generator form."""
    comps: list[LinearSet] = []
    for c in S.components:
        if any(c.base):
            comps.append(c)
        else:
            comps.extend(LinearSet(p, c.periods) for p in c.periods)
    return SemilinearSet(S.dimension, tuple(comps))


# -- enumeration --------------------------------------------------------------


def sl_enumerate(S: SemilinearSet, bound: int) -> set[Vector]:
    """Every member of ``S`` whose coordinates are all at most ``bound``."""
    if S.is_empty():
        return set()
    return {
        x
        for x in itertools.product(range(bound + 1), repeat=S.dimension)
        if sl_member(S, x)
    }


def sl_equal_up_to(S1: SemilinearSet, S2: SemilinearSet, bound: int) -> bool:
    _check_dim(S2, S1.dimension)
    return sl_enumerate(S1, bound) == sl_enumerate(S2, bound)
