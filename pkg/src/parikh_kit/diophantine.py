"""Minimal nonnegative solutions of integer linear systems ``A x = b``.

The solver is the Contejean-Devie completion procedure. The inhomogeneous
case is reduced to the homogeneous system ``[A | -b] (x, z) = 0`` with the
extra variable ``z`` capped at 1: minimal solutions with ``z = 1`` are the
minimal solutions of ``A x = b``, those with ``z = 0`` form the Hilbert
basis of ``A x = 0``. Every solution of ``A x = b`` is then a minimal
solution plus a nonnegative combination of basis vectors.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .config import current_limits
from .errors import DimensionError, SolverCapExceeded

Vector = tuple[int, ...]


class Solutions(NamedTuple):
    minimal: tuple[Vector, ...]
    basis: tuple[Vector, ...]


def _dominates(y: Vector, found: list[Vector]) -> bool:
    for s in found:
        if all(si <= yi for si, yi in zip(s, y)):
            return True
    return False


def solve_nonneg_system(
    A: Sequence[Sequence[int]], b: Sequence[int], cap: int | None = None
) -> Solutions:
    """Solve ``A x = b`` over the nonnegative integers.

    Returns the minimal solutions and the Hilbert basis of the homogeneous
    system, both sorted. Raises :class:`SolverCapExceeded` once more than
    ``cap`` candidate vectors have been explored.
    """
    if cap is None:
        cap = current_limits().solver_cap
    rows = [tuple(int(v) for v in row) for row in A]
    b = tuple(int(v) for v in b)
    if len(rows) != len(b):
        raise DimensionError(f"{len(rows)} rows but right-hand side of length {len(b)}")
    n = len(rows[0]) if rows else 0
    if any(len(row) != n for row in rows):
        raise DimensionError("ragged matrix")
    if not rows:
        # no equations: every vector solves
        basis = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
        return Solutions(((0,) * n,), tuple(sorted(basis)))

    homogeneous = not any(b)
    # drop 0 = 0 rows; a row 0 = b_i != 0 survives and kills every z = 1 candidate
    keep = [i for i, row in enumerate(rows) if any(row) or b[i]]
    rows = [rows[i] for i in keep]
    b = tuple(b[i] for i in keep)

    width = n if homogeneous else n + 1
    cols = [tuple(row[j] for row in rows) for j in range(n)]
    if not homogeneous:
        cols.append(tuple(-v for v in b))
    z = n  # index of the inhomogeneous column when present

    # gram[j][k] = <c_j, c_k>; each candidate keeps its residual r and <r, c_j> for all j
    gram = [[sum(a * b for a, b in zip(cj, ck)) for ck in cols] for cj in cols]
    found: list[Vector] = []
    explored = 0
    frontier: dict[Vector, tuple[Vector, list[int]]] = {}
    for j in range(width):
        x = tuple(int(i == j) for i in range(width))
        frontier[x] = (cols[j], gram[j])
    while frontier:
        nxt: dict[Vector, tuple[Vector, list[int]]] = {}
        solved_now: list[Vector] = []
        for x, (r, _) in frontier.items():
            explored += 1
            if explored > cap:
                raise SolverCapExceeded(
                    f"explored more than {cap} candidates on a {len(rows)}x{n} system"
                )
            if not any(r):
                solved_now.append(x)
        found.extend(solved_now)
        for x, (r, dots) in frontier.items():
            if not any(r):
                continue
            for j in range(width):
                if dots[j] >= 0:
                    continue
                if not homogeneous and j == z and x[z] >= 1:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1 :]
                if y in nxt or _dominates(y, found):
                    continue
                g = gram[j]
                nxt[y] = (
                    tuple(ri + ci for ri, ci in zip(r, cols[j])),
                    [a + b for a, b in zip(dots, g)],
                )
        frontier = nxt

    if homogeneous:
        basis = sorted(found)
        return Solutions(((0,) * n,), tuple(basis))
    minimal = sorted(x[:n] for x in found if x[z] == 1)
    basis = sorted(x[:n] for x in found if x[z] == 0)
    return Solutions(tuple(minimal), tuple(basis))
