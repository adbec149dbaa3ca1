"""Deterministic affine Parikh automata.

Each transition carries an affine map ``x -> M x + v``; a run starts from
the zero vector and applies the maps in order. Composition ``f . g`` means
apply ``f`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .automata import Automaton, is_deterministic, subset_automaton
from .config import current_limits
from .errors import ConstraintDeterminismUnverified, DimensionError, MonoidCapExceeded
from .models import EpsCA, ca_accepts, check_constraint_determinism
from .semilinear import (
    IntMatrix,
    LinearSet,
    SemilinearSet,
    Vector,
    identity,
    matvec,
    sl_union,
    unit,
    vadd,
    vec,
    zero,
)


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


@dataclass(frozen=True)
class AffineFn:
    M: IntMatrix
    v: Vector

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.M)
        v = vec(self.v)
        if len(M) != len(v) or any(len(row) != len(v) for row in M):
            raise DimensionError("affine maps must be square with a matching offset")
        if any(x < 0 for row in M for x in row):
            raise ValueError("affine maps must be nonnegative")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "v", v)

    @property
    def dimension(self) -> int:
        return len(self.v)

    def __call__(self, x: Sequence[int]) -> Vector:
        return vadd(matvec(self.M, x), self.v)

    @classmethod
    def identity(cls, d: int) -> AffineFn:
        return cls(identity(d), zero(d))


def affine_compose(f: AffineFn, g: AffineFn) -> AffineFn:
    """``f`` then ``g``: ``x -> g(f(x))``."""
    return AffineFn(matmul(g.M, f.M), vadd(matvec(g.M, f.v), g.v))


def path_function(U: Sequence[AffineFn], path: Sequence[int], d: int) -> AffineFn:
    f = AffineFn.identity(d)
    for t in path:
        f = affine_compose(f, U[t])
    return f


@dataclass(frozen=True)
class DetAPA:
    automaton: Automaton
    U: tuple[AffineFn, ...]
    constraint: SemilinearSet
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        U = tuple(self.U)
        object.__setattr__(self, "U", U)
        if not is_deterministic(self.automaton):
            raise ValueError("the underlying automaton must be deterministic")
        if len(U) != len(self.automaton.transitions):
            raise DimensionError("one affine map per transition is required")
        d = self.constraint.dimension
        if any(f.dimension != d for f in U):
            raise DimensionError(f"affine maps must have dimension {d}")

    @property
    def dimension(self) -> int:
        return self.constraint.dimension

    def run(self, w: Sequence) -> tuple[int, ...] | None:
        """The transition path read on ``w``, or ``None`` if it blocks."""
        step = {(t.src, t.label): t for t in self.automaton.transitions}
        q = self.automaton.initial
        path = []
        for a in w:
            t = step.get((q, a))
            if t is None:
                return None
            path.append(t.id)
            q = t.dst
        return tuple(path)


def apa_value(M: DetAPA, w: Sequence) -> Vector | None:
    """The vector reached on ``w`` if the run ends in a final state."""
    path = M.run(tuple(w))
    if path is None:
        return None
    A = M.automaton
    end = A.transitions[path[-1]].dst if path else A.initial
    if end not in A.finals:
        return None
    x = zero(M.dimension)
    for t in path:
        x = M.U[t](x)
    return x


def apa_accepts(M: DetAPA, w: Sequence) -> bool:
    x = apa_value(M, w)
    return x is not None and x in M.constraint


def monoid_closure(M: DetAPA, cap: int | None = None) -> frozenset[IntMatrix]:
    """The monoid generated by the transition matrices, identity included."""
    if cap is None:
        cap = current_limits().monoid_cap
    gens = sorted({f.M for f in M.U})
    seen = {identity(M.dimension)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for X in frontier:
            for G in gens:
                Y = matmul(G, X)
                if Y not in seen:
                    seen.add(Y)
                    if len(seen) > cap:
                        raise MonoidCapExceeded(f"transition monoid exceeds {cap} elements")
                    nxt.append(Y)
        frontier = nxt
    return frozenset(seen)


def epsca_to_detapa(
    M: EpsCA, cd_bound: int | None = None, trusted: bool = False
) -> DetAPA:
    """Determinize an epsilon-CA into a deterministic affine PA.

    The vector space has one block of ``|delta|`` coordinates per state of
    ``M`` and a last coordinate holding ``1 + min(final states in the
    subset)`` (0 when there is none). Along a subset transition, block ``q``
    receives a copy of the block of the witness predecessor plus the
    transition counts of the chosen shortest path. Acceptance checks the
    block of the final state recorded in the last coordinate.

    The construction is sound only if ``M``'s constraint is deterministic;
    unless ``trusted`` this is checked on words up to ``cd_bound``.
    """
    if cd_bound is None:
        cd_bound = current_limits().cd_bound
    if not trusted and not check_constraint_determinism(M, cd_bound):
        raise ConstraintDeterminismUnverified(
            f"accepting runs disagree on the constraint for some word of length <= {cd_bound}"
        )
    A = M.automaton
    sub = subset_automaton(A)
    nd = len(A.transitions)
    D = A.n_states * nd + 1
    last = D - 1
    finals = sorted(A.finals)

    U = []
    for t in sub.automaton.transitions:
        pbar, qbar = sub.subsets[t.src], sub.subsets[t.dst]
        rows = [[0] * D for _ in range(D)]
        v = [0] * D
        for q in qbar:
            p = sub.witness(pbar, q, t.label)
            for e in range(nd):
                rows[q * nd + e][p * nd + e] = 1
            for e in sub.paths[(p, q, t.label)]:
                v[q * nd + e] += 1
        hit = [q for q in finals if q in qbar]
        v[last] = hit[0] + 1 if hit else 0
        U.append(AffineFn(tuple(map(tuple, rows)), tuple(v)))

    components = []
    for q in finals:
        free = [unit(D, k) for k in range(last) if not q * nd <= k < (q + 1) * nd]
        for comp in M.constraint.components:
            base = [0] * D
            base[q * nd : (q + 1) * nd] = comp.base
            base[last] = q + 1
            periods = [
                tuple([0] * (q * nd) + list(p) + [0] * (D - (q + 1) * nd)) for p in comp.periods
            ]
            components.append(LinearSet(tuple(base), tuple(periods + free)))
    E = SemilinearSet(D, components)
    if ca_accepts(M, ()):
        E = sl_union(E, SemilinearSet.points(D, [zero(D)]))
    provenance = {"subsets": sub.subsets, "cd_bound": cd_bound, "trusted": trusted}
    return DetAPA(sub.automaton, tuple(U), E, provenance)
