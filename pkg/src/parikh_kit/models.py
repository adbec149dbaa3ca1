"""Parikh automata (PA), constrained automata (CA) and epsilon-CA.

A PA attaches a vector to each transition and accepts a word when some
accepting run labeled by it has its vector sum in the constraint. A CA
constrains the transition-count vector of the run directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .automata import (
    Automaton,
    Path,
    runs_parikh_image,
    words_up_to,
)
from .errors import DimensionError
from .semilinear import (
    SemilinearSet,
    Vector,
    sl_intersect,
    sl_linear_image,
    sl_linear_preimage,
    sl_member,
    sl_union,
    sl_without_zero,
    unit,
    vadd,
    vec,
    zero,
)


@dataclass(frozen=True)
class PA:
    automaton: Automaton
    vectors: tuple[Vector, ...]
    constraint: SemilinearSet

    def __post_init__(self):
        if self.automaton.has_epsilon:
            raise ValueError("PA automata are epsilon-free")
        vectors = tuple(vec(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vectors)
        if len(vectors) != len(self.automaton.transitions):
            raise DimensionError("one vector per transition is required")
        d = self.constraint.dimension
        if any(len(v) != d for v in vectors):
            raise DimensionError(f"transition vectors must have dimension {d}")

    @property
    def dimension(self) -> int:
        return self.constraint.dimension

    def vector_matrix(self) -> tuple[tuple[int, ...], ...]:
        """The d x |delta| matrix whose column t is the vector of transition t."""
        return tuple(tuple(v[k] for v in self.vectors) for k in range(self.dimension))


@dataclass(frozen=True)
class EpsCA:
    automaton: Automaton
    constraint: SemilinearSet

    def __post_init__(self):
        if self.constraint.dimension != len(self.automaton.transitions):
            raise DimensionError(
                f"constraint dimension {self.constraint.dimension} != "
                f"{len(self.automaton.transitions)} transitions"
            )


class CA(EpsCA):
    def __post_init__(self):
        super().__post_init__()
        if self.automaton.has_epsilon:
            raise ValueError("CA automata are epsilon-free; use EpsCA")


def pa_is_deterministic(M: PA) -> bool:
    pairs: dict[tuple[int, object], set] = {}
    for t in M.automaton.transitions:
        pairs.setdefault((t.src, t.label), set()).add((t.dst, M.vectors[t.id]))
    return all(len(v) <= 1 for v in pairs.values())


def _pa_sums(M: PA, w: Sequence) -> set[tuple[int, Vector]]:
    A = M.automaton
    cur = {(A.initial, zero(M.dimension))}
    for a in w:
        cur = {
            (t.dst, vadd(s, M.vectors[t.id]))
            for q, s in cur
            for t in A.outgoing[q]
            if t.label == a
        }
        if not cur:
            break
    return cur


def pa_accepts(M: PA, w: Sequence) -> bool:
    return any(
        q in M.automaton.finals and sl_member(M.constraint, s) for q, s in _pa_sums(M, tuple(w))
    )


def run_vectors(A: Automaton, w: Sequence, eps_cap: int) -> set[Vector]:
    """Distinct Parikh vectors of accepting runs labeled ``w``.

    At most ``eps_cap`` epsilon moves are taken in each gap between letters.
    """
    d = len(A.transitions)
    cur = {(A.initial, zero(d))}

    def close(layer: set) -> set:
        out = set(layer)
        frontier = layer
        for _ in range(eps_cap):
            frontier = {
                (t.dst, vadd(v, unit(d, t.id)))
                for q, v in frontier
                for t in A.outgoing[q]
                if t.is_epsilon
            } - out
            if not frontier:
                break
            out |= frontier
        return out

    cur = close(cur)
    for a in w:
        cur = close(
            {
                (t.dst, vadd(v, unit(d, t.id)))
                for q, v in cur
                for t in A.outgoing[q]
                if t.label == a and not t.is_epsilon
            }
        )
        if not cur:
            return set()
    return {v for q, v in cur if q in A.finals}


def epsilon_acyclic(A: Automaton) -> bool:
    """True when no cycle consists solely of epsilon transitions."""
    indeg = [0] * A.n_states
    eps = [t for t in A.transitions if t.is_epsilon]
    for t in eps:
        indeg[t.dst] += 1
    stack = [s for s in A.states if indeg[s] == 0]
    seen = 0
    while stack:
        s = stack.pop()
        seen += 1
        for t in A.outgoing[s]:
            if t.is_epsilon:
                indeg[t.dst] -= 1
                if indeg[t.dst] == 0:
                    stack.append(t.dst)
    return seen == A.n_states


def word_product(A: Automaton, w: Sequence) -> tuple[Automaton, tuple[int, ...]]:
    """Product of a line automaton for ``w`` with ``A``.

    Epsilon moves advance only ``A``. Returns the product restricted to
    states reachable from its initial state, and the map from product
    transition ids to ``A``'s transition ids.
    """
    w = tuple(w)
    ids = {(0, A.initial): 0}
    order = [(0, A.initial)]
    edges, origin = [], []
    i = 0
    while i < len(order):
        pos, q = order[i]
        i += 1
        for t in A.outgoing[q]:
            if t.is_epsilon:
                nxt = (pos, t.dst)
            elif pos < len(w) and t.label == w[pos]:
                nxt = (pos + 1, t.dst)
            else:
                continue
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            edges.append((ids[(pos, q)], t.label, ids[nxt]))
            origin.append(t.id)
    finals = [k for (pos, q), k in ids.items() if pos == len(w) and q in A.finals]
    P = Automaton.build(len(order), A.alphabet, edges, 0, finals, epsilon_allowed=A.epsilon_allowed)
    return P, tuple(origin)


def _accepts_by_product(M: EpsCA, w: Sequence) -> bool:
    P, origin = word_product(M.automaton, w)
    image = runs_parikh_image(P)
    if image.is_empty():
        return False
    d = len(M.automaton.transitions)
    proj = tuple(tuple(int(origin[j] == k) for j in range(len(origin))) for k in range(d))
    counts = sl_linear_image(image, proj)
    return not sl_intersect(counts, M.constraint).is_empty()


def ca_accepts(M: EpsCA, w: Sequence, method: Literal["auto", "product"] = "auto") -> bool:
    """Exact membership for CA and epsilon-CA.

    Runs are enumerated whenever that is complete: always for CA, and for
    epsilon-CA whose epsilon transitions form no cycle (an epsilon path is
    then shorter than the number of states). Otherwise, or when
    ``method="product"``, membership goes through the Parikh image of the
    product with a line automaton for ``w``.
    """
    A = M.automaton
    w = tuple(w)
    if method == "product" or (A.has_epsilon and not epsilon_acyclic(A)):
        return _accepts_by_product(M, w)
    cap = A.n_states if A.has_epsilon else 0
    return any(sl_member(M.constraint, v) for v in run_vectors(A, w, cap))


def pa_to_ca(M: PA) -> CA:
    n = len(M.automaton.transitions)
    C = sl_linear_preimage(M.constraint, M.vector_matrix(), n)
    return CA(M.automaton, C)


def ca_to_pa(M: CA) -> PA:
    n = len(M.automaton.transitions)
    return PA(M.automaton, tuple(unit(n, t) for t in range(n)), M.constraint)


def epsca_to_ca(M: EpsCA) -> CA:
    """Remove epsilon transitions from an epsilon-CA without epsilon cycles.

    Each new transition stands for an epsilon-free-labeled path: from a
    fresh initial state it is ``eps* a eps*`` out of ``q0``, elsewhere it is
    ``a eps*``. The constraint is pulled back along the Parikh vectors of
    these paths; the fresh initial state is final exactly when the empty
    word is accepted, and the zero vector is admitted accordingly.
    """
    A = M.automaton
    if not epsilon_acyclic(A):
        raise ValueError("epsilon cycles are not supported")
    d = len(A.transitions)

    def eps_paths(q: int) -> list[tuple[int, Path]]:
        out = [(q, ())]
        stack = [(q, ())]
        while stack:
            s, path = stack.pop()
            for t in A.outgoing[s]:
                if t.is_epsilon:
                    item = (t.dst, path + (t.id,))
                    out.append(item)
                    stack.append(item)
        return out

    def letter_paths(q: int) -> list[tuple[int, Path]]:
        out = []
        for t in A.outgoing[q]:
            if not t.is_epsilon:
                for end, tail in eps_paths(t.dst):
                    out.append((end, (t.id,) + tail))
        return out

    start = A.n_states
    edges, paths = [], []
    for mid, head in eps_paths(A.initial):
        for end, rest in letter_paths(mid):
            edges.append((start, A.transitions[rest[0]].label, end))
            paths.append(head + rest)
    for q in A.states:
        for end, path in letter_paths(q):
            edges.append((q, A.transitions[path[0]].label, end))
            paths.append(path)
    empty_ok = ca_accepts(M, ())
    finals = set(A.finals) | ({start} if empty_ok else set())
    B = Automaton.build(A.n_states + 1, A.alphabet, edges, start, finals, epsilon_allowed=False)
    n = len(edges)
    counts = tuple(tuple(path.count(k) for path in paths) for k in range(d))
    C = sl_without_zero(sl_linear_preimage(M.constraint, counts, n))
    if empty_ok:
        C = sl_union(C, SemilinearSet.points(n, [zero(n)]))
    return CA(B, C)


def pa_empty(M: PA) -> bool:
    image = runs_parikh_image(M.automaton)
    if image.is_empty():
        return True
    sums = sl_linear_image(image, M.vector_matrix())
    return sl_intersect(sums, M.constraint).is_empty()


def check_constraint_determinism(M: EpsCA, length_bound: int) -> bool:
    """Bounded check that equally labeled accepting runs agree on the constraint."""
    A = M.automaton
    cap = A.n_states if A.has_epsilon else 0
    for w in words_up_to(A.alphabet, length_bound):
        verdicts = {sl_member(M.constraint, v) for v in run_vectors(A, w, cap)}
        if len(verdicts) > 1:
            return False
    return True

