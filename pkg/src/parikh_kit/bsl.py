"""Bounded semilinear languages: socles, iteration sets, canonical epsilon-CA.

A language ``L`` with ``L <= w1* ... wn*`` is described by its socle
``(w1, ..., wn)`` and its iteration set, the exponent tuples ``(i1..in)``
with ``w1^i1 ... wn^in`` in ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import Automaton, runs_parikh_image, subset_automaton
from .errors import DimensionError, SocleViolation
from .models import PA, EpsCA, pa_empty
from .semilinear import (
    SemilinearSet,
    sl_intersect,
    sl_linear_image,
    sl_linear_preimage,
    sl_member,
    sl_product,
    unit,
    vadd,
    zero,
)

Word = tuple


@dataclass(frozen=True)
class Socle:
    words: tuple[Word, ...]

    def __post_init__(self):
        words = tuple(tuple(w) for w in self.words)
        if not words or any(len(w) == 0 for w in words):
            raise ValueError("a socle is a nonempty list of nonempty words")
        object.__setattr__(self, "words", words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @property
    def letters(self) -> tuple:
        return tuple(sorted({a for w in self.words for a in w}))


@dataclass(frozen=True)
class BslLanguage:
    socle: Socle
    iteration_set: SemilinearSet

    def __post_init__(self):
        if not isinstance(self.socle, Socle):
            object.__setattr__(self, "socle", Socle(self.socle))
        if self.iteration_set.dimension != len(self.socle):
            raise DimensionError("iteration set dimension must equal the socle length")

    def to_dict(self) -> dict:
        return {
            "socle": ["".join(map(str, w)) for w in self.socle],
            "iteration_set": self.iteration_set.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> BslLanguage:
        return cls(Socle(data["socle"]), SemilinearSet.from_dict(data["iteration_set"]))


def decompositions(socle: Socle, w: Sequence) -> list[tuple[int, ...]]:
    """Every exponent tuple ``e`` with ``w = w1^e1 ... wn^en``."""
    w = tuple(w)
    words = socle.words
    out = []

    def go(i: int, pos: int, exps: tuple[int, ...]) -> None:
        if i == len(words):
            if pos == len(w):
                out.append(exps)
            return
        u = words[i]
        k = 0
        while True:
            go(i + 1, pos + k * len(u), exps + (k,))
            end = pos + (k + 1) * len(u)
            if end > len(w) or w[end - len(u) : end] != u:
                break
            k += 1

    go(0, 0, ())
    return out


def bsl_member(B: BslLanguage, w: Sequence) -> bool:
    return any(sl_member(B.iteration_set, e) for e in decompositions(B.socle, w))


def _cycle_layout(socle: Socle) -> tuple[list[tuple[int, str, int]], list[int], int, int]:
    """Edges of the canonical automaton, the ids of the cycle heads, state count, final."""
    edges: list[tuple[int, object, int]] = []
    heads = []
    starts = []
    k = 0
    for w in socle.words:
        starts.append(k)
        k += len(w)
    for i, w in enumerate(socle.words):
        s = starts[i]
        heads.append(len(edges))
        for j, a in enumerate(w):
            dst = s + j + 1 if j + 1 < len(w) else s
            edges.append((s + j, a, dst))
        if i + 1 < len(socle):
            edges.append((s, "", starts[i + 1]))
    return edges, heads, k, starts[-1]


def socle_automaton(socle: Socle, alphabet: Iterable | None = None) -> Automaton:
    """Epsilon-automaton for ``w1* ... wn*``."""
    edges, _, n, final = _cycle_layout(socle)
    letters = tuple(alphabet) if alphabet is not None else socle.letters
    return Automaton.build(n, letters, edges, 0, [final], epsilon_allowed=True)


def canonical_epsca(B: BslLanguage, alphabet: Iterable | None = None) -> EpsCA:
    """The canonical epsilon-CA: one cycle per socle word, chained by epsilon moves.

    The constraint reads the counts of the first transition of every cycle
    through the iteration set; every other coordinate is free.
    """
    socle = B.socle
    letters = tuple(alphabet) if alphabet is not None else socle.letters
    edges, heads, n, final = _cycle_layout(socle)
    A = Automaton.build(n, letters, edges, 0, [final], epsilon_allowed=True)
    m = len(edges)
    proj = tuple(tuple(int(j == h) for j in range(m)) for h in heads)
    C = sl_linear_preimage(B.iteration_set, proj, m)
    return EpsCA(A, C)


def cycle_heads(socle: Socle) -> list[int]:
    """Transition ids of the first transition of each cycle in the canonical automaton."""
    return _cycle_layout(socle)[1]


def _complement_dfa(socle: Socle, alphabet: tuple) -> Automaton:
    sub = subset_automaton(socle_automaton(socle, alphabet)).automaton
    sink = sub.n_states
    edges = [(t.src, t.label, t.dst) for t in sub.transitions]
    have = {(t.src, t.label) for t in sub.transitions}
    for s in range(sink + 1):
        for a in alphabet:
            if (s, a) not in have:
                edges.append((s, a, sink))
    finals = [s for s in range(sink + 1) if s not in sub.finals]
    return Automaton.build(sink + 1, alphabet, edges, sub.initial, finals)


def _pa_product(M: PA, D: Automaton) -> PA:
    """Product of ``M`` with a deterministic automaton ``D``, keeping ``M``'s vectors."""
    A = M.automaton
    step = {(t.src, t.label): t.dst for t in D.transitions}
    ids = {(A.initial, D.initial): 0}
    order = [(A.initial, D.initial)]
    edges, vectors = [], []
    i = 0
    while i < len(order):
        q, s = order[i]
        i += 1
        for t in A.outgoing[q]:
            s2 = step.get((s, t.label))
            if s2 is None:
                continue
            nxt = (t.dst, s2)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            edges.append((ids[(q, s)], t.label, ids[nxt]))
            vectors.append(M.vectors[t.id])
    finals = [k for (q, s), k in ids.items() if q in A.finals and s in D.finals]
    P = Automaton.build(len(order), A.alphabet, edges, 0, finals, epsilon_allowed=False)
    return PA(P, tuple(vectors), M.constraint)


def pa_socle_check(M: PA, S: Socle) -> bool:
    """Decide ``L(M) <= w1* ... wn*``."""
    alphabet = tuple(dict.fromkeys(tuple(M.automaton.alphabet) + S.letters))
    witness = _pa_product(M, _complement_dfa(S, alphabet))
    if not witness.automaton.finals:
        return True
    return pa_empty(witness)


def pa_iteration_set(M: PA, S: Socle, check: bool = True) -> SemilinearSet:
    """The iteration set of ``L(M)`` with respect to the socle ``S``.

    Each socle word becomes a fresh letter; a transition on letter ``i``
    summarizes one path of ``M`` reading ``w_i``. Restricting to the order
    ``a1* ... an*`` and reading off letter counts of runs whose vector sum
    lies in the constraint yields the iteration set.
    """
    if check and not pa_socle_check(M, S):
        raise SocleViolation("the language is not contained in the socle's product of stars")
    A = M.automaton
    n, d = len(S), M.dimension

    # summarized transitions (q, i, q', vector), deduplicated
    summaries: set[tuple[int, int, int, tuple]] = set()
    for i, w in enumerate(S.words):
        for q in A.states:
            layer = {(q, zero(d))}
            for a in w:
                layer = {
                    (t.dst, vadd(v, M.vectors[t.id]))
                    for s, v in layer
                    for t in A.outgoing[s]
                    if t.label == a
                }
            for q2, v in layer:
                summaries.add((q, i, q2, v))
    by_src: dict[int, list] = {}
    for item in sorted(summaries):
        by_src.setdefault(item[0], []).append(item)

    # product with the order automaton a1* ... an* (block index never decreases)
    ids = {(A.initial, 0): 0}
    order = [(A.initial, 0)]
    edges, vectors, letters = [], [], []
    k = 0
    while k < len(order):
        q, j = order[k]
        k += 1
        for _, i, q2, v in by_src.get(q, ()):
            if i < j:
                continue
            nxt = (q2, i)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            edges.append((ids[(q, j)], i, ids[nxt]))
            vectors.append(v)
            letters.append(i)
    finals = [idx for (q, j), idx in ids.items() if q in A.finals]
    P = Automaton.build(len(order), tuple(range(n)), edges, 0, finals, epsilon_allowed=False)

    runs = runs_parikh_image(P)
    m = len(edges)
    joint = tuple(tuple(vectors[t][r] for t in range(m)) for r in range(d)) + tuple(
        tuple(int(letters[t] == i) for t in range(m)) for i in range(n)
    )
    pairs = sl_linear_image(runs, joint)
    accepted = sl_intersect(pairs, sl_product(M.constraint, SemilinearSet.full(n)))
    select = tuple(unit(d + n, d + i) for i in range(n))
    return sl_linear_image(accepted, select)
