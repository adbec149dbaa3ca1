"""Brute-force oracles and random generators shared by the test modules.

Nothing here calls the solver or the membership DP: semilinear sets are
expanded from their generators, runs are enumerated directly.
"""

from __future__ import annotations

import itertools
import random

from parikh_kit.automata import Automaton
from parikh_kit.bsl import BslLanguage, Socle, decompositions
from parikh_kit.semilinear import LinearSet, SemilinearSet


def expand_linear(L: LinearSet, bound: int) -> set[tuple[int, ...]]:
    """Points of ``L`` with every coordinate at most ``bound``."""
    if any(x > bound for x in L.base):
        return set()
    seen = {L.base}
    stack = [L.base]
    while stack:
        x = stack.pop()
        for p in L.periods:
            y = tuple(a + b for a, b in zip(x, p))
            if y not in seen and all(c <= bound for c in y):
                seen.add(y)
                stack.append(y)
    return seen


def expand(S: SemilinearSet, bound: int) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    for L in S.components:
        out |= expand_linear(L, bound)
    return out


def box(d: int, bound: int):
    return itertools.product(range(bound + 1), repeat=d)


def matvec(M, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in M)


def random_linear(rng: random.Random, d: int, max_entry: int = 3, max_periods: int = 2) -> LinearSet:
    base = tuple(rng.randint(0, max_entry) for _ in range(d))
    periods = tuple(
        tuple(rng.randint(0, max_entry) for _ in range(d)) for _ in range(rng.randint(0, max_periods))
    )
    return LinearSet(base, periods)


def random_semilinear(rng: random.Random, d: int, max_components: int = 2, **kw) -> SemilinearSet:
    return SemilinearSet(d, tuple(random_linear(rng, d, **kw) for _ in range(rng.randint(1, max_components))))


def random_word(rng: random.Random, letters: str, lo: int, hi: int) -> str:
    return "".join(rng.choice(letters) for _ in range(rng.randint(lo, hi)))


def random_bsl(rng: random.Random, max_n: int = 3, max_len: int = 3, letters: str = "ab") -> BslLanguage:
    n = rng.randint(1, max_n)
    socle = Socle([random_word(rng, letters, 1, max_len) for _ in range(n)])
    return BslLanguage(socle, random_semilinear(rng, n, max_components=2, max_entry=3))


def unambiguous(socle: Socle, bound: int) -> bool:
    """Every exponent tuple up to ``bound`` spells a word with a single decomposition."""
    for e in box(len(socle), bound):
        w = tuple(a for word, k in zip(socle.words, e) for a in word * k)
        if len(decompositions(socle, w)) != 1:
            return False
    return True


def random_dfa(rng: random.Random, n: int, letters: str = "ab", density: float = 0.6) -> Automaton:
    edges = []
    for s in range(n):
        for a in letters:
            if rng.random() < density:
                edges.append((s, a, rng.randrange(n)))
    finals = [s for s in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    return Automaton.build(n, tuple(letters), edges, 0, finals)


def random_nfa(rng: random.Random, n: int, letters: str = "ab", eps: bool = True) -> Automaton:
    edges = []
    for _ in range(rng.randint(n, 3 * n)):
        a = "" if eps and rng.random() < 0.2 else rng.choice(letters)
        edges.append((rng.randrange(n), a, rng.randrange(n)))
    finals = [s for s in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    return Automaton.build(n, tuple(letters), edges, 0, finals, epsilon_allowed=eps)


def nfa_accepts(A: Automaton, w) -> bool:
    """Direct simulation with explicit epsilon saturation."""

    def sat(states):
        states = set(states)
        changed = True
        while changed:
            changed = False
            for t in A.transitions:
                if t.label == "" and t.src in states and t.dst not in states:
                    states.add(t.dst)
                    changed = True
        return states

    cur = sat({A.initial})
    for a in w:
        cur = sat({t.dst for t in A.transitions if t.src in cur and t.label == a})
    return bool(cur & A.finals)


def runs_by_length(A: Automaton, max_len: int):
    """Accepting epsilon-free runs of at most ``max_len`` transitions."""
    out = []
    layer = [(A.initial, ())]
    for k in range(max_len + 1):
        out.extend(path for q, path in layer if q in A.finals)
        if k == max_len:
            break
        layer = [(t.dst, path + (t.id,)) for q, path in layer for t in A.transitions if t.src == q]
    return out


def random_functional_matrix(rng: random.Random, d: int):
    """0-1 matrix with at most one 1 per row; such matrices generate a finite monoid."""
    rows = []
    for _ in range(d):
        k = rng.randrange(d + 1)
        rows.append(tuple(int(j == k) for j in range(d)))
    return tuple(rows)


def random_branch(rng: random.Random, n_trans: int, max_loops: int = 3):
    """A normalized branch over transition ids ``0..n_trans-1`` (no host automaton)."""
    from parikh_kit.flatten import Branch

    def path(lo, hi):
        return tuple(rng.randrange(n_trans) for _ in range(rng.randint(lo, hi)))

    n = rng.randint(0, max_loops) if n_trans > 1 else 0
    pairs = []
    for i in range(n):
        x = path(1, 2)
        y = path(1 if i < n - 1 else 0, 2)
        while y and y[0] == x[0]:
            y = path(1, 2)
        pairs.append((x, y))
    return Branch(path(0, 2), tuple(pairs))
