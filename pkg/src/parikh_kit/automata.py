"""Finite (epsilon-)automata whose transitions carry stable integer ids.

Runs are words over transition ids, so transition ids double as the
coordinate system of every constraint set. Any construction that renames
transitions reports the renaming explicitly.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import networkx as nx

from .config import current_limits
from .diophantine import solve_nonneg_system
from .errors import SupportEnumerationCapExceeded
from .semilinear import LinearSet, SemilinearSet, unit, vadd, zero

EPSILON = ""

Letter = Hashable
Path = tuple[int, ...]


@dataclass(frozen=True)
class Transition:
    id: int
    src: int
    label: Letter
    dst: int

    @property
    def is_epsilon(self) -> bool:
        return self.label == EPSILON


@dataclass(frozen=True)
class Automaton:
    n_states: int
    alphabet: tuple
    transitions: tuple[Transition, ...]
    initial: int = 0
    finals: frozenset = frozenset()
    epsilon_allowed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        n = self.n_states
        if n < 1:
            raise ValueError("an automaton needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise ValueError("final state out of range")
        letters = set(self.alphabet)
        for i, t in enumerate(self.transitions):
            if t.id != i:
                raise ValueError(f"transition ids must be 0..{len(self.transitions) - 1}")
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise ValueError(f"transition {t} leaves the state space")
            if t.is_epsilon:
                if not self.epsilon_allowed:
                    raise ValueError("epsilon transition in an epsilon-free automaton")
            elif t.label not in letters:
                raise ValueError(f"label {t.label!r} not in alphabet")

    @classmethod
    def build(
        cls,
        n_states: int,
        alphabet: Iterable,
        edges: Iterable[tuple[int, Letter, int]],
        initial: int = 0,
        finals: Iterable[int] = (),
        epsilon_allowed: bool | None = None,
    ) -> Automaton:
        """Create an automaton, numbering ``edges`` in the given order."""
        trans = tuple(Transition(i, s, a, t) for i, (s, a, t) in enumerate(edges))
        if epsilon_allowed is None:
            epsilon_allowed = any(t.is_epsilon for t in trans)
        return cls(n_states, tuple(alphabet), trans, initial, frozenset(finals), epsilon_allowed)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def __len__(self) -> int:
        return len(self.transitions)

    @cached_property
    def outgoing(self) -> tuple[tuple[Transition, ...], ...]:
        out: list[list[Transition]] = [[] for _ in range(self.n_states)]
        for t in self.transitions:
            out[t.src].append(t)
        return tuple(tuple(ts) for ts in out)

    @cached_property
    def has_epsilon(self) -> bool:
        return any(t.is_epsilon for t in self.transitions)

    def label(self, path: Sequence[int]) -> tuple:
        return tuple(self.transitions[t].label for t in path if not self.transitions[t].is_epsilon)

    def parikh(self, path: Sequence[int]) -> tuple[int, ...]:
        counts = [0] * len(self.transitions)
        for t in path:
            counts[t] += 1
        return tuple(counts)

    def is_path(self, path: Sequence[int]) -> bool:
        return all(
            self.transitions[a].dst == self.transitions[b].src for a, b in zip(path, path[1:])
        )

    def is_accepting(self, path: Sequence[int]) -> bool:
        if not path:
            return self.initial in self.finals
        return (
            self.is_path(path)
            and self.transitions[path[0]].src == self.initial
            and self.transitions[path[-1]].dst in self.finals
        )

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.states)
        for t in self.transitions:
            g.add_edge(t.src, t.dst, key=t.id)
        return g


# -- words and runs -------------------------------------------------------------


def words_up_to(alphabet: Sequence, max_len: int) -> Iterator[tuple]:
    """All words of length at most ``max_len`` in length-lexicographic order."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def epsilon_closure(A: Automaton, states: Iterable[int]) -> frozenset:
    seen = set(states)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for t in A.outgoing[s]:
            if t.is_epsilon and t.dst not in seen:
                seen.add(t.dst)
                stack.append(t.dst)
    return frozenset(seen)


def accepts_word(A: Automaton, w: Sequence) -> bool:
    """Plain language membership, ignoring any constraint."""
    cur = epsilon_closure(A, [A.initial])
    for a in w:
        step = {t.dst for s in cur for t in A.outgoing[s] if t.label == a}
        cur = epsilon_closure(A, step)
        if not cur:
            return False
    return bool(cur & A.finals)


def accepting_runs(A: Automaton, w: Sequence, eps_cap: int = 0) -> list[Path]:
    """Accepting paths labeled ``w`` using at most ``eps_cap`` epsilon moves per gap.

    A gap is the stretch before the first letter, between two letters, or
    after the last one. For epsilon-free automata the result is complete.
    """
    w = tuple(w)
    out: list[Path] = []
    path: list[int] = []

    def go(state: int, pos: int, eps_used: int) -> None:
        if pos == len(w) and state in A.finals:
            out.append(tuple(path))
        for t in A.outgoing[state]:
            if t.is_epsilon:
                if eps_used < eps_cap:
                    path.append(t.id)
                    go(t.dst, pos, eps_used + 1)
                    path.pop()
            elif pos < len(w) and t.label == w[pos]:
                path.append(t.id)
                go(t.dst, pos + 1, 0)
                path.pop()

    go(A.initial, 0, 0)
    return out


def runs_up_to(A: Automaton, max_len: int) -> list[Path]:
    """Every accepting path with at most ``max_len`` transitions."""
    out: list[Path] = []
    frontier: list[tuple[int, Path]] = [(A.initial, ())]
    for _ in range(max_len + 1):
        nxt = []
        for state, path in frontier:
            if state in A.finals:
                out.append(path)
            for t in A.outgoing[state]:
                nxt.append((t.dst, path + (t.id,)))
        frontier = nxt
    return out


# -- structural predicates ------------------------------------------------------


def is_deterministic(A: Automaton) -> bool:
    seen = set()
    for t in A.transitions:
        if t.is_epsilon or (t.src, t.label) in seen:
            return False
        seen.add((t.src, t.label))
    return True


def _scc_of(A: Automaton) -> tuple[list[frozenset], dict[int, int]]:
    comps = [frozenset(c) for c in nx.strongly_connected_components(A.graph())]
    where = {s: i for i, c in enumerate(comps) for s in c}
    return comps, where


def _is_simple_cycle(A: Automaton, comp: frozenset, internal: list[Transition]) -> bool:
    if len(internal) != len(comp):
        return False
    outs = {s: 0 for s in comp}
    ins = {s: 0 for s in comp}
    for t in internal:
        outs[t.src] += 1
        ins[t.dst] += 1
    return all(outs[s] == 1 and ins[s] == 1 for s in comp)


def is_flat(A: Automaton) -> bool:
    """Structural flatness: a spine of states with disjoint simple loops.

    Every state must be reachable; each strongly connected component is a
    single state without a loop or a simple cycle; components form a chain
    with exactly one transition between consecutive ones; the unique final
    state lies in the last component.
    """
    if len(A.finals) != 1:
        return False
    reach = reachable(A, A.initial)
    if len(reach) != A.n_states:
        return False
    comps, where = _scc_of(A)
    internal: dict[int, list[Transition]] = {i: [] for i in range(len(comps))}
    leaving: dict[int, list[Transition]] = {i: [] for i in range(len(comps))}
    for t in A.transitions:
        a, b = where[t.src], where[t.dst]
        (internal if a == b else leaving)[a].append(t)
    for i, comp in enumerate(comps):
        if len(comp) == 1 and not internal[i]:
            continue
        if not _is_simple_cycle(A, comp, internal[i]):
            return False
    # follow the chain of components from the initial one
    cur = where[A.initial]
    visited = 1
    while leaving[cur]:
        if len(leaving[cur]) != 1:
            return False
        cur = where[leaving[cur][0].dst]
        visited += 1
    if visited != len(comps):
        return False
    (final,) = A.finals
    return where[final] == cur


def reachable(A: Automaton, start: int) -> set[int]:
    """States reachable from ``start``, epsilon moves included."""
    seen = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for t in A.outgoing[s]:
            if t.dst not in seen:
                seen.add(t.dst)
                stack.append(t.dst)
    return seen


def coreachable(A: Automaton, targets: Iterable[int]) -> set[int]:
    incoming: list[list[int]] = [[] for _ in A.states]
    for t in A.transitions:
        incoming[t.dst].append(t.src)
    seen = set(targets)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for p in incoming[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


@dataclass(frozen=True)
class Trimmed:
    """An automaton restricted to its useful states, with the renaming used."""

    automaton: Automaton
    state_map: dict[int, int]  # old state -> new state
    transition_map: tuple[int, ...]  # new transition id -> old transition id


def trim(A: Automaton, finals: Iterable[int] | None = None) -> Trimmed | None:
    """Keep states both reachable and co-reachable; ``None`` if nothing is left."""
    finals = A.finals if finals is None else frozenset(finals) & A.finals
    useful = reachable(A, A.initial) & coreachable(A, finals)
    if A.initial not in useful:
        return None
    order = sorted(useful)
    smap = {s: i for i, s in enumerate(order)}
    kept = [t for t in A.transitions if t.src in useful and t.dst in useful]
    B = Automaton.build(
        len(order),
        A.alphabet,
        [(smap[t.src], t.label, smap[t.dst]) for t in kept],
        smap[A.initial],
        [smap[f] for f in finals if f in useful],
        epsilon_allowed=A.epsilon_allowed,
    )
    return Trimmed(B, smap, tuple(t.id for t in kept))


# -- shortest labeled paths and the subset construction -------------------------


def _distances_to(A: Automaton, q: int, a: Letter) -> dict[tuple[int, int], int]:
    """BFS distances to ``(q, after-letter)`` in the two-phase path graph."""
    incoming: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for t in A.transitions:
        if t.is_epsilon:
            for phase in (0, 1):
                incoming.setdefault((t.dst, phase), []).append((t.src, phase))
        elif t.label == a:
            incoming.setdefault((t.dst, 1), []).append((t.src, 0))
    dist = {(q, 1): 0}
    queue = deque([(q, 1)])
    while queue:
        node = queue.popleft()
        for prev in incoming.get(node, ()):
            if prev not in dist:
                dist[prev] = dist[node] + 1
                queue.append(prev)
    return dist


def _greedy_path(A: Automaton, p: int, a: Letter, dist: dict) -> Path | None:
    node = (p, 0)
    if node not in dist:
        return None
    path = []
    while dist[node] > 0:
        state, phase = node
        best = None
        for t in A.outgoing[state]:
            if t.is_epsilon:
                nxt = (t.dst, phase)
            elif phase == 0 and t.label == a:
                nxt = (t.dst, 1)
            else:
                continue
            if dist.get(nxt) == dist[node] - 1 and (best is None or t.id < best[0]):
                best = (t.id, nxt)
        path.append(best[0])
        node = best[1]
    return tuple(path)


def shortest_labeled_path(A: Automaton, p: int, q: int, a: Letter) -> Path | None:
    """Shortest ``p -> q`` path labeled exactly ``a``, least transition ids on ties."""
    return _greedy_path(A, p, a, _distances_to(A, q, a))


def labeled_path_table(A: Automaton) -> dict[tuple[int, int, Letter], Path]:
    """``S(p, q, a)`` for every defined triple."""
    table = {}
    for a in A.alphabet:
        for q in A.states:
            dist = _distances_to(A, q, a)
            for p in A.states:
                path = _greedy_path(A, p, a, dist)
                if path is not None:
                    table[(p, q, a)] = path
    return table


@dataclass(frozen=True)
class SubsetAutomaton:
    automaton: Automaton
    subsets: tuple[frozenset, ...]
    paths: dict = field(repr=False)  # (p, q, a) -> shortest labeled path

    def index(self, subset: Iterable[int]) -> int:
        return self.subsets.index(frozenset(subset))

    def witness(self, pbar: Iterable[int], q: int, a: Letter) -> int | None:
        """Smallest ``p`` in ``pbar`` with a path ``p -> q`` labeled ``a``."""
        cands = [p for p in pbar if (p, q, a) in self.paths]
        return min(cands) if cands else None


def subset_automaton(A: Automaton) -> SubsetAutomaton:
    """Deterministic automaton over the reachable nonempty subsets of ``A``'s states.

    The initial subset is ``{q0}``; it is final when ``q0`` reaches a final
    state through epsilon moves, so the empty word is kept.
    """
    paths = labeled_path_table(A)
    succ: dict[tuple[int, Letter], set[int]] = {}
    for p, q, a in paths:
        succ.setdefault((p, a), set()).add(q)
    start = frozenset([A.initial])
    subsets = [start]
    ids = {start: 0}
    edges = []
    queue = deque([start])
    while queue:
        pbar = queue.popleft()
        for a in A.alphabet:
            qbar = frozenset(q for p in pbar for q in succ.get((p, a), ()))
            if not qbar:
                continue
            if qbar not in ids:
                ids[qbar] = len(subsets)
                subsets.append(qbar)
                queue.append(qbar)
            edges.append((ids[pbar], a, ids[qbar]))
    finals = {i for i, s in enumerate(subsets) if s & A.finals}
    if epsilon_closure(A, [A.initial]) & A.finals:
        finals.add(0)
    B = Automaton.build(len(subsets), A.alphabet, edges, 0, finals, epsilon_allowed=False)
    return SubsetAutomaton(B, tuple(subsets), paths)


# -- Parikh image of the run language --------------------------------------------


def _internal_image(
    A: Automaton, comp: frozenset, internal: list[Transition], p: int, q: int
) -> list[LinearSet]:
    """Parikh images of paths ``p -> q`` staying inside one component."""
    d = len(A.transitions)
    out: list[LinearSet] = []
    if p == q:
        out.append(LinearSet(zero(d)))
    if not internal:
        return out
    cap = current_limits().support_cap
    if len(internal) > cap:
        raise SupportEnumerationCapExceeded(
            f"component with {len(internal)} transitions exceeds the support cap {cap}"
        )
    states = sorted(comp)
    for r in range(1, len(internal) + 1):
        for T in itertools.combinations(internal, r):
            g = nx.Graph()
            g.add_nodes_from([p, q])
            g.add_edges_from((t.src, t.dst) for t in T)
            touched = {t.src for t in T} | {t.dst for t in T}
            if p not in touched or q not in touched or not nx.is_connected(g):
                continue
            # x_t = 1 + y_t on the support; balance: in - out = [s=q] - [s=p]
            A_rows, b = [], []
            for s in states:
                row = [(t.dst == s) - (t.src == s) for t in T]
                A_rows.append(row)
                b.append((s == q) - (s == p) - sum(row))
            sol = solve_nonneg_system(A_rows, b)
            ones = [0] * d
            for t in T:
                ones[t.id] = 1
            for m in sol.minimal:
                base = list(ones)
                for t, v in zip(T, m):
                    base[t.id] += v
                periods = []
                for h in sol.basis:
                    per = [0] * d
                    for t, v in zip(T, h):
                        per[t.id] += v
                    periods.append(tuple(per))
                out.append(LinearSet(tuple(base), tuple(periods)))
    return out


def runs_parikh_image(A: Automaton, final_restriction: Iterable[int] | None = None) -> SemilinearSet:
    """The set of transition-count vectors of accepting paths.

    Labels are ignored, so epsilon-automata are handled like any other.
    Paths are split along the strongly connected components they cross;
    inside a component the Parikh images are the balanced, connected flows
    of each support set.
    """
    d = len(A.transitions)
    finals = A.finals if final_restriction is None else A.finals & frozenset(final_restriction)
    useful = reachable(A, A.initial) & coreachable(A, finals)
    if A.initial not in useful:
        return SemilinearSet.empty(d)
    comps, where = _scc_of(A)
    internal: dict[int, list[Transition]] = {}
    bridges: dict[int, list[Transition]] = {}
    for t in A.transitions:
        if t.src not in useful or t.dst not in useful:
            continue
        if where[t.src] == where[t.dst]:
            internal.setdefault(where[t.src], []).append(t)
        else:
            bridges.setdefault(t.src, []).append(t)
    memo: dict[tuple[int, int], list[LinearSet]] = {}

    def inside(p: int, q: int) -> list[LinearSet]:
        if (p, q) not in memo:
            c = where[p]
            memo[(p, q)] = _internal_image(A, comps[c], internal.get(c, []), p, q)
        return memo[(p, q)]

    result: list[LinearSet] = []

    def walk(entry: int, partial: list[LinearSet]) -> None:
        comp = comps[where[entry]]
        for u in sorted(comp & useful):
            piece = inside(entry, u)
            if not piece:
                continue
            combined = [
                LinearSet(vadd(a.base, b.base), a.periods + b.periods)
                for a in partial
                for b in piece
            ]
            if u in finals:
                result.extend(combined)
            for t in bridges.get(u, ()):
                shift = unit(d, t.id)
                walk(t.dst, [LinearSet(vadd(c.base, shift), c.periods) for c in combined])

    walk(A.initial, [LinearSet(zero(d))])
    return SemilinearSet(d, tuple(result))
