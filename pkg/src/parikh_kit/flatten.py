"""Boundedness, run-language expressions and flattening into flat DetCA.

The pipeline turns a bounded PA into a finite union of flat deterministic
constrained automata: iteration set, canonical epsilon-CA, deterministic
affine PA, then one flat DetCA per branch of the run language and per
choice of loop offsets below the eventual period of each loop matrix.
"""

from __future__ import annotations

import contextlib
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .apa import DetAPA, epsca_to_detapa, matmul, path_function
from .automata import Automaton, Path, _is_simple_cycle, _scc_of, is_deterministic, is_flat, trim
from .bsl import BslLanguage, Socle, canonical_epsca, pa_iteration_set
from .config import current_limits
from .errors import MonoidCapExceeded, NotBoundedError, ParikhKitError
from .models import CA, PA, ca_accepts
from .semilinear import IntMatrix, SemilinearSet, Vector, identity, matvec, sl_linear_preimage, vadd, zero


# -- words ----------------------------------------------------------------------


def primitive_root(w: Sequence) -> tuple:
    w = tuple(w)
    if not w:
        raise ValueError("the empty word has no primitive root")
    n = len(w)
    for k in range(1, n + 1):
        if n % k == 0 and w[:k] * (n // k) == w:
            return w[:k]
    raise AssertionError("unreachable")


def common_root(u: Sequence, v: Sequence) -> tuple | None:
    """The word ``z`` with ``u, v`` both powers of ``z``, or ``None``."""
    ru, rv = primitive_root(u), primitive_root(v)
    return ru if ru == rv else None


# -- boundedness of regular languages ---------------------------------------------


@dataclass(frozen=True)
class NotBounded:
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass
class _Shape:
    trimmed: Automaton
    tmap: tuple[int, ...]  # trimmed transition id -> original id
    comps: list[frozenset]
    where: dict[int, int]
    cyclic: list[bool]
    internal: dict[int, list]
    order: list[int]  # topological order of components


def _shape(A: Automaton) -> _Shape | NotBounded | None:
    T = trim(A)
    if T is None:
        return None
    B = T.automaton
    comps, where = _scc_of(B)
    internal: dict[int, list] = {i: [] for i in range(len(comps))}
    for t in B.transitions:
        if where[t.src] == where[t.dst]:
            internal[where[t.src]].append(t)
    cyclic = []
    for i, comp in enumerate(comps):
        if len(comp) == 1 and not internal[i]:
            cyclic.append(False)
        elif _is_simple_cycle(B, comp, internal[i]):
            cyclic.append(True)
        else:
            return NotBounded(f"states {sorted(comp)} carry two distinct cycles")
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(comps)))
    dag.add_edges_from((where[t.src], where[t.dst]) for t in B.transitions if where[t.src] != where[t.dst])
    order = list(nx.lexicographical_topological_sort(dag, key=lambda i: min(comps[i])))
    return _Shape(B, T.transition_map, comps, where, cyclic, internal, order)


def _cycle_from(B: Automaton, internal: list, s: int) -> list:
    """Transitions of the simple cycle through ``s``, starting at ``s``."""
    nxt = {t.src: t for t in internal}
    out, q = [], s
    while True:
        t = nxt[q]
        out.append(t)
        q = t.dst
        if q == s:
            return out


def _entries(shape: _Shape, i: int) -> list[int]:
    B = shape.trimmed
    ent = {t.dst for t in B.transitions if shape.where[t.dst] == i and shape.where[t.src] != i}
    if shape.where[B.initial] == i:
        ent.add(B.initial)
    return sorted(ent)


def bounded_socle_of_regular(A: Automaton) -> Socle | NotBounded:
    """A socle ``w1 .. wn`` with ``L(A) <= w1* ... wn*``, or ``NotBounded``.

    The trimmed automaton must consist of singletons and simple cycles.
    Components are visited in topological order; each contributes the
    rotations of its cycle at every entry state, then every word leading
    from an entry state to an exit transition or a final state.
    """
    shape = _shape(A)
    if shape is None:
        return Socle(((A.alphabet[0],),)) if A.alphabet else NotBounded("empty alphabet")
    if isinstance(shape, NotBounded):
        return shape
    B = shape.trimmed
    words: list[tuple] = []
    for i in shape.order:
        rotations, exits = [], []
        for p in _entries(shape, i):
            walk = _cycle_from(B, shape.internal[i], p) if shape.cyclic[i] else []
            if walk:
                rotations.append(B.label(t.id for t in walk))
            states = [p] + [t.dst for t in walk[:-1]]
            for k, u in enumerate(states):
                sigma = B.label(t.id for t in walk[:k])
                for t in B.outgoing[u]:
                    if shape.where[t.dst] != i:
                        exits.append(sigma + (t.label,))
                if u in B.finals and sigma:
                    exits.append(sigma)
        for w in list(dict.fromkeys(rotations)) + list(dict.fromkeys(exits)):
            if not words or words[-1] != w:
                words.append(w)
    if not words:
        # only the empty word is accepted
        return Socle(((A.alphabet[0],),)) if A.alphabet else NotBounded("empty alphabet")
    return Socle(tuple(words))


# -- run-language expressions -------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """``y0 x1* y1 ... xn* yn`` over transition ids."""

    y0: Path
    pairs: tuple[tuple[Path, Path], ...]

    def __post_init__(self):
        object.__setattr__(self, "y0", tuple(self.y0))
        pairs = tuple((tuple(x), tuple(y)) for x, y in self.pairs)
        if any(not x for x, _ in pairs):
            raise ValueError("loops must be nonempty")
        object.__setattr__(self, "pairs", pairs)

    @property
    def loops(self) -> tuple[Path, ...]:
        return tuple(x for x, _ in self.pairs)

    def instantiate(self, exps: Sequence[int]) -> Path:
        out = list(self.y0)
        for (x, y), e in zip(self.pairs, exps):
            out.extend(x * e)
            out.extend(y)
        return tuple(out)

    def is_normalized(self) -> bool:
        n = len(self.pairs)
        for i, (x, y) in enumerate(self.pairs, start=1):
            if i < n and not y:
                return False
            if y and x[0] == y[0]:
                return False
        return True


@dataclass(frozen=True)
class Slre:
    branches: tuple[Branch, ...]

    def paths_up_to(self, max_len: int) -> set[Path]:
        """All paths of length at most ``max_len`` in the expression's language."""
        out = set()
        for b in self.branches:
            base = len(b.y0) + sum(len(y) for _, y in b.pairs)

            def go(i: int, budget: int, exps: tuple) -> None:
                if i == len(b.pairs):
                    out.add(b.instantiate(exps))
                    return
                step = len(b.pairs[i][0])
                for e in range(budget // step + 1):
                    go(i + 1, budget - e * step, exps + (e,))

            if base <= max_len:
                go(0, max_len - base, ())
        return out


def _normalize(branch: Branch) -> Branch:
    ys = [list(branch.y0)] + [list(y) for _, y in branch.pairs]
    xs = [None] + [list(x) for x, _ in branch.pairs]
    while True:
        n = len(xs) - 1
        for i in range(n, 0, -1):
            while ys[i] and xs[i][0] == ys[i][0]:
                k = 0
                while k < len(xs[i]) and k < len(ys[i]) and xs[i][k] == ys[i][k]:
                    k += 1
                zeta = xs[i][:k]
                ys[i - 1].extend(zeta)
                xs[i] = xs[i][k:] + zeta
                ys[i] = ys[i][k:]
        gap = next((i for i in range(1, n) if not ys[i]), None)
        if gap is None:
            break
        z = common_root(xs[gap], xs[gap + 1])
        if z is None:
            raise NotBoundedError("adjacent loops on one state without a common root")
        # X x_i* x_{i+1}* Y  is widened to  X z* Y, still inside the run language
        xs[gap : gap + 2] = [list(z)]
        ys[gap : gap + 2] = [ys[gap + 1]]
    return Branch(tuple(ys[0]), tuple((tuple(x), tuple(y)) for x, y in zip(xs[1:], ys[1:])))


def runs_slre(A: Automaton) -> Slre:
    """A normalized expression for the accepting runs of a bounded DFA."""
    if not is_deterministic(A):
        raise ValueError("runs_slre needs a deterministic epsilon-free automaton")
    shape = _shape(A)
    if shape is None:
        return Slre(())
    if isinstance(shape, NotBounded):
        raise NotBoundedError(shape.reason)
    B, tmap = shape.trimmed, shape.tmap
    raw: list[tuple[Path, list]] = []

    def emit(y0: list, pairs: list, pending: list) -> None:
        if pairs:
            pairs = pairs[:-1] + [(pairs[-1][0], tuple(pending))]
            raw.append((tuple(y0), pairs))
        else:
            raw.append((tuple(pending), []))

    def explore(s: int, y0: list, pairs: list, pending: list) -> None:
        i = shape.where[s]
        if shape.cyclic[i]:
            walk = _cycle_from(B, shape.internal[i], s)
            if pairs:
                pairs = pairs[:-1] + [(pairs[-1][0], tuple(pending))]
            else:
                y0 = list(pending)
            pairs = pairs + [(tuple(t.id for t in walk), ())]
            states = [s] + [t.dst for t in walk[:-1]]
            for k, u in enumerate(states):
                sigma = [t.id for t in walk[:k]]
                if u in B.finals:
                    emit(y0, pairs, sigma)
                for t in B.outgoing[u]:
                    if shape.where[t.dst] != i:
                        explore(t.dst, y0, pairs, sigma + [t.id])
        else:
            if s in B.finals:
                emit(y0, pairs, pending)
            for t in B.outgoing[s]:
                explore(t.dst, y0, pairs, pending + [t.id])

    explore(B.initial, [], [], [])

    def lift(path: Sequence[int]) -> Path:
        return tuple(tmap[t] for t in path)

    branches = []
    for y0, pairs in raw:
        b = Branch(lift(y0), tuple((lift(x), lift(y)) for x, y in pairs))
        branches.append(_normalize(b))
    return Slre(tuple(branches))


def run_language_up_to(A: Automaton, max_len: int) -> set[Path]:
    """Accepting runs of an epsilon-free automaton of length at most ``max_len``."""
    out = set()
    layer = {(A.initial, ())}
    for k in range(max_len + 1):
        out |= {path for q, path in layer if q in A.finals}
        if k == max_len:
            break
        layer = {(t.dst, path + (t.id,)) for q, path in layer for t in A.outgoing[q]}
    return out


# -- eventual periods and flattening --------------------------------------------------


def branch_periods(
    branch: Branch, U: Sequence, d: int | None = None, cap: int | None = None
) -> list[tuple[int, int]]:
    """Minimal ``(p, r)`` with ``M^p = M^(p+r)`` for each loop matrix ``M``."""
    if cap is None:
        cap = current_limits().monoid_cap
    if d is None:
        d = U[0].dimension if U else 0
    out = []
    for x in branch.loops:
        M = path_function(U, x, d).M
        seen = {}
        P, k = M, 1
        while P not in seen:
            if k > cap:
                raise MonoidCapExceeded(f"powers of a loop matrix exceed {cap} elements")
            seen[P] = k
            P = matmul(M, P)
            k += 1
        p = seen[P]
        out.append((p, k - p))
    return out


def _power(M: IntMatrix, k: int) -> IntMatrix:
    out = identity(len(M))
    for _ in range(k):
        out = matmul(M, out)
    return out


@dataclass(frozen=True)
class BranchVectors:
    """Vector bookkeeping for one offset choice ``a`` of a branch."""

    prefix: Vector
    entry: tuple[Vector, ...]
    loop: tuple[Vector, ...]
    connector: tuple[Vector, ...]

    def total(self, multiples: Sequence[int]) -> Vector:
        """Value of the run taking each loop ``multiples[i]`` extra times."""
        x = self.prefix
        for e, l, c, m in zip(self.entry, self.loop, self.connector, multiples):
            x = vadd(vadd(x, e), vadd(c, tuple(m * v for v in l)))
        return x


def branch_vectors(
    branch: Branch, U: Sequence, d: int, offsets: Sequence[int], periods: Sequence[tuple[int, int]]
) -> BranchVectors:
    n = len(branch.pairs)
    fn = lambda path: path_function(U, path, d)  # noqa: E731
    loops = [fn(x) for x, _ in branch.pairs]
    conns = [fn(y) for _, y in branch.pairs]
    # H[i]: matrix of everything after y_i, with loop j taken offsets[j] times
    H = [identity(d)] * (n + 1)
    for i in range(n - 1, -1, -1):
        step = matmul(conns[i].M, _power(loops[i].M, offsets[i]))
        H[i] = matmul(H[i + 1], step)

    def vbar(i: int, l: int) -> Vector:
        # loop i with l more iterations of it afterwards (i is 0-based here)
        tail = matmul(H[i + 1], matmul(conns[i].M, _power(loops[i].M, l)))
        return matvec(tail, loops[i].v)

    def total(i: int, lo: int, hi: int) -> Vector:
        acc = zero(d)
        for l in range(lo, hi):
            acc = vadd(acc, vbar(i, l))
        return acc

    entry = tuple(total(i, 0, offsets[i]) for i in range(n))
    loop = tuple(total(i, offsets[i], offsets[i] + periods[i][1]) for i in range(n))
    connector = tuple(matvec(H[i + 1], conns[i].v) for i in range(n))
    prefix = matvec(H[0], fn(branch.y0).v)
    return BranchVectors(prefix, entry, loop, connector)


class FlatDetCA(CA):
    def __post_init__(self):
        super().__post_init__()
        if not is_flat(self.automaton):
            raise ValueError("automaton is not flat")
        if not is_deterministic(self.automaton):
            raise ValueError("automaton is not deterministic")


@dataclass(frozen=True)
class Cqdd:
    """A finite union of flat deterministic CA."""

    components: tuple[FlatDetCA, ...]
    alphabet: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.alphabet and self.components:
            object.__setattr__(self, "alphabet", self.components[0].automaton.alphabet)
        for c in self.components:
            if tuple(c.automaton.alphabet) != tuple(self.alphabet):
                raise ValueError("components must share one alphabet")

    def __len__(self) -> int:
        return len(self.components)


def cqdd_accepts(Q: Cqdd, w: Sequence) -> bool:
    return any(ca_accepts(c, w) for c in Q.components)


def _flat_component(
    host: Automaton, branch: Branch, offsets: Sequence[int], periods: Sequence, bv: BranchVectors,
    C: SemilinearSet,
) -> FlatDetCA:
    d = C.dimension
    labels = [t.label for t in host.transitions]
    edges: list[tuple[int, object, int]] = []
    vectors: list[Vector] = []
    count = [1]

    def fresh() -> int:
        count[0] += 1
        return count[0] - 1

    def chain(src: int, path: Path, v: Vector, dst: int | None = None) -> int:
        cur = src
        for k, t in enumerate(path):
            nxt = dst if (dst is not None and k == len(path) - 1) else fresh()
            edges.append((cur, labels[t], nxt))
            vectors.append(v if k == 0 else zero(d))
            cur = nxt
        return cur

    cur = 0
    if branch.y0:
        cur = chain(cur, branch.y0, bv.prefix)
    for i, (x, y) in enumerate(branch.pairs):
        a, (p, r) = offsets[i], periods[i]
        if a:
            cur = chain(cur, x * a, bv.entry[i])
        if a >= p:
            chain(cur, x * r, bv.loop[i], dst=cur)
        if y:
            cur = chain(cur, y, bv.connector[i])
    n = count[0]
    B = Automaton.build(n, host.alphabet, edges, 0, [cur], epsilon_allowed=False)
    m = len(edges)
    V = tuple(tuple(vectors[t][k] for t in range(m)) for k in range(d))
    return FlatDetCA(B, sl_linear_preimage(C, V, m))


def flatten_branch(branch: Branch, U: Sequence, C: SemilinearSet, host: DetAPA) -> list[FlatDetCA]:
    """One flat DetCA per offset tuple ``a`` with ``a_i < p_i + r_i``."""
    d = C.dimension
    periods = branch_periods(branch, U, d)
    out = []
    ranges = [range(p + r) for p, r in periods]
    for offsets in itertools.product(*ranges):
        bv = branch_vectors(branch, U, d, offsets, periods)
        out.append(_flat_component(host.automaton, branch, offsets, periods, bv, C))
    return out


def detapa_to_cqdd(M: DetAPA) -> Cqdd:
    alphabet = M.automaton.alphabet
    if M.constraint.is_empty():
        return Cqdd((), alphabet)
    comps = []
    for branch in runs_slre(M.automaton).branches:
        for c in flatten_branch(branch, M.U, M.constraint, M):
            if not c.constraint.is_empty():
                comps.append(c)
    return Cqdd(tuple(comps), alphabet)


@dataclass
class PipelineResult:
    iteration_set: SemilinearSet
    canonical: object
    detapa: DetAPA | None
    cqdd: Cqdd
    report: dict = field(default_factory=dict)


def run_pipeline(M: PA, S: Socle, check: bool = True) -> PipelineResult:
    """Bounded PA to a union of flat DetCA, keeping every intermediate stage.

    Toolkit errors carry a ``stage`` attribute naming the failing step.
    """
    with _stage("iteration-set"):
        E = pa_iteration_set(M, S, check=check)
    alphabet = tuple(dict.fromkeys(tuple(M.automaton.alphabet) + S.letters))
    return _from_bsl(BslLanguage(S, E), alphabet)


def run_bsl_pipeline(B: BslLanguage, alphabet: Sequence | None = None) -> PipelineResult:
    letters = tuple(dict.fromkeys(tuple(alphabet or ()) + B.socle.letters))
    return _from_bsl(B, letters)


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except ParikhKitError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


def _from_bsl(B: BslLanguage, alphabet: tuple) -> PipelineResult:
    with _stage("canonical"):
        K = canonical_epsca(B, alphabet)
    report = {
        "socle": ["".join(map(str, w)) for w in B.socle],
        "iteration_set_components": len(B.iteration_set.components),
        "canonical_states": K.automaton.n_states,
        "canonical_transitions": len(K.automaton.transitions),
    }
    if B.iteration_set.is_empty():
        Q = Cqdd((), alphabet)
        report.update(detapa_dimension=None, components=0)
        return PipelineResult(B.iteration_set, K, None, Q, report)
    with _stage("determinize"):
        D = epsca_to_detapa(K, trusted=True)
    with _stage("flatten"):
        Q = detapa_to_cqdd(D)
    report.update(
        detapa_states=D.automaton.n_states,
        detapa_transitions=len(D.automaton.transitions),
        detapa_dimension=D.dimension,
        components=len(Q.components),
    )
    return PipelineResult(B.iteration_set, K, D, Q, report)


def bounded_pa_to_cqdd(M: PA, S: Socle) -> Cqdd:
    return run_pipeline(M, S).cqdd
