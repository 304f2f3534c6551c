"""Filters in E(S): finite-type filters, infinite-type filters as lassos over
the stage automaton, tightness classification and the boundary-path check.

A *step* is a triple ``(letter, R, U)`` where ``R = r(alpha_{1,n})`` and ``U``
is the atom generating the stage ultrafilter ``xi_n``.  An infinite-type
ultrafilter is the infinite step sequence ``prefix + cycle + cycle + ...``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .inv_semigroup import Triple, idempotent_key
from .labelled_core import (
    BAFilter,
    LabelledSpace,
    VertexSet,
    Word,
    is_left_resolving,
    ultrafilters,
)

Step = tuple  # (letter, R, U)
Node = tuple  # (R, U)


def primitive_root(seq: tuple) -> tuple:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            return seq[:d]
    return seq


def canonical_lasso(prefix: Sequence, cycle: Sequence) -> tuple[tuple, tuple]:
    """Minimal preperiod and primitive period.  With both minimal the cycle
    rotation is forced: it starts right where the prefix ends."""
    if not cycle:
        raise ValueError("lasso cycle must be non-empty")
    c = primitive_root(tuple(cycle))
    p = list(prefix)
    while p and p[-1] == c[-1]:
        p.pop()
        c = (c[-1],) + c[:-1]
    return tuple(p), c


def lasso_item(prefix: Sequence, cycle: Sequence, i: int):
    """0-based item ``i`` of ``prefix + cycle^inf``."""
    if i < len(prefix):
        return prefix[i]
    return cycle[(i - len(prefix)) % len(cycle)]


def unroll(prefix: Sequence, cycle: Sequence, n: int) -> list:
    return [lasso_item(prefix, cycle, i) for i in range(n)]


def shift_lasso(prefix: Sequence, cycle: Sequence, k: int) -> tuple[tuple, tuple]:
    """Drop the first ``k`` items."""
    if k <= len(prefix):
        return tuple(prefix[k:]), tuple(cycle)
    j = (k - len(prefix)) % len(cycle)
    return (), tuple(cycle[j:]) + tuple(cycle[:j])


def map_lasso(prefix: Sequence, cycle: Sequence, state, fn: Callable) -> tuple[tuple, tuple]:
    """Transduce an eventually periodic sequence through a finite-state map.

    ``fn(item, state) -> (output, next_state)``.  The output sequence is again
    eventually periodic; it is found by detecting a repeated
    (position-in-lasso, state) pair and returned in canonical form.
    """
    out = []
    seen = {}
    n = 0
    L = len(prefix)
    while True:
        pos = n if n < L else L + (n - L) % len(cycle)
        key = (pos, state)
        if key in seen:
            i = seen[key]
            return canonical_lasso(out[:i], out[i:])
        seen[key] = n
        o, state = fn(lasso_item(prefix, cycle, n), state)
        out.append(o)
        n += 1


@dataclass(frozen=True)
class FilterFiniteType:
    """Finite-type filter: largest word plus the generator of its top stage."""

    word: Word
    generator: VertexSet

    length = property(lambda self: len(self.word))
    infinite = False

    def letter(self, n: int) -> str:
        return self.word[n - 1]

    def word_prefix(self, n: int) -> Word:
        if n > len(self.word):
            raise IndexError(n)
        return self.word[:n]

    def top(self, space: LabelledSpace) -> BAFilter:
        return space.ufilter(self.word, self.generator)

    def stage(self, space: LabelledSpace, n: int) -> Optional[BAFilter]:
        return f_map(space, self.word[:n], self.word[n:], self.top(space))

    def contains(self, space: LabelledSpace, p: Triple) -> bool:
        n = len(p.alpha)
        if p.alpha != p.beta or n > len(self.word) or p.alpha != self.word[:n]:
            return False
        if not p.A or p.A not in space.B(p.alpha):
            return False
        return space.r(p.A, self.word[n:]) & self.generator == self.generator

    def describe(self, space: LabelledSpace) -> dict:
        return {"type": "finite", "word": list(self.word), "generator": space.graph.names(self.generator)}


@dataclass(frozen=True)
class LassoFilter:
    """Infinite-type ultrafilter given by a canonical lasso of steps."""

    prefix: tuple
    cycle: tuple

    length = None
    infinite = True

    @classmethod
    def from_steps(cls, prefix: Sequence[Step], cycle: Sequence[Step]) -> "LassoFilter":
        return cls(*canonical_lasso(prefix, cycle))

    @property
    def size(self) -> int:
        return len(self.prefix) + len(self.cycle)

    def step(self, n: int) -> Step:
        """1-based step ``n``."""
        return lasso_item(self.prefix, self.cycle, n - 1)

    def steps(self, n: int) -> list[Step]:
        return unroll(self.prefix, self.cycle, n)

    def letter(self, n: int) -> str:
        return self.step(n)[0]

    def word_prefix(self, n: int) -> Word:
        return tuple(s[0] for s in self.steps(n))

    def stage(self, space: LabelledSpace, n: int) -> Optional[BAFilter]:
        if n == 0:
            a, _, U1 = self.step(1)
            return f_map(space, (), (a,), space.ufilter((a,), U1))
        return space.ufilter(self.word_prefix(n), self.step(n)[2])

    def contains(self, space: LabelledSpace, p: Triple) -> bool:
        n = len(p.alpha)
        if p.alpha != p.beta or p.alpha != self.word_prefix(n):
            return False
        if not p.A or p.A not in space.B(p.alpha):
            return False
        if n == 0:
            a, _, U1 = self.step(1)
            return space.r(p.A, (a,)) & U1 == U1
        U = self.step(n)[2]
        return p.A & U == U

    def describe(self, space: LabelledSpace) -> dict:
        def fmt(steps):
            return [[a, space.graph.names(R), space.graph.names(U)] for a, R, U in steps]

        return {"type": "lasso", "prefix": fmt(self.prefix), "cycle": fmt(self.cycle)}


TightFilter = Union[FilterFiniteType, LassoFilter]


def filter_sort_key(xi: TightFilter):
    if isinstance(xi, FilterFiniteType):
        return (0, len(xi.word), xi.word, xi.generator)
    return (1, xi.size, xi.prefix, xi.cycle)


# --- f-maps and complete families -------------------------------------------


def _f_generator(space: LabelledSpace, R: VertexSet, suffix: Sequence[str], U: VertexSet,
                 empty_word: bool = False) -> Optional[VertexSet]:
    members = space.family.ordered if empty_word else space.under(R).members
    hits = [A for A in members if A and space.r(A, suffix) & U == U]
    if not hits:
        return None
    g = hits[0]
    for A in hits[1:]:
        g &= A
    if g not in space.family or space.r(g, suffix) & U != U:
        raise ValueError("f-image is not a filter; is the space weakly left-resolving?")
    return g


def f_map(space: LabelledSpace, prefix: Sequence[str], suffix: Sequence[str],
          F: BAFilter) -> Optional[BAFilter]:
    """``f_{prefix[suffix]}(F) = {A in B(prefix) : r(A, suffix) in F}``; ``None``
    stands for the empty set (possible only for the empty prefix)."""
    prefix, suffix = tuple(prefix), tuple(suffix)
    if not suffix:
        return F
    R = space.range_of(prefix) if prefix else space.graph.universe
    g = _f_generator(space, R, suffix, F.generator, empty_word=not prefix)
    if g is None:
        return None
    return space.ufilter(prefix, g)


def filter_from_pair(space: LabelledSpace, word: Sequence[str], F: Optional[BAFilter]) -> FilterFiniteType:
    word = tuple(word)
    if F is None:
        raise ValueError("a filter in E(S) needs a non-empty top stage")
    if F.word != word:
        raise ValueError("stage filter lives in a different algebra")
    return FilterFiniteType(word, F.generator)


def complete_family(space: LabelledSpace, xi: FilterFiniteType) -> list[Optional[BAFilter]]:
    return [xi.stage(space, n) for n in range(len(xi.word) + 1)]


def complete_admissible(space: LabelledSpace, word: Sequence[str],
                        partial: Sequence[Optional[BAFilter]]) -> FilterFiniteType:
    """Complete an admissible family for a finite word; the top stage decides."""
    word = tuple(word)
    if len(partial) != len(word) + 1:
        raise ValueError("need one stage per prefix of the word")
    for n in range(len(word)):
        F, nxt = partial[n], partial[n + 1]
        if F is None:
            continue
        if nxt is None or any(space.r(A, word[n:n + 1]) not in nxt for A in F.members):
            raise ValueError(f"family is not admissible at stage {n}")
    xi = filter_from_pair(space, word, partial[-1])
    for n, F in enumerate(partial):
        if F is not None:
            done = xi.stage(space, n)
            assert done is not None and all(A in done for A in F.members)
    return xi


# --- ultrafilter / tightness classification ---------------------------------


def in_sink_set(space: LabelledSpace, F: BAFilter) -> bool:
    """``F in X^sink``: every letter is killed by some member of ``F``."""
    members = F.members
    return all(any(space.r(A, (b,)) == 0 for A in members) for b in space.alphabet)


def sink_ultrafilters(space: LabelledSpace, word: Sequence[str]) -> list[BAFilter]:
    return [F for F in ultrafilters(space.B(tuple(word))) if in_sink_set(space, F)]


def is_ultrafilter_in_ES(space: LabelledSpace, xi: TightFilter) -> bool:
    if isinstance(xi, LassoFilter):
        return True
    top = xi.top(space)
    return top.is_ultrafilter and in_sink_set(space, top)


def is_tight_finite_type(space: LabelledSpace, xi: FilterFiniteType) -> bool:
    top = xi.top(space)
    if not top.is_ultrafilter:
        return False
    ba = space.B(xi.word)
    sinks = space.graph.sinks
    for A in top.members:
        # condition (a): the label set of A is finite for finite graphs
        infinite_labels = False
        sink_part = any(B and B & ~(A & sinks) == 0 for B in ba.members)
        if not (infinite_labels or sink_part):
            return False
    return True


# --- stage automaton ----------------------------------------------------------


class StageAutomaton:
    """Nodes ``(R, U)``; an ``a``-edge ``(R, U) -> (r(R, a), U')`` exists when the
    f-map for ``a`` sends the ultrafilter generated by ``U'`` to the one
    generated by ``U``."""

    def __init__(self, space: LabelledSpace):
        space.require_tight_hypotheses()
        self.space = space
        self.initial: list[Step] = []
        self.edges: dict[Node, list[Step]] = {}
        for a in space.alphabet:
            R = space.range_of((a,))
            self.initial.extend((a, R, U) for U in space.under(R).atoms)
        todo = deque((R, U) for _, R, U in self.initial)
        while todo:
            node = todo.popleft()
            if node in self.edges:
                continue
            self.edges[node] = succ = self._successors(node)
            todo.extend((R, U) for _, R, U in succ if (R, U) not in self.edges)
        self._live = self._compute_live()

    def _successors(self, node: Node) -> list[Step]:
        R, U = node
        out = []
        for a in self.space.alphabet:
            R2 = self.space.r(R, (a,))
            if not R2:
                continue
            for U2 in self.space.under(R2).atoms:
                if _f_generator(self.space, R, (a,), U2) == U:
                    out.append((a, R2, U2))
        return out

    @property
    def nodes(self) -> list[Node]:
        return sorted(self.edges)

    def successors(self, node: Node) -> list[Step]:
        return self.edges[node]

    def _compute_live(self) -> set:
        # live = can reach a cycle = admits an infinite walk
        live = set(self.edges)
        changed = True
        while changed:
            changed = False
            for node in list(live):
                if not any((R, U) in live for _, R, U in self.edges[node]):
                    live.discard(node)
                    changed = True
        return live

    def is_live(self, node: Node) -> bool:
        return node in self._live

    def live_successors(self, node: Node) -> list[Step]:
        return [s for s in self.edges[node] if (s[1], s[2]) in self._live]

    def _on_cycle(self) -> set:
        on = set()
        for start in self._live:
            seen, todo = set(), [start]
            while todo:
                n = todo.pop()
                for _, R, U in self.live_successors(n):
                    m = (R, U)
                    if m == start:
                        on.add(start)
                        todo = []
                        break
                    if m not in seen:
                        seen.add(m)
                        todo.append(m)
        return on

    def cycle_reachable(self) -> set:
        out, todo = set(), list(self._on_cycle())
        while todo:
            n = todo.pop()
            if n in out:
                continue
            out.add(n)
            todo.extend((R, U) for _, R, U in self.live_successors(n))
        return out

    def deterministic(self) -> bool:
        return all(len(self.live_successors(n)) <= 1 for n in self.cycle_reachable())

    def has_branching_component(self) -> bool:
        """Some live strongly connected part carries two distinct cycles
        (uncountably many infinite walks)."""
        reach = {}
        for n in self._live:
            seen, todo = set(), [n]
            while todo:
                m = todo.pop()
                for _, R, U in self.live_successors(m):
                    if (R, U) not in seen:
                        seen.add((R, U))
                        todo.append((R, U))
            reach[n] = seen
        for n in self._live:
            if n not in reach[n]:
                continue
            scc = {m for m in reach[n] if n in reach[m]}
            inner = sum(1 for m in scc for _, R, U in self.live_successors(m) if (R, U) in scc)
            if inner > len(scc):
                return True
        return False

    def is_valid_walk(self, prefix: Sequence[Step], cycle: Sequence[Step]) -> bool:
        seq = list(prefix) + list(cycle)
        if not cycle or seq[0] not in self.initial:
            return False
        for s, t in zip(seq, seq[1:] + [cycle[0]]):
            if t not in self.edges.get((s[1], s[2]), ()):
                return False
        return True

    def all_deterministic_walks(self) -> list[LassoFilter]:
        """Every infinite walk, valid when :meth:`deterministic` holds."""
        if not self.deterministic():
            raise ValueError("automaton branches after a cycle; walks are not finitely many")
        cyc = self.cycle_reachable()
        out = set()

        def follow(path):
            last = path[-1]
            node = (last[1], last[2])
            if node in cyc:
                seen = {}
                seq = list(path)
                while True:
                    node = (seq[-1][1], seq[-1][2])
                    if node in seen:
                        i = seen[node]
                        out.add(LassoFilter.from_steps(seq[:i + 1], seq[i + 1:]))
                        return
                    seen[node] = len(seq) - 1
                    seq.append(self.live_successors(node)[0])
            for s in self.live_successors(node):
                follow(path + [s])

        for s in self.initial:
            if (s[1], s[2]) in self._live:
                follow([s])
        return sorted(out, key=filter_sort_key)


def build_stage_automaton(space: LabelledSpace) -> StageAutomaton:
    return StageAutomaton(space)


def enumerate_tight_finite(space: LabelledSpace, word_bound: int) -> list[FilterFiniteType]:
    space.require_tight_hypotheses()
    out = []
    for w in space.labelled_paths(word_bound):
        for U in space.B(w).atoms:
            xi = FilterFiniteType(w, U)
            if is_tight_finite_type(space, xi):
                out.append(xi)
    return out


def enumerate_lassos(aut: StageAutomaton, size_bound: int) -> list[LassoFilter]:
    """All canonical lassos with ``|prefix| + |cycle| <= size_bound``."""
    found = set()

    def extend(walk):
        last = walk[-1]
        for k in range(len(walk)):
            p, c = walk[:k], walk[k:]
            if c[0] in aut.edges[(last[1], last[2])] and canonical_lasso(p, c) == (tuple(p), tuple(c)):
                found.add(LassoFilter(tuple(p), tuple(c)))
        if len(walk) < size_bound:
            for s in aut.live_successors((last[1], last[2])):
                extend(walk + [s])

    if size_bound >= 1:
        for s in aut.initial:
            if aut.is_live((s[1], s[2])):
                extend([s])
    return sorted(found, key=filter_sort_key)


def enumerate_tight_lassos(space: LabelledSpace, size_bound: int) -> tuple[list[LassoFilter], bool]:
    aut = StageAutomaton(space)
    lassos = enumerate_lassos(aut, size_bound)
    exhaustive = False
    if aut.deterministic():
        everything = aut.all_deterministic_walks()
        exhaustive = all(x.size <= size_bound for x in everything)
    return lassos, exhaustive


@dataclass
class TightSpectrum:
    finite: list
    lassos: list
    lassos_exhaustive: bool
    finite_exhaustive: bool
    cardinality: str          # "finite", "countably infinite" or "uncountable"
    size: Optional[int]

    @property
    def exhaustive(self) -> bool:
        return self.lassos_exhaustive and self.finite_exhaustive

    @property
    def basis(self) -> list:
        return self.finite + self.lassos

    @property
    def verdict(self) -> str:
        if self.cardinality == "finite":
            return f"{self.size} point" if self.size == 1 else f"{self.size} points"
        return self.cardinality


def _finite_type_extent(space: LabelledSpace) -> tuple[bool, int]:
    """Whether there are finitely many tight finite-type filters, and if so the
    longest word carrying one.  Tightness of ``(alpha, U)`` depends on
    ``alpha`` only through ``r(alpha)``, so this is a question about the range
    automaton ``R -> r(R, a)``."""

    def tight_here(word, R):
        ba = space.B(word)
        return any(is_tight_finite_type(space, FilterFiniteType(word, U)) for U in ba.atoms)

    succ: dict[VertexSet, set] = {}
    rep: dict[VertexSet, Word] = {}
    todo = deque()
    for a in space.alphabet:
        R = space.range_of((a,))
        if R and R not in rep:
            rep[R] = (a,)
            todo.append(R)
    while todo:
        R = todo.popleft()
        succ[R] = set()
        for a in space.alphabet:
            R2 = space.r(R, (a,))
            if R2:
                succ[R].add(R2)
                if R2 not in rep:
                    rep[R2] = rep[R] + (a,)
                    todo.append(R2)

    def reach(R):
        seen, st = set(), [R]
        while st:
            x = st.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    st.append(y)
        return seen

    reaches = {R: reach(R) for R in succ}
    cyclic = {R for R in succ if R in reaches[R]}
    after_cycle = set(cyclic)
    for R in cyclic:
        after_cycle |= reaches[R]
    if any(tight_here(rep[R], R) for R in after_cycle):
        return False, -1
    # finitely many: words reaching tight ranges are acyclic, length <= #ranges
    longest = 0 if any(
        is_tight_finite_type(space, FilterFiniteType((), U)) for U in space.B(()).atoms
    ) else -1
    for w in space.labelled_paths(len(succ)):
        if w and tight_here(w, space.range_of(w)):
            longest = max(longest, len(w))
    return True, longest


def tight_spectrum(space: LabelledSpace, word_bound: int, lasso_bound: int) -> TightSpectrum:
    aut = StageAutomaton(space)
    finite = enumerate_tight_finite(space, word_bound)
    lassos = enumerate_lassos(aut, lasso_bound)
    finitely_many_ft, longest = _finite_type_extent(space)
    finite_exhaustive = finitely_many_ft and longest <= word_bound
    if aut.deterministic():
        walks = aut.all_deterministic_walks()
        lassos_exhaustive = all(x.size <= lasso_bound for x in walks)
        walk_card, n_walks = "finite", len(walks)
    else:
        lassos_exhaustive = False
        walk_card = "uncountable" if aut.has_branching_component() else "countably infinite"
        n_walks = None
    if walk_card == "uncountable":
        cardinality, size = "uncountable", None
    elif walk_card != "finite" or not finitely_many_ft:
        cardinality, size = "countably infinite", None
    else:
        n_finite = len(enumerate_tight_finite(space, max(longest, 0))) if longest >= 0 else 0
        cardinality, size = "finite", n_finite + n_walks
    return TightSpectrum(finite, lassos, lassos_exhaustive, finite_exhaustive, cardinality, size)


# --- witnesses ---------------------------------------------------------------


def tight_filter_through(space: LabelledSpace, aut: StageAutomaton, U0: VertexSet) -> TightFilter:
    """A tight filter whose stage-0 ultrafilter is generated by the atom ``U0``
    of the family (a maximal extension of the filter generated by ``U0``)."""
    if U0 not in space.B(()).atoms:
        raise ValueError("expected an atom of the family")
    if space.r(U0, ()) and all(space.r(U0, (b,)) == 0 for b in space.alphabet):
        return FilterFiniteType((), U0)
    # first step: a letter a and an atom U1 <= r(U0, a)
    seq: list[Step] = []
    word: Word = ()
    R, U = None, U0
    seen: dict[Node, int] = {}
    while True:
        nxt = None
        for b in space.alphabet:
            Rb = space.r(U, (b,))
            if not Rb:
                continue
            R2 = space.range_of((b,)) if R is None else space.r(R, (b,))
            U2 = next(A for A in space.under(R2).atoms if A & Rb == A)
            nxt = (b, R2, U2)
            break
        if nxt is None:
            return FilterFiniteType(word, U)
        seq.append(nxt)
        word += (nxt[0],)
        R, U = nxt[1], nxt[2]
        if (R, U) in seen:
            i = seen[(R, U)]
            return LassoFilter.from_steps(seq[:i + 1], seq[i + 1:])
        seen[(R, U)] = len(seq) - 1


# --- bounded cover falsifier -----------------------------------------------------


def members_up_to(space: LabelledSpace, xi: TightFilter, depth: int) -> list[Triple]:
    top = depth if xi.infinite else min(depth, len(xi.word))
    out = []
    for n in range(top + 1):
        F = xi.stage(space, n)
        if F is None:
            continue
        w = xi.word_prefix(n)
        out.extend(Triple(w, A, w) for A in F.members)
    return sorted(out, key=idempotent_key)


def canonical_cover(space: LabelledSpace, x: Triple) -> list[Triple]:
    """Letter extensions of ``x`` plus its largest sink part; this is a finite
    cover of ``x`` in E(S)."""
    alpha, A = x.alpha, x.A
    Z = []
    for b in space.alphabet:
        C = space.r(A, (b,))
        if C:
            Z.append(Triple(alpha + (b,), C, alpha + (b,)))
    sinks = space.graph.sinks
    part = 0
    for B in space.B(alpha).members:
        if B and B & ~(A & sinks) == 0:
            part |= B
    if part:
        Z.append(Triple(alpha, part, alpha))
    return Z


def bounded_cover_falsifier(space: LabelledSpace, xi: TightFilter, depth: int) -> Optional[dict]:
    """Search for a member ``x`` whose canonical cover misses the filter.  A
    hit proves the filter is not tight; no hit proves nothing."""
    for x in members_up_to(space, xi, depth):
        Z = canonical_cover(space, x)
        if not any(xi.contains(space, z) for z in Z):
            return {"x": x, "cover": Z}
    return None


# --- boundary paths ------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FinitePath:
    vertex: str           # range vertex of the path
    edges: tuple


@dataclass(frozen=True, order=True)
class PathLasso:
    prefix: tuple
    cycle: tuple

    @property
    def size(self):
        return len(self.prefix) + len(self.cycle)


def boundary_paths(g, bound: int) -> tuple[list[FinitePath], list[PathLasso]]:
    finite = []
    for v in g.vertices:
        if g.out_edges(v):
            continue
        layer = [()]
        for n in range(bound + 1):
            finite.extend(FinitePath(v, p) for p in layer)
            layer = [(e.id,) + p for p in layer
                     for e in g.in_edges(g.edge(p[0]).src if p else v)]
    lassos = set()

    def extend(walk):
        last = g.edge(walk[-1])
        for k in range(len(walk)):
            p, c = walk[:k], walk[k:]
            if last.rng == g.edge(c[0]).src and canonical_lasso(p, c) == (tuple(p), tuple(c)):
                lassos.add(PathLasso(tuple(p), tuple(c)))
        if len(walk) < bound:
            for e in g.out_edges(last.rng):
                extend(walk + [e.id])

    for e in g.edges:
        extend([e.id])
    finite.sort(key=lambda p: (len(p.edges), p.edges, p.vertex))
    return finite, sorted(lassos, key=lambda x: (x.size, x.prefix, x.cycle))


def path_to_filter(space: LabelledSpace, path) -> TightFilter:
    g = space.graph
    if isinstance(path, FinitePath):
        word = tuple(g.edge(e).label for e in path.edges)
        return FilterFiniteType(word, g.vset([path.vertex]))

    def fn(eid, R):
        e = g.edge(eid)
        R2 = space.range_of((e.label,)) if R is None else space.r(R, (e.label,))
        return (e.label, R2, g.vset([e.rng])), R2

    return LassoFilter(*map_lasso(path.prefix, path.cycle, None, fn))


def filter_to_path(space: LabelledSpace, xi: TightFilter):
    """Inverse of :func:`path_to_filter` for left-resolving graphs with the
    power set as family: each stage atom is a single vertex."""
    g = space.graph

    def edge_into(letter, U):
        (v,) = g.names(U)
        (e,) = [e for e in g.in_edges(v) if e.label == letter]
        return e.id

    if isinstance(xi, FilterFiniteType):
        (v,) = g.names(xi.generator)
        edges, cur = [], v
        for letter in reversed(xi.word):
            eid = edge_into(letter, g.vset([cur]))
            edges.append(eid)
            cur = g.edge(eid).src
        return FinitePath(v, tuple(reversed(edges)))
    p, c = map_lasso(xi.prefix, xi.cycle, None, lambda s, st: (edge_into(s[0], s[2]), st))
    return PathLasso(p, c)


def tight_vs_boundary_check(space: LabelledSpace, bound: int) -> dict:
    g = space.graph
    if not is_left_resolving(g):
        raise ValueError("graph is not left-resolving")
    if len(space.family) != 1 << len(g.vertices):
        raise ValueError("family is not the full power set")
    finite_paths, path_lassos = boundary_paths(g, bound)
    aut = StageAutomaton(space)
    tight_finite = enumerate_tight_finite(space, bound)
    tight_lassos = enumerate_lassos(aut, bound)
    problems = []
    fwd = [path_to_filter(space, p) for p in finite_paths + path_lassos]
    back = [filter_to_path(space, x) for x in tight_finite + tight_lassos]
    for p, x in zip(finite_paths + path_lassos, fwd):
        if filter_to_path(space, x) != p:
            problems.append({"path": p, "image": x})
        if isinstance(x, FilterFiniteType):
            ok = is_tight_finite_type(space, x)
        else:
            ok = aut.is_valid_walk(x.prefix, x.cycle)
        if not ok:
            problems.append({"path": p, "not_tight": x})
    for x, p in zip(tight_finite + tight_lassos, back):
        if path_to_filter(space, p) != x:
            problems.append({"filter": x, "image": p})
    injective = len(set(fwd)) == len(fwd) and len(set(back)) == len(back)
    # a stage lasso also tracks r(alpha_{1,k}), which may settle after the
    # edge path repeats, so sizes are compared on the stage side
    in_range = {x for x in fwd[len(finite_paths):] if x.size <= bound}
    counts = {
        "boundary_finite": len(finite_paths),
        "boundary_lassos": len(path_lassos),
        "boundary_lassos_within_bound": len(in_range),
        "tight_finite": len(tight_finite),
        "tight_lassos": len(tight_lassos),
    }
    ok = (not problems and injective
          and set(fwd[:len(finite_paths)]) == set(tight_finite)
          and in_range == set(tight_lassos))
    return {"ok": ok, "counts": counts, "problems": problems, "injective": injective}
