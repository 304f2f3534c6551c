"""Finite labelled graphs, relative ranges, accommodating families and the
restricted Boolean algebras ``B(alpha)`` together with their ultrafilters.

Vertex sets are bitsets (plain ``int``) over the lexicographically ordered
vertex universe, so set algebra is exact, canonical and hashable.  Words are
tuples of letters; the empty word is ``()``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple
VertexSet = int

EMPTY_WORD: Word = ()


class LabelledGraphError(ValueError):
    """Raised for malformed graph documents or invalid vertex references."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    rng: str
    label: str


@dataclass(frozen=True)
class LabelledGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise LabelledGraphError("duplicate vertex ids")
        if not self.vertices:
            raise LabelledGraphError("graph has no vertices")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise LabelledGraphError("duplicate edge ids")
        if not self.edges:
            raise LabelledGraphError("edge set is empty; the alphabet must be non-empty")
        known = set(self.vertices)
        for e in self.edges:
            if e.src not in known or e.rng not in known:
                raise LabelledGraphError(f"edge {e.id!r} references an unknown vertex")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))

    @cached_property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({e.label for e in self.edges}))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def universe(self) -> VertexSet:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def _step(self) -> dict[str, tuple[int, ...]]:
        # _step[a][i] = bitset of ranges of a-labelled edges leaving vertex i
        table = {a: [0] * len(self.vertices) for a in self.alphabet}
        for e in self.edges:
            table[e.label][self.index[e.src]] |= 1 << self.index[e.rng]
        return {a: tuple(row) for a, row in table.items()}

    @cached_property
    def sinks(self) -> VertexSet:
        emitters = 0
        for e in self.edges:
            emitters |= 1 << self.index[e.src]
        return self.universe & ~emitters

    def vset(self, names: Iterable[str]) -> VertexSet:
        bits = 0
        for v in names:
            try:
                bits |= 1 << self.index[v]
            except KeyError:
                raise LabelledGraphError(f"unknown vertex {v!r}") from None
        return bits

    def names(self, A: VertexSet) -> list[str]:
        return [v for i, v in enumerate(self.vertices) if A >> i & 1]

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def in_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.rng == v]

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise LabelledGraphError(f"unknown edge {edge_id!r}")


def load_labelled_graph(document: Mapping) -> LabelledGraph:
    """Build a validated graph from the ``vertices``/``edges`` part of a
    graph document."""
    try:
        vertices = tuple(str(v) for v in document["vertices"])
        edges = tuple(
            Edge(str(e["id"]), str(e["src"]), str(e["rng"]), str(e["label"]))
            for e in document["edges"]
        )
    except (KeyError, TypeError) as exc:
        raise LabelledGraphError(f"malformed graph document: {exc}") from None
    return LabelledGraph(vertices, edges)


def vertex_kind(g: LabelledGraph, v: str) -> dict[str, bool]:
    """Classify ``v`` as sink/source/regular.  Finite graphs have no infinite
    emitters, so singular coincides with sink."""
    if v not in g.index:
        raise LabelledGraphError(f"unknown vertex {v!r}")
    sink = not g.out_edges(v)
    source = not g.in_edges(v)
    return {"sink": sink, "source": source, "singular": sink, "regular": not sink}


def relative_range(g: LabelledGraph, A: VertexSet, word: Sequence[str]) -> VertexSet:
    """``r(A, word)``: vertices reached from ``A`` along a path labelled ``word``."""
    step = g._step
    for a in word:
        row = step.get(a)
        if row is None:
            return 0
        out = 0
        i = 0
        while A:
            if A & 1:
                out |= row[i]
            A >>= 1
            i += 1
        A = out
        if not A:
            return 0
    return A


def word_range(g: LabelledGraph, word: Sequence[str]) -> VertexSet:
    return relative_range(g, g.universe, word)


def label_set(g: LabelledGraph, A: VertexSet) -> set[str]:
    return {e.label for e in g.edges if A >> g.index[e.src] & 1}


def is_left_resolving(g: LabelledGraph) -> bool:
    seen = set()
    for e in g.edges:
        if (e.rng, e.label) in seen:
            return False
        seen.add((e.rng, e.label))
    return True


def words(alphabet: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length <= max_len in length-then-lexicographic order."""
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def labelled_paths(g: LabelledGraph, max_len: int) -> Iterator[Word]:
    """Realized labelled paths (``r(word) != 0``), including the empty word."""
    for w in words(g.alphabet, max_len):
        if not w or word_range(g, w):
            yield w


def popcount(A: VertexSet) -> int:
    return bin(A).count("1")


@dataclass(frozen=True)
class SetFamily:
    members: frozenset
    accommodating: bool = False
    complements: bool = False
    weakly_left_resolving: bool = False

    def __contains__(self, A: VertexSet) -> bool:
        return A in self.members

    def __iter__(self):
        return iter(self.ordered)

    def __len__(self):
        return len(self.members)

    @cached_property
    def ordered(self) -> tuple[VertexSet, ...]:
        return tuple(sorted(self.members, key=lambda A: (popcount(A), A)))


def is_accommodating(g: LabelledGraph, members: Iterable[VertexSet]) -> bool:
    fam = frozenset(members)
    if 0 not in fam:
        return False
    if any(word_range(g, (a,)) not in fam for a in g.alphabet):
        return False
    for A in fam:
        if any(relative_range(g, A, (a,)) not in fam for a in g.alphabet):
            return False
        for B in fam:
            if A & B not in fam or A | B not in fam:
                return False
    return True


def is_closed_under_complements(members: Iterable[VertexSet]) -> bool:
    fam = frozenset(members)
    return all(A & ~B in fam for A in fam for B in fam)


def is_weakly_left_resolving(g: LabelledGraph, members: Iterable[VertexSet]) -> bool:
    """Check ``r(A & B, a) == r(A, a) & r(B, a)`` for single letters.

    The letter case is enough: if it holds for every letter and the family is
    closed under relative ranges, then ``r(A & B, ab) = r(r(A, a) & r(B, a), b)
    = r(A, ab) & r(B, ab)`` by induction on word length.
    """
    fam = list(members)
    for a in g.alphabet:
        rr = {A: relative_range(g, A, (a,)) for A in fam}
        for A in fam:
            for B in fam:
                if relative_range(g, A & B, (a,)) != rr[A] & rr[B]:
                    return False
    return True


def _closure(g: LabelledGraph, seed: Iterable[VertexSet], close_complements: bool) -> frozenset:
    fam = set(seed) | {0}
    fam |= {word_range(g, (a,)) for a in g.alphabet}
    while True:
        new = set()
        cur = list(fam)
        for A in cur:
            for a in g.alphabet:
                new.add(relative_range(g, A, (a,)))
            for B in cur:
                new.add(A & B)
                new.add(A | B)
                if close_complements:
                    new.add(A & ~B)
        new -= fam
        if not new:
            return frozenset(fam)
        fam |= new


def make_family(g: LabelledGraph, members: Iterable[VertexSet]) -> SetFamily:
    """Wrap an explicit collection of sets, recording which checks pass."""
    fam = frozenset(members)
    acc = is_accommodating(g, fam)
    return SetFamily(
        fam,
        accommodating=acc,
        complements=is_closed_under_complements(fam),
        weakly_left_resolving=acc and is_weakly_left_resolving(g, fam),
    )


def generate_family(
    g: LabelledGraph, generators: Iterable[VertexSet] = (), close_complements: bool = True
) -> SetFamily:
    """Least accommodating family containing ``generators`` (fixpoint inside
    the finite power set)."""
    return make_family(g, _closure(g, generators, close_complements))


def power_set_family(g: LabelledGraph) -> SetFamily:
    return make_family(g, range(g.universe + 1))


@dataclass(frozen=True)
class RestrictedAlgebra:
    """``B(word)``: family members contained in ``r(word)``."""

    word: Word
    top: VertexSet
    members: tuple[VertexSet, ...]
    atoms: tuple[VertexSet, ...]

    @property
    def trivial(self) -> bool:
        return not self.atoms

    def __contains__(self, A: VertexSet) -> bool:
        return A in self._member_set

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    def up_set(self, A: VertexSet) -> tuple[VertexSet, ...]:
        return tuple(B for B in self.members if B & A == A)


def restricted_algebra(fam: SetFamily, g: LabelledGraph, word: Sequence[str]) -> RestrictedAlgebra:
    word = tuple(word)
    top = word_range(g, word)
    if word:
        members = tuple(A for A in fam.ordered if A & ~top == 0)
    else:
        members = fam.ordered
    nonzero = [A for A in members if A]
    atoms = tuple(
        A for A in nonzero if not any(B != A and B & ~A == 0 for B in nonzero)
    )
    return RestrictedAlgebra(word, top, members, atoms)


@dataclass(frozen=True)
class BAFilter:
    """A filter in ``B(word)``, stored by its minimum element."""

    word: Word
    generator: VertexSet
    algebra: RestrictedAlgebra = field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.generator or self.generator not in self.algebra:
            raise ValueError("filter generator must be a non-empty member of B(word)")

    def __contains__(self, A: VertexSet) -> bool:
        return A in self.algebra and A & self.generator == self.generator

    @property
    def members(self) -> tuple[VertexSet, ...]:
        return self.algebra.up_set(self.generator)

    @property
    def is_ultrafilter(self) -> bool:
        return self.generator in self.algebra.atoms


def ultrafilters(ba: RestrictedAlgebra) -> list[BAFilter]:
    return [BAFilter(ba.word, U, ba) for U in ba.atoms]


def is_ultrafilter_oracle(ba: RestrictedAlgebra, F: BAFilter) -> bool:
    """Brute-force test: every element meeting all of ``F`` belongs to ``F``."""
    members = set(F.members)
    meets_all = (y for y in ba.members if all(y & x for x in members))
    return all(y in members for y in meets_all)


def all_filters(ba: RestrictedAlgebra) -> list[BAFilter]:
    """Every filter of a finite lattice is the up-set of its minimum."""
    return [BAFilter(ba.word, A, ba) for A in ba.members if A]


class LabelledSpace:
    """A labelled graph together with an accommodating family; caches the
    restricted algebras per word."""

    def __init__(self, graph: LabelledGraph, family: SetFamily):
        self.graph = graph
        self.family = family
        self._algebras: dict[Word, RestrictedAlgebra] = {}
        self._under: dict[VertexSet, RestrictedAlgebra] = {}

    def __repr__(self):
        return f"LabelledSpace({len(self.graph.vertices)} vertices, {len(self.family)} sets)"

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.graph.alphabet

    def r(self, A: VertexSet, word: Sequence[str] = EMPTY_WORD) -> VertexSet:
        return relative_range(self.graph, A, word)

    def range_of(self, word: Sequence[str]) -> VertexSet:
        return word_range(self.graph, word)

    def B(self, word: Sequence[str]) -> RestrictedAlgebra:
        word = tuple(word)
        ba = self._algebras.get(word)
        if ba is None:
            if word:
                under = self.under(self.range_of(word))
                ba = RestrictedAlgebra(word, under.top, under.members, under.atoms)
            else:
                ba = restricted_algebra(self.family, self.graph, word)
            self._algebras[word] = ba
        return ba

    def under(self, R: VertexSet) -> RestrictedAlgebra:
        """Members of the family contained in ``R`` (``B(alpha)`` depends on
        ``alpha`` only through ``r(alpha)``).  The ``word`` field is unset."""
        ba = self._under.get(R)
        if ba is None:
            members = tuple(A for A in self.family.ordered if A & ~R == 0)
            nonzero = [A for A in members if A]
            atoms = tuple(
                A for A in nonzero if not any(B != A and B & ~A == 0 for B in nonzero)
            )
            ba = self._under[R] = RestrictedAlgebra(None, R, members, atoms)
        return ba

    def ufilter(self, word: Sequence[str], generator: VertexSet) -> BAFilter:
        word = tuple(word)
        return BAFilter(word, generator, self.B(word))

    def labelled_paths(self, max_len: int) -> Iterator[Word]:
        return labelled_paths(self.graph, max_len)

    def require_tight_hypotheses(self):
        fam = self.family
        if not (fam.accommodating and fam.complements and fam.weakly_left_resolving):
            raise ValueError(
                "family must be accommodating, closed under relative complements "
                "and weakly left-resolving"
            )

    def fmt(self, A: VertexSet) -> str:
        return "{" + ",".join(self.graph.names(A)) + "}"


def meet_all(sets: Iterable[VertexSet], start: VertexSet) -> VertexSet:
    return reduce(lambda x, y: x & y, sets, start)
