"""Small reference graphs and a seeded random-graph generator."""
from __future__ import annotations

import random

from .labelled_core import (
    Edge,
    LabelledGraph,
    LabelledSpace,
    generate_family,
    is_left_resolving,
    power_set_family,
)


def g1_graph() -> LabelledGraph:
    return LabelledGraph(
        ("v1", "v2", "v3"),
        (Edge("e1", "v1", "v2", "a"), Edge("e2", "v2", "v1", "a"), Edge("e3", "v1", "v3", "a")),
    )


def g1() -> LabelledSpace:
    g = g1_graph()
    return LabelledSpace(g, generate_family(g, [g.vset(["v1"])]))


def g1p() -> LabelledSpace:
    g = g1_graph()
    return LabelledSpace(g, power_set_family(g))


def g2() -> LabelledSpace:
    g = LabelledGraph(("u", "w"), (Edge("f", "u", "w", "a"),))
    return LabelledSpace(g, power_set_family(g))


def loop() -> LabelledSpace:
    g = LabelledGraph(("v",), (Edge("e", "v", "v", "a"),))
    return LabelledSpace(g, power_set_family(g))


FIXTURES = {"G1": g1, "G1P": g1p, "G2": g2}


def document(space: LabelledSpace, family="power_set") -> dict:
    g = space.graph
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "rng": e.rng, "label": e.label} for e in g.edges],
        "family": family,
    }


def random_graph(rng: random.Random, max_vertices: int = 5, letters: str = "ab") -> LabelledGraph:
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    m = rng.randint(1, 2 * n)
    edges = []
    for i in range(m):
        edges.append(Edge(f"e{i}", rng.choice(verts), rng.choice(verts), rng.choice(letters)))
    return LabelledGraph(tuple(verts), tuple(edges))


def random_spaces(seed: int, count: int, max_vertices: int = 5) -> list[LabelledSpace]:
    """``count`` random labelled spaces satisfying the tight-spectrum
    hypotheses.  Left-resolving graphs get the power set half of the time;
    otherwise the family is generated from one random vertex set and kept
    only when it comes out weakly left-resolving."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_graph(rng, max_vertices)
        if is_left_resolving(g) and rng.random() < 0.5:
            fam = power_set_family(g)
        else:
            seed_set = rng.randrange(g.universe + 1)
            fam = generate_family(g, [seed_set])
        if fam.accommodating and fam.complements and fam.weakly_left_resolving:
            out.append(LabelledSpace(g, fam))
    return out
