import itertools

import pytest

from tightspace import fixtures
from tightspace.filters import (
    FilterFiniteType,
    StageAutomaton,
    boundary_paths,
    bounded_cover_falsifier,
    canonical_lasso,
    complete_admissible,
    complete_family,
    enumerate_lassos,
    enumerate_tight_finite,
    enumerate_tight_lassos,
    f_map,
    filter_from_pair,
    is_tight_finite_type,
    is_ultrafilter_in_ES,
    map_lasso,
    sink_ultrafilters,
    tight_spectrum,
    tight_vs_boundary_check,
    unroll,
)
from tightspace.inv_semigroup import Triple
from tightspace.labelled_core import ultrafilters, words


def V(space, *names):
    return space.graph.vset(names)


def gens(filters):
    return [F.generator if F is not None else None for F in filters]


# --- oracle: coherent stage sequences by brute force ------------------------


def coherent_sequences(space, n):
    """All (word, atom sequence) of length n with each stage the f-image of
    the next, found by trying every atom at every stage."""
    out = []
    for w in words(space.alphabet, n):
        if len(w) != n or not space.range_of(w):
            continue
        choices = [space.B(w[:k]).atoms for k in range(1, n + 1)]
        for atoms in itertools.product(*choices):
            ok = True
            for k in range(1, n):
                F = space.ufilter(w[:k + 1], atoms[k])
                img = f_map(space, w[:k], w[k:k + 1], F)
                if img is None or img.generator != atoms[k - 1]:
                    ok = False
                    break
            if ok:
                out.append((w, atoms))
    return out


def test_filter_from_pair_membership(G1, G2):
    xi = filter_from_pair(G2, ("a",), G2.ufilter(("a",), V(G2, "w")))
    assert xi.contains(G2, Triple((), V(G2, "u", "w"), ()))
    eta = filter_from_pair(G1, (), G1.ufilter((), V(G1, "v1")))
    members = {p for p in [Triple((), A, ()) for A in G1.family.members if A] if eta.contains(G1, p)}
    assert members == {Triple((), V(G1, "v1"), ()), Triple((), G1.graph.universe, ())}
    with pytest.raises(ValueError):
        filter_from_pair(G1, (), None)


def test_complete_family_examples(G1, G1P, G2):
    xi = FilterFiniteType(("a",), V(G2, "w"))
    assert gens(complete_family(G2, xi)) == [V(G2, "u"), V(G2, "w")]
    assert gens(complete_family(G1, FilterFiniteType((), V(G1, "v1")))) == [V(G1, "v1")]
    xi = FilterFiniteType(("a", "a"), V(G1P, "v3"))
    assert gens(complete_family(G1P, xi)) == [V(G1P, "v2"), V(G1P, "v1"), V(G1P, "v3")]


def test_complete_admissible(G1, G2):
    top = G2.ufilter(("a",), V(G2, "w"))
    assert complete_admissible(G2, ("a",), [None, top]) == filter_from_pair(G2, ("a",), top)
    xi = FilterFiniteType(("a",), V(G1, "v1"))
    done = complete_family(G1, xi)
    assert complete_admissible(G1, ("a",), done) == xi
    partial = [G1.ufilter((), G1.graph.universe), G1.ufilter(("a",), V(G1, "v1"))]
    out = complete_admissible(G1, ("a",), partial)
    assert out.stage(G1, 0).generator == V(G1, "v2", "v3")
    with pytest.raises(ValueError):
        complete_admissible(G1, ("a",), [G1.ufilter((), V(G1, "v1")), G1.ufilter(("a",), V(G1, "v1"))])


def test_f_map_examples(G1, G2):
    assert f_map(G1, (), ("a",), G1.ufilter(("a",), V(G1, "v1"))).generator == V(G1, "v2", "v3")
    assert f_map(G2, (), ("a",), G2.ufilter(("a",), V(G2, "w"))).generator == V(G2, "u")
    F = G1.ufilter(("a",), V(G1, "v1"))
    assert f_map(G1, ("a",), (), F) == F


def test_f_map_composition(G1P, G2, G1):
    for sp in (G1, G1P, G2):
        for w in sp.labelled_paths(4):
            for i, j in itertools.combinations_with_replacement(range(len(w) + 1), 2):
                alpha, beta, gamma = w[:i], w[i:j], w[j:]
                for F in ultrafilters(sp.B(w)):
                    inner = f_map(sp, alpha + beta, gamma, F)
                    lhs = f_map(sp, alpha, beta + gamma, F)
                    rhs = f_map(sp, alpha, beta, inner) if inner is not None else None
                    assert lhs == rhs


def test_sink_ultrafilters(G1, G2):
    assert gens(sink_ultrafilters(G2, ())) == [V(G2, "w")]
    assert sink_ultrafilters(G1, ()) == []
    assert gens(sink_ultrafilters(G2, ("a",))) == [V(G2, "w")]


def test_ultrafilter_and_tight_classification(G1, G2):
    assert is_ultrafilter_in_ES(G2, FilterFiniteType(("a",), V(G2, "w")))
    assert not is_ultrafilter_in_ES(G1, FilterFiniteType((), V(G1, "v1")))
    for lasso in enumerate_lassos(StageAutomaton(G1), 4):
        assert is_ultrafilter_in_ES(G1, lasso)
    assert is_tight_finite_type(G2, FilterFiniteType(("a",), V(G2, "w")))
    assert not is_tight_finite_type(G2, FilterFiniteType((), V(G2, "u")))
    for w in G1.labelled_paths(3):
        for A in G1.B(w).members:
            if A:
                assert not is_tight_finite_type(G1, FilterFiniteType(w, A))


def test_tight_means_atom_inside_sinks(G1P, G2):
    for sp in (G1P, G2) + tuple(fixtures.random_spaces(3, 6)):
        for w in sp.labelled_paths(3):
            for U in sp.B(w).atoms:
                expect = U & ~sp.graph.sinks == 0
                assert is_tight_finite_type(sp, FilterFiniteType(w, U)) == expect


def test_stage_automaton_examples(G1, G1P, G2):
    aut = StageAutomaton(G1)
    E0 = G1.graph.universe
    assert aut.nodes == sorted([(E0, V(G1, "v1")), (E0, V(G1, "v2", "v3"))])
    assert aut.successors((E0, V(G1, "v1"))) == [("a", E0, V(G1, "v2", "v3"))]
    assert aut.successors((E0, V(G1, "v2", "v3"))) == [("a", E0, V(G1, "v1"))]
    aut2 = StageAutomaton(G2)
    assert aut2.nodes == [(V(G2, "w"), V(G2, "w"))]
    assert aut2.successors(aut2.nodes[0]) == []
    autp = StageAutomaton(G1P)
    succ = lambda *v: sorted(U for _, _, U in autp.successors((E0, V(G1P, *v))))
    assert succ("v1") == sorted([V(G1P, "v2"), V(G1P, "v3")])
    assert succ("v2") == [V(G1P, "v1")]
    assert succ("v3") == []


@pytest.mark.parametrize("make", [fixtures.g1, fixtures.g1p, fixtures.g2])
def test_automaton_edges_recomputed(make):
    sp = make()
    aut = StageAutomaton(sp)
    for R, U in aut.nodes:
        for a, R2, U2 in aut.successors((R, U)):
            # any word with range R will do; rebuild the f-image directly
            members = [A for A in sp.family.members if A and A & ~R == 0 and sp.r(A, (a,)) & U2 == U2]
            gen = R
            for A in members:
                gen &= A
            assert gen == U and R2 == sp.r(R, (a,))


def test_enumerate_tight_examples(G1, G1P, G2):
    assert enumerate_tight_finite(G1, 3) == []
    assert enumerate_tight_finite(G2, 1) == [FilterFiniteType((), V(G2, "w")), FilterFiniteType(("a",), V(G2, "w"))]
    assert enumerate_tight_finite(G1P, 2) == [FilterFiniteType(w, V(G1P, "v3")) for w in [(), ("a",), ("a", "a")]]
    lassos, exhaustive = enumerate_tight_lassos(G1, 6)
    assert len(lassos) == 2 and exhaustive
    assert enumerate_tight_lassos(G2, 6) == ([], True)
    lassos, _ = enumerate_tight_lassos(G1P, 6)
    assert sorted(x.cycle[0][2] for x in lassos) == sorted([V(G1P, "v1"), V(G1P, "v2")])


def test_spectrum_verdicts(G1, G1P, G2):
    assert tight_spectrum(G1, 3, 6).verdict == "2 points"
    assert tight_spectrum(G2, 3, 6).verdict == "2 points"
    assert tight_spectrum(G1P, 3, 6).verdict == "countably infinite"
    assert tight_spectrum(fixtures.loop(), 3, 6).verdict == "1 point"
    # two loops at one vertex: uncountably many infinite walks
    from tightspace.labelled_core import Edge, LabelledGraph, LabelledSpace, power_set_family
    g = LabelledGraph(("v",), (Edge("e", "v", "v", "a"), Edge("f", "v", "v", "b")))
    sp = LabelledSpace(g, power_set_family(g))
    spectrum = tight_spectrum(sp, 2, 3)
    assert spectrum.verdict == "uncountable" and not spectrum.lassos_exhaustive


@pytest.mark.parametrize("make,n", [(fixtures.g1, 5), (fixtures.g1p, 5), (fixtures.g2, 3)])
def test_lassos_agree_with_coherent_sequence_oracle(make, n):
    sp = make()
    aut = StageAutomaton(sp)
    live_prefixes = set()
    for x in enumerate_lassos(aut, 6):
        steps = x.steps(n)
        live_prefixes.add((tuple(s[0] for s in steps), tuple(s[2] for s in steps)))
    oracle = set(coherent_sequences(sp, n))
    # every lasso prefix is coherent; coherent sequences that can go on forever are lasso prefixes
    assert live_prefixes <= oracle
    extendable = {seq for seq in oracle
                  if any(seq == (w[:n], a[:n]) for w, a in coherent_sequences(sp, n + 3))}
    assert extendable == live_prefixes


def test_canonical_lasso_properties():
    assert canonical_lasso((), (1, 2, 1, 2)) == ((), (1, 2))
    assert canonical_lasso((2,), (1, 2)) == ((), (2, 1))
    assert canonical_lasso((3, 1, 2), (1, 2)) == ((3,), (1, 2))
    for p, c in [((1, 2, 3), (3, 3)), ((), (1,)), ((4, 1), (2, 1, 2, 1))]:
        cp, cc = canonical_lasso(p, c)
        assert canonical_lasso(cp, cc) == (cp, cc)
        n = 3 * (len(p) + len(c))
        assert unroll(cp, cc, n) == unroll(p, c, n)
    with pytest.raises(ValueError):
        canonical_lasso((1,), ())


def test_map_lasso_identity_and_shift():
    assert map_lasso((1,), (2, 3), None, lambda x, s: (x, s)) == ((1,), (2, 3))
    # running parity makes the period double
    p, c = map_lasso((), (1,), 0, lambda x, s: ((x, s), 1 - s))
    assert (p, c) == ((), ((1, 0), (1, 1)))


def test_boundary_paths_examples(G2):
    fin, las = boundary_paths(G2.graph, 2)
    assert [(p.vertex, p.edges) for p in fin] == [("w", ()), ("w", ("f",))]
    assert las == []
    fin, las = boundary_paths(fixtures.g1_graph(), 3)
    assert sorted(p.edges for p in fin) == sorted([(), ("e3",), ("e2", "e3"), ("e1", "e2", "e3")])
    assert sorted(x.cycle for x in las) == [("e1", "e2"), ("e2", "e1")]
    fin, las = boundary_paths(fixtures.loop().graph, 3)
    assert fin == [] and len(las) == 1


def test_tight_vs_boundary(G2, G1P, G1):
    rep = tight_vs_boundary_check(G2, 2)
    assert rep["ok"] and rep["counts"]["tight_finite"] == 2
    rep = tight_vs_boundary_check(G1P, 3)
    assert rep["ok"] and rep["counts"] == {"boundary_finite": 4, "boundary_lassos": 2, "boundary_lassos_within_bound": 2,
                                           "tight_finite": 4, "tight_lassos": 2}
    assert tight_vs_boundary_check(fixtures.loop(), 3)["counts"]["tight_lassos"] == 1
    with pytest.raises(ValueError):
        tight_vs_boundary_check(G1, 3)


def test_bounded_cover_falsifier(G1, G2):
    hit = bounded_cover_falsifier(G2, FilterFiniteType((), V(G2, "u")), 1)
    assert hit is not None and hit["x"] == Triple((), V(G2, "u"), ())
    assert hit["cover"] == [Triple(("a",), V(G2, "w"), ("a",))]
    assert bounded_cover_falsifier(G2, FilterFiniteType(("a",), V(G2, "w")), 2) is None
    for x in enumerate_lassos(StageAutomaton(G1), 4):
        assert bounded_cover_falsifier(G1, x, 3) is None


@pytest.mark.parametrize("make", [fixtures.g1, fixtures.g1p, fixtures.g2])
def test_complete_family_identity_and_comparable_words(make):
    sp = make()
    spectrum = tight_spectrum(sp, 3, 4)
    for xi in spectrum.basis:
        top = len(xi.word) if not xi.infinite else 4
        stages = [xi.stage(sp, n) for n in range(top + 1)]
        w = xi.word_prefix(top)
        for n, m in itertools.combinations(range(top + 1), 2):
            img = f_map(sp, w[:n], w[n:m], stages[m])
            assert img == stages[n]
        members = [Triple(w[:n], A, w[:n]) for n in range(top + 1)
                   for A in sp.B(w[:n]).members if A and xi.contains(sp, Triple(w[:n], A, w[:n]))]
        for p, q in itertools.combinations(members, 2):
            short, long_ = sorted((p.alpha, q.alpha), key=len)
            assert long_[:len(short)] == short


@pytest.mark.parametrize("make", [fixtures.g1, fixtures.g1p, fixtures.g2])
def test_ultrafilters_pass_cover_falsifier(make):
    sp = make()
    for xi in tight_spectrum(sp, 3, 4).basis:
        assert is_ultrafilter_in_ES(sp, xi)
        assert bounded_cover_falsifier(sp, xi, 3) is None


def test_boundary_sizes_measured_on_stage_side():
    # a-loop at v2 whose range settles one step late: path sizes and stage
    # sizes disagree, the bijection still holds
    import random
    from tightspace.labelled_core import LabelledSpace, is_left_resolving, power_set_family
    rng = random.Random(249)
    g = fixtures.random_graph(rng, 4)
    while not is_left_resolving(g):
        g = fixtures.random_graph(rng, 4)
    rep = tight_vs_boundary_check(LabelledSpace(g, power_set_family(g)), 3)
    c = rep["counts"]
    assert rep["ok"] and c["boundary_lassos"] > c["tight_lassos"] == c["boundary_lassos_within_bound"]
