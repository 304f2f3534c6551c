import pytest

from tightspace import fixtures
from tightspace.filters import FilterFiniteType, StageAutomaton, enumerate_lassos, tight_spectrum
from tightspace.surgery import (
    G_map,
    H_map,
    SurgeryError,
    g_map,
    h_map,
    in_T,
    in_X,
    is_tight,
    surgery_suite,
)


def V(space, *names):
    return space.graph.vset(names)


def test_g_and_h_on_g2(G2):
    F = G2.ufilter((), V(G2, "w"))
    assert in_X(G2, ("a",), F)
    G = g_map(G2, ("a",), (), F)
    assert (G.word, G.generator) == (("a",), V(G2, "w"))
    assert h_map(G2, ("a",), (), G) == F
    U = G2.ufilter((), V(G2, "u"))
    assert not in_X(G2, ("a",), U)
    with pytest.raises(SurgeryError):
        g_map(G2, ("a",), (), U)
    with pytest.raises(SurgeryError):
        h_map(G2, ("a",), (), F)


def test_empty_prefix_is_identity(G1):
    F = G1.ufilter((), V(G1, "v1"))
    assert in_X(G1, (), F)
    assert g_map(G1, (), (), F) == F and h_map(G1, (), (), F) == F


def test_G_H_swap_lassos_in_g1(G1):
    aut = StageAutomaton(G1)
    x, y = enumerate_lassos(aut, 4)
    assert G_map(G1, ("a",), x) == y and G_map(G1, ("a",), y) == x
    assert H_map(G1, ("a",), x) == y and H_map(G1, ("a",), y) == x


def test_G_H_on_finite_type(G2):
    xi = FilterFiniteType((), V(G2, "w"))
    assert in_T(G2, ("a",), xi)
    up = G_map(G2, ("a",), xi)
    assert up == FilterFiniteType(("a",), V(G2, "w"))
    assert H_map(G2, ("a",), up) == xi
    with pytest.raises(SurgeryError):
        H_map(G2, ("a",), xi)
    with pytest.raises(SurgeryError):
        G_map(G2, ("a",), FilterFiniteType((), V(G2, "u")))


@pytest.mark.parametrize("make", [fixtures.g1, fixtures.g1p, fixtures.g2, fixtures.loop])
def test_surgery_suite_fixtures(make):
    rep = surgery_suite(make(), total=4)
    assert rep.ok, rep.failures[:3]
    assert rep.checks["g_compose"][1] > 0 or make is fixtures.g1


def test_surgery_suite_random():
    for sp in fixtures.random_spaces(11, 8):
        rep = surgery_suite(sp, total=3, word_bound=2, lasso_bound=3)
        assert rep.ok, (sp.graph, rep.failures[:3])


def test_images_stay_tight(G1P):
    aut = StageAutomaton(G1P)
    for xi in tight_spectrum(G1P, 3, 4).basis:
        for a in G1P.alphabet:
            if in_T(G1P, (a,), xi):
                assert is_tight(G1P, aut, G_map(G1P, (a,), xi))
