"""Randomised algebraic identities over small random labelled spaces."""
import itertools
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tightspace import fixtures
from tightspace.diagonal import random_chained_family, refine_F, refinement_report, resolution_check
from tightspace.filters import (
    StageAutomaton,
    canonical_lasso,
    enumerate_lassos,
    f_map,
    tight_spectrum,
    tight_vs_boundary_check,
    unroll,
)
from tightspace.inv_semigroup import ZERO, enumerate_elements, enumerate_idempotents, involution, leq, multiply
from tightspace.labelled_core import (
    LabelledSpace,
    all_filters,
    is_left_resolving,
    is_ultrafilter_oracle,
    power_set_family,
    ultrafilters,
)
from tightspace.surgery import surgery_suite

SETTINGS = settings(max_examples=25, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(min_value=0, max_value=10**6)


def space_for(seed):
    return fixtures.random_spaces(seed, 1, max_vertices=4)[0]


@SETTINGS
@given(seeds)
def test_semigroup_identities(seed):
    sp = space_for(seed)
    elems = enumerate_elements(sp, 1) + [ZERO]
    mul = lambda s, t: multiply(sp, s, t)
    for s, t in itertools.product(elems, repeat=2):
        assert involution(mul(s, t)) == mul(involution(t), involution(s))
        for u in elems[:12]:
            assert mul(mul(s, t), u) == mul(s, mul(t, u))
    idem = enumerate_idempotents(sp, 1)
    for p, q in itertools.product(idem, repeat=2):
        assert leq(sp, p, q) == (mul(p, q) == p)


@SETTINGS
@given(seeds)
def test_atoms_agree_with_oracle(seed):
    sp = space_for(seed)
    for w in sp.labelled_paths(2):
        ba = sp.B(w)
        if len(ba.members) > 32:
            continue
        atoms = {F.generator for F in ultrafilters(ba)}
        oracle = {F.generator for F in all_filters(ba) if is_ultrafilter_oracle(ba, F)}
        assert atoms == oracle


@SETTINGS
@given(seeds)
def test_f_composition(seed):
    sp = space_for(seed)
    for w in sp.labelled_paths(3):
        for i, j in itertools.combinations_with_replacement(range(len(w) + 1), 2):
            for F in ultrafilters(sp.B(w)):
                inner = f_map(sp, w[:j], w[j:], F)
                lhs = f_map(sp, w[:i], w[i:], F)
                assert lhs == (f_map(sp, w[:i], w[i:j], inner) if inner is not None else None)


@SETTINGS
@given(seeds)
def test_surgery_laws(seed):
    rep = surgery_suite(space_for(seed), total=3, word_bound=2, lasso_bound=3)
    assert rep.ok, rep.failures[:2]


@SETTINGS
@given(seeds)
def test_lassos_are_valid_walks(seed):
    sp = space_for(seed)
    aut = StageAutomaton(sp)
    for x in enumerate_lassos(aut, 4):
        assert aut.is_valid_walk(x.prefix, x.cycle)
        assert (x.prefix, x.cycle) == canonical_lasso(x.prefix, x.cycle)


@SETTINGS
@given(seeds)
def test_boundary_correspondence(seed):
    rng = random.Random(seed)
    g = fixtures.random_graph(rng, 4)
    while not is_left_resolving(g):
        g = fixtures.random_graph(rng, 4)
    rep = tight_vs_boundary_check(LabelledSpace(g, power_set_family(g)), 3)
    assert rep["ok"], rep["problems"][:2]


@SETTINGS
@given(seeds)
def test_diagonal_resolution(seed):
    sp = space_for(seed)
    pool = enumerate_idempotents(sp, 2)
    rng = random.Random(seed)
    for _ in range(4):
        F = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
        Fp = refine_F(sp, F)
        assert refinement_report(sp, F, Fp)["ok"]
        assert resolution_check(Fp)[0]
        assert resolution_check(random_chained_family(sp, pool, rng, 4))[0]


@given(st.lists(st.integers(0, 3), max_size=4), st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_canonical_lasso_same_word(prefix, cycle):
    p, c = canonical_lasso(tuple(prefix), tuple(cycle))
    n = 2 * (len(prefix) + len(cycle)) + 4
    assert unroll(p, c, n) == unroll(tuple(prefix), tuple(cycle), n)
    assert len(p) <= len(prefix) and len(c) <= len(cycle)


def test_verdict_is_stable_under_bounds():
    for sp in fixtures.random_spaces(2, 6, max_vertices=4):
        assert tight_spectrum(sp, 2, 3).verdict == tight_spectrum(sp, 3, 5).verdict
