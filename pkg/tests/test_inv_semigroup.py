import itertools

import pytest

from tightspace.inv_semigroup import (
    ZERO,
    Triple,
    enumerate_elements,
    enumerate_idempotents,
    involution,
    leq,
    make_element,
    meet,
    multiply,
)


def T(space, alpha, names, beta):
    return Triple(tuple(alpha), space.graph.vset(names), tuple(beta))


E0 = ["v1", "v2", "v3"]


def test_make_element(G1):
    assert make_element(G1, "a", G1.graph.vset(["v1"]), "a") == T(G1, "a", ["v1"], "a")
    assert make_element(G1, "a", G1.graph.vset(["v2", "v3"]), "")
    with pytest.raises(ValueError):
        make_element(G1, "a", 0, "a")
    with pytest.raises(ValueError):
        make_element(G1, "", G1.graph.vset(["v2"]), "")  # {v2} is not in the family


def test_multiply_examples(G1):
    assert multiply(G1, T(G1, "", E0, ""), T(G1, "a", ["v1"], "a")) == T(G1, "a", ["v1"], "a")
    assert multiply(G1, T(G1, "a", ["v1"], "a"), T(G1, "a", ["v2", "v3"], "a")) is ZERO
    s = T(G1, "a", ["v1"], "")
    assert multiply(G1, s, ZERO) is ZERO and multiply(G1, ZERO, s) is ZERO


def test_involution():
    s = Triple(("a",), 1, ())
    assert involution(s) == Triple((), 1, ("a",))
    assert involution(ZERO) is ZERO
    assert involution(involution(s)) == s


def test_leq_examples(G1):
    assert leq(G1, T(G1, "a", ["v1"], "a"), T(G1, "", ["v2", "v3"], ""))
    assert not leq(G1, T(G1, "a", ["v1"], "a"), T(G1, "", ["v1"], ""))
    p = T(G1, "a", ["v1"], "a")
    assert leq(G1, p, p)
    with pytest.raises(ValueError):
        leq(G1, T(G1, "a", ["v1"], ""), p)


def test_meet_examples(G1):
    assert meet(G1, T(G1, "", ["v1"], ""), T(G1, "", ["v2", "v3"], "")) is ZERO
    assert meet(G1, T(G1, "", E0, ""), T(G1, "a", ["v1"], "a")) == T(G1, "a", ["v1"], "a")


def test_enumerate_idempotent_counts(G1, G2):
    assert len(enumerate_idempotents(G1, 0)) == 3
    assert len(enumerate_idempotents(G1, 1)) == 6
    assert len(enumerate_idempotents(G2, 1)) == 4


@pytest.mark.parametrize("name", ["G1", "G2"])
def test_semigroup_laws(name, request):
    sp = request.getfixturevalue(name)
    elems = enumerate_elements(sp, 2) + [ZERO]
    mul = lambda s, t: multiply(sp, s, t)
    for s, t, u in itertools.product(elems, repeat=3):
        assert mul(mul(s, t), u) == mul(s, mul(t, u))
    for s in elems:
        if s is ZERO:
            continue
        assert mul(mul(s, involution(s)), s) == s
        assert mul(mul(involution(s), s), involution(s)) == involution(s)
        for t in elems:
            p = mul(s, t)
            if p is not ZERO:
                assert p.A and p.A in sp.B(p.alpha) and p.A in sp.B(p.beta)
    idem = [p for p in enumerate_idempotents(sp, 2)]
    for p, q in itertools.product(idem, repeat=2):
        assert mul(p, q) == mul(q, p)
        assert leq(sp, p, q) == (mul(p, q) == p)
