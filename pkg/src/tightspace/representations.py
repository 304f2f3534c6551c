"""Concrete operator models acting lazily on finitely supported vectors.

``TightRepresentation`` lives on the span of tight filters: ``P_A`` tests
``A in xi_0`` and ``S_a`` glues the letter ``a`` in front.  ``PathRepresentation``
lives on ``X = disjoint union of copies of N`` indexed by edges and sinks, with
explicit bijections ``h_e``.  Both feed the relation audits.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .filters import (
    StageAutomaton,
    TightFilter,
    filter_sort_key,
    tight_filter_through,
    tight_spectrum,
)
from .inv_semigroup import ZERO, Triple, enumerate_elements, multiply
from .labelled_core import LabelledSpace, VertexSet, is_left_resolving, label_set
from .surgery import G_map, H_map, in_T, starts_with

Vector = dict  # basis key -> Fraction


def vec_add(x: Vector, y: Vector, c=1) -> Vector:
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def basis(key) -> Vector:
    return {key: Fraction(1)}


class Operator:
    """Basis action plus adjoint action; composition and sums stay lazy."""

    def __init__(self, act: Callable, adj: Callable, label: str = ""):
        self._act = act
        self._adj = adj
        self.label = label

    def on_key(self, key) -> Vector:
        return self._act(key)

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for k, c in vec.items():
            out = vec_add(out, self._act(k), c)
        return out

    def __call__(self, vec: Vector) -> Vector:
        return self.apply(vec)

    def star(self) -> "Operator":
        return Operator(self._adj, self._act, f"({self.label})*")

    def cached(self) -> "Operator":
        """Same operator with both basis actions memoised (results are shared,
        callers must not mutate them)."""
        return Operator(lru_cache(maxsize=None)(self._act), lru_cache(maxsize=None)(self._adj), self.label)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(
            lambda k: self.apply(other._act(k)),
            lambda k: other.star().apply(self._adj(k)),
            f"{self.label}{other.label}",
        )

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(
            lambda k: vec_add(self._act(k), other._act(k)),
            lambda k: vec_add(self._adj(k), other._adj(k)),
            f"({self.label}+{other.label})",
        )

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(
            lambda k: vec_add(self._act(k), other._act(k), -1),
            lambda k: vec_add(self._adj(k), other._adj(k), -1),
            f"({self.label}-{other.label})",
        )

    def __repr__(self):
        return f"Operator({self.label})"


ZERO_OP = Operator(lambda k: {}, lambda k: {}, "0")
IDENTITY = Operator(basis, basis, "1")


def projection(pred: Callable, label: str) -> Operator:
    act = lambda k: basis(k) if pred(k) else {}
    return Operator(act, act, label)


class Representation:
    """Shared composite operators; subclasses provide ``P``, ``S`` and keys."""

    space: LabelledSpace
    name = "rep"

    def P(self, A: VertexSet) -> Operator:
        raise NotImplementedError

    def S(self, a: str) -> Operator:
        raise NotImplementedError

    def S_word(self, word: Sequence[str]) -> Operator:
        word = tuple(word)
        if not word:
            return IDENTITY
        op = self.S(word[0])
        for a in word[1:]:
            op = op @ self.S(a)
        return op

    def rep_word(self, alpha: Sequence[str], A: VertexSet, beta: Sequence[str]) -> Operator:
        """``S_alpha P_A S_beta*``; the empty word contributes nothing."""
        alpha, beta = tuple(alpha), tuple(beta)
        op = self.P(A)
        if alpha:
            op = self.S_word(alpha) @ op
        if beta:
            op = op @ self.S_word(beta).star()
        return op

    def rep_element(self, s) -> Operator:
        if s is ZERO:
            return ZERO_OP
        return self.rep_word(s.alpha, s.A, s.beta)

    def sample_keys(self, samples: int, seed: int) -> list:
        raise NotImplementedError

    finite_basis: Optional[list] = None


# --- tight spectrum representation -------------------------------------------


class TightRepresentation(Representation):
    name = "tight"

    def __init__(self, space: LabelledSpace, word_bound: int = 3, lasso_bound: int = 6):
        space.require_tight_hypotheses()
        self.space = space
        self.aut = StageAutomaton(space)
        self.spectrum = tight_spectrum(space, word_bound, lasso_bound)
        keys = sorted(self.spectrum.basis, key=filter_sort_key)
        self.enumerated = keys
        self.finite_basis = keys if self.spectrum.exhaustive else None
        self._S: dict = {}

    def in_xi0(self, xi: TightFilter, A: VertexSet) -> bool:
        return bool(A) and xi.contains(self.space, Triple((), A, ()))

    def P(self, A: VertexSet) -> Operator:
        return projection(lambda xi: self.in_xi0(xi, A), f"P{self.space.fmt(A)}")

    def S(self, a: str) -> Operator:
        if a not in self._S:
            self._S[a] = self._make_S(a).cached()
        return self._S[a]

    def _make_S(self, a: str) -> Operator:
        sp = self.space

        def act(xi):
            return basis(G_map(sp, (a,), xi)) if in_T(sp, (a,), xi) else {}

        def adj(xi):
            return basis(H_map(sp, (a,), xi)) if starts_with(xi, (a,)) else {}

        return Operator(act, adj, f"S{a}")

    def sample_keys(self, samples: int, seed: int) -> list:
        if self.finite_basis is not None:
            return list(self.finite_basis)
        rng = random.Random(seed)
        keys = list(self.enumerated)
        return keys if len(keys) <= samples else sorted(rng.sample(keys, samples), key=filter_sort_key)

    def matrix(self, x) -> "object":
        """Matrix of a diagonal element (or an Operator) on the finite basis."""
        import numpy as np

        if self.finite_basis is None:
            raise ValueError("tight spectrum enumeration is not exhaustive")
        op = x if isinstance(x, Operator) else self.diag_operator(x)
        idx = {k: i for i, k in enumerate(self.finite_basis)}
        M = np.zeros((len(idx), len(idx)))
        for j, k in enumerate(self.finite_basis):
            for k2, c in op.on_key(k).items():
                if k2 not in idx:
                    raise ValueError("operator leaves the enumerated basis")
                M[idx[k2], j] += float(c)
        return M

    def diag_operator(self, x) -> Operator:
        op = ZERO_OP
        for p, c in sorted(x.terms.items(), key=lambda kv: (len(kv[0].alpha), kv[0].alpha, kv[0].A)):
            term = self.rep_word(p.alpha, p.A, p.alpha)
            op = op + Operator(lambda k, t=term, c=c: {q: c * v for q, v in t.on_key(k).items()},
                               lambda k, t=term, c=c: {q: c * v for q, v in t.star().on_key(k).items()})
        return op


# --- path space representation ---------------------------------------------------


@dataclass(frozen=True, order=True)
class PathKey:
    kind: str         # "edge" or "sink"
    name: str         # edge id or sink vertex
    index: int

    def __repr__(self):
        return f"({self.kind}:{self.name},{self.index})"


class PathRepresentation(Representation):
    name = "path"

    def __init__(self, space: LabelledSpace):
        g = space.graph
        if not is_left_resolving(g):
            raise ValueError("path representation needs a left-resolving graph")
        self.space = space
        self.graph = g
        self.containers = [("edge", e.id) for e in g.edges] + [
            ("sink", v) for v in g.vertices if not g.out_edges(v)
        ]

    def vertex(self, key: PathKey) -> str:
        return self.graph.edge(key.name).src if key.kind == "edge" else key.name

    def _domain(self, e):
        return [f.id for f in self.graph.out_edges(e.rng)]

    def h(self, edge_id: str, key: PathKey) -> PathKey:
        """Bijection ``D_{r(e)} -> E_e``."""
        e = self.graph.edge(edge_id)
        if self.vertex(key) != e.rng:
            raise ValueError(f"{key} is not in D_{e.rng}")
        if key.kind == "sink":
            return PathKey("edge", e.id, key.index)
        dom = self._domain(e)
        if dom == [e.id]:
            return PathKey("edge", e.id, key.index ^ 1)
        return PathKey("edge", e.id, len(dom) * key.index + dom.index(key.name))

    def h_inverse(self, edge_id: str, key: PathKey) -> PathKey:
        e = self.graph.edge(edge_id)
        if key.kind != "edge" or key.name != e.id:
            raise ValueError(f"{key} is not in E_{e.id}")
        dom = self._domain(e)
        if not dom:
            return PathKey("sink", e.rng, key.index)
        if dom == [e.id]:
            return PathKey("edge", e.id, key.index ^ 1)
        n, i = divmod(key.index, len(dom))
        return PathKey("edge", dom[i], n)

    def P(self, A: VertexSet) -> Operator:
        g = self.graph
        return projection(lambda k: A >> g.index[self.vertex(k)] & 1 == 1, f"P{self.space.fmt(A)}")

    def S(self, a: str) -> Operator:
        g = self.graph

        def act(k):
            into = [e for e in g.in_edges(self.vertex(k)) if e.label == a]
            return basis(self.h(into[0].id, k)) if into else {}

        def adj(k):
            if k.kind == "edge" and g.edge(k.name).label == a:
                return basis(self.h_inverse(k.name, k))
            return {}

        return Operator(act, adj, f"S{a}")

    def sample_keys(self, samples: int, seed: int, max_index: int = 64) -> list:
        rng = random.Random(seed)
        max_index = max(max_index, 2 * samples // len(self.containers) + 1)
        keys = {PathKey(kind, name, 0) for kind, name in self.containers}
        while len(keys) < samples:
            kind, name = rng.choice(self.containers)
            keys.add(PathKey(kind, name, rng.randrange(max_index)))
        return sorted(keys)


# --- audits ----------------------------------------------------------------------------


def iv_hypotheses(space: LabelledSpace, A: VertexSet, variant: str) -> bool:
    g = space.graph
    if not label_set(g, A):
        return False
    sink_part = A & g.sinks
    if variant == "strict":
        return not any(B and B & ~sink_part == 0 for B in space.family.members)
    if variant in ("alt", "alternative"):
        return sink_part == 0
    raise ValueError(f"unknown variant {variant!r}")


def iv_rhs(rep: Representation, A: VertexSet) -> Operator:
    sp = rep.space
    op = ZERO_OP
    for a in sorted(label_set(sp.graph, A)):
        op = op + rep.rep_word((a,), sp.r(A, (a,)), (a,))
    return op


def _compare(lhs: Operator, rhs: Operator, keys: Iterable) -> Optional[object]:
    for k in keys:
        if lhs.on_key(k) != rhs.on_key(k):
            return k
    return None


class Audit:
    def __init__(self):
        self.relations: dict = {}

    def record(self, rel: str, instance: str, witness):
        entry = self.relations.setdefault(rel, {"checked": 0, "failures": []})
        entry["checked"] += 1
        if witness is not None:
            entry["failures"].append({"instance": instance, "witness": repr(witness)})

    @property
    def ok(self) -> bool:
        return all(not r["failures"] for r in self.relations.values())


def relation_audit(rep: Representation, variant: str = "strict", samples: int = 200, seed: int = 0) -> dict:
    sp = rep.space
    fmt = sp.fmt
    keys = rep.sample_keys(samples, seed)
    audit = Audit()
    fam = sp.family.ordered
    for A in fam:
        for B in fam:
            audit.record("i", f"A={fmt(A)},B={fmt(B)}", _compare(rep.P(A & B), rep.P(A) @ rep.P(B), keys))
    for A in fam:
        for a in sp.alphabet:
            lhs = rep.P(A) @ rep.S(a)
            rhs = rep.S(a) @ rep.P(sp.r(A, (a,)))
            audit.record("ii", f"A={fmt(A)},a={a}", _compare(lhs, rhs, keys))
    for a in sp.alphabet:
        lhs = rep.S(a).star() @ rep.S(a)
        audit.record("iii", f"a={a}", _compare(lhs, rep.P(sp.range_of((a,))), keys))
        s = rep.S(a)
        audit.record("partial_isometry", f"a={a}", _compare(s @ s.star() @ s, s, keys))
    applies = []
    for A in fam:
        if iv_hypotheses(sp, A, variant):
            applies.append(fmt(A))
            audit.record("iv", f"A={fmt(A)}", _compare(rep.P(A), iv_rhs(rep, A), keys))
    return {
        "representation": rep.name,
        "variant": variant,
        "keys_checked": len(keys),
        "iv_instances": applies,
        "relations": audit.relations,
        "ok": audit.ok,
    }


def semigroup_compatibility(rep: Representation, word_bound: int = 2, samples: int = 200,
                            seed: int = 0) -> dict:
    sp = rep.space
    keys = rep.sample_keys(samples, seed)
    elems = enumerate_elements(sp, word_bound)
    ops = {s: rep.rep_element(s).cached() for s in elems}
    ops[ZERO] = ZERO_OP
    failures = []
    for s in elems:
        Rs = ops[s]
        for t in elems:
            st = multiply(sp, s, t)
            w = _compare(Rs @ ops[t], ops.get(st) or rep.rep_element(st), keys)
            if w is not None:
                failures.append({"s": repr(s), "t": repr(t), "witness": repr(w)})
    return {"pairs": len(elems) ** 2, "failures": failures, "ok": not failures}


def nonvanishing_witness(rep: TightRepresentation, s: Triple) -> TightFilter:
    sp = rep.space
    U = next(U for U in sp.B(()).atoms if U & ~s.A == 0)
    eta = tight_filter_through(sp, rep.aut, U)
    return G_map(sp, s.beta, eta)


def nonvanishing_check(rep: TightRepresentation, word_bound: int = 3) -> dict:
    sp = rep.space
    failures = []
    elems = enumerate_elements(sp, word_bound)
    for s in elems:
        xi = nonvanishing_witness(rep, s)
        if not rep.rep_element(s).on_key(xi):
            failures.append({"element": repr(s), "witness": xi.describe(sp)})
    return {"elements": len(elems), "failures": failures, "ok": not failures}


def definition_discriminator(space: LabelledSpace, samples: int = 200, seed: int = 0,
                             max_index: int = 4) -> dict:
    """Sets where the strict and alternative sink relations differ, and whether the
    path representation honours the stricter one there."""
    fmt = space.fmt
    candidates = [A for A in space.family.ordered
                  if iv_hypotheses(space, A, "strict") and not iv_hypotheses(space, A, "alt")]
    rep = PathRepresentation(space)
    findings = []
    for A in candidates:
        keys = sorted(PathKey(kind, name, n) for kind, name in rep.containers
                      for n in range(max_index)
                      if A >> space.graph.index[rep.vertex(PathKey(kind, name, 0))] & 1)
        lhs, rhs = rep.P(A), iv_rhs(rep, A)
        bad = [k for k in keys if lhs.on_key(k) != rhs.on_key(k)]
        findings.append({
            "A": fmt(A),
            "relation_holds": not bad,
            "witness": repr(bad[0]) if bad else None,
        })
    alt = relation_audit(rep, "alt", samples, seed)
    separate = any(not f["relation_holds"] for f in findings) and alt["ok"]
    return {
        "candidates": findings,
        "alternative_audit_ok": alt["ok"],
        "alternative_keys_checked": alt["keys_checked"],
        "definitions_separate": separate,
    }
