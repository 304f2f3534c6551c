"""Formal span of the projections ``s_alpha p_A s_alpha*`` with exact rational
coefficients, the orthogonal projections ``q_u``, the refinement of a finite
set of idempotents into a chained family, characters ``phi_xi`` and their
inverse.

The algebra here is the semigroup algebra of ``E(S) minus {0}``: every key is
a non-zero idempotent and keys multiply by the semigroup meet.  It maps onto
the diagonal subalgebra but is not claimed to be faithful, so only identities
that follow from the product rule are checked with it.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .filters import (
    FilterFiniteType,
    LassoFilter,
    StageAutomaton,
    TightFilter,
    canonical_lasso,
    unroll,
)
from .inv_semigroup import ZERO, Triple, idempotent_key, leq, meet, strip_prefix
from .labelled_core import LabelledSpace, VertexSet


class DiagonalElement:
    """Finite rational combination of non-zero idempotents."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Triple, object] = ()):
        clean = {}
        for k, v in dict(terms).items():
            v = Fraction(v)
            if v:
                if not k.is_idempotent:
                    raise ValueError(f"{k} is not an idempotent")
                clean[k] = clean.get(k, 0) + v
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def of(cls, p: Triple, coeff=1) -> "DiagonalElement":
        return cls({p: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return DiagonalElement(out)

    def __neg__(self):
        return DiagonalElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiagonalElement":
        return DiagonalElement({k: Fraction(c) * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, DiagonalElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda kv: idempotent_key(kv[0]))
        return "DiagonalElement(" + ", ".join(f"{v}*{k}" for k, v in items) + ")"


def multiply_diag(space: LabelledSpace, x: DiagonalElement, y: DiagonalElement) -> DiagonalElement:
    out: dict = {}
    for p, a in x.terms.items():
        for q, b in y.terms.items():
            m = meet(space, p, q)
            if m is not ZERO:
                out[m] = out.get(m, 0) + a * b
    return DiagonalElement(out)


def _strictly_below(space, u: Triple, v: Triple) -> bool:
    return u != v and leq(space, u, v)


class ChainedFamily:
    """Finite set of non-zero idempotents, any two of which are orthogonal or
    comparable."""

    def __init__(self, space: LabelledSpace, members: Iterable[Triple]):
        self.space = space
        self.members = tuple(sorted(set(members), key=idempotent_key))
        bad = chain_violation(space, self.members)
        if bad is not None:
            raise ValueError(f"not chained: {bad}")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, u):
        return u in self.members

    def below(self, w: Triple) -> list[Triple]:
        return [u for u in self.members if _strictly_below(self.space, u, w)]


def chain_violation(space: LabelledSpace, members: Sequence[Triple]):
    for u in members:
        for v in members:
            if meet(space, u, v) is not ZERO and not (leq(space, u, v) or leq(space, v, u)):
                return (u, v)
    return None


def _cells(sets: Sequence[VertexSet]) -> set:
    """Non-empty ``cap_{I1} B_i minus cup_{I2} B_j`` over partitions with
    ``I1`` non-empty."""
    out = set()
    for mask in product((True, False), repeat=len(sets)):
        if not any(mask):
            continue
        cell = -1
        for inside, B in zip(mask, sets):
            cell = cell & B if inside else cell & ~B
        if cell > 0:
            out.add(cell)
    return out


def refine_F(space: LabelledSpace, F: Iterable[Triple]) -> ChainedFamily:
    F = [p for p in F if p is not ZERO]
    for p in F:
        if not p.is_idempotent or not p.A:
            raise ValueError(f"{p} is not a non-zero idempotent")
    return ChainedFamily(space, _refine(space, F))


def _refine(space: LabelledSpace, F: list[Triple]) -> set:
    if not F:
        return set()
    m = max(len(p.alpha) for p in F)
    if m == 0:
        return {Triple((), B, ()) for B in _cells(sorted({p.A for p in F}))}
    G1 = [p for p in F if len(p.alpha) < m]
    G2 = [p for p in F if len(p.alpha) == m]
    G1p = _refine(space, G1)
    out = set(G1p)
    for alpha in sorted({p.alpha for p in G2}):
        J = set()
        for q in list(G1p) + G2:
            rest = strip_prefix(alpha, q.alpha)
            if rest is not None:
                J.add(space.r(q.A, rest))
        J.discard(0)
        out |= {Triple(alpha, B, alpha) for B in _cells(sorted(J))}
    return out


def refinement_report(space: LabelledSpace, F: Sequence[Triple], Fp: ChainedFamily) -> dict:
    """Brute-force check of the refinement conditions."""
    problems = []
    for p in F:
        parts = [q.A for q in Fp if q.alpha == p.alpha and q.A & ~p.A == 0]
        union = 0
        for A in parts:
            union |= A
        if union != p.A:
            problems.append(("partition", p))
    if {p.alpha for p in F} != {q.alpha for q in Fp}:
        problems.append(("words", None))
    for u in Fp:
        for v in Fp:
            if u.alpha == v.alpha and u.A != v.A and u.A & v.A:
                problems.append(("disjoint", (u, v)))
    bad = chain_violation(space, Fp.members)
    if bad:
        problems.append(("chain", bad))
    return {"ok": not problems, "problems": problems}


def eta_bound_holds(space: LabelledSpace, F: Sequence[Triple], Fp: ChainedFamily) -> bool:
    for c in Fp:
        for p in F:
            if not leq(space, c, p):
                continue
            between = [q for q in Fp if q.alpha == p.alpha and leq(space, q, p) and leq(space, c, q)]
            if len(between) > 1:
                return False
    return True


def q_projection(Fp: ChainedFamily, u: Triple) -> DiagonalElement:
    if u not in Fp:
        raise ValueError("u is not a member of the family")
    space = Fp.space
    U = DiagonalElement.of(u)
    q = U
    for v in Fp.below(u):
        q = multiply_diag(space, q, U - DiagonalElement.of(v))
    return q


def resolution_check(Fp: ChainedFamily) -> tuple[bool, Optional[dict]]:
    space = Fp.space
    qs = {u: q_projection(Fp, u) for u in Fp}
    for u in Fp:
        if multiply_diag(space, qs[u], qs[u]) != qs[u]:
            return False, {"not_idempotent": u}
        for v in Fp:
            if u != v and multiply_diag(space, qs[u], qs[v]):
                return False, {"not_orthogonal": (u, v)}
    for w in Fp:
        total = DiagonalElement()
        for u in Fp:
            if leq(space, u, w):
                total = total + qs[u]
        if total != DiagonalElement.of(w):
            return False, {"resolution": w, "sum": total}
    return True, None


def random_chained_family(space: LabelledSpace, pool: Sequence[Triple], rng, size: int) -> ChainedFamily:
    """Greedy random chained family drawn from ``pool``."""
    order = list(pool)
    rng.shuffle(order)
    chosen: list[Triple] = []
    for p in order:
        if len(chosen) >= size:
            break
        if all(meet(space, p, q) is ZERO or leq(space, p, q) or leq(space, q, p) for q in chosen):
            chosen.append(p)
    return ChainedFamily(space, chosen)


# --- characters ---------------------------------------------------------------


def character_eval(space: LabelledSpace, xi: TightFilter, x: DiagonalElement) -> Fraction:
    return sum((v for k, v in x.terms.items() if xi.contains(space, k)), Fraction(0))


def character_assignment(space: LabelledSpace, xi: TightFilter, keys: Iterable[Triple]) -> dict:
    return {k: int(xi.contains(space, k)) for k in keys}


def phi_of_character(space: LabelledSpace, assignment: Mapping[Triple, int], depth: int,
                     aut: Optional[StageAutomaton] = None) -> TightFilter:
    """Recover the tight filter whose character takes the given 0/1 values on
    every idempotent with word length <= ``depth``.

    A filter whose longest word is shorter than ``depth`` is read off as a
    finite-type filter; otherwise the observed stage atoms are explained by
    the shortest lasso in the stage automaton.  Two different lassos of size
    at most ``s`` can agree on their first ``3s - 1`` stages, so the answer is
    guaranteed only for lassos of size ``<= depth / 3``; with a deterministic
    automaton any lasso of size ``<= depth`` is recovered.
    """
    ones = [k for k, v in assignment.items() if v]
    if not ones:
        raise ValueError("characters are non-zero; the assignment vanishes")
    longest = max((k.alpha for k in ones), key=len)
    for k in ones:
        if longest[:len(k.alpha)] != k.alpha:
            raise ValueError("assignment is not filter-consistent: incomparable words")

    def stage_min(word):
        gen = -1
        for k in ones:
            if k.alpha == word:
                gen &= k.A
        return gen

    if len(longest) < depth:
        xi: TightFilter = FilterFiniteType(longest, stage_min(longest))
    else:
        aut = aut or StageAutomaton(space)
        seen = [(longest[n - 1], space.range_of(longest[:n]), stage_min(longest[:n]))
                for n in range(1, depth + 1)]
        xi = None
        for size in range(1, depth + 1):
            for i in range(size):
                p, c = seen[:i], seen[i:size]
                if unroll(p, c, depth) == seen and aut.is_valid_walk(p, c):
                    xi = LassoFilter(*canonical_lasso(p, c))
                    break
            if xi is not None:
                break
        if xi is None:
            raise ValueError("no lasso of size <= depth explains the assignment")
    for k, v in assignment.items():
        if bool(v) != xi.contains(space, k):
            raise ValueError(f"assignment is not filter-consistent at {k}")
    return xi


# --- separating element and the norm estimate ---------------------------------


def min_in_filter(space: LabelledSpace, xi: TightFilter, Fp: ChainedFamily) -> Triple:
    inside = [u for u in Fp if xi.contains(space, u)]
    if not inside:
        raise ValueError("the filter misses every member of the family")
    lows = [w for w in inside if all(leq(space, w, u) for u in inside)]
    assert len(lows) == 1, "filter meets the family in a non-chain"
    return lows[0]


def separating_z(space: LabelledSpace, xi: TightFilter, Fp: ChainedFamily) -> Triple:
    """Non-zero ``z <= w = min(xi cap F')`` orthogonal to every ``u < w``."""
    w = min_in_filter(space, xi, Fp)
    lower = Fp.below(w)
    if not lower:
        return w
    l = len(w.alpha)
    n = max(len(u.alpha) for u in lower) if xi.infinite else len(xi.word)
    alpha = xi.word_prefix(n)
    D = space.r(w.A, alpha[l:])
    for u in lower:
        rest = strip_prefix(alpha, u.alpha)
        if rest is not None:
            D &= ~space.r(u.A, rest)
    if xi.infinite:
        if not D:
            raise AssertionError("separating set vanished; filter is not an ultrafilter")
        return Triple(alpha, D, alpha)
    sinks = space.graph.sinks
    G = 0
    for B in space.B(alpha).members:
        if B and B & ~(D & sinks) == 0:
            G |= B
    if not G:
        raise ValueError("finite-type filter is not tight: no sink part below the separating set")
    return Triple(alpha, G, alpha)


def q_nonzero_witness(Fp: ChainedFamily, xi: TightFilter) -> bool:
    """``z * q_w == z`` for the separating ``z``."""
    space = Fp.space
    w = min_in_filter(space, xi, Fp)
    z = DiagonalElement.of(separating_z(space, xi, Fp))
    return multiply_diag(space, z, q_projection(Fp, w)) == z


def combination(F: Sequence[Triple], lambdas: Sequence) -> DiagonalElement:
    out = DiagonalElement()
    for p, c in zip(F, lambdas):
        out = out + DiagonalElement.of(p, c)
    return out


def norm_lower_bound_check(space: LabelledSpace, F: Sequence[Triple], lambdas: Sequence,
                           xi: TightFilter, rep, tol: float = 1e-9) -> tuple[bool, float, float]:
    """``|sum_{u in F cap xi} lambda_u| <= ||sum lambda_u s p s*||`` with the
    norm taken in the finite tight representation ``rep``."""
    import numpy as np

    lhs = abs(float(sum((c for p, c in zip(F, lambdas) if xi.contains(space, p)), Fraction(0))))
    M = rep.matrix(combination(F, lambdas))
    norm = float(np.linalg.norm(M, 2)) if M.size else 0.0
    return lhs <= norm + tol, lhs, norm
