"""The inverse semigroup ``S`` of triples ``(alpha, A, beta)`` with zero."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .labelled_core import LabelledSpace, VertexSet, Word


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


@dataclass(frozen=True, order=True)
class Triple:
    alpha: Word
    A: VertexSet
    beta: Word

    @property
    def is_idempotent(self) -> bool:
        return self.alpha == self.beta


Element = Union[Triple, _Zero]


def word_key(w: Word):
    return (len(w), w)


def idempotent_key(p: Triple):
    return (len(p.alpha), p.alpha, p.A)


def strip_prefix(word: Word, prefix: Word):
    """Return ``rest`` with ``word == prefix + rest``, or ``None``."""
    n = len(prefix)
    if word[:n] == prefix:
        return word[n:]
    return None


def make_element(space: LabelledSpace, alpha: Sequence[str], A: VertexSet, beta: Sequence[str]) -> Triple:
    alpha, beta = tuple(alpha), tuple(beta)
    if not A:
        raise ValueError("the set of a triple must be non-empty; use ZERO")
    if A not in space.B(alpha) or A not in space.B(beta):
        raise ValueError(f"{space.fmt(A)} is not in B({''.join(alpha)}) ∩ B({''.join(beta)})")
    return Triple(alpha, A, beta)


def multiply(space: LabelledSpace, s: Element, t: Element) -> Element:
    if s is ZERO or t is ZERO:
        return ZERO
    alpha, A, beta = s.alpha, s.A, s.beta
    gamma, B, delta = t.alpha, t.A, t.beta
    g_rest = strip_prefix(gamma, beta)
    if g_rest is not None:
        # gamma = beta gamma'; covers beta == gamma as well
        C = space.r(A, g_rest) & B
        return Triple(alpha + g_rest, C, delta) if C else ZERO
    b_rest = strip_prefix(beta, gamma)
    if b_rest is not None:
        C = A & space.r(B, b_rest)
        return Triple(alpha, C, delta + b_rest) if C else ZERO
    return ZERO


def involution(s: Element) -> Element:
    if s is ZERO:
        return ZERO
    return Triple(s.beta, s.A, s.alpha)


def leq(space: LabelledSpace, p: Triple, q: Triple) -> bool:
    """Natural order on non-zero idempotents."""
    if p is ZERO or q is ZERO or not (p.is_idempotent and q.is_idempotent):
        raise ValueError("leq is defined on non-zero idempotents")
    rest = strip_prefix(p.alpha, q.alpha)
    if rest is None:
        return False
    return p.A & ~space.r(q.A, rest) == 0


def meet(space: LabelledSpace, p: Element, q: Element) -> Element:
    return multiply(space, p, q)


def enumerate_idempotents(space: LabelledSpace, word_bound: int) -> list[Triple]:
    out = []
    for w in space.labelled_paths(word_bound):
        out.extend(Triple(w, A, w) for A in space.B(w).members if A)
    return out


def enumerate_elements(space: LabelledSpace, word_bound: int) -> list[Triple]:
    paths = list(space.labelled_paths(word_bound))
    out = []
    for a in paths:
        Ba = space.B(a)
        for b in paths:
            Bb = space.B(b)
            out.extend(Triple(a, A, b) for A in Ba.members if A and A in Bb)
    return out
