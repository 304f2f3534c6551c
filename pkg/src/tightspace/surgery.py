"""Cutting down / up-closing stage ultrafilters (g, h) and gluing / removing
word prefixes on tight filters (G, H), plus an exhaustive law checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .filters import (
    FilterFiniteType,
    LassoFilter,
    StageAutomaton,
    TightFilter,
    canonical_lasso,
    enumerate_lassos,
    enumerate_tight_finite,
    f_map,
    in_sink_set,
    is_tight_finite_type,
    map_lasso,
    shift_lasso,
)
from .labelled_core import BAFilter, LabelledSpace, Word, ultrafilters


class SurgeryError(ValueError):
    pass


def in_X(space: LabelledSpace, alpha: Sequence[str], F: BAFilter) -> bool:
    """``F in X_{(alpha)beta}`` where ``beta = F.word``; the empty ``alpha``
    imposes no condition."""
    if not alpha:
        return True
    return space.range_of(tuple(alpha) + F.word) in F


def g_map(space: LabelledSpace, alpha: Sequence[str], beta: Sequence[str], F: BAFilter) -> BAFilter:
    alpha, beta = tuple(alpha), tuple(beta)
    if F.word != beta:
        raise SurgeryError("filter does not live in B(beta)")
    if not alpha:
        return F
    R = space.range_of(alpha + beta)
    if R not in F:
        raise SurgeryError("r(alpha beta) is not in the filter")
    return space.ufilter(alpha + beta, F.generator & R)


def h_map(space: LabelledSpace, alpha: Sequence[str], beta: Sequence[str], F: BAFilter) -> BAFilter:
    alpha, beta = tuple(alpha), tuple(beta)
    if F.word != alpha + beta:
        raise SurgeryError("filter does not live in B(alpha beta)")
    return space.ufilter(beta, F.generator)


def in_T(space: LabelledSpace, alpha: Sequence[str], xi: TightFilter) -> bool:
    """``xi in T_{(alpha)beta}``, tested at stage 1 when the word is non-empty."""
    alpha = tuple(alpha)
    if not alpha:
        return True
    if xi.infinite or xi.word:
        F1 = xi.stage(space, 1)
        return in_X(space, alpha, F1)
    return in_X(space, alpha, xi.top(space))


def G_map(space: LabelledSpace, alpha: Sequence[str], xi: TightFilter) -> TightFilter:
    alpha = tuple(alpha)
    if not alpha:
        return xi
    if not in_T(space, alpha, xi):
        raise SurgeryError("r(alpha) is not in the stage-0 filter")
    if isinstance(xi, FilterFiniteType):
        word = alpha + xi.word
        return FilterFiniteType(word, xi.generator & space.range_of(word))

    def glue(step, R):
        b, _, U = step
        R2 = space.r(R, (b,))
        return (b, R2, U & R2), R2

    tail_p, tail_c = map_lasso(xi.prefix, xi.cycle, space.range_of(alpha), glue)
    first = tail_p[0] if tail_p else tail_c[0]
    top = space.ufilter(alpha + (first[0],), first[2])
    head = []
    for i in range(1, len(alpha) + 1):
        Fi = f_map(space, alpha[:i], alpha[i:] + (first[0],), top)
        head.append((alpha[i - 1], space.range_of(alpha[:i]), Fi.generator))
    return LassoFilter(*canonical_lasso(tuple(head) + tail_p, tail_c))


def H_map(space: LabelledSpace, alpha: Sequence[str], xi: TightFilter) -> TightFilter:
    alpha = tuple(alpha)
    if not alpha:
        return xi
    if isinstance(xi, FilterFiniteType):
        if xi.word[:len(alpha)] != alpha:
            raise SurgeryError("word does not start with alpha")
        return FilterFiniteType(xi.word[len(alpha):], xi.generator)
    if xi.word_prefix(len(alpha)) != alpha:
        raise SurgeryError("word does not start with alpha")
    p, c = shift_lasso(xi.prefix, xi.cycle, len(alpha))

    def cut(step, R):
        b, _, U = step
        R2 = space.range_of((b,)) if R is None else space.r(R, (b,))
        return (b, R2, U), R2

    return LassoFilter(*map_lasso(p, c, None, cut))


# --- law checker -------------------------------------------------------------------


@dataclass
class SurgeryReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def tally(self, name: str, ok: bool, witness=None):
        passed, total = self.checks.get(name, (0, 0))
        self.checks[name] = (passed + bool(ok), total + 1)
        if not ok and len(self.failures) < 50:
            self.failures.append({"law": name, "witness": witness})

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "SurgeryReport"):
        for name, (p, t) in other.checks.items():
            a, b = self.checks.get(name, (0, 0))
            self.checks[name] = (a + p, b + t)
        self.failures.extend(other.failures[: max(0, 50 - len(self.failures))])


def _splits(space: LabelledSpace, total: int, parts: int):
    """Tuples of ``parts`` words whose concatenation is a labelled path of
    length <= total."""
    for w in space.labelled_paths(total):
        for cuts in product(range(len(w) + 1), repeat=parts - 1):
            if list(cuts) != sorted(cuts):
                continue
            bounds = (0,) + cuts + (len(w),)
            yield tuple(w[bounds[i]:bounds[i + 1]] for i in range(parts))


def _ultra(space: LabelledSpace, word: Word) -> list[BAFilter]:
    return ultrafilters(space.B(word))


def check_ultrafilter_laws(space: LabelledSpace, total: int = 4) -> SurgeryReport:
    rep = SurgeryReport()
    T = lambda F: (F.word, F.generator)
    for alpha, beta, gamma in _splits(space, total, 3):
        bg = beta + gamma
        for F in _ultra(space, bg):
            # f preserves X-sets (forward direction)
            if in_X(space, alpha, F):
                img = f_map(space, beta, gamma, F)
                if img is not None or alpha:
                    rep.tally("f_preserves_X", img is not None and in_X(space, alpha, img),
                              (alpha, beta, gamma, T(F)))
            # and the preimage direction
            img = f_map(space, beta, gamma, F)
            if img is not None and in_X(space, alpha, img):
                rep.tally("f_preimage_X", in_X(space, alpha, F), (alpha, beta, gamma, T(F)))
        for F in _ultra(space, gamma):
            if not in_X(space, alpha + beta, F):
                continue
            rep.tally("X_nested", in_X(space, beta, F), (alpha, beta, gamma, T(F)))
            g1 = g_map(space, beta, gamma, F)
            rep.tally("g_into_X", in_X(space, alpha, g1), (alpha, beta, gamma, T(F)))
            rep.tally("g_compose", g_map(space, alpha + beta, gamma, F) == g_map(space, alpha, bg, g1),
                      (alpha, beta, gamma, T(F)))
        for F in _ultra(space, bg):
            if in_X(space, alpha, F):
                lhs = f_map(space, alpha + beta, gamma, g_map(space, alpha, bg, F))
                inner = f_map(space, beta, gamma, F)
                rhs = g_map(space, alpha, beta, inner) if inner is not None else None
                rep.tally("square_f_g", lhs == rhs, (alpha, beta, gamma, T(F)))
        for F in _ultra(space, alpha + bg):
            lhs = h_map(space, beta, gamma, h_map(space, alpha, bg, F))
            rep.tally("h_compose", lhs == h_map(space, alpha + beta, gamma, F), (alpha, beta, gamma, T(F)))
            lhs = f_map(space, beta, gamma, h_map(space, alpha, bg, F))
            inner = f_map(space, alpha + beta, gamma, F)
            rhs = h_map(space, alpha, beta, inner) if inner is not None else None
            rep.tally("square_f_h", lhs == rhs, (alpha, beta, gamma, T(F)))
    for alpha, beta in _splits(space, total, 2):
        for F in _ultra(space, beta):
            if not in_X(space, alpha, F):
                continue
            G = g_map(space, alpha, beta, F)
            rep.tally("g_is_ultra", G.is_ultrafilter, (alpha, beta, T(F)))
            rep.tally("hg_id", h_map(space, alpha, beta, G) == F, (alpha, beta, T(F)))
            if in_sink_set(space, F):
                rep.tally("g_sink", in_sink_set(space, G), (alpha, beta, T(F)))
        for F in _ultra(space, alpha + beta):
            H = h_map(space, alpha, beta, F)
            rep.tally("h_into_X", H.is_ultrafilter and in_X(space, alpha, H), (alpha, beta, T(F)))
            rep.tally("gh_id", g_map(space, alpha, beta, H) == F, (alpha, beta, T(F)))
            if in_sink_set(space, F):
                rep.tally("h_sink", in_sink_set(space, H), (alpha, beta, T(F)))
    return rep


def starts_with(xi: TightFilter, alpha: Word) -> bool:
    if not xi.infinite and len(xi.word) < len(alpha):
        return False
    return xi.word_prefix(len(alpha)) == alpha


def is_tight(space: LabelledSpace, aut: StageAutomaton, xi: TightFilter) -> bool:
    if isinstance(xi, FilterFiniteType):
        return is_tight_finite_type(space, xi)
    return aut.is_valid_walk(xi.prefix, xi.cycle)


def check_tight_laws(space: LabelledSpace, total: int = 4, word_bound: int = 3,
                     lasso_bound: int = 4) -> SurgeryReport:
    rep = SurgeryReport()
    aut = StageAutomaton(space)
    tight = enumerate_tight_finite(space, word_bound) + enumerate_lassos(aut, lasso_bound)
    pairs = [(a, b) for a, b in _splits(space, total, 2)]
    for xi in tight:
        for alpha, beta in pairs:
            ab = alpha + beta
            if in_T(space, ab, xi):
                lhs = G_map(space, ab, xi)
                inner = G_map(space, beta, xi)
                ok = in_T(space, alpha, inner) and G_map(space, alpha, inner) == lhs
                rep.tally("G_compose", ok, (alpha, beta, xi))
                rep.tally("G_tight", is_tight(space, aut, lhs), (ab, xi))
                rep.tally("HG_id", H_map(space, ab, lhs) == xi, (ab, xi))
            if starts_with(xi, ab):
                lhs = H_map(space, beta, H_map(space, alpha, xi))
                rep.tally("H_compose", lhs == H_map(space, ab, xi), (alpha, beta, xi))
                cut = H_map(space, ab, xi)
                rep.tally("H_tight", is_tight(space, aut, cut), (ab, xi))
                rep.tally("GH_id", in_T(space, ab, cut) and G_map(space, ab, cut) == xi, (ab, xi))
    return rep


def surgery_suite(space: LabelledSpace, total: int = 4, word_bound: int = 3,
                  lasso_bound: int = 4) -> SurgeryReport:
    rep = check_ultrafilter_laws(space, total)
    rep.merge(check_tight_laws(space, total, word_bound, lasso_bound))
    return rep
