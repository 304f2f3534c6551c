"""Command line front end: ``tightspace <command> <file> [options]``.

Reads a JSON graph document, runs one suite and prints a deterministic JSON
report.  Exit status: 0 all checks pass, 1 a property failed (the report
carries witnesses), 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Callable

from .diagonal import (
    DiagonalElement,
    character_assignment,
    character_eval,
    eta_bound_holds,
    multiply_diag,
    norm_lower_bound_check,
    phi_of_character,
    q_nonzero_witness,
    random_chained_family,
    refine_F,
    refinement_report,
    resolution_check,
    separating_z,
)
from .filters import (
    bounded_cover_falsifier,
    tight_spectrum,
    tight_vs_boundary_check,
)
from .inv_semigroup import (
    ZERO,
    enumerate_elements,
    enumerate_idempotents,
    involution,
    leq,
    multiply,
)
from .labelled_core import (
    LabelledGraphError,
    LabelledSpace,
    generate_family,
    is_left_resolving,
    load_labelled_graph,
    make_family,
    power_set_family,
)
from .representations import (
    PathRepresentation,
    TightRepresentation,
    definition_discriminator,
    nonvanishing_check,
    relation_audit,
    semigroup_compatibility,
)
from .surgery import surgery_suite

DEFAULTS = {"word_bound": 3, "lasso_bound": 6, "samples": 200, "seed": 0}
KEY_BUDGET = 2048  # labelled paths used as character keys


class InputError(ValueError):
    """Invalid document or unmet preconditions (exit 2)."""


# --- documents ------------------------------------------------------------------


def load_space(document: dict) -> LabelledSpace:
    if not isinstance(document, dict):
        raise InputError("document must be a JSON object")
    try:
        g = load_labelled_graph(document)
    except LabelledGraphError as exc:
        raise InputError(str(exc)) from None
    fam_doc = document.get("family", "power_set")
    try:
        if fam_doc == "power_set":
            fam = power_set_family(g)
        elif isinstance(fam_doc, dict) and "sets" in fam_doc:
            fam = make_family(g, [g.vset(s) for s in fam_doc["sets"]])
        elif isinstance(fam_doc, dict) and "generators" in fam_doc:
            fam = generate_family(g, [g.vset(s) for s in fam_doc["generators"]],
                                  bool(fam_doc.get("close_complements", True)))
        else:
            raise InputError("family must be 'power_set', {generators: ...} or {sets: ...}")
    except LabelledGraphError as exc:
        raise InputError(str(exc)) from None
    return LabelledSpace(g, fam)


def resolve_options(document: dict, args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    given = document.get("options") or {}
    if not isinstance(given, dict):
        raise InputError("options must be an object")
    for key in DEFAULTS:
        if key in given:
            opts[key] = given[key]
        cli = getattr(args, key, None)
        if cli is not None:
            opts[key] = cli
    for key, val in opts.items():
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise InputError(f"option {key} must be a non-negative integer")
    return opts


def require_hypotheses(space: LabelledSpace):
    try:
        space.require_tight_hypotheses()
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- serialization ------------------------------------------------------------------


def word_str(w) -> str:
    return "".join(w) if all(len(a) == 1 for a in w) else " ".join(w)


def ser_triple(space: LabelledSpace, p) -> Any:
    if p is ZERO:
        return "0"
    return {"alpha": word_str(p.alpha), "A": space.graph.names(p.A), "beta": word_str(p.beta)}


def ser(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [ser(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): ser(v) for k, v in obj.items()}
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


# --- commands --------------------------------------------------------------------------


def cmd_check(space: LabelledSpace, opts: dict) -> tuple[dict, list]:
    fam = space.family
    results = {
        "vertices": len(space.graph.vertices),
        "edges": len(space.graph.edges),
        "alphabet": list(space.alphabet),
        "family_size": len(fam),
        "left_resolving": is_left_resolving(space.graph),
        "accommodating": fam.accommodating,
        "closed_under_relative_complements": fam.complements,
        "weakly_left_resolving": fam.weakly_left_resolving,
    }
    violations = [k for k in ("accommodating", "closed_under_relative_complements",
                              "weakly_left_resolving") if not results[k]]
    return results, violations


def cmd_tight(space, opts):
    require_hypotheses(space)
    spectrum = tight_spectrum(space, opts["word_bound"], opts["lasso_bound"])
    results = {
        "finite_type": [x.describe(space) for x in spectrum.finite],
        "lassos": [x.describe(space) for x in spectrum.lassos],
        "finite_type_count": len(spectrum.finite),
        "lasso_count": len(spectrum.lassos),
        "finite_type_exhaustive": spectrum.finite_exhaustive,
        "lassos_exhaustive": spectrum.lassos_exhaustive,
        "exhaustive": spectrum.exhaustive,
        "cardinality": spectrum.cardinality,
        "spectrum": spectrum.verdict,
    }
    violations = []
    for xi in spectrum.basis:
        hit = bounded_cover_falsifier(space, xi, 3)
        if hit is not None:
            violations.append({"filter": xi.describe(space), "cover_violation": ser_triple(space, hit["x"])})
    return results, violations


def cmd_semigroup(space, opts):
    idem = enumerate_idempotents(space, opts["word_bound"])
    bound = min(opts["word_bound"], 2)
    elems = enumerate_elements(space, bound)
    violations = []
    mul = lambda s, t: multiply(space, s, t)

    def fail(law, *xs):
        if len(violations) < 50:
            violations.append({"law": law, "elements": [ser_triple(space, x) for x in xs]})

    for s in elems:
        st = involution(s)
        if mul(mul(s, st), s) != s:
            fail("s s* s = s", s)
        if mul(mul(st, s), st) != st:
            fail("s* s s* = s*", s)
        for t in elems:
            p = mul(s, t)
            if p is not ZERO and (p.A & ~(space.range_of(p.alpha) & space.range_of(p.beta))
                                  or p.A not in space.family):
                fail("product stays in S", s, t)
            for u in elems:
                if mul(p, u) != mul(s, mul(t, u)):
                    fail("associativity", s, t, u)
    small = [p for p in idem if len(p.alpha) <= bound]
    for p in small:
        for q in small:
            if mul(p, q) != mul(q, p):
                fail("idempotents commute", p, q)
            if leq(space, p, q) != (mul(p, q) == p):
                fail("order is the semilattice order", p, q)
    results = {
        "idempotents": len(idem),
        "elements_checked": len(elems),
        "law_bound": bound,
    }
    return results, violations


def cmd_boundary(space, opts):
    require_hypotheses(space)
    try:
        rep = tight_vs_boundary_check(space, opts["word_bound"])
    except ValueError as exc:
        raise InputError(str(exc)) from None
    results = {"bound": opts["word_bound"], "counts": rep["counts"], "bijection": rep["ok"]}
    violations = [ser(p) for p in rep["problems"]]
    if not rep["ok"] and not violations:
        violations.append("counts differ")
    return results, violations


def cmd_surgery(space, opts):
    require_hypotheses(space)
    total = opts["word_bound"] + 1
    rep = surgery_suite(space, total=total, word_bound=opts["word_bound"],
                        lasso_bound=min(opts["lasso_bound"], 4))
    results = {
        "total_word_length": total,
        "laws": {k: {"passed": p, "checked": t} for k, (p, t) in sorted(rep.checks.items())},
    }
    return results, [ser(f) for f in rep.failures]


def cmd_diagonal(space, opts):
    require_hypotheses(space)
    rng = random.Random(opts["seed"])
    trials = max(opts["samples"] // 2, 1)
    violations = []
    rep = TightRepresentation(space, opts["word_bound"], opts["lasso_bound"])
    pool = enumerate_idempotents(space, min(opts["word_bound"], 2))
    # refinement + resolution
    refined = 0
    for _ in range(trials):
        F = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
        Fp = refine_F(space, F)
        chk = refinement_report(space, F, Fp)
        if not chk["ok"] or not eta_bound_holds(space, F, Fp):
            violations.append({"refine": [ser_triple(space, p) for p in F]})
        ok, wit = resolution_check(Fp)
        if not ok:
            violations.append({"resolution": ser(wit)})
        refined += 1
    for _ in range(trials):
        Fp = random_chained_family(space, pool, rng, rng.randint(1, 5))
        ok, wit = resolution_check(Fp)
        if not ok:
            violations.append({"resolution": ser(wit)})
    # characters
    depth = max(opts["lasso_bound"], opts["word_bound"] + 1)
    branching = rep.spectrum.verdict == "uncountable"
    if branching:
        # lassos are only identifiable from 3x their size; keep the key set small
        target = 3 * opts["lasso_bound"]
        while depth < target and sum(1 for _ in space.labelled_paths(depth + 1)) <= KEY_BUDGET:
            depth += 1
    keys = enumerate_idempotents(space, depth)
    roundtrips = skipped = 0
    for xi in rep.enumerated:
        if branching and xi.infinite and 3 * xi.size > depth:
            skipped += 1
        else:
            try:
                back = phi_of_character(space, character_assignment(space, xi, keys), depth, rep.aut)
            except ValueError as exc:
                back = str(exc)
            if back != xi:
                violations.append({"phi_roundtrip": xi.describe(space)})
            roundtrips += 1
        for _ in range(max(trials // max(len(rep.enumerated), 1), 5)):
            x = _random_diag(pool, rng)
            y = _random_diag(pool, rng)
            lhs = character_eval(space, xi, multiply_diag(space, x, y))
            if lhs != character_eval(space, xi, x) * character_eval(space, xi, y):
                violations.append({"multiplicative": xi.describe(space)})
        Fp = random_chained_family(space, pool, rng, 4)
        if any(xi.contains(space, u) for u in Fp):
            z = separating_z(space, xi, Fp)
            if not q_nonzero_witness(Fp, xi):
                violations.append({"q_nonzero": xi.describe(space), "z": ser_triple(space, z)})
    norms = 0
    if rep.finite_basis is not None:
        for _ in range(trials):
            F = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
            lam = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in F]
            xi = rng.choice(rep.finite_basis)
            ok, lhs, norm = norm_lower_bound_check(space, F, lam, xi, rep)
            if not ok:
                violations.append({"norm_family": [ser_triple(space, p) for p in F], "lhs": lhs, "norm": norm})
            norms += 1
    results = {
        "refinements": refined,
        "chained_families": trials,
        "phi_roundtrips": roundtrips,
        "phi_roundtrips_skipped": skipped,
        "phi_depth": depth,
        "norm_checks": norms,
        "norm_basis_finite": rep.finite_basis is not None,
    }
    return results, violations


def _random_diag(pool, rng) -> DiagonalElement:
    x = DiagonalElement()
    for p in rng.sample(pool, min(len(pool), 3)):
        x = x + DiagonalElement.of(p, Fraction(rng.randint(-5, 5)))
    return x


def cmd_represent(space, opts, variant="strict"):
    require_hypotheses(space)
    rep = TightRepresentation(space, opts["word_bound"], opts["lasso_bound"])
    audit = relation_audit(rep, variant, opts["samples"], opts["seed"])
    compat = semigroup_compatibility(rep, min(opts["word_bound"], 2), opts["samples"], opts["seed"])
    nonvan = nonvanishing_check(rep, opts["word_bound"])
    results = {
        "variant": variant,
        "tight": {"audit": audit, "semigroup_compatibility": compat["ok"], "nonvanishing": nonvan},
    }
    violations = []
    if not audit["ok"]:
        violations.append({"tight_relations": audit["relations"]})
    if not compat["ok"]:
        violations.append({"tight_compatibility": compat["failures"][:10]})
    if not nonvan["ok"]:
        violations.append({"nonvanishing": nonvan["failures"][:10]})
    if rep.finite_basis is not None:
        results["tight"]["basis"] = [x.describe(space) for x in rep.finite_basis]
        results["tight"]["S"] = {a: rep.matrix(rep.S(a)).astype(int).tolist() for a in space.alphabet}
        results["tight"]["SS*"] = {
            a: rep.matrix(rep.S(a) @ rep.S(a).star()).astype(int).tolist() for a in space.alphabet
        }
    if is_left_resolving(space.graph):
        path = PathRepresentation(space)
        results["path"] = relation_audit(path, variant, opts["samples"], opts["seed"])
        if variant == "alt" and not results["path"]["ok"]:
            violations.append({"path_relations": results["path"]["relations"]})
    return results, violations


def cmd_discriminate(space, opts):
    require_hypotheses(space)
    if not is_left_resolving(space.graph):
        raise InputError("path representation needs a left-resolving graph")
    rep = definition_discriminator(space, opts["samples"], opts["seed"])
    if rep["definitions_separate"]:
        hits = ", ".join(f"A={c['A']} at {c['witness']}" for c in rep["candidates"] if not c["relation_holds"])
        summary = f"definitions separate; witnesses {hits}"
    else:
        summary = "definitions agree on this input"
    results = dict(rep, summary=summary)
    violations = [] if rep["alternative_audit_ok"] else ["alternative relations fail in the path representation"]
    return results, violations


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "tight": cmd_tight,
    "semigroup": cmd_semigroup,
    "boundary": cmd_boundary,
    "surgery": cmd_surgery,
    "diagonal": cmd_diagonal,
    "represent": cmd_represent,
    "discriminate": cmd_discriminate,
}


def run(command: str, document: dict, args: argparse.Namespace) -> tuple[dict, int]:
    report: dict = {"command": command}
    try:
        opts = resolve_options(document, args)
        report["config"] = dict(opts)
        space = load_space(document)
        if command == "represent":
            report["config"]["variant"] = args.variant
            results, violations = cmd_represent(space, opts, args.variant)
        else:
            results, violations = COMMANDS[command](space, opts)
    except InputError as exc:
        report.update(results=None, violations=[], error=str(exc), status=2)
        return report, 2
    status = 1 if violations else 0
    report.update(results=ser(results), violations=ser(violations), status=status)
    return report, status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tightspace", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", help="graph document (JSON), or - for stdin")
    p.add_argument("--word-bound", dest="word_bound", type=int)
    p.add_argument("--lasso-bound", dest="lasso_bound", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--variant", choices=["strict", "alt"], default="strict")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            document = json.load(sys.stdin)
        else:
            with open(args.file, encoding="utf-8") as fh:
                document = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        report, status = {"command": args.command, "error": str(exc), "status": 2}, 2
    else:
        report, status = run(args.command, document, args)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
