"""Property suites over the builtin corpus, each producing a JSON-ready report.

Every suite is deterministic for a given seed. Reports carry a ``wall_time``
field, which is the only part allowed to differ between runs.
"""

from __future__ import annotations

import hashlib
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Callable, Optional

from .builtin import builtin_theory, cat_eq, corpus_path
from .catinst import (
    Functor,
    functors,
    homotopic_pairs,
    invariance1_check,
    invariance2_check,
    is_equivalence,
    is_trivial_fibration,
    is_trivial_fibration_direct,
    model_of,
    to_hom,
)
from .dsl.elab import elaborate_stheory
from .dsl.parser import parse_theory
from .errors import GatError
from .fibrations import (
    Tally,
    beck_chevalley,
    check_hom,
    generator_squares,
    invariance_suite,
    is_anodyne_fibration,
    singleton_subsets,
)
from .fincats import CORPUS_FILE
from .formulas import TOP, Exists, FormulaCase, formula_text, quantifier_depth
from .kernel import Context, TypeExpr
from .loader import load_categories, load_formulas, load_hom
from .modelsearch import find_countermodel, models_up_to
from .naive import naive_eval
from .proofs import RULE_GROUPS, conclusion, load_proof_file, run_spec
from .randgen import random_context, random_formula, realize
from .semantics import enumerate_context, eval_formula, satisfying
from .syncat import apply_to_element, check_morphism, compose, subst_formula

SCHEMA = 1
FORMULA_FILE = "cat_formulas.gfm"
PROOF_FILES = ("proofs.gpf", "proof_bot_elim.gpf")
BROKEN_PROOF_FILE = "broken_proofs.gpf"


# ---------------------------------------------------------------------------
# Shared corpus


@lru_cache(maxsize=None)
def corpus() -> tuple:
    """The shipped categories, one per isomorphism class."""
    return tuple(load_categories(CORPUS_FILE))


@lru_cache(maxsize=None)
def formula_cases() -> tuple:
    return tuple(load_formulas(FORMULA_FILE, cat_eq()))


@lru_cache(maxsize=None)
def corpus_functors() -> tuple:
    """(equivalences, trivial fibrations) between corpus categories, in corpus order."""
    cats = corpus()
    equivalences = []
    for C in cats:
        for D in cats:
            for F in functors(C, D):
                if is_equivalence(F):
                    equivalences.append(_named(F, f"{C.name}->{D.name}#{len(equivalences)}"))
    trivial = [F for F in equivalences if is_trivial_fibration_direct(F)]
    return tuple(equivalences), tuple(trivial)


def _named(F: Functor, name: str) -> Functor:
    return Functor(F.source, F.target, F.obmap, F.armap, name)


def jobs() -> int:
    try:
        return max(1, int(os.environ.get("GATLAB_JOBS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: list) -> list:
    """``map`` over a process pool when GATLAB_JOBS > 1; results keep input order."""
    n = jobs()
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))


def file_digest(path) -> dict:
    data = open(path, "rb").read()
    return {"path": os.path.basename(str(path)), "sha256": hashlib.sha256(data).hexdigest()}


def corpus_inputs(*names: str) -> list:
    return [file_digest(corpus_path(n)) for n in names]


def _report(
    criterion: str, title: str, seed: Optional[int], tally: Tally, started: float, inputs: tuple = (), **extra
) -> dict:
    out = {
        "schema": SCHEMA,
        "command": "invariance",
        "criterion": criterion,
        "title": title,
        "seed": seed,
        "inputs": corpus_inputs(*inputs),
        "cases": tally.checks,
        "passed": tally.agreed,
        "ok": tally.ok and extra.pop("ok", True),
        "first_failure": tally.first_failure,
    }
    out.update(extra)
    out["wall_time"] = round(time.perf_counter() - started, 3)
    return out


# ---------------------------------------------------------------------------
# 1. Elaboration


THEORY_FILES = ("cat.gat", "cat_eq.gat", "sig_eq.gat", "sig_eq_pointed.gat", "bicat_eq.gat", "chain_f2_3.gat")
MUST_REJECT = {"skeletal.gfm": "EqualityRejected", "isos_are_identities.gfm": "EqualityRejected"}


def elaboration(seed: Optional[int] = None) -> dict:
    started = time.perf_counter()
    tally = Tally()
    theories = {}
    for f in THEORY_FILES:
        try:
            path = corpus_path(f)
            th = elaborate_stheory(parse_theory(path.read_text(encoding="utf-8"), f))
            theories[f] = {"sorts": len(th.sorts), "ops": len(th.ops), "equations": len(th.equations)}
            tally.record(True, None)
        except GatError as err:
            tally.record(False, {"file": f, "error": str(err)})
    rejected = {}
    for f, tag in MUST_REJECT.items():
        try:
            load_formulas(f, cat_eq())
            tally.record(False, {"file": f, "error": "accepted"})
        except GatError as err:
            rejected[f] = err.tag
            tally.record(err.tag == tag, {"file": f, "error": str(err)})
    return _report("1", "elaboration", seed, tally, started, THEORY_FILES + tuple(MUST_REJECT), theories=theories, rejected=rejected)


# ---------------------------------------------------------------------------
# 2. Substitution functoriality


def substitution(seed: int = 0, cases: int = 500) -> dict:
    started = time.perf_counter()
    rng = random.Random(seed)
    th = cat_eq()
    tally = Tally()
    max_ctx = 0
    for n in range(cases):
        gamma = random_context(th, rng, max_len=4, min_len=1)
        g = realize(th, gamma, rng, random_context(th, rng, max_len=2))
        f = realize(th, g.dom, rng, random_context(th, rng, max_len=2))
        check_morphism(th, g)
        check_morphism(th, f)
        phi = random_formula(th, gamma, rng, depth=3)
        max_ctx = max(max_ctx, len(gamma))
        whole = subst_formula(compose(g, f), phi)
        stepwise = subst_formula(f, subst_formula(g, phi))
        tally.record(
            whole == stepwise,
            lambda: {"case": n, "context": str(gamma), "formula": formula_text(phi, gamma.all_names())},
        )
    return _report("2", "substitution functoriality", seed, tally, started, ("cat_eq.gat",), max_context_length=max_ctx)


# ---------------------------------------------------------------------------
# 3. Naturality of evaluation


def naturality(seed: int = 0, cases: int = 500, exhaustive: bool = False) -> dict:
    """With ``exhaustive`` every element of each drawn context is checked, not one."""
    started = time.perf_counter()
    rng = random.Random(seed)
    th = cat_eq()
    cats = [C for C in corpus() if C.objects]
    tally = Tally()
    attempts = 0
    while tally.checks < cases:
        attempts += 1
        C = rng.choice(cats)
        M = model_of(C)
        gamma = random_context(th, rng, max_len=3, min_len=1)
        f = realize(th, gamma, rng, random_context(th, rng, max_len=2))
        xs = enumerate_context(M, f.dom)
        if not xs:
            continue
        psi = random_formula(th, gamma, rng, depth=3)
        pulled = subst_formula(f, psi)
        for x in xs if exhaustive else [rng.choice(xs)]:
            left = eval_formula(M, f.dom, pulled, x)
            right = eval_formula(M, gamma, psi, apply_to_element(f, M, x))
            tally.record(
                left == right,
                lambda: {"category": C.name, "at": list(x), "formula": formula_text(psi, gamma.all_names())},
            )
    return _report("3", "naturality of evaluation", seed, tally, started, ("cat_eq.gat", CORPUS_FILE), attempts=attempts)


# ---------------------------------------------------------------------------
# 4. Anodyne invariance and 8. Beck-Chevalley


def _anodyne_one(k: int) -> dict:
    F = corpus_functors()[1][k]
    h = to_hom(F)
    anodyne = is_anodyne_fibration(h)
    rlp = is_trivial_fibration(F)
    tally = invariance_suite(h, formula_cases())
    return {
        "functor": F.name,
        "hom_ok": check_hom(h).ok,
        "anodyne": anodyne.ok,
        "witness": None if anodyne.ok else anodyne.as_dict(),
        "rlp": rlp,
        "tally": tally.as_dict(),
    }


def _negative_control() -> dict:
    h = load_hom("empty_into_point.ghom")
    case = FormulaCase("hasObject", Context(), Exists((TypeExpr("Ob"),), TOP, ("y",)))
    tally = invariance_suite(h, [case])
    return {
        "hom": h.name,
        "anodyne": is_anodyne_fibration(h).ok,
        "disagreement_found": not tally.ok,
        "witness": tally.first_failure,
    }


def anodyne_invariance(seed: Optional[int] = None) -> dict:
    started = time.perf_counter()
    _, trivial = corpus_functors()
    rows = _pmap(_anodyne_one, list(range(len(trivial))))
    tally = Tally()
    not_anodyne = [r["functor"] for r in rows if not (r["anodyne"] and r["hom_ok"])]
    rlp_disagree = [r["functor"] for r in rows if not r["rlp"]]
    for r in rows:
        t = r["tally"]
        tally.merge(Tally(t["checks"], t["agreed"], t["first_failure"]))
    control = _negative_control()
    ok = not not_anodyne and not rlp_disagree and control["disagreement_found"] and not control["anodyne"]
    return _report(
        "4", "anodyne-fibration invariance", seed, tally, started,
        ("cat_eq.gat", CORPUS_FILE, FORMULA_FILE, "empty_into_point.ghom"),
        ok=ok,
        functors=len(rows),
        formulas=[c.name for c in formula_cases()],
        not_anodyne=not_anodyne,
        rlp_disagreements=rlp_disagree,
        negative_control=control,
    )


def _bc_one(args: tuple) -> dict:
    k, seed = args
    F = corpus_functors()[1][k]
    h = to_hom(F)
    rng = random.Random(seed * 7919 + k)
    tally = Tally()
    squares = 0
    for sort, base, total in generator_squares(h):
        squares += 1
        subsets = list(singleton_subsets(h.target, total))
        elems = enumerate_context(h.target, total)
        for j in range(8):
            picked = frozenset(e for e in elems if rng.random() < 0.5)
            subsets.append((f"random{j}", picked))
        for case in formula_cases():
            if len(case.ctx) == len(total) and case.ctx.entries == total.entries:
                subsets.append((case.name, satisfying(h.target, total, case.phi)))
        tally.merge(beck_chevalley(h, base, total, subsets))
    return {"functor": F.name, "squares": squares, "tally": tally.as_dict()}


def beck_chevalley_suite(seed: int = 0) -> dict:
    started = time.perf_counter()
    _, trivial = corpus_functors()
    rows = _pmap(_bc_one, [(k, seed) for k in range(len(trivial))])
    tally = Tally()
    for r in rows:
        t = r["tally"]
        tally.merge(Tally(t["checks"], t["agreed"], t["first_failure"]))
    return _report(
        "8", "Beck-Chevalley on generator squares", seed, tally, started,
        ("cat_eq.gat", CORPUS_FILE, FORMULA_FILE),
        functors=len(rows), squares=sum(r["squares"] for r in rows),
    )


# ---------------------------------------------------------------------------
# 5. First and second invariance on Cat


def _inv1_one(k: int) -> dict:
    X = corpus()[k]
    tally = Tally()
    for case in formula_cases():
        for x1, x2 in homotopic_pairs(X, case.ctx):
            r = invariance1_check(case.phi, case.ctx, X, x1, x2)
            tally.record(r["agree"], lambda: {"category": X.name, "formula": case.name, "x1": list(x1), "x2": list(x2)})
    return tally.as_dict()


def _inv2_one(k: int) -> dict:
    F = corpus_functors()[0][k]
    M = model_of(F.source)
    tally = Tally()
    for case in formula_cases():
        for x in enumerate_context(M, case.ctx):
            r = invariance2_check(case.phi, case.ctx, F, x)
            tally.record(r["agree"], lambda: {"functor": F.name, "formula": case.name, "at": list(x)})
    return tally.as_dict()


def parity_counterexample() -> Optional[dict]:
    """An equivalence changing the parity of the object count, if the corpus has one."""
    for F in corpus_functors()[0]:
        if len(F.source.objects) % 2 != len(F.target.objects) % 2:
            return {"functor": F.name, "source_objects": len(F.source.objects), "target_objects": len(F.target.objects)}
    return None


def homotopy_invariance(seed: Optional[int] = None) -> dict:
    started = time.perf_counter()
    equivalences, _ = corpus_functors()
    first = Tally()
    for t in _pmap(_inv1_one, list(range(len(corpus())))):
        first.merge(Tally(t["checks"], t["agreed"], t["first_failure"]))
    second = Tally()
    for t in _pmap(_inv2_one, list(range(len(equivalences)))):
        second.merge(Tally(t["checks"], t["agreed"], t["first_failure"]))
    total = Tally()
    total.merge(first)
    total.merge(second)
    parity = parity_counterexample()
    return _report(
        "5", "first and second invariance on Cat", seed, total, started,
        ("cat_eq.gat", CORPUS_FILE, FORMULA_FILE),
        ok=parity is not None,
        categories=len(corpus()),
        equivalences=len(equivalences),
        homotopic_pairs=first.as_dict(),
        equivalence_sweep=second.as_dict(),
        parity_predicate_violated_by=parity,
    )


# ---------------------------------------------------------------------------
# 6. Proof-checker soundness


def proof_soundness(seed: Optional[int] = None, bound: int = 3) -> dict:
    started = time.perf_counter()
    tally = Tally()
    accepted = []
    groups: set = set()
    for f in PROOF_FILES:
        for spec in load_proof_file(f):
            v = run_spec(spec)
            if not v.accepted:
                tally.record(False, {"proof": spec.name, "error": v.error})
                continue
            groups |= {RULE_GROUPS[r] for r in spec.node.rules_used()}
            ctx, lhs, rhs = conclusion(spec.node)
            b = spec.bound if spec.bound is not None else bound
            cm = find_countermodel(spec.theory, lhs, rhs, ctx, b)
            accepted.append({"proof": spec.name, "bound": b, "countermodel": None if cm is None else cm.as_dict()})
            tally.record(cm is None, {"proof": spec.name, "countermodel": None if cm is None else cm.as_dict()})
    broken = []
    for spec in load_proof_file(BROKEN_PROOF_FILE):
        v = run_spec(spec)
        good = not v.accepted and v.rule == spec.expect_rule
        broken.append({"proof": spec.name, "expected": spec.expect_rule, "rejected_by": v.rule, "error": v.tag})
        tally.record(good, {"proof": spec.name, "expected": spec.expect_rule, "got": v.as_dict()})
    ok = len(accepted) >= 10 and groups == set(RULE_GROUPS.values())
    return _report(
        "6", "proof-checker soundness", seed, tally, started,
        PROOF_FILES + (BROKEN_PROOF_FILE,),
        ok=ok, accepted=accepted, broken=broken, rule_groups=sorted(groups),
    )


# ---------------------------------------------------------------------------
# 7. Oracle equivalence


@lru_cache(maxsize=None)
def oracle_models() -> tuple:
    """Corpus categories with at least one object, then every SigEq model with at most two elements."""
    cats = tuple(model_of(C) for C in corpus() if C.objects)
    sig = tuple(M for M in models_up_to(builtin_theory("sig_eq"), 2) if M.fiber("X", ()))
    return cats + sig


def oracle(seed: int = 0, cases: int = 1000, exhaustive: bool = False) -> dict:
    started = time.perf_counter()
    rng = random.Random(seed)
    models = oracle_models()
    tally = Tally()
    attempts = 0
    while tally.checks < cases:
        attempts += 1
        M = rng.choice(models)
        th = M.theory
        ctx = random_context(th, rng, max_len=2)
        xs = enumerate_context(M, ctx)
        if not xs:
            continue
        phi = random_formula(th, ctx, rng, depth=3, max_ext=2)
        if quantifier_depth(phi) > 2:
            continue
        for x in xs if exhaustive else [rng.choice(xs)]:
            main = eval_formula(M, ctx, phi, x)
            plain = naive_eval(M, ctx, phi, x)
            tally.record(
                main == plain,
                lambda: {"theory": th.name, "model": M.name, "at": list(x),
                         "formula": formula_text(phi, ctx.all_names())},
            )
    return _report("7", "oracle equivalence", seed, tally, started, ("cat_eq.gat", "sig_eq.gat", CORPUS_FILE), attempts=attempts)


SUITES = {
    "1": elaboration,
    "2": substitution,
    "3": naturality,
    "4": anodyne_invariance,
    "5": homotopy_invariance,
    "6": proof_soundness,
    "7": oracle,
    "8": beck_chevalley_suite,
}
