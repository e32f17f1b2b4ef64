import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatlab.builtin import builtin_theory, cat_eq
from gatlab.catinst import model_of, walking_arrow
from gatlab.errors import MissingTableEntry
from gatlab.formulas import BOT, TOP, Exists, weaken
from gatlab.kernel import Context, TypeExpr
from gatlab.loader import load_formulas, load_model
from gatlab.modelsearch import enumerate_models, find_countermodel, models_up_to
from gatlab.naive import naive_eval
from gatlab.randgen import random_context, random_formula, realize
from gatlab.semantics import check_model, enumerate_context, eval_formula, make_model, satisfying
from gatlab.syncat import apply_to_element, display, subst_formula
from gatlab.suites import corpus

TH = cat_eq()
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="module")
def cases():
    return {c.name: c for c in load_formulas("cat_formulas.gfm", TH)}


def test_universal_properties_in_the_walking_arrow(cases):
    M = load_model("walking_arrow.gmod")
    assert check_model(TH, M).ok
    term = cases["isTerminal"]
    init = cases["isInitial"]
    assert satisfying(M, term.ctx, term.phi) == {("y",)}
    assert satisfying(M, init.ctx, init.phi) == {("x",)}
    retract = cases["hasRetraction"]
    assert not eval_formula(M, retract.ctx, retract.phi, ("x", "y", "f"))


def test_walking_iso_arrows_have_retractions(cases):
    M = load_model("walking_iso.gmod")
    c = cases["hasRetraction"]
    assert satisfying(M, c.ctx, c.phi) == frozenset(enumerate_context(M, c.ctx))


def test_context_enumeration_is_dependent_and_lexicographic():
    M = load_model("walking_arrow.gmod")
    ctx = load_formulas("cat_formulas.gfm", TH)[3].ctx  # (X Y : Ob, f : Hom(X, Y))
    assert enumerate_context(M, ctx) == [("x", "x", "id_x"), ("x", "y", "f"), ("y", "y", "id_y")]


def test_model_check_reports_broken_equation():
    M = load_model("walking_iso.gmod")
    tables = {op: dict(t) for op, t in M.tables.items()}
    tables["comp"][("s", "t", "s", "u", "v")] = "u"
    broken = make_model(TH, {s: dict(f) for s, f in M.carriers.items()}, tables)
    v = check_model(TH, broken).violation
    assert v is not None and v.kind == "typing"


def test_model_check_needs_total_tables():
    M = load_model("walking_arrow.gmod")
    tables = {op: dict(t) for op, t in M.tables.items()}
    del tables["id"][("x",)]
    partial = make_model(TH, {s: dict(f) for s, f in M.carriers.items()}, tables)
    with pytest.raises(MissingTableEntry):
        check_model(TH, partial)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_evaluation_is_natural(seed):
    rng = random.Random(seed)
    C = rng.choice([C for C in corpus() if C.objects])
    M = model_of(C)
    gamma = random_context(TH, rng, max_len=3, min_len=1)
    f = realize(TH, gamma, rng)
    psi = random_formula(TH, gamma, rng, depth=3)
    pulled = subst_formula(f, psi)
    for x in enumerate_context(M, f.dom)[:20]:
        assert eval_formula(M, f.dom, pulled, x) == eval_formula(M, gamma, psi, apply_to_element(f, M, x))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_weakened_formula_ignores_new_variables(seed):
    rng = random.Random(seed)
    M = model_of(rng.choice([C for C in corpus() if C.objects]))
    total = random_context(TH, rng, max_len=3, min_len=1)
    k = rng.randint(0, len(total))
    phi = random_formula(TH, total.prefix(k), rng, depth=2)
    wide = weaken(phi, k, len(total))
    assert subst_formula(display(total, k).morphism, phi) == wide
    for x in enumerate_context(M, total)[:20]:
        assert eval_formula(M, total, wide, x) == eval_formula(M, total.prefix(k), phi, x[:k])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_naive_interpreter_agrees_on_sig_structures(seed):
    rng = random.Random(seed)
    th = builtin_theory("sig_eq")
    M = rng.choice(models_up_to(th, 2))
    ctx = random_context(th, rng, max_len=2)
    phi = random_formula(th, ctx, rng, depth=3, max_ext=2)
    for x in enumerate_context(M, ctx):
        assert eval_formula(M, ctx, phi, x) == naive_eval(M, ctx, phi, x)


# Model counts without symmetry reduction. A SigEq structure on n elements is a
# unary and a binary relation: 2^n * 2^(n*n) of them. A SigEqPointed structure
# is a point, an endofunction and a unary relation: n * n^n * 2^n.
@pytest.mark.parametrize(
    "name, bound, expected",
    [
        ("sig_eq", 1, sum(2**n * 2 ** (n * n) for n in range(2))),
        ("sig_eq", 2, sum(2**n * 2 ** (n * n) for n in range(3))),
        ("sig_eq", 3, sum(2**n * 2 ** (n * n) for n in range(4))),
        ("sig_eq_pointed", 3, sum(n * n**n * 2**n for n in range(4))),
        ("cat_eq", 1, 2),  # the empty category and the point
    ],
)
def test_model_counts(name, bound, expected):
    assert len(models_up_to(builtin_theory(name), bound)) == expected


def test_enumerated_models_are_models():
    th = builtin_theory("sig_eq_pointed")
    for M in enumerate_models(th, 2):
        assert check_model(th, M).ok


def test_countermodel_to_terminal_implies_initial(cases):
    t, i = cases["isTerminal"], cases["isInitial"]
    cm = find_countermodel(TH, t.phi, i.phi, t.ctx, 2)
    assert cm is not None
    assert eval_formula(cm.model, t.ctx, t.phi, cm.element)
    assert not eval_formula(cm.model, t.ctx, i.phi, cm.element)
    assert find_countermodel(TH, BOT, i.phi, t.ctx, 2) is None
    assert find_countermodel(TH, i.phi, TOP, i.ctx, 2) is None


def test_empty_model_refutes_having_an_object():
    has_object = Exists((TypeExpr("Ob"),), TOP, ("X",))
    cm = find_countermodel(TH, TOP, has_object, Context(), 1)
    assert cm is not None and cm.index == 0 and cm.model.size() == 0


def test_corpus_category_models_check():
    for C in corpus()[:20] + (walking_arrow(),):
        assert check_model(TH, model_of(C)).ok
