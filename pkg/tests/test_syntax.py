"""Formulas, context morphisms and display maps over the syntactic category of CatEq."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatlab.builtin import cat_eq
from gatlab.errors import DomainMismatch, RangeError
from gatlab.formulas import TOP, And, Exists, Forall, Not, depth, formula_text, free_levels, weaken, wf_formula
from gatlab.kernel import Context, TypeExpr, Var, subst_term
from gatlab.randgen import random_context, random_formula, realize, term_pool
from gatlab.syncat import (
    ContextMorphism,
    check_morphism,
    compose,
    display,
    identity,
    pullback_display,
    subst_formula,
)

TH = cat_eq()
OB = TypeExpr("Ob")
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _setup(seed: int, max_len: int = 4):
    rng = random.Random(seed)
    gamma = random_context(TH, rng, max_len=max_len, min_len=1)
    return rng, gamma


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_identity_substitution_is_trivial(seed):
    rng, gamma = _setup(seed)
    phi = random_formula(TH, gamma, rng, depth=3)
    assert subst_formula(identity(gamma), phi) == phi


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_substitution_is_functorial_and_well_formed(seed):
    rng, gamma = _setup(seed)
    g = realize(TH, gamma, rng, random_context(TH, rng, max_len=2))
    f = realize(TH, g.dom, rng)
    check_morphism(TH, g)
    check_morphism(TH, f)
    phi = random_formula(TH, gamma, rng, depth=3)
    wf_formula(TH, gamma, phi)
    once = subst_formula(compose(g, f), phi)
    assert once == subst_formula(f, subst_formula(g, phi))
    wf_formula(TH, f.dom, once)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_weakening_along_a_display_map(seed):
    rng, total = _setup(seed)
    k = rng.randint(0, len(total))
    base = total.prefix(k)
    phi = random_formula(TH, base, rng, depth=2)
    pulled = subst_formula(display(total, k).morphism, phi)
    assert pulled == weaken(phi, k, len(total))
    assert free_levels(pulled, len(total)) == free_levels(phi, k)
    wf_formula(TH, total, pulled)
    for t in term_pool(TH, base).entries:
        assert subst_term(t[0], display(total, k).morphism.terms) == t[0]


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pullback_square_commutes(seed):
    rng, total = _setup(seed)
    k = rng.randint(0, len(total))
    p = display(total, k)
    f = realize(TH, p.base, rng, random_context(TH, rng, max_len=2))
    wide, p2, q = pullback_display(TH, f, p)
    check_morphism(TH, q)
    assert compose(p.morphism, q) == compose(f, p2.morphism)
    assert len(wide) == len(f.dom) + len(p.extension)


def test_random_formula_respects_depth():
    rng = random.Random(3)
    for _ in range(200):
        ctx = random_context(TH, rng, max_len=3)
        assert depth(random_formula(TH, ctx, rng, depth=3)) <= 3


def test_composition_checks_endpoints():
    a = Context((OB,), ("X",))
    b = Context((OB, OB), ("X", "Y"))
    with pytest.raises(DomainMismatch):
        compose(identity(a), identity(b))
    with pytest.raises(RangeError):
        ContextMorphism(a, b, (Var(0),))


def test_substitution_moves_bound_variables_past_the_new_context():
    # In (X : Ob): exists (Y : Ob, f : Hom(X, Y)). true, pulled back along (A B : Ob) -> (X : Ob), X := B.
    hom = TypeExpr("Hom", (Var(0), Var(1)))
    phi = Exists((OB, hom), TOP, ("Y", "f"))
    m = ContextMorphism(Context((OB, OB), ("A", "B")), Context((OB,), ("X",)), (Var(1),))
    pulled = subst_formula(m, phi)
    assert pulled.ext == (OB, TypeExpr("Hom", (Var(1), Var(2))))
    assert formula_text(pulled, ("A", "B")) == "exists (Y : Ob, f : Hom(B, Y)). true"


def test_formula_text_renames_clashing_binders():
    phi = Forall((OB,), Not(And((TOP,))), ("X",))
    assert formula_text(phi, ("X",)) == "forall (X1 : Ob). not(and(true))"
