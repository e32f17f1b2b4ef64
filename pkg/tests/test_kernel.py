import pytest

from gatlab.builtin import builtin_theory, cat_eq
from gatlab.errors import TypeMismatch, UnknownSymbol
from gatlab.kernel import (
    App,
    Context,
    TypeExpr,
    Var,
    Verdict,
    check_term,
    infer_type,
    normalize,
    subst_term,
    terms_equal,
    types_equal,
    wf_context,
)

OB = TypeExpr("Ob")


def hom(a, b):
    return TypeExpr("Hom", (a, b))


def ident(x):
    return App("id", (x,))


def comp(x, y, z, f, g):
    return App("comp", (x, y, z, f, g))


# X Y : Ob, f : Hom(X, Y)
ARROW = Context((OB, OB, hom(Var(0), Var(1))), ("X", "Y", "f"))


def test_cat_eq_shape():
    th = cat_eq()
    assert [s.name for s in th.sorts] == ["Ob", "Hom", "Eq"]
    assert [o.name for o in th.ops] == ["comp", "id", "r"]
    assert len(th.equations) == 5
    assert th.confluent


def test_unit_laws_normalize():
    th = cat_eq()
    X, Y, f = Var(0), Var(1), Var(2)
    left = comp(X, X, Y, ident(X), f)
    right = comp(X, Y, Y, f, ident(Y))
    assert normalize(th, ARROW, left) == (f, True)
    assert normalize(th, ARROW, right) == (f, True)
    assert terms_equal(th, ARROW, left, right) is Verdict.YES


def test_distinct_variables_are_not_equal_under_confluence():
    th = cat_eq()
    ctx = Context((OB, OB), ("X", "Y"))
    assert types_equal(th, ctx, hom(Var(0), Var(1)), hom(Var(0), Var(0))) is Verdict.NO


def test_hypothetical_equality_makes_answer_unknown():
    th = cat_eq()
    # X Y : Ob, f g : Hom(X, Y), e : Eq(f, g)
    ctx = Context((OB, OB, hom(Var(0), Var(1)), hom(Var(0), Var(1)), TypeExpr("Eq", (Var(0), Var(1), Var(2), Var(3)))))
    assert terms_equal(th, ctx, Var(2), Var(3)) in (Verdict.YES, Verdict.UNKNOWN)
    assert terms_equal(th, ctx, Var(2), Var(3)) is not Verdict.NO


def test_infer_and_check():
    th = cat_eq()
    assert infer_type(th, ARROW, ident(Var(0))) == hom(Var(0), Var(0))
    check_term(th, ARROW, comp(Var(0), Var(1), Var(1), Var(2), ident(Var(1))), hom(Var(0), Var(1)))
    with pytest.raises(TypeMismatch):
        infer_type(th, ARROW, comp(Var(1), Var(1), Var(1), Var(2), Var(2)))
    with pytest.raises(UnknownSymbol):
        infer_type(th, ARROW, App("nope", ()))


def test_wf_context_rejects_forward_reference():
    th = cat_eq()
    wf_context(th, ARROW)
    with pytest.raises(Exception):
        wf_context(th, Context((hom(Var(0), Var(0)), OB)))


def test_substitution_replaces_levels():
    t = comp(Var(0), Var(1), Var(1), Var(2), ident(Var(1)))
    image = (Var(5), Var(6), Var(7))
    assert subst_term(t, image) == comp(Var(5), Var(6), Var(6), Var(7), ident(Var(6)))


@pytest.mark.parametrize("name", ["cat", "cat_eq", "sig_eq", "sig_eq_pointed", "bicat_eq", "chain_f2_3"])
def test_builtin_theories_elaborate(name):
    th = builtin_theory(name)
    assert th.sorts


def test_context_printing_uses_names():
    assert str(ARROW) == "(X : Ob, Y : Ob, f : Hom(X, Y))"
