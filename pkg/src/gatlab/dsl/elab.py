"""Name resolution: surface trees to kernel objects."""

from __future__ import annotations

from typing import Optional

from ..errors import EqualityRejected, GatError, SourceSpan, UnknownSymbol
from ..formulas import BOT, TOP, And, Exists, Forall, FormulaCase, Not, Or, implies, wf_formula
from ..kernel import (
    App,
    Context,
    Equation,
    OpDecl,
    Pragma,
    SortDecl,
    TermEq,
    Theory,
    TypeEq,
    TypeExpr,
    Var,
    Verdict,
    check_decl,
    type_text,
    infer_type,
    types_equal,
    wf_context,
)
from .ast import (
    FAnd,
    FEqual,
    FFalse,
    FImplies,
    FNot,
    FOr,
    FQuant,
    FTrue,
    SEq,
    SFormulaDef,
    SFormulaFile,
    SOp,
    SPragma,
    SSort,
    STele,
    STerm,
    STheory,
    SType,
    STypeq,
)


class Scope:
    """Variable names in telescope order; later bindings shadow earlier ones."""

    def __init__(self, names: tuple = ()):
        self.names = list(names)

    def lookup(self, name: str) -> Optional[int]:
        for i in range(len(self.names) - 1, -1, -1):
            if self.names[i] == name:
                return i
        return None

    def push(self, name: str) -> None:
        self.names.append(name)

    def copy(self) -> "Scope":
        return Scope(tuple(self.names))

    def __len__(self) -> int:
        return len(self.names)


def resolve_term(th: Theory, scope: Scope, t: STerm):
    level = scope.lookup(t.name)
    if t.args is None:
        if level is not None:
            return Var(level)
        if th.has_op(t.name):
            return App(t.name, ())
        raise UnknownSymbol(f"unknown variable or constant {t.name!r}", t.span)
    if level is not None:
        raise UnknownSymbol(f"variable {t.name!r} cannot be applied to arguments", t.span)
    if not th.has_op(t.name):
        raise UnknownSymbol(f"unknown operation {t.name!r}", t.span)
    return App(t.name, tuple(resolve_term(th, scope, a) for a in t.args))


def resolve_type(th: Theory, scope: Scope, a: SType) -> TypeExpr:
    if not th.has_sort(a.name):
        raise UnknownSymbol(f"unknown sort {a.name!r}", a.span)
    args = a.args or ()
    return TypeExpr(a.name, tuple(resolve_term(th, scope, t) for t in args))


def resolve_tele(th: Theory, scope: Scope, tele: STele) -> tuple:
    """Resolve bindings in order, pushing each name onto ``scope``.

    Returns the entry types and their names.
    """
    types = []
    names = []
    for b in tele.bindings:
        for n in b.names:
            types.append(resolve_type(th, scope, b.type))
            names.append(n)
            scope.push(n)
    return tuple(types), tuple(names)


def resolve_context(th: Theory, tele: STele, outer: Optional[Context] = None) -> Context:
    scope = Scope(outer.all_names() if outer is not None else ())
    types, names = resolve_tele(th, scope, tele)
    if outer is None:
        return Context(types, names)
    return outer.extend(types, names)


def _decl(th: Theory, d, index: int):
    scope = Scope()
    if isinstance(d, SSort):
        types, names = resolve_tele(th, scope, d.tele)
        return SortDecl(d.name, Context(types, names))
    if isinstance(d, SOp):
        types, names = resolve_tele(th, scope, d.tele)
        return OpDecl(d.name, Context(types, names), resolve_type(th, scope, d.result))
    if isinstance(d, SEq):
        types, names = resolve_tele(th, scope, d.tele)
        body = TermEq(
            resolve_term(th, scope, d.lhs),
            resolve_term(th, scope, d.rhs),
            resolve_type(th, scope, d.at),
        )
        return Equation(Context(types, names), body, d.name or "")
    if isinstance(d, STypeq):
        types, names = resolve_tele(th, scope, d.tele)
        body = TypeEq(resolve_type(th, scope, d.lhs), resolve_type(th, scope, d.rhs))
        return Equation(Context(types, names), body, d.name or "")
    if isinstance(d, SPragma):
        return Pragma(d.words[0], tuple(d.words[1:]))
    raise TypeError(f"not a declaration: {d!r}")


def _surface_name(d, index: int) -> str:
    kind = {SSort: "sort", SOp: "op", SEq: "eq", STypeq: "typeq"}.get(type(d), "declaration")
    return f"{kind} {getattr(d, 'name', None) or f'#{index}'}"


def elaborate_stheory(st: STheory) -> Theory:
    """Resolve and check each declaration against the ones before it."""
    decls: list = []
    for i, d in enumerate(st.decls):
        prefix = Theory(st.name, tuple(decls))
        try:
            kd = _decl(prefix, d, i)
        except GatError as err:
            raise err.within(_surface_name(d, i)).at(getattr(d, "span", None))
        try:
            check_decl(prefix, kd, i)
        except GatError as err:
            raise err.at(getattr(d, "span", None))
        decls.append(kd)
    return Theory(st.name, tuple(decls))


def equality_formula(th: Theory, ctx: Context, s, t, span: Optional[SourceSpan] = None):
    """``s = t`` as ``exists (_ : Eq(.., s, t)). true`` through the theory's equality pragma."""
    a, b = infer_type(th, ctx, s), infer_type(th, ctx, t)
    eq_sort = th.equality.get(a.sort)
    if eq_sort is None:
        raise EqualityRejected(
            f"terms of sort {a.sort} cannot be compared: the language has no equality atoms "
            f"and the theory declares no equality sort for {a.sort}",
            span,
        )
    verdict = types_equal(th, ctx, a, b)
    if verdict is not Verdict.YES:
        raise EqualityRejected(
            f"the two sides of '=' do not have the same type "
            f"({type_text(a, ctx.all_names())} versus {type_text(b, ctx.all_names())}, verdict {verdict})",
            span,
        )
    return Exists((TypeExpr(eq_sort, a.args + (s, t)),), TOP, ("_",))


def resolve_formula(th: Theory, ctx: Context, scope: Scope, f):
    if isinstance(f, FTrue):
        return TOP
    if isinstance(f, FFalse):
        return BOT
    if isinstance(f, FNot):
        return Not(resolve_formula(th, ctx, scope, f.body))
    if isinstance(f, FAnd):
        return And(tuple(resolve_formula(th, ctx, scope, p) for p in f.parts))
    if isinstance(f, FOr):
        return Or(tuple(resolve_formula(th, ctx, scope, p) for p in f.parts))
    if isinstance(f, FImplies):
        return implies(resolve_formula(th, ctx, scope, f.lhs), resolve_formula(th, ctx, scope, f.rhs))
    if isinstance(f, FEqual):
        lhs, rhs = resolve_term(th, scope, f.lhs), resolve_term(th, scope, f.rhs)
        return equality_formula(th, ctx, lhs, rhs, f.span)
    if isinstance(f, FQuant):
        inner = scope.copy()
        try:
            ext, names = resolve_tele(th, inner, f.tele)
            wide = ctx.extend(ext, names)
            wf_context(th, wide)
        except GatError as err:
            raise err.at(f.tele.span or f.span)
        body = resolve_formula(th, wide, inner, f.body)
        if not ext:
            return body
        return (Forall if f.kind == "forall" else Exists)(ext, body, names)
    raise TypeError(f"not a surface formula: {f!r}")


def elaborate_formula(th: Theory, d: SFormulaDef) -> FormulaCase:
    scope = Scope()
    try:
        types, names = resolve_tele(th, scope, d.tele)
        ctx = Context(types, names)
        wf_context(th, ctx)
        phi = resolve_formula(th, ctx, scope, d.body)
        wf_formula(th, ctx, phi)
    except GatError as err:
        raise err.within(f"formula {d.name}").at(d.span)
    return FormulaCase(d.name, ctx, phi)


def elaborate_formula_file(th: Theory, ff: SFormulaFile) -> list:
    return [elaborate_formula(th, d) for d in ff.defs]


def span_of(node) -> Optional[SourceSpan]:
    return getattr(node, "span", None)
