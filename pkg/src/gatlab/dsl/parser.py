"""Text to surface trees, with spans on every node."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from ..errors import GatError, ParseError, SourceSpan
from . import grammar
from .ast import (
    Atom,
    FAnd,
    FEqual,
    FFalse,
    FImplies,
    FNot,
    FOr,
    FQuant,
    FTrue,
    SArrow,
    SBinding,
    SCategory,
    SCategoryFile,
    SComp,
    SEq,
    SFiber,
    SFormulaDef,
    SFormulaFile,
    SFunctor,
    SHom,
    SList,
    SMap,
    SModel,
    SOp,
    SOpEntry,
    SPragma,
    SSort,
    STele,
    STerm,
    STheory,
    SType,
    STypeq,
)

_GRAMMARS = {
    "theory": grammar.THEORY,
    "formula": grammar.FORMULA,
    "model": grammar.MODEL,
    "hom": grammar.HOM,
    "category": grammar.CATEGORY,
    "functor": grammar.FUNCTOR,
    "sexpr": grammar.SEXPR,
}


@lru_cache(maxsize=None)
def _parser(kind: str) -> Lark:
    return Lark(
        _GRAMMARS[kind],
        parser="lalr",
        lexer="contextual",
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _span(meta, path: Optional[str]) -> Optional[SourceSpan]:
    if getattr(meta, "empty", True):
        return None
    return SourceSpan(meta.line, meta.column, meta.end_line, meta.end_column, path)


def _token_span(tok: Token, path: Optional[str]) -> SourceSpan:
    return SourceSpan(tok.line, tok.column, tok.end_line or tok.line, tok.end_column or tok.column, path)


def _elem_text(tok: Token) -> str:
    if tok.type == "STRING":
        return json.loads(tok)
    return str(tok)


def _present(children) -> list:
    return [c for c in children if c is not None]


class _Build(Transformer):
    def __init__(self, path: Optional[str]):
        super().__init__()
        self.path = path

    def _s(self, meta):
        return _span(meta, self.path)

    # -- shared --------------------------------------------------------

    @v_args(meta=True)
    def term(self, meta, children):
        name = str(children[0])
        args = children[1] if len(children) > 1 else None
        return STerm(name, args, self._s(meta))

    def term_args(self, children):
        return tuple(_present(children))

    @v_args(meta=True)
    def type(self, meta, children):
        name = str(children[0])
        args = children[1] if len(children) > 1 else None
        return SType(name, args, self._s(meta))

    @v_args(meta=True)
    def tele(self, meta, children):
        return STele(tuple(_present(children)), self._s(meta))

    @v_args(meta=True)
    def binding(self, meta, children):
        *names, ty = children
        return SBinding(tuple(str(n) for n in names), ty, self._s(meta))

    def elem(self, children):
        return _elem_text(children[0])

    def index(self, children):
        return tuple(_present(children))

    def elem_args(self, children):
        return tuple(_present(children))

    # -- theory ----------------------------------------------------------

    @v_args(meta=True)
    def sort_decl(self, meta, children):
        name, tele = children
        return SSort(str(name), tele or STele(), self._s(meta))

    @v_args(meta=True)
    def op_decl(self, meta, children):
        name, tele, result = children
        return SOp(str(name), tele or STele(), result, self._s(meta))

    @v_args(meta=True)
    def eq_decl(self, meta, children):
        name, tele, lhs, rhs, at = children
        return SEq(str(name) if name else None, tele or STele(), lhs, rhs, at, self._s(meta))

    @v_args(meta=True)
    def typeq_decl(self, meta, children):
        name, tele, lhs, rhs = children
        return STypeq(str(name) if name else None, tele or STele(), lhs, rhs, self._s(meta))

    @v_args(meta=True)
    def pragma_decl(self, meta, children):
        return SPragma(tuple(str(c) for c in children), self._s(meta))

    # -- formulas ----------------------------------------------------------

    @v_args(meta=True)
    def formula_def(self, meta, children):
        name, tele, body = children
        return SFormulaDef(str(name), tele, body, self._s(meta))

    @v_args(meta=True)
    def f_forall(self, meta, children):
        return FQuant("forall", children[0], children[1], self._s(meta))

    @v_args(meta=True)
    def f_exists(self, meta, children):
        return FQuant("exists", children[0], children[1], self._s(meta))

    @v_args(meta=True)
    def f_and(self, meta, children):
        return FAnd(tuple(_present(children)), self._s(meta))

    @v_args(meta=True)
    def f_or(self, meta, children):
        return FOr(tuple(_present(children)), self._s(meta))

    @v_args(meta=True)
    def f_not(self, meta, children):
        return FNot(children[0], self._s(meta))

    @v_args(meta=True)
    def f_implies(self, meta, children):
        return FImplies(children[0], children[1], self._s(meta))

    @v_args(meta=True)
    def f_true(self, meta, children):
        return FTrue(self._s(meta))

    @v_args(meta=True)
    def f_false(self, meta, children):
        return FFalse(self._s(meta))

    @v_args(meta=True)
    def f_equal(self, meta, children):
        return FEqual(children[0], children[1], self._s(meta))

    # -- models and homs -------------------------------------------------------

    @v_args(meta=True)
    def m_fiber(self, meta, children):
        name, index, *elems = children
        return SFiber(str(name), index or (), tuple(_present(elems)), self._s(meta))

    @v_args(meta=True)
    def m_op(self, meta, children):
        name, args, value = children
        return SOpEntry(str(name), args or (), value, self._s(meta))

    @v_args(meta=True)
    def hmap(self, meta, children):
        sort, index, src, tgt = children
        return SMap(str(sort), index or (), src, tgt, self._s(meta))

    # -- categories and functors ----------------------------------------------------

    @v_args(meta=True)
    def c_objects(self, meta, children):
        return ("objects", tuple(_present(children)), self._s(meta))

    @v_args(meta=True)
    def c_arrow(self, meta, children):
        return ("arrow", SArrow(children[0], children[1], children[2], self._s(meta)))

    @v_args(meta=True)
    def c_identity(self, meta, children):
        return ("identity", (children[0], children[1]))

    @v_args(meta=True)
    def c_comp(self, meta, children):
        return ("comp", SComp(children[0], children[1], children[2], self._s(meta)))

    @v_args(meta=True)
    def category(self, meta, children):
        name, *entries = children
        objects: list = []
        arrows: list = []
        identities: list = []
        comps: list = []
        for entry in entries:
            kind = entry[0]
            if kind == "objects":
                objects.extend(entry[1])
            elif kind == "arrow":
                arrows.append(entry[1])
            elif kind == "identity":
                identities.append(entry[1])
            else:
                comps.append(entry[1])
        return SCategory(
            str(name), tuple(objects), tuple(arrows), tuple(identities), tuple(comps), self._s(meta)
        )

    def f_ob(self, children):
        return ("ob", (children[0], children[1]))

    def f_arr(self, children):
        return ("arr", (children[0], children[1]))

    # -- s-expressions -------------------------------------------------------------

    @v_args(meta=True)
    def slist(self, meta, children):
        return SList(tuple(children), self._s(meta))

    def atom(self, children):
        tok = children[0]
        quoted = tok.type == "STRING"
        text = json.loads(tok) if quoted else str(tok)
        return Atom(text, quoted, _token_span(tok, self.path))


def _raise_parse_error(err: UnexpectedInput, path: Optional[str], kind: str) -> None:
    line = getattr(err, "line", 0) or 0
    col = getattr(err, "column", 0) or 0
    span = SourceSpan(line, col, line, col + 1, path)
    if isinstance(err, UnexpectedEOF):
        msg = f"unexpected end of {kind} file"
    elif isinstance(err, UnexpectedCharacters):
        msg = f"unexpected character {err.char!r}"
    else:
        tok = getattr(err, "token", None)
        expected = sorted(getattr(err, "expected", []) or [])
        msg = f"unexpected {str(tok)!r}" if tok is not None else "syntax error"
        if expected:
            msg += f"; expected one of {', '.join(expected[:8])}"
    raise ParseError(msg, span) from None


def _strip_comments(text: str) -> str:
    return re.sub(r"#[^\n]*", "", text).strip()


def _run(kind: str, text: str, path: Optional[str]):
    try:
        tree = _parser(kind).parse(text)
    except UnexpectedInput as err:
        _raise_parse_error(err, path, kind)
    try:
        return _Build(path).transform(tree)
    except VisitError as err:
        if isinstance(err.orig_exc, GatError):
            raise err.orig_exc from None
        raise


def _start_children(tree) -> list:
    return list(tree.children)


def parse_theory(text: str, path: Optional[str] = None) -> STheory:
    if not _strip_comments(text):
        raise ParseError("empty theory file: expected 'theory NAME { ... }'", SourceSpan(1, 1, 1, 1, path))
    tree = _run("theory", text, path)
    name, *decls = _start_children(tree)
    return STheory(str(name), tuple(decls), SourceSpan(1, 1, 1, 1, path))


def parse_formulas(text: str, path: Optional[str] = None) -> SFormulaFile:
    tree = _run("formula", text, path)
    return SFormulaFile(tuple(_start_children(tree)), SourceSpan(1, 1, 1, 1, path))


def parse_model(text: str, path: Optional[str] = None) -> SModel:
    tree = _run("model", text, path)
    name, theory, *entries = _start_children(tree)
    fibers = tuple(e for e in entries if isinstance(e, SFiber))
    ops = tuple(e for e in entries if isinstance(e, SOpEntry))
    return SModel(str(name), json.loads(theory), fibers, ops, SourceSpan(1, 1, 1, 1, path))


def parse_hom(text: str, path: Optional[str] = None) -> SHom:
    tree = _run("hom", text, path)
    name, src, tgt, *maps = _start_children(tree)
    return SHom(str(name), json.loads(src), json.loads(tgt), tuple(maps), SourceSpan(1, 1, 1, 1, path))


def parse_categories(text: str, path: Optional[str] = None) -> SCategoryFile:
    tree = _run("category", text, path)
    return SCategoryFile(tuple(_start_children(tree)), SourceSpan(1, 1, 1, 1, path))


def parse_functor(text: str, path: Optional[str] = None) -> SFunctor:
    tree = _run("functor", text, path)
    name, src, tgt, *entries = _start_children(tree)
    obs = tuple(e[1] for e in entries if e[0] == "ob")
    arrs = tuple(e[1] for e in entries if e[0] == "arr")
    return SFunctor(str(name), json.loads(src), json.loads(tgt), obs, arrs, SourceSpan(1, 1, 1, 1, path))


def parse_sexprs(text: str, path: Optional[str] = None) -> tuple:
    tree = _run("sexpr", text, path)
    return tuple(_start_children(tree))


PARSERS = {
    ".gat": parse_theory,
    ".gfm": parse_formulas,
    ".gmod": parse_model,
    ".ghom": parse_hom,
    ".gcat": parse_categories,
    ".gfun": parse_functor,
    ".gpf": parse_sexprs,
}
