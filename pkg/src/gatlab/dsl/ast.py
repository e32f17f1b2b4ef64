"""Surface syntax trees, before name resolution.

Spans never take part in equality, so two parses of equivalent text compare
equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import SourceSpan


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class STerm:
    """``name`` or ``name(args)``. ``args`` is None for a bare identifier."""

    name: str
    args: Optional[tuple] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SType:
    name: str
    args: Optional[tuple] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SBinding:
    names: tuple
    type: SType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class STele:
    bindings: tuple = ()
    span: Optional[SourceSpan] = _span()

    @property
    def size(self) -> int:
        return sum(len(b.names) for b in self.bindings)


# -- theories -----------------------------------------------------------------


@dataclass(frozen=True)
class SSort:
    name: str
    tele: STele
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SOp:
    name: str
    tele: STele
    result: SType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SEq:
    name: Optional[str]
    tele: STele
    lhs: STerm
    rhs: STerm
    at: SType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class STypeq:
    name: Optional[str]
    tele: STele
    lhs: SType
    rhs: SType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SPragma:
    words: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class STheory:
    name: str
    decls: tuple
    span: Optional[SourceSpan] = _span()


# -- formulas -----------------------------------------------------------------


@dataclass(frozen=True)
class FTrue:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FFalse:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FNot:
    body: "SFormula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FAnd:
    parts: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FOr:
    parts: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FImplies:
    lhs: "SFormula"
    rhs: "SFormula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FQuant:
    kind: str  # "forall" | "exists"
    tele: STele
    body: "SFormula"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FEqual:
    lhs: STerm
    rhs: STerm
    span: Optional[SourceSpan] = _span()


SFormula = Union[FTrue, FFalse, FNot, FAnd, FOr, FImplies, FQuant, FEqual]


@dataclass(frozen=True)
class SFormulaDef:
    name: str
    tele: STele
    body: SFormula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SFormulaFile:
    defs: tuple
    span: Optional[SourceSpan] = _span()


# -- models and homomorphisms ---------------------------------------------------


@dataclass(frozen=True)
class SFiber:
    sort: str
    index: tuple
    elems: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SOpEntry:
    op: str
    args: tuple
    value: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SModel:
    name: str
    theory: str
    fibers: tuple
    entries: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SMap:
    sort: str
    index: tuple
    source: str
    target: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SHom:
    name: str
    source: str
    target: str
    maps: tuple
    span: Optional[SourceSpan] = _span()


# -- categories and functors ------------------------------------------------------


@dataclass(frozen=True)
class SArrow:
    name: str
    source: str
    target: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SComp:
    first: str
    second: str
    result: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SCategory:
    name: str
    objects: tuple
    arrows: tuple
    identities: tuple  # (object, arrow) pairs
    comps: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SCategoryFile:
    categories: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SFunctor:
    name: str
    source: str
    target: str
    objects: tuple  # (src, tgt) pairs
    arrows: tuple
    span: Optional[SourceSpan] = _span()


# -- s-expressions (proof files) ------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    text: str
    quoted: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SList:
    items: tuple
    span: Optional[SourceSpan] = _span()


SExpr = Union[Atom, SList]
