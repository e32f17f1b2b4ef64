"""Surface trees back to text. Parsing the output gives an equal tree."""

from __future__ import annotations

import json
import re

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
    SCategory,
    SCategoryFile,
    SEq,
    SFormulaDef,
    SFormulaFile,
    SFunctor,
    SHom,
    SList,
    SModel,
    SOp,
    SPragma,
    SSort,
    STele,
    STerm,
    STheory,
    SType,
    STypeq,
)
from .grammar import KEYWORDS

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_INT = re.compile(r"[0-9]+\Z")
_ALL_KEYWORDS = set().union(*KEYWORDS.values())


def elem(text: str) -> str:
    """An element name, quoted unless it lexes as a plain identifier or numeral."""
    if (_NAME.match(text) and text not in _ALL_KEYWORDS) or _INT.match(text):
        return text
    return json.dumps(text)


def term(t: STerm) -> str:
    if t.args is None:
        return t.name
    return f"{t.name}({', '.join(term(a) for a in t.args)})"


def type_(a: SType) -> str:
    if a.args is None:
        return a.name
    return f"{a.name}({', '.join(term(t) for t in a.args)})"


def tele(t: STele) -> str:
    return "(" + ", ".join(f"{' '.join(b.names)} : {type_(b.type)}" for b in t.bindings) + ")"


def _opt_tele(t: STele) -> str:
    return f" {tele(t)}" if t.bindings else ""


def theory(th: STheory) -> str:
    lines = [f"theory {th.name} {{"]
    for d in th.decls:
        if isinstance(d, SSort):
            lines.append(f"  sort {d.name}{_opt_tele(d.tele)};")
        elif isinstance(d, SOp):
            lines.append(f"  op {d.name}{_opt_tele(d.tele)} : {type_(d.result)};")
        elif isinstance(d, SEq):
            name = f" {d.name}" if d.name else ""
            lines.append(f"  eq{name}{_opt_tele(d.tele)} : {term(d.lhs)} == {term(d.rhs)} : {type_(d.at)};")
        elif isinstance(d, STypeq):
            name = f" {d.name}" if d.name else ""
            lines.append(f"  typeq{name}{_opt_tele(d.tele)} : {type_(d.lhs)} == {type_(d.rhs)};")
        elif isinstance(d, SPragma):
            lines.append(f"  pragma {' '.join(d.words)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def formula(f) -> str:
    if isinstance(f, FTrue):
        return "true"
    if isinstance(f, FFalse):
        return "false"
    if isinstance(f, FNot):
        return f"not({formula(f.body)})"
    if isinstance(f, FAnd):
        return f"and({', '.join(formula(p) for p in f.parts)})"
    if isinstance(f, FOr):
        return f"or({', '.join(formula(p) for p in f.parts)})"
    if isinstance(f, FImplies):
        return f"implies({formula(f.lhs)}, {formula(f.rhs)})"
    if isinstance(f, FQuant):
        return f"{f.kind} {tele(f.tele)}. {formula(f.body)}"
    if isinstance(f, FEqual):
        return f"{term(f.lhs)} = {term(f.rhs)}"
    raise TypeError(f"not a surface formula: {f!r}")


def formula_def(d: SFormulaDef) -> str:
    return f"formula {d.name} in {tele(d.tele)} :=\n  {formula(d.body)};\n"


def formula_file(ff: SFormulaFile) -> str:
    return "\n".join(formula_def(d) for d in ff.defs)


def _index(index: tuple) -> str:
    return f" [{', '.join(elem(e) for e in index)}]" if index else ""


def model(m: SModel) -> str:
    lines = [f"model {m.name} of {json.dumps(m.theory)} {{"]
    for fb in m.fibers:
        lines.append(f"  sort {fb.sort}{_index(fb.index)} = {{{', '.join(elem(e) for e in fb.elems)}}};")
    for e in m.entries:
        args = f" ({', '.join(elem(a) for a in e.args)})" if e.args else ""
        lines.append(f"  op {e.op}{args} = {elem(e.value)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hom(h: SHom) -> str:
    lines = [f"hom {h.name} from {json.dumps(h.source)} to {json.dumps(h.target)} {{"]
    for m in h.maps:
        lines.append(f"  map {m.sort}{_index(m.index)} {elem(m.source)} -> {elem(m.target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def category(c: SCategory) -> str:
    lines = [f"category {c.name} {{"]
    if c.objects:
        lines.append(f"  objects {', '.join(elem(o) for o in c.objects)};")
    for a in c.arrows:
        lines.append(f"  arrow {elem(a.name)} : {elem(a.source)} -> {elem(a.target)};")
    for obj, arrow in c.identities:
        lines.append(f"  identity {elem(obj)} = {elem(arrow)};")
    for k in c.comps:
        lines.append(f"  comp {elem(k.first)}, {elem(k.second)} = {elem(k.result)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def category_file(cf: SCategoryFile) -> str:
    return "\n".join(category(c) for c in cf.categories)


def functor(f: SFunctor) -> str:
    lines = [f"functor {f.name} from {json.dumps(f.source)} to {json.dumps(f.target)} {{"]
    for a, b in f.objects:
        lines.append(f"  ob {elem(a)} -> {elem(b)};")
    for a, b in f.arrows:
        lines.append(f"  arr {elem(a)} -> {elem(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def sexpr(x, indent: int = 0) -> str:
    if isinstance(x, Atom):
        return json.dumps(x.text) if x.quoted else x.text
    flat = "(" + " ".join(sexpr(i) for i in x.items) + ")"
    if len(flat) + indent <= 88 or not x.items:
        return flat
    head = sexpr(x.items[0])
    pad = " " * (indent + 2)
    rest = "\n".join(pad + sexpr(i, indent + 2) for i in x.items[1:])
    return f"({head}\n{rest})"


def sexprs(items: tuple) -> str:
    return "\n\n".join(sexpr(i) for i in items) + "\n"


PRINTERS = {
    ".gat": theory,
    ".gfm": formula_file,
    ".gmod": model,
    ".ghom": hom,
    ".gcat": category_file,
    ".gfun": functor,
    ".gpf": sexprs,
}
