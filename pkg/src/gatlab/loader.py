"""Reading corpus and user files into checked objects.

File references inside a file (``model M of "cat_eq.gat"``) are resolved
relative to the referring file first and then against the builtin corpus.
A category inside a multi-category file is addressed as ``file.gcat#Name``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

from .builtin import corpus_path
from .catinst import FinCategory, Functor, make_category, make_functor
from .dsl import printer
from .dsl.ast import SArrow, SCategory, SCategoryFile, SComp, SFiber, SFunctor, SHom, SMap, SModel, SOpEntry
from .dsl.elab import elaborate_formula_file, elaborate_stheory
from .dsl.parser import parse_categories, parse_formulas, parse_functor, parse_hom, parse_model, parse_theory
from .errors import GatError, ModelRejected, UnknownSymbol
from .fibrations import ModelHom
from .kernel import Theory
from .semantics import FiniteModel, make_model

PathLike = Union[str, Path]


class FileMissing(GatError):
    pass


def resolve(ref: str, base: Optional[Path] = None) -> Path:
    """Locate ``ref`` next to ``base``, as given, or in the builtin corpus."""
    p = Path(ref)
    candidates = [p] if p.is_absolute() else ([base / p] if base is not None else []) + [p, corpus_path(ref)]
    for c in candidates:
        if c.is_file():
            return c
    raise FileMissing(f"cannot find {ref!r}")


def _read(path: PathLike) -> tuple[str, str]:
    p = resolve(str(path))
    return p.read_text(encoding="utf-8"), str(p)


_THEORIES: dict = {}


def load_theory(path: PathLike) -> Theory:
    p = resolve(str(path))
    key = str(p.resolve())
    if key not in _THEORIES:
        _THEORIES[key] = elaborate_stheory(parse_theory(p.read_text(encoding="utf-8"), p.name))
    return _THEORIES[key]


def load_formulas(path: PathLike, th: Theory) -> list:
    text, where = _read(path)
    return elaborate_formula_file(th, parse_formulas(text, Path(where).name))


def formula_by_name(cases: list, name: Optional[str]):
    if name is None:
        if len(cases) != 1:
            raise UnknownSymbol(f"file defines {len(cases)} formulas; pick one by name")
        return cases[0]
    for c in cases:
        if c.name == name:
            return c
    raise UnknownSymbol(f"no formula named {name!r}")


def model_from_surface(th: Theory, sm: SModel) -> FiniteModel:
    carriers: dict = {}
    tables: dict = {}
    for fb in sm.fibers:
        if not th.has_sort(fb.sort):
            raise UnknownSymbol(f"unknown sort {fb.sort!r}", fb.span)
        fibers = carriers.setdefault(fb.sort, {})
        if tuple(fb.index) in fibers:
            raise ModelRejected(f"fiber {fb.sort}{list(fb.index)} is listed twice", fb.span)
        fibers[tuple(fb.index)] = tuple(fb.elems)
    for e in sm.entries:
        if not th.has_op(e.op):
            raise UnknownSymbol(f"unknown operation {e.op!r}", e.span)
        table = tables.setdefault(e.op, {})
        if tuple(e.args) in table:
            raise ModelRejected(f"entry {e.op}{list(e.args)} is listed twice", e.span)
        table[tuple(e.args)] = e.value
    return make_model(th, carriers, tables, sm.name)


def load_model(path: PathLike) -> FiniteModel:
    p = resolve(str(path))
    sm = parse_model(p.read_text(encoding="utf-8"), p.name)
    th = load_theory(resolve(sm.theory, p.parent))
    return model_from_surface(th, sm)


def model_to_surface(M: FiniteModel, theory_ref: str) -> SModel:
    fibers = tuple(
        SFiber(sort, tuple(index), tuple(elems))
        for sort, fs in M.carriers.items()
        for index, elems in fs.items()
    )
    entries = tuple(
        SOpEntry(op, tuple(args), value) for op, table in M.tables.items() for args, value in table.items()
    )
    return SModel(M.name or "M", theory_ref, fibers, entries)


def load_hom(path: PathLike) -> ModelHom:
    p = resolve(str(path))
    sh = parse_hom(p.read_text(encoding="utf-8"), p.name)
    source = load_model(resolve(sh.source, p.parent))
    target = load_model(resolve(sh.target, p.parent))
    comps: dict = {}
    for m in sh.maps:
        if not source.theory.has_sort(m.sort):
            raise UnknownSymbol(f"unknown sort {m.sort!r}", m.span)
        table = comps.setdefault(m.sort, {})
        key = (tuple(m.index), m.source)
        if key in table:
            raise ModelRejected(f"element {m.source!r} of {m.sort}{list(m.index)} is mapped twice", m.span)
        table[key] = m.target
    return ModelHom(source, target, comps, sh.name)


def hom_to_surface(h: ModelHom, source_ref: str, target_ref: str) -> SHom:
    maps = tuple(
        SMap(sort, tuple(index), e, img)
        for sort, table in h.components.items()
        for (index, e), img in table.items()
    )
    return SHom(h.name or "h", source_ref, target_ref, maps)


def category_from_surface(sc: SCategory) -> FinCategory:
    try:
        return make_category(
            sc.objects,
            [(a.name, a.source, a.target) for a in sc.arrows],
            {(c.first, c.second): c.result for c in sc.comps},
            dict(sc.identities),
            sc.name,
        )
    except GatError as err:
        raise err.within(f"category {sc.name}").at(sc.span)


def category_to_surface(C: FinCategory) -> SCategory:
    ids = set(C._id.values())
    return SCategory(
        C.name or "C",
        tuple(C.objects),
        tuple(SArrow(f, s, t) for f, s, t in C.arrows if f not in ids),
        tuple(C.ids),
        tuple(SComp(f, g, h) for (f, g), h in C.comp if f not in ids and g not in ids),
    )


def categories_text(cats: list) -> str:
    return printer.category_file(SCategoryFile(tuple(category_to_surface(C) for C in cats)))


def load_categories(path: PathLike) -> list:
    text, where = _read(path)
    return [category_from_surface(sc) for sc in parse_categories(text, Path(where).name).categories]


def load_category(ref: str, base: Optional[Path] = None) -> FinCategory:
    """``file.gcat`` holding one category, or ``file.gcat#Name``."""
    file, _, name = ref.partition("#")
    cats = load_categories(resolve(file, base))
    if not name:
        if len(cats) != 1:
            raise UnknownSymbol(f"{file} holds {len(cats)} categories; use {file}#Name")
        return cats[0]
    for C in cats:
        if C.name == name:
            return C
    raise UnknownSymbol(f"no category named {name!r} in {file}")


def functor_from_surface(sf: SFunctor, base: Optional[Path] = None) -> Functor:
    C = load_category(sf.source, base)
    D = load_category(sf.target, base)
    try:
        return make_functor(C, D, dict(sf.objects), dict(sf.arrows), sf.name)
    except (GatError, KeyError) as err:
        if isinstance(err, KeyError):
            err = UnknownSymbol(f"object {err.args[0]!r} has no image")
        raise err.within(f"functor {sf.name}").at(sf.span)


def load_functor(path: PathLike) -> Functor:
    p = resolve(str(path))
    return functor_from_surface(parse_functor(p.read_text(encoding="utf-8"), p.name), p.parent)


def functor_to_surface(F: Functor, source_ref: str, target_ref: str) -> SFunctor:
    return SFunctor(F.name or "F", source_ref, target_ref, tuple(F.obmap), tuple(F.armap))
