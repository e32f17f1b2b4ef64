from pathlib import Path

import pytest

from gatlab.builtin import cat_eq, corpus_dir
from gatlab.dsl import printer
from gatlab.dsl.elab import elaborate_formula_file, elaborate_stheory
from gatlab.dsl.parser import (
    parse_categories,
    parse_formulas,
    parse_functor,
    parse_hom,
    parse_model,
    parse_sexprs,
    parse_theory,
)
from gatlab.errors import EqualityRejected, GatError, ParseError
from gatlab.loader import load_formulas

ROUND_TRIP = {
    ".gat": (parse_theory, printer.theory),
    ".gfm": (parse_formulas, printer.formula_file),
    ".gmod": (parse_model, printer.model),
    ".ghom": (parse_hom, printer.hom),
    ".gcat": (parse_categories, printer.category_file),
    ".gfun": (parse_functor, printer.functor),
    ".gpf": (parse_sexprs, printer.sexprs),
}

CORPUS = sorted(p for p in corpus_dir().iterdir() if p.suffix in ROUND_TRIP)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_round_trips(path: Path):
    parse, show = ROUND_TRIP[path.suffix]
    first = parse(path.read_text(encoding="utf-8"), path.name)
    text = show(first)
    second = parse(text, "printed")
    assert second == first
    assert show(second) == text


def test_empty_theory_file_is_an_error():
    with pytest.raises(ParseError):
        parse_theory("", "empty.gat")


def test_syntax_error_carries_line_and_column():
    with pytest.raises(ParseError) as info:
        parse_theory("theory T {\n  sort A;\n  op f : ;\n}\n", "bad.gat")
    span = info.value.span
    assert span is not None and span.line == 3
    assert str(info.value).startswith("bad.gat:3:")


def test_equality_between_objects_is_rejected():
    with pytest.raises(EqualityRejected) as info:
        load_formulas("skeletal.gfm", cat_eq())
    assert "Ob" in str(info.value)


def test_equality_between_different_hom_types_is_rejected():
    with pytest.raises(EqualityRejected) as info:
        load_formulas("isos_are_identities.gfm", cat_eq())
    assert "Hom(X, Y)" in str(info.value) and "Hom(X, X)" in str(info.value)


def test_equality_between_parallel_arrows_desugars_to_eq_sort():
    ff = parse_formulas("formula same in (X Y : Ob, f g : Hom(X, Y)) := f = g;\n")
    (case,) = elaborate_formula_file(cat_eq(), ff)
    assert case.phi.ext[0].sort == "Eq"


def test_theory_errors_name_the_declaration():
    src = "theory T {\n  sort A;\n  op f (x : B) : A;\n}\n"
    with pytest.raises(GatError) as info:
        elaborate_stheory(parse_theory(src, "t.gat"))
    assert "op f" in str(info.value) and str(info.value).startswith("t.gat:3:")
