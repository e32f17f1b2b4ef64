from gatlab.builtin import corpus_path
from gatlab.dsl.elab import elaborate_stheory
from gatlab.dsl.parser import parse_theory
from gatlab.modelsearch import models_up_to
from gatlab.semantics import check_model
from gatlab.sigeq import SHIPPED, Signature, theory_source


def test_shipped_files_match_the_generator():
    for name, sig in SHIPPED.items():
        assert corpus_path(name).read_text(encoding="utf-8") == theory_source(sig)


def test_generated_theory_has_relation_sorts_and_reflected_equality():
    sig = Signature("Graph", relations=(("Edge", 2),), functions=(("c", 0),), sort="V")
    th = elaborate_stheory(parse_theory(theory_source(sig)))
    assert [s.name for s in th.sorts] == ["V", "EqV", "Edge"]
    assert th.equality == {"V": "EqV"}
    models = models_up_to(th, 2)
    # a constant forces a non-empty carrier: n * 2^(n*n) structures on n elements
    assert len(models) == 1 * 2**1 + 2 * 2**4
    assert all(check_model(th, M).ok for M in models)
