import pytest

from gatlab.builtin import builtin_theory
from gatlab.errors import ParseError
from gatlab.formulas import TOP
from gatlab.modelsearch import find_countermodel
from gatlab.proofs import RULE_GROUPS, conclusion, load_proof_file, load_proofs, run_spec


def test_library_is_accepted_and_covers_every_rule_group():
    specs = load_proof_file("proofs.gpf")
    assert len(specs) >= 10
    groups = set()
    for spec in specs:
        v = run_spec(spec)
        assert v.accepted, (spec.name, v.error)
        groups |= {RULE_GROUPS[r] for r in spec.node.rules_used()}
    assert groups == {"order", "bounds", "negation", "lattice", "quantifier"}


@pytest.mark.parametrize("spec", load_proof_file("broken_proofs.gpf"), ids=lambda s: s.name)
def test_broken_proofs_are_rejected_by_the_named_rule(spec):
    assert spec.expect == "reject"
    v = run_spec(spec)
    assert not v.accepted
    assert v.rule == spec.expect_rule, v.error


def test_sig_eq_proofs_have_no_small_countermodel():
    for spec in load_proof_file("proofs.gpf"):
        if spec.theory_ref != "sig_eq.gat":
            continue
        ctx, lhs, rhs = conclusion(spec.node)
        assert find_countermodel(spec.theory, lhs, rhs, ctx, 2) is None, spec.name


def test_unsound_entailment_has_a_countermodel():
    th = builtin_theory("sig_eq")
    (spec,) = load_proofs('(proof p (theory "sig_eq.gat") (refl (exists ((x X)) true) (exists ((x X)) true)))')
    _, _, has_element = conclusion(spec.node)
    cm = find_countermodel(th, TOP, has_element, spec.node.ctx, 1)
    assert cm is not None and cm.model.size() == 0


def test_rejection_points_at_the_failing_node():
    text = """
    (proof deep (theory "sig_eq.gat") (context (x X))
      (trans false true
        (lem false true)
        (top true true)))
    """
    (spec,) = load_proofs(text)
    v = run_spec(spec)
    assert (v.accepted, v.rule, v.path) == (False, "lem", (0,))


def test_proof_file_errors_have_spans():
    with pytest.raises(ParseError) as info:
        load_proofs('(proof p (theory "sig_eq.gat")', "bad.gpf")
    assert str(info.value).startswith("bad.gpf:1:")
