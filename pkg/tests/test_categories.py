"""Finite categories, functors, the folk lifting properties and path objects."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatlab.builtin import cat_eq, corpus_path
from gatlab.catinst import (
    compose_functors,
    discrete,
    from_model,
    functors,
    generating_cofibrations,
    has_rlp,
    homotopic_pairs,
    invariance1_check,
    invariance2_check,
    is_equivalence,
    is_trivial_fibration,
    is_trivial_fibration_direct,
    make_category,
    make_functor,
    path_object,
    point,
    to_hom,
    to_model,
    walking_iso,
)
from gatlab.errors import LawViolation, PreconditionUnmet
from gatlab.fibrations import is_anodyne_fibration
from gatlab.fincats import CORPUS_FILE, corpus_text
from gatlab.kernel import Context, TypeExpr
from gatlab.loader import load_formulas
from gatlab.suites import corpus, corpus_functors

OB = TypeExpr("Ob")


# -- an independent functor enumerator, used as the oracle for the counts below


def brute_functors(C, D):
    """Every (object map, arrow map) pair preserving identities and composition."""
    arrows = C.arrow_names()
    for obs in itertools.product(D.objects, repeat=len(C.objects)):
        om = dict(zip(C.objects, obs))
        choices = [D.hom(om[C.src(f)], om[C.tgt(f)]) for f in arrows]
        for imgs in itertools.product(*choices):
            am = dict(zip(arrows, imgs))
            if any(am[C.identity(o)] != D.identity(om[o]) for o in C.objects):
                continue
            if all(am[h] == D.then(am[f], am[g]) for (f, g), h in C.comp):
                yield om, am


def _full_faithful(C, D, om, am):
    return all(
        sorted(am[f] for f in C.hom(a, b)) == sorted(D.hom(om[a], om[b]))
        for a in C.objects
        for b in C.objects
    )


def _has_iso(D, x, y):
    return any(D.then(f, g) == D.identity(x) and D.then(g, f) == D.identity(y)
               for f in D.hom(x, y) for g in D.hom(y, x))


@pytest.fixture(scope="module")
def brute_counts():
    total = equivalences = trivial = 0
    cats = corpus()
    for C in cats:
        for D in cats:
            for om, am in brute_functors(C, D):
                total += 1
                if not _full_faithful(C, D, om, am):
                    continue
                image = set(om.values())
                if all(any(_has_iso(D, i, d) for i in image) for d in D.objects):
                    equivalences += 1
                    if image == set(D.objects):
                        trivial += 1
    return total, equivalences, trivial


def test_corpus_shape():
    cats = corpus()
    by_size = [sum(1 for C in cats if len(C.objects) == n) for n in range(4)]
    assert by_size == [1, 3, 45, 29]
    assert corpus_path(CORPUS_FILE).read_text(encoding="utf-8") == corpus_text()


def test_corpus_classes_are_pairwise_non_isomorphic():
    cats = corpus()
    for i, C in enumerate(cats):
        for D in cats[i + 1:]:
            if (len(C.objects), len(C.arrows)) != (len(D.objects), len(D.arrows)):
                continue
            for om, am in brute_functors(C, D):
                assert not (len(set(om.values())) == len(C.objects) and len(set(am.values())) == len(C.arrows)), (
                    f"{C.name} and {D.name} are isomorphic"
                )


def test_functor_counts_match_the_brute_force_oracle(brute_counts):
    cats = corpus()
    total = sum(1 for C in cats for D in cats for _ in functors(C, D))
    equivalences, trivial = corpus_functors()
    assert brute_counts == (total, len(equivalences), len(trivial)) == (72882, 275, 182)


def test_lifting_against_generators_matches_the_direct_description():
    cats = [C for C in corpus() if len(C.objects) <= 2]
    every = [F for A in cats for B in cats for F in functors(A, B)]
    for F in every[::7]:
        assert is_trivial_fibration(F) == is_trivial_fibration_direct(F), F
        assert is_anodyne_fibration(to_hom(F)).ok == is_trivial_fibration_direct(F), F


def test_generating_cofibrations_are_not_trivial_fibrations():
    for i in generating_cofibrations():
        assert not is_trivial_fibration_direct(i)
        assert has_rlp(i, i) is not None


_, TRIVIAL = corpus_functors()
COMPOSABLE = [(f, g) for f in range(len(TRIVIAL)) for g in range(len(TRIVIAL))
              if TRIVIAL[f].target == TRIVIAL[g].source]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(COMPOSABLE))
def test_trivial_fibrations_compose(pair):
    F, G = TRIVIAL[pair[0]], TRIVIAL[pair[1]]
    GF = compose_functors(G, F)
    assert is_trivial_fibration_direct(GF)
    assert is_anodyne_fibration(to_hom(GF)).ok


def test_model_round_trip():
    for C in corpus():
        D = from_model(to_model(C), C.name)
        assert (D.objects, set(D.arrows), set(D.comp)) == (C.objects, set(C.arrows), set(C.comp))


def test_associativity_is_enforced():
    # (e e) e = d e = d but e (e e) = e d = e
    table = {("e", "e"): "d", ("e", "d"): "e", ("d", "e"): "d", ("d", "d"): "d"}
    with pytest.raises(LawViolation, match="associativity"):
        make_category("a", [("e", "a", "a"), ("d", "a", "a")], table)
    with pytest.raises(LawViolation, match="missing"):
        make_category("ab", [("f", "a", "b"), ("g", "b", "a")], {("f", "g"): "id_a"})


def test_path_object_of_the_walking_iso():
    P = path_object(walking_iso())
    assert len(P.category.objects) == 4 and len(P.category.arrows) == 16
    assert is_trivial_fibration_direct(P.p1) and is_trivial_fibration_direct(P.p2)


@pytest.mark.parametrize("k", range(0, 78, 11))
def test_path_projections_are_trivial_fibrations(k):
    X = corpus()[k]
    P = path_object(X)
    assert is_trivial_fibration_direct(P.p1) and is_trivial_fibration_direct(P.p2)


def test_homotopy_is_isomorphism_of_points():
    one = Context((OB,), ("x",))
    assert homotopic_pairs(walking_iso(), one) == [(("s",), ("s",)), (("s",), ("t",)), (("t",), ("s",)), (("t",), ("t",))]
    assert homotopic_pairs(discrete(2), one) == [(("d0",), ("d0",)), (("d1",), ("d1",))]


def test_invariance_checks_refuse_unmet_preconditions():
    case = load_formulas("cat_formulas.gfm", cat_eq())[0]
    with pytest.raises(PreconditionUnmet):
        invariance1_check(case.phi, case.ctx, discrete(2), ("d0",), ("d1",))
    inclusion = make_functor(point(), walking_iso(), {"o": "s"})
    assert is_equivalence(inclusion)
    assert invariance2_check(case.phi, case.ctx, inclusion, ("o",))["agree"]
    not_equiv = make_functor(point(), discrete(2), {"o": "d0"})
    with pytest.raises(PreconditionUnmet):
        invariance2_check(case.phi, case.ctx, not_equiv, ("o",))


def test_isomorphisms_of_the_walking_iso():
    X = walking_iso()
    assert X.inverse("u") == "v" and X.inverse("v") == "u"
    assert X.iso_classes() == (("s", "t"),)
