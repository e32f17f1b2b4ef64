from gatlab.builtin import cat_eq
from gatlab.catinst import to_hom
from gatlab.fibrations import (
    ModelHom,
    beck_chevalley,
    check_hom,
    compose_homs,
    generator_squares,
    identity_hom,
    invariance_suite,
    is_anodyne_fibration,
    singleton_subsets,
)
from gatlab.loader import load_formulas, load_hom, load_model
from gatlab.suites import corpus_functors


def test_collapsing_an_iso_is_anodyne():
    h = load_hom("collapse_iso.ghom")
    assert check_hom(h).ok
    assert is_anodyne_fibration(h).ok
    assert invariance_suite(h, load_formulas("cat_formulas.gfm", cat_eq())).ok


def test_including_a_point_into_an_iso_is_not_anodyne():
    h = load_hom("point_into_iso.ghom")
    assert check_hom(h).ok
    verdict = is_anodyne_fibration(h)
    assert not verdict.ok
    assert (verdict.sort, verdict.index, verdict.missing) == ("Ob", (), "t")


def test_identity_is_anodyne():
    M = load_model("walking_arrow.gmod")
    assert is_anodyne_fibration(identity_hom(M)).ok


def test_broken_component_is_reported():
    h = load_hom("collapse_iso.ghom")
    comps = {s: dict(t) for s, t in h.components.items()}
    comps["Eq"] = {}
    broken = ModelHom(h.source, h.target, comps, "broken")
    assert check_hom(broken).violation["kind"] == "missing"


def test_composite_of_anodyne_homs_is_anodyne():
    _, trivial = corpus_functors()
    pairs = [(F, G) for F in trivial[:60] for G in trivial if F.target == G.source][:40]
    assert pairs
    for F, G in pairs:
        gf = compose_homs(to_hom(G), to_hom(F))
        assert check_hom(gf).ok
        assert is_anodyne_fibration(gf).ok


def _bc(h):
    total = None
    for sort, base, total in generator_squares(h):
        yield sort, beck_chevalley(h, base, total, singleton_subsets(h.target, total))


def test_beck_chevalley_holds_for_anodyne_maps():
    for _, tally in _bc(load_hom("collapse_iso.ghom")):
        assert tally.ok and tally.checks > 0


def test_beck_chevalley_fails_for_the_empty_inclusion():
    results = dict(_bc(load_hom("empty_into_point.ghom")))
    assert not results["Ob"].ok
    witness = results["Ob"].first_failure
    assert witness["exists_then_restrict"] == [[]] and witness["restrict_then_exists"] == []
