"""Finite categories, functors and the folk model structure.

Composition is written in diagrammatic order: ``then(f, g)`` is "f, then g",
matching ``comp(x, y, z, f, g)`` in the category theory files.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional

from .builtin import cat_eq
from .errors import LawViolation, ModelRejected, PreconditionUnmet
from .fibrations import ModelHom
from .kernel import Context
from .semantics import FiniteModel, enumerate_context, eval_formula, make_model


@dataclass(frozen=True)
class FinCategory:
    """Arrows are ``(name, source, target)`` triples; names are unique across hom-sets."""

    objects: tuple
    arrows: tuple
    comp: tuple  # ((f, g), h): f then g is h
    ids: tuple  # (object, identity arrow)
    name: str = field(default="", compare=False)

    @cached_property
    def _src(self) -> dict:
        return {f: s for f, s, _ in self.arrows}

    @cached_property
    def _tgt(self) -> dict:
        return {f: t for f, _, t in self.arrows}

    @cached_property
    def _hom(self) -> dict:
        table: dict = {(a, b): [] for a in self.objects for b in self.objects}
        for f, s, t in self.arrows:
            table[(s, t)].append(f)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def _comp(self) -> dict:
        return dict(self.comp)

    @cached_property
    def _id(self) -> dict:
        return dict(self.ids)

    def src(self, f: str) -> str:
        return self._src[f]

    def tgt(self, f: str) -> str:
        return self._tgt[f]

    def hom(self, a: str, b: str) -> tuple:
        return self._hom[(a, b)]

    def then(self, f: str, g: str) -> str:
        return self._comp[(f, g)]

    def identity(self, a: str) -> str:
        return self._id[a]

    @cached_property
    def _inverse(self) -> dict:
        inv = {}
        for f, s, t in self.arrows:
            for g in self.hom(t, s):
                if self.then(f, g) == self.identity(s) and self.then(g, f) == self.identity(t):
                    inv[f] = g
                    break
        return inv

    def inverse(self, f: str) -> Optional[str]:
        return self._inverse.get(f)

    def is_iso(self, f: str) -> bool:
        return f in self._inverse

    def isos(self) -> tuple:
        """All isomorphisms, in arrow order."""
        return tuple(f for f, _, _ in self.arrows if f in self._inverse)

    def isomorphic(self, a: str, b: str) -> bool:
        return any(self.is_iso(f) for f in self.hom(a, b))

    def iso_classes(self) -> tuple:
        classes: list = []
        for a in self.objects:
            for cls in classes:
                if self.isomorphic(cls[0], a):
                    cls.append(a)
                    break
            else:
                classes.append([a])
        return tuple(tuple(c) for c in classes)

    def arrow_names(self) -> tuple:
        return tuple(f for f, _, _ in self.arrows)

    def __repr__(self) -> str:
        return f"FinCategory({self.name!r}, objects={len(self.objects)}, arrows={len(self.arrows)})"


def check_category(C: FinCategory) -> None:
    """Raise LawViolation unless the tables form a category."""
    names = C.arrow_names()
    if len(set(names)) != len(names):
        raise LawViolation(f"category {C.name!r}: arrow names are not unique")
    if len(set(C.objects)) != len(C.objects):
        raise LawViolation(f"category {C.name!r}: object names are not unique")
    objs = set(C.objects)
    for f, s, t in C.arrows:
        if s not in objs or t not in objs:
            raise LawViolation(f"arrow {f!r} has an unknown endpoint")
    for a in C.objects:
        i = C._id.get(a)
        if i is None or C._src.get(i) != a or C._tgt.get(i) != a:
            raise LawViolation(f"object {a!r} has no identity arrow")
    for f, s, t in C.arrows:
        for g in (g for g, s2, _ in C.arrows if s2 == t):
            h = C._comp.get((f, g))
            if h is None:
                raise LawViolation(f"composite of {f!r} then {g!r} is missing")
            if C._src.get(h) != s or C._tgt.get(h) != C.tgt(g):
                raise LawViolation(f"composite of {f!r} then {g!r} has the wrong endpoints")
    if len(C._comp) != sum(len(C.hom(C.tgt(f), b)) for f, _, _ in C.arrows for b in C.objects):
        raise LawViolation("composition table has entries for non-composable pairs")
    for f, s, t in C.arrows:
        if C.then(C.identity(s), f) != f or C.then(f, C.identity(t)) != f:
            raise LawViolation(f"unit law fails at {f!r}")
    for f, s, t in C.arrows:
        for g in (g for g, s2, _ in C.arrows if s2 == t):
            for h in (h for h, s3, _ in C.arrows if s3 == C.tgt(g)):
                if C.then(C.then(f, g), h) != C.then(f, C.then(g, h)):
                    raise LawViolation(f"associativity fails at {f!r}, {g!r}, {h!r}")


def make_category(
    objects: Iterable[str],
    arrows: Iterable[tuple] = (),
    comps: Optional[dict] = None,
    ids: Optional[dict] = None,
    name: str = "",
) -> FinCategory:
    """Category from its non-identity arrows and non-identity composites.

    Identities are named ``id_<object>`` unless ``ids`` names them; composites
    with an identity are filled in.
    """
    objects = tuple(objects)
    ids = dict(ids or {})
    for a in objects:
        ids.setdefault(a, f"id_{a}")
    given = [tuple(a) for a in arrows]
    id_names = set(ids.values())
    plain = [a for a in given if a[0] not in id_names]
    all_arrows = [(ids[a], a, a) for a in objects] + plain
    order = {a: i for i, a in enumerate(objects)}
    seq = {f: i for i, (f, _, _) in enumerate(all_arrows)}
    all_arrows.sort(key=lambda x: (order.get(x[1], -1), order.get(x[2], -1), x[0] not in id_names, seq[x[0]]))
    table = dict(comps or {})
    for f, s, t in all_arrows:
        table[(ids[s], f)] = f
        table[(f, ids[t])] = f
    rank = {f: i for i, (f, _, _) in enumerate(all_arrows)}
    comp = tuple(sorted(table.items(), key=lambda kv: (rank.get(kv[0][0], -1), rank.get(kv[0][1], -1))))
    C = FinCategory(objects, tuple(all_arrows), comp, tuple((a, ids[a]) for a in objects), name)
    check_category(C)
    return C


@dataclass(frozen=True)
class Functor:
    source: FinCategory
    target: FinCategory
    obmap: tuple
    armap: tuple
    name: str = field(default="", compare=False)

    @cached_property
    def _ob(self) -> dict:
        return dict(self.obmap)

    @cached_property
    def _ar(self) -> dict:
        return dict(self.armap)

    def ob(self, a: str) -> str:
        return self._ob[a]

    def arr(self, f: str) -> str:
        return self._ar[f]

    def __repr__(self) -> str:
        return f"Functor({self.name!r}: {self.source.name} -> {self.target.name})"


def check_functor(F: Functor) -> None:
    C, D = F.source, F.target
    for a in C.objects:
        if F._ob.get(a) not in D._id:
            raise LawViolation(f"object {a!r} is not sent to an object of the target")
    for f, s, t in C.arrows:
        g = F._ar.get(f)
        if g is None or D._src.get(g) != F.ob(s) or D._tgt.get(g) != F.ob(t):
            raise LawViolation(f"arrow {f!r} is not sent to an arrow {F.ob(s)!r} -> {F.ob(t)!r}")
    for a in C.objects:
        if F.arr(C.identity(a)) != D.identity(F.ob(a)):
            raise LawViolation(f"identity of {a!r} is not preserved")
    for (f, g), h in C.comp:
        if D.then(F.arr(f), F.arr(g)) != F.arr(h):
            raise LawViolation(f"composite of {f!r} then {g!r} is not preserved")


def make_functor(
    source: FinCategory, target: FinCategory, obmap: dict, armap: Optional[dict] = None, name: str = ""
) -> Functor:
    """Functor from object and arrow maps; identities may be left out of ``armap``."""
    armap = dict(armap or {})
    for a in source.objects:
        armap.setdefault(source.identity(a), target.identity(obmap[a]))
    F = Functor(
        source,
        target,
        tuple((a, obmap[a]) for a in source.objects),
        tuple((f, armap[f]) for f in source.arrow_names() if f in armap),
        name,
    )
    if len(F.armap) != len(source.arrows):
        missing = [f for f in source.arrow_names() if f not in armap]
        raise LawViolation(f"arrow map misses {missing}")
    check_functor(F)
    return F


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, tuple((a, a) for a in C.objects), tuple((f, f) for f in C.arrow_names()), f"id[{C.name}]")


def compose_functors(G: Functor, F: Functor) -> Functor:
    """``G ∘ F``: first F, then G."""
    return Functor(
        F.source,
        G.target,
        tuple((a, G.ob(b)) for a, b in F.obmap),
        tuple((f, G.arr(g)) for f, g in F.armap),
        f"{G.name}.{F.name}",
    )


# ---------------------------------------------------------------------------
# Small named categories


def point(name: str = "point") -> FinCategory:
    return make_category(["o"], name=name)


def empty_category(name: str = "empty") -> FinCategory:
    return make_category([], name=name)


def walking_arrow(name: str = "arrow") -> FinCategory:
    return make_category(["s", "t"], [("f", "s", "t")], name=name)


def walking_iso(name: str = "iso") -> FinCategory:
    return make_category(
        ["s", "t"],
        [("u", "s", "t"), ("v", "t", "s")],
        {("u", "v"): "id_s", ("v", "u"): "id_t"},
        name=name,
    )


def discrete(n: int, name: str = "") -> FinCategory:
    return make_category([f"d{i}" for i in range(n)], name=name or f"discrete{n}")


def parallel_pair(name: str = "parallel") -> FinCategory:
    return make_category(["s", "t"], [("p", "s", "t"), ("q", "s", "t")], name=name)


# ---------------------------------------------------------------------------
# Cat= models


def to_model(C: FinCategory) -> FiniteModel:
    """The Cat= model of C: Eq(f, g) holds ``refl`` exactly when f = g."""
    th = cat_eq()
    hom = {(a, b): C.hom(a, b) for a in C.objects for b in C.objects}
    eq = {}
    for (a, b), fs in hom.items():
        for f in fs:
            eq[(a, b, f, f)] = ("refl",)
    comp = {}
    for (f, g), h in C.comp:
        comp[(C.src(f), C.tgt(f), C.tgt(g), f, g)] = h
    return make_model(
        th,
        {"Ob": {(): C.objects}, "Hom": hom, "Eq": eq},
        {
            "comp": comp,
            "id": {(a,): C.identity(a) for a in C.objects},
            "r": {(C.src(f), C.tgt(f), f): "refl" for f in C.arrow_names()},
        },
        C.name,
    )


def from_model(M: FiniteModel, name: str = "") -> FinCategory:
    """Read a category back from a Cat= model, rejecting non-standard Eq fibers."""
    objects = M.fiber("Ob", ())
    homs = {(a, b): M.fiber("Hom", (a, b)) for a in objects for b in objects}
    for (a, b), fs in homs.items():
        for f in fs:
            for g in fs:
                fiber = M.fiber("Eq", (a, b, f, g))
                if f != g and fiber:
                    raise ModelRejected(f"Eq({f}, {g}) is inhabited although {f} and {g} differ")
                if f == g and len(fiber) != 1:
                    raise ModelRejected(f"Eq({f}, {f}) must have exactly one element, has {len(fiber)}")
    all_names = [f for fs in homs.values() for f in fs]
    unique = len(set(all_names)) == len(all_names)

    def nm(a, b, f):
        return f if unique else f"{a}.{b}.{f}"

    arrows = [(nm(a, b, f), a, b) for (a, b), fs in homs.items() for f in fs]
    ids = {a: nm(a, a, M.lookup("id", (a,))) for a in objects}
    comps = {}
    for (a, b), fs in homs.items():
        for c in objects:
            for f in fs:
                for g in homs[(b, c)]:
                    comps[(nm(a, b, f), nm(b, c, g))] = nm(a, c, M.lookup("comp", (a, b, c, f, g)))
    order = {a: i for i, a in enumerate(objects)}
    id_names = set(ids.values())
    arrows.sort(key=lambda x: (order[x[1]], order[x[2]], x[0] not in id_names))
    C = FinCategory(
        tuple(objects),
        tuple(arrows),
        tuple(sorted(comps.items(), key=lambda kv: (_rank(arrows, kv[0][0]), _rank(arrows, kv[0][1])))),
        tuple((a, ids[a]) for a in objects),
        name or M.name,
    )
    check_category(C)
    return C


def _rank(arrows: list, f: str) -> int:
    for i, (g, _, _) in enumerate(arrows):
        if g == f:
            return i
    return -1


def to_hom(F: Functor) -> ModelHom:
    """The Cat= model homomorphism of a functor."""
    C = F.source
    comps = {
        "Ob": {((), a): F.ob(a) for a in C.objects},
        "Hom": {((C.src(f), C.tgt(f)), f): F.arr(f) for f in C.arrow_names()},
        "Eq": {((C.src(f), C.tgt(f), f, f), "refl"): "refl" for f in C.arrow_names()},
    }
    return ModelHom(model_of(F.source), model_of(F.target), comps, F.name)


@lru_cache(maxsize=4096)
def model_of(C: FinCategory) -> FiniteModel:
    """Cached :func:`to_model`."""
    return to_model(C)


# ---------------------------------------------------------------------------
# Classes of functors


def is_full(F: Functor) -> bool:
    C, D = F.source, F.target
    return all(
        {F.arr(f) for f in C.hom(a, b)} == set(D.hom(F.ob(a), F.ob(b)))
        for a in C.objects
        for b in C.objects
    )


def is_faithful(F: Functor) -> bool:
    C = F.source
    return all(
        len({F.arr(f) for f in C.hom(a, b)}) == len(C.hom(a, b)) for a in C.objects for b in C.objects
    )


def is_essentially_surjective(F: Functor) -> bool:
    D = F.target
    images = {F.ob(a) for a in F.source.objects}
    return all(any(D.isomorphic(i, d) for i in images) for d in D.objects)


def is_surjective_on_objects(F: Functor) -> bool:
    return {F.ob(a) for a in F.source.objects} == set(F.target.objects)


def is_equivalence(F: Functor) -> bool:
    """Full, faithful and essentially surjective."""
    return is_full(F) and is_faithful(F) and is_essentially_surjective(F)


def is_isofibration(F: Functor) -> bool:
    """Every iso out of ``F(a)`` is the image of an iso out of ``a``."""
    C, D = F.source, F.target
    for a in C.objects:
        lifts = {F.arr(v) for v in C.isos() if C.src(v) == a}
        for u in D.isos():
            if D.src(u) == F.ob(a) and u not in lifts:
                return False
    return True


def functors(A: FinCategory, B: FinCategory) -> Iterator[Functor]:
    """Every functor A -> B, in lexicographic order of the object and arrow maps."""
    plain = [(f, s, t) for f, s, t in A.arrows if f not in A._id.values()]
    for obs in itertools.product(B.objects, repeat=len(A.objects)):
        obmap = dict(zip(A.objects, obs))
        choices = [B.hom(obmap[s], obmap[t]) for _, s, t in plain]
        for arrs in itertools.product(*choices):
            armap = {A.identity(a): B.identity(obmap[a]) for a in A.objects}
            armap.update({f: g for (f, _, _), g in zip(plain, arrs)})
            if all(B.then(armap[f], armap[g]) == armap[h] for (f, g), h in A.comp):
                yield Functor(
                    A, B, tuple((a, obmap[a]) for a in A.objects),
                    tuple((f, armap[f]) for f in A.arrow_names()),
                )


def _agree(F: Functor, G: Functor) -> bool:
    return F.obmap == G.obmap and F.armap == G.armap


def has_rlp(i: Functor, F: Functor) -> Optional[tuple]:
    """Right lifting of F against i. Returns None, or a square with no lift."""
    A, B = i.source, i.target
    C, D = F.source, F.target
    for top in functors(A, C):
        for bottom in functors(B, D):
            if not _agree(compose_functors(F, top), compose_functors(bottom, i)):
                continue
            found = False
            for lift in functors(B, C):
                if _agree(compose_functors(lift, i), top) and _agree(compose_functors(F, lift), bottom):
                    found = True
                    break
            if not found:
                return top, bottom
    return None


@lru_cache(maxsize=None)
def generating_cofibrations() -> tuple:
    """``u: 0 -> 1``, ``v: {0, 1} -> 2`` and ``w: P -> 2`` collapsing the parallel pair."""
    zero, one = empty_category("0"), point("1")
    two, boundary, pair = walking_arrow("2"), make_category(["s", "t"], name="{0,1}"), parallel_pair("P")
    u = make_functor(zero, one, {}, name="u")
    v = make_functor(boundary, two, {"s": "s", "t": "t"}, name="v")
    w = make_functor(pair, two, {"s": "s", "t": "t"}, {"p": "f", "q": "f"}, name="w")
    return u, v, w


def lifting_failures(F: Functor) -> dict:
    """Generator name -> failed square for every generator F does not lift against."""
    out = {}
    for g in generating_cofibrations():
        bad = has_rlp(g, F)
        if bad is not None:
            out[g.name] = bad
    return out


def is_trivial_fibration(F: Functor) -> bool:
    """Right lifting against the three generating cofibrations."""
    return not lifting_failures(F)


def is_trivial_fibration_direct(F: Functor) -> bool:
    """Surjective on objects, full and faithful."""
    return is_surjective_on_objects(F) and is_full(F) and is_faithful(F)


# ---------------------------------------------------------------------------
# Path objects and homotopy


@dataclass(frozen=True)
class PathObject:
    category: FinCategory
    p1: Functor
    p2: Functor


def path_object(X: FinCategory) -> PathObject:
    """The category of isomorphisms of X with commuting squares, and its two projections."""
    isos = X.isos()
    arrows = []
    comps = {}
    ids = {u: _sq(X.identity(X.src(u)), X.identity(X.tgt(u)), u, u) for u in isos}
    ends = {}
    for u in isos:
        for u2 in isos:
            for f in X.hom(X.src(u), X.src(u2)):
                for g in X.hom(X.tgt(u), X.tgt(u2)):
                    if X.then(u, g) == X.then(f, u2):
                        n = _sq(f, g, u, u2)
                        arrows.append((n, u, u2))
                        ends[n] = (f, g, u, u2)
    for n1, s1, t1 in arrows:
        f1, g1, _, _ = ends[n1]
        for n2, s2, t2 in arrows:
            if s2 != t1:
                continue
            f2, g2, _, _ = ends[n2]
            comps[(n1, n2)] = _sq(X.then(f1, f2), X.then(g1, g2), s1, t2)
    PX = make_category(isos, [a for a in arrows if a[0] not in ids.values()], comps, ids, name=f"P[{X.name}]")
    p1 = make_functor(PX, X, {u: X.src(u) for u in isos}, {n: ends[n][0] for n, _, _ in arrows}, name="p1")
    p2 = make_functor(PX, X, {u: X.tgt(u) for u in isos}, {n: ends[n][1] for n, _, _ in arrows}, name="p2")
    return PathObject(PX, p1, p2)


def _sq(f: str, g: str, u: str, u2: str) -> str:
    return f"({f},{g}):{u}>{u2}"


@lru_cache(maxsize=1024)
def _path_data(X: FinCategory):
    P = path_object(X)
    return P, to_hom(P.p1), to_hom(P.p2)


def _homotopies(X: FinCategory, ctx: Context, x1: Optional[tuple], x2: Optional[tuple]) -> Iterator[tuple]:
    """Elements h of PX(Γ) with p1∘h = x1 and p2∘h = x2; None leaves a side free."""
    P, h1, h2 = _path_data(X)
    MP = h1.source
    entries = ctx.entries

    def go(i: int, h: tuple) -> Iterator[tuple]:
        if i == len(entries):
            yield h
            return
        a = entries[i]
        for e in MP.fiber_of(a, h):
            if x1 is not None and h1.map_typed(a, h, e) != x1[i]:
                continue
            if x2 is not None and h2.map_typed(a, h, e) != x2[i]:
                continue
            yield from go(i + 1, h + (e,))

    yield from go(0, ())


def are_homotopic(X: FinCategory, ctx: Context, x1: tuple, x2: tuple) -> bool:
    """Some h in PX(Γ) projects to x1 and to x2."""
    return next(_homotopies(X, ctx, tuple(x1), tuple(x2)), None) is not None


def homotopic_pairs(X: FinCategory, ctx: Context) -> list:
    """All homotopic pairs (x1, x2) in X(Γ), sorted."""
    _, h1, h2 = _path_data(X)
    pairs = {(h1.map_element(ctx, h), h2.map_element(ctx, h)) for h in _homotopies(X, ctx, None, None)}
    return sorted(pairs)


# ---------------------------------------------------------------------------
# Homotopy and equivalence invariance


def invariance1_check(phi, ctx: Context, X: FinCategory, x1: tuple, x2: tuple) -> dict:
    """Homotopic interpretations satisfy the same formulas."""
    if not are_homotopic(X, ctx, x1, x2):
        raise PreconditionUnmet(f"{list(x1)} and {list(x2)} are not homotopic in {X.name!r}")
    M = model_of(X)
    v1 = eval_formula(M, ctx, phi, tuple(x1))
    v2 = eval_formula(M, ctx, phi, tuple(x2))
    return {"agree": v1 == v2, "values": [v1, v2]}


def invariance2_check(phi, ctx: Context, F: Functor, x: tuple) -> dict:
    """An equivalence preserves and reflects formulas."""
    if not is_equivalence(F):
        raise PreconditionUnmet(f"functor {F.name!r} is not an equivalence")
    h = to_hom(F)
    v1 = eval_formula(h.source, ctx, phi, tuple(x))
    fx = h.map_element(ctx, tuple(x))
    v2 = eval_formula(h.target, ctx, phi, fx)
    return {"agree": v1 == v2, "values": [v1, v2], "image": list(fx)}


def apply_functor(F: Functor, ctx: Context, x: tuple) -> tuple:
    return to_hom(F).map_element(ctx, tuple(x))


def elements(X: FinCategory, ctx: Context) -> list:
    return enumerate_context(model_of(X), ctx)
