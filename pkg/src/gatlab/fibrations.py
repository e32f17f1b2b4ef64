"""Model homomorphisms, the anodyne-fibration test and the invariance harness."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import MissingTableEntry
from .formulas import FormulaCase
from .kernel import Context, TypeExpr, Var
from .semantics import FiniteModel, enumerate_context, eval_formula, eval_term


@dataclass(frozen=True)
class ModelHom:
    """Components ``components[S][(t, e)]`` send ``e ∈ M_S(t)`` into ``N_S(h(t))``."""

    source: FiniteModel
    target: FiniteModel
    components: Mapping[str, Mapping[tuple, str]]
    name: str = field(default="", compare=False)

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    def image(self, sort: str, index: tuple, e: str) -> str:
        try:
            return self.components[sort][(index, e)]
        except KeyError:
            raise MissingTableEntry(f"no component for {sort}{list(index)} at {e!r}") from None

    def map_element(self, ctx: Context, x: tuple) -> tuple:
        """``h ∘ x`` for ``x ∈ M(Γ)``."""
        out = []
        for i, a in enumerate(ctx.entries):
            index = tuple(eval_term(self.source, t, x) for t in a.args)
            out.append(self.image(a.sort, index, x[i]))
        return tuple(out)

    def map_typed(self, a: TypeExpr, x: tuple, e: str) -> str:
        """Image of an element ``e`` of ``M_A(x)``."""
        index = tuple(eval_term(self.source, t, x) for t in a.args)
        return self.image(a.sort, index, e)


@dataclass(frozen=True)
class HomCheck:
    violation: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def check_hom(h: ModelHom) -> HomCheck:
    """Every component lands in the right fiber and every operation square commutes."""
    th = h.source.theory
    M, N = h.source, h.target
    for sort in th.sorts:
        tele = sort.telescope
        for t in enumerate_context(M, tele):
            ht = h.map_element(tele, t)
            target = N.fiber(sort.name, ht)
            for e in M.fiber(sort.name, t):
                try:
                    img = h.image(sort.name, t, e)
                except MissingTableEntry as err:
                    return HomCheck({"kind": "missing", "sort": sort.name, "index": list(t), "element": e, "detail": str(err)})
                if img not in target:
                    return HomCheck({
                        "kind": "typing", "sort": sort.name, "index": list(t), "element": e,
                        "detail": f"image {img!r} is not in the target fiber over {list(ht)}",
                    })
    for op in th.ops:
        for args in enumerate_context(M, op.telescope):
            left = h.map_typed(op.result, args, M.lookup(op.name, args))
            right = N.lookup(op.name, h.map_element(op.telescope, args))
            if left != right:
                return HomCheck({
                    "kind": "naturality", "op": op.name, "args": list(args),
                    "detail": f"h({op.name}(..)) = {left!r} but {op.name}(h(..)) = {right!r}",
                })
    return HomCheck()


@dataclass(frozen=True)
class AnodyneCheck:
    ok: bool
    sort: Optional[str] = None
    index: tuple = ()
    missing: Optional[str] = None

    def as_dict(self) -> dict:
        if self.ok:
            return {"anodyne": True}
        return {"anodyne": False, "sort": self.sort, "index": list(self.index), "unlifted": self.missing}


def is_anodyne_fibration(h: ModelHom) -> AnodyneCheck:
    """Gap-map surjectivity for the display of every sort declaration.

    For each sort S over Θ, every ``t ∈ M(Θ)`` and every ``e' ∈ N_S(h(t))``
    must have some ``e ∈ M_S(t)`` with ``h(e) = e'``.
    """
    M, N = h.source, h.target
    for sort in M.theory.sorts:
        tele = sort.telescope
        for t in enumerate_context(M, tele):
            ht = h.map_element(tele, t)
            hit = {h.image(sort.name, t, e) for e in M.fiber(sort.name, t)}
            for e2 in N.fiber(sort.name, ht):
                if e2 not in hit:
                    return AnodyneCheck(False, sort.name, t, e2)
    return AnodyneCheck(True)


def identity_hom(M: FiniteModel) -> ModelHom:
    comps: dict = {}
    for sort, fibers in M.carriers.items():
        comps[sort] = {(index, e): e for index, elems in fibers.items() for e in elems}
    return ModelHom(M, M, comps, "identity")


def compose_homs(g: ModelHom, f: ModelHom) -> ModelHom:
    """``g ∘ f``: first f, then g."""
    th = f.source.theory
    comps: dict = {}
    for sort in th.sorts:
        table = {}
        for t in enumerate_context(f.source, sort.telescope):
            ft = f.map_element(sort.telescope, t)
            for e in f.source.fiber(sort.name, t):
                table[(t, e)] = g.image(sort.name, ft, f.image(sort.name, t, e))
        comps[sort.name] = table
    return ModelHom(f.source, g.target, comps, f"{g.name}.{f.name}")


# ---------------------------------------------------------------------------
# Invariance harness


@dataclass
class Tally:
    checks: int = 0
    agreed: int = 0
    first_failure: Optional[dict] = None

    def record(self, ok: bool, witness) -> None:
        self.checks += 1
        if ok:
            self.agreed += 1
        elif self.first_failure is None:
            self.first_failure = witness() if callable(witness) else witness

    def merge(self, other: "Tally") -> None:
        self.checks += other.checks
        self.agreed += other.agreed
        if self.first_failure is None:
            self.first_failure = other.first_failure

    @property
    def ok(self) -> bool:
        return self.checks == self.agreed

    def as_dict(self) -> dict:
        return {"checks": self.checks, "agreed": self.agreed, "first_failure": self.first_failure}


def sample_elements(elements: list, cap: Optional[int], rng: Optional[random.Random]) -> list:
    if cap is None or len(elements) <= cap:
        return elements
    rng = rng or random.Random(0)
    picked = sorted(rng.sample(range(len(elements)), cap))
    return [elements[i] for i in picked]


def invariance_suite(
    h: ModelHom,
    cases: Iterable[FormulaCase],
    cap: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Tally:
    """Compare ``eval_M(φ, x)`` with ``eval_N(φ, h(x))`` for each case and sample."""
    tally = Tally()
    for case in cases:
        xs = sample_elements(enumerate_context(h.source, case.ctx), cap, rng)
        for x in xs:
            left = eval_formula(h.source, case.ctx, case.phi, x)
            hx = h.map_element(case.ctx, x)
            right = eval_formula(h.target, case.ctx, case.phi, hx)
            tally.record(
                left == right,
                lambda: {"hom": h.name, "formula": case.name, "at": list(x), "image": list(hx),
                         "source_value": left, "target_value": right},
            )
    return tally


# ---------------------------------------------------------------------------
# Beck–Chevalley on generator squares


def generator_squares(h: ModelHom):
    """For each sort S over Θ: (S, Θ, Θ.S) with Θ.S the context (Θ, s : S(Θ))."""
    for sort in h.source.theory.sorts:
        tele = sort.telescope
        k = len(tele)
        total = tele.extend((TypeExpr(sort.name, tuple(Var(i) for i in range(k))),), ("s",))
        yield sort.name, tele, total


def beck_chevalley(h: ModelHom, base: Context, total: Context, subsets: Iterable[tuple]) -> Tally:
    """Check ``k⁻¹(∃_p P) = ∃_p(h⁻¹ P)`` for each named subset ``P ⊆ N(Θ.S)``.

    ``subsets`` yields ``(label, frozenset)`` pairs.
    """
    M, N = h.source, h.target
    k = len(base)
    m_base = enumerate_context(M, base)
    m_total = enumerate_context(M, total)
    h_base = {t: h.map_element(base, t) for t in m_base}
    h_total = {s: h.map_element(total, s) for s in m_total}
    tally = Tally()
    for label, P in subsets:
        proj_n = {e[:k] for e in P}
        exists_then_restrict = frozenset(t for t in m_base if h_base[t] in proj_n)
        restrict_then_exists = frozenset(s[:k] for s in m_total if h_total[s] in P)
        tally.record(
            exists_then_restrict == restrict_then_exists,
            lambda: {"hom": h.name, "subset": label,
                     "exists_then_restrict": sorted(map(list, exists_then_restrict)),
                     "restrict_then_exists": sorted(map(list, restrict_then_exists))},
        )
    return tally


def singleton_subsets(N: FiniteModel, total: Context):
    for e in enumerate_context(N, total):
        yield f"{{{', '.join(e)}}}", frozenset([e])
