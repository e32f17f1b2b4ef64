"""Context morphisms, display maps and their canonical pullbacks."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainMismatch, EqualityUndecided, GatError, RangeError, TypeMismatch
from .formulas import Formula, subst_image
from .kernel import (
    Context,
    Theory,
    Var,
    Verdict,
    check_term,
    subst_term,
    subst_type,
    wf_type,
)


@dataclass(frozen=True)
class ContextMorphism:
    """``terms[β]`` lives in ``dom`` and has type ``cod[β]`` with earlier terms substituted."""

    dom: Context
    cod: Context
    terms: tuple

    def __post_init__(self):
        if len(self.terms) != len(self.cod):
            raise RangeError(
                f"a morphism into a context of length {len(self.cod)} needs {len(self.cod)} terms, "
                f"got {len(self.terms)}"
            )


@dataclass(frozen=True)
class DisplayMap:
    """Projection of ``total`` onto its first ``base_length`` entries."""

    total: Context
    base_length: int

    def __post_init__(self):
        if not 0 <= self.base_length <= len(self.total):
            raise RangeError(
                f"prefix length {self.base_length} outside 0..{len(self.total)}"
            )

    @property
    def base(self) -> Context:
        return self.total.prefix(self.base_length)

    @property
    def extension(self) -> tuple:
        return self.total.entries[self.base_length:]

    @property
    def morphism(self) -> ContextMorphism:
        return ContextMorphism(
            self.total, self.base, tuple(Var(i) for i in range(self.base_length))
        )


def check_morphism(th: Theory, m: ContextMorphism) -> None:
    """Raise unless each component checks against its substituted target type."""
    for b, t in enumerate(m.terms):
        expected = subst_type(m.cod[b], m.terms[:b])
        try:
            check_term(th, m.dom, t, expected)
        except GatError as err:
            raise err.within(f"component {b}")


def identity(ctx: Context) -> ContextMorphism:
    return ContextMorphism(ctx, ctx, tuple(Var(i) for i in range(len(ctx))))


def compose(g: ContextMorphism, f: ContextMorphism) -> ContextMorphism:
    """``g ∘ f``: first f, then g. Components of g are substituted with f."""
    if f.cod != g.dom:
        raise DomainMismatch(f"cannot compose: codomain {f.cod} differs from domain {g.dom}")
    return ContextMorphism(f.dom, g.cod, tuple(subst_term(t, f.terms) for t in g.terms))


def display(total: Context, k: int) -> DisplayMap:
    return DisplayMap(total, k)


def pullback_display(
    th: Theory, f: ContextMorphism, p: DisplayMap, check: bool = True
) -> tuple:
    """Canonical pullback of ``p`` along ``f``.

    Returns ``(Δ', p', q)``: Δ' is ``f.dom`` followed by the extension types of
    ``p`` with ``f`` substituted in, ``p'`` is the display Δ' ↠ ``f.dom`` and
    ``q: Δ' → p.total`` completes the square.
    """
    if f.cod != p.base:
        raise DomainMismatch(f"cannot pull back: {f.cod} is not the base {p.base} of the display")
    dom = f.dom
    n = len(p.extension)
    image = f.terms + tuple(Var(len(dom) + j) for j in range(n))
    ext = tuple(subst_type(a, image) for a in p.extension)
    names = tuple(p.total.name(p.base_length + j) for j in range(n))
    total = dom.extend(ext, names)
    if check:
        for j, a in enumerate(ext):
            try:
                wf_type(th, total.prefix(len(dom) + j), a)
            except TypeMismatch as err:
                if err.verdict is Verdict.UNKNOWN:
                    raise EqualityUndecided(f"pulled-back type {a} does not re-check: {err}") from err
                raise
    q = ContextMorphism(total, p.total, image)
    return total, DisplayMap(total, len(dom)), q


def subst_formula(f: ContextMorphism, phi: Formula) -> Formula:
    """``f*φ``: φ lives in ``f.cod``; the result lives in ``f.dom``."""
    return subst_image(phi, f.terms, len(f.dom))


def apply_to_element(m: ContextMorphism, model, x: tuple) -> tuple:
    """``m ∘ x`` for an element ``x`` of ``model(m.dom)``."""
    from .semantics import eval_term

    return tuple(eval_term(model, t, x) for t in m.terms)
