"""Equality-free first-order formulas over a theory.

A formula lives in an ambient context Γ that it does not store. The extension
of a quantifier occupies the levels right after Γ, so ``Exists(ext, body)`` in
Γ has its body in ``Γ.extend(ext)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import GatError
from .kernel import Context, Term, Theory, TypeExpr, Var, subst_type, term_text, type_text, wf_type


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple = ()


@dataclass(frozen=True)
class Or:
    parts: tuple = ()


@dataclass(frozen=True)
class Exists:
    ext: tuple
    body: "Formula"
    names: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.ext:
            raise ValueError("a quantifier needs at least one bound variable; use exists_()")


@dataclass(frozen=True)
class Forall:
    ext: tuple
    body: "Formula"
    names: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.ext:
            raise ValueError("a quantifier needs at least one bound variable; use forall_()")


Formula = Union[Top, Bot, Not, And, Or, Exists, Forall]
Quantifier = (Exists, Forall)

@dataclass(frozen=True)
class FormulaCase:
    """A named formula together with its ambient context."""

    name: str
    ctx: Context
    phi: "Formula"


TOP = Top()
BOT = Bot()


def exists_(ext, body: Formula, names: tuple = ()) -> Formula:
    """Existential over ``ext``; an empty extension gives ``body`` itself."""
    ext = tuple(ext)
    return Exists(ext, body, tuple(names)) if ext else body


def forall_(ext, body: Formula, names: tuple = ()) -> Formula:
    ext = tuple(ext)
    return Forall(ext, body, tuple(names)) if ext else body


def implies(a: Formula, b: Formula) -> Formula:
    return Or((Not(a), b))


def children(phi: Formula) -> tuple:
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return phi.parts
    if isinstance(phi, Quantifier):
        return (phi.body,)
    return ()


def depth(phi: Formula) -> int:
    kids = children(phi)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def quantifier_depth(phi: Formula) -> int:
    inner = max((quantifier_depth(k) for k in children(phi)), default=0)
    return inner + (1 if isinstance(phi, Quantifier) else 0)


def size(phi: Formula) -> int:
    return 1 + sum(size(k) for k in children(phi))


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    for k in children(phi):
        yield from subformulas(k)


# ---------------------------------------------------------------------------
# Well-formedness


def wf_formula(th: Theory, ctx: Context, phi: Formula) -> None:
    """Raise unless every quantifier extension is a telescope over its scope."""
    _wf(th, ctx, phi, ())


def _wf(th: Theory, ctx: Context, phi: Formula, path: tuple) -> None:
    if isinstance(phi, (Top, Bot)):
        return
    if isinstance(phi, Not):
        _wf(th, ctx, phi.body, path + (0,))
    elif isinstance(phi, (And, Or)):
        for i, p in enumerate(phi.parts):
            _wf(th, ctx, p, path + (i,))
    elif isinstance(phi, Quantifier):
        inner = ctx
        for j, a in enumerate(phi.ext):
            try:
                wf_type(th, inner, a)
            except GatError as err:
                where = "/".join(map(str, path)) or "root"
                raise err.within(f"formula node {where}, bound variable {j}")
            inner = inner.extend((a,), (phi.names[j] if j < len(phi.names) else "",))
        _wf(th, inner, phi.body, path + (0,))
    else:
        raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Substitution


def subst_image(phi: Formula, image: tuple, dom_len: int) -> Formula:
    """``f*φ`` for the morphism with components ``image`` out of a context of length ``dom_len``.

    ``image`` has one term per variable of the ambient context of φ. Bound
    variables move to the levels right after the new ambient context, which is
    the canonical pullback of the quantifier's display map.
    """
    if isinstance(phi, (Top, Bot)):
        return phi
    if isinstance(phi, Not):
        return Not(subst_image(phi.body, image, dom_len))
    if isinstance(phi, And):
        return And(tuple(subst_image(p, image, dom_len) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(subst_image(p, image, dom_len) for p in phi.parts))
    n = len(phi.ext)
    extended = image + tuple(Var(dom_len + j) for j in range(n))
    ext = tuple(subst_type(a, extended) for a in phi.ext)
    body = subst_image(phi.body, extended, dom_len + n)
    return type(phi)(ext, body, phi.names)


def weaken(phi: Formula, old_len: int, new_len: int) -> Formula:
    """Pull back along the display map that forgets levels ``old_len .. new_len-1``."""
    if old_len == new_len:
        return phi
    return subst_image(phi, tuple(Var(i) for i in range(old_len)), new_len)


# ---------------------------------------------------------------------------
# Printing


def _fresh(name: str, taken: set, level: int) -> str:
    base = name or f"v{level}"
    cand = base
    k = 1
    while cand in taken:
        cand = f"{base}{k}"
        k += 1
    return cand


def bound_names(phi, names: tuple) -> tuple:
    """Printable names for the bound variables of a quantifier node."""
    taken = set(names)
    out = []
    for j in range(len(phi.ext)):
        wanted = phi.names[j] if j < len(phi.names) else ""
        nm = _fresh(wanted, taken, len(names) + j)
        taken.add(nm)
        out.append(nm)
    return tuple(out)


def formula_text(phi: Formula, names: tuple = ()) -> str:
    """Render in the surface syntax of formula files."""
    names = tuple(names)
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Not):
        return f"not({formula_text(phi.body, names)})"
    if isinstance(phi, And):
        return f"and({', '.join(formula_text(p, names) for p in phi.parts)})"
    if isinstance(phi, Or):
        return f"or({', '.join(formula_text(p, names) for p in phi.parts)})"
    bnames = bound_names(phi, names)
    scope = names
    binds = []
    for j, a in enumerate(phi.ext):
        binds.append(f"{bnames[j]} : {type_text(a, scope)}")
        scope = scope + (bnames[j],)
    kw = "exists" if isinstance(phi, Exists) else "forall"
    return f"{kw} ({', '.join(binds)}). {formula_text(phi.body, scope)}"


def free_levels(phi: Formula, ambient: int) -> set:
    """Levels below ``ambient`` that the formula mentions."""
    acc: set = set()

    def walk(f, top):
        if isinstance(f, Quantifier):
            for a in f.ext:
                for t in a.args:
                    _collect(t, acc)
            walk(f.body, top + len(f.ext))
        else:
            for k in children(f):
                walk(k, top)

    walk(phi, ambient)
    return {i for i in acc if i < ambient}


def _collect(t: Term, acc: set) -> None:
    if isinstance(t, Var):
        acc.add(t.index)
    else:
        for a in t.args:
            _collect(a, acc)

