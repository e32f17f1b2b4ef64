"""Seeded random generation of contexts, terms, morphisms and formulas.

Everything takes an explicit ``random.Random`` so that suites are
reproducible. Terms are drawn from a pool built bottom-up: the variables of
the context, then operations applied to pool members of matching type.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .formulas import BOT, TOP, And, Exists, Forall, Formula, Not, Or
from .kernel import App, Context, Theory, TypeExpr, Var, normalize_type, subst_type
from .syncat import ContextMorphism


@dataclass
class TermPool:
    """Well-typed terms of one context together with their normalized types."""

    theory: Theory
    ctx: Context
    entries: list  # (term, type, normalized type)

    def of_type(self, a: TypeExpr) -> list:
        target, _ = normalize_type(self.theory, self.ctx, a)
        return [t for t, _, n in self.entries if n == target]

    def of_sort(self, sort: str) -> list:
        return [(t, a) for t, a, _ in self.entries if a.sort == sort]


def term_pool(th: Theory, ctx: Context, rounds: int = 1, cap: int = 40) -> TermPool:
    """Variables of ``ctx``, then ``rounds`` passes of applying every operation."""
    entries = []
    seen = set()
    for i, a in enumerate(ctx.entries):
        n, _ = normalize_type(th, ctx, a)
        entries.append((Var(i), a, n))
        seen.add(Var(i))
    pool = TermPool(th, ctx, entries)
    for _ in range(rounds):
        fresh = []
        for op in th.ops:
            for args in _fill(pool, op.telescope, (), limit=cap):
                t = App(op.name, args)
                if t in seen:
                    continue
                seen.add(t)
                a = subst_type(op.result, args)
                n, _ = normalize_type(th, ctx, a)
                fresh.append((t, a, n))
                if len(fresh) >= cap:
                    break
        entries.extend(fresh)
    return pool


def _fill(pool: TermPool, tele: Context, prefix: tuple, limit: int) -> list:
    """Argument tuples for ``tele`` drawn from the pool, at most ``limit`` of them."""
    if len(prefix) == len(tele):
        return [prefix]
    out = []
    need = subst_type(tele[len(prefix)], prefix)
    for t in pool.of_type(need):
        out.extend(_fill(pool, tele, prefix + (t,), limit - len(out)))
        if len(out) >= limit:
            break
    return out


def random_type(th: Theory, pool: TermPool, rng: random.Random, sorts: Optional[list] = None) -> Optional[TypeExpr]:
    """An instance of a random sort whose telescope can be filled from the pool."""
    names = list(sorts or [s.name for s in th.sorts])
    rng.shuffle(names)
    for name in names:
        tele = th.sort(name).telescope
        choices = _fill(pool, tele, (), limit=64)
        if choices:
            return TypeExpr(name, rng.choice(choices))
    return None


def random_context(th: Theory, rng: random.Random, max_len: int = 4, min_len: int = 0) -> Context:
    ctx = Context()
    target = rng.randint(min_len, max_len)
    while len(ctx) < target:
        a = random_type(th, term_pool(th, ctx, rounds=0), rng)
        if a is None:
            break
        ctx = ctx.extend((a,), (f"v{len(ctx)}",))
    return ctx


def realize(
    th: Theory, cod: Context, rng: random.Random, dom: Optional[Context] = None, fresh_bias: float = 0.35
) -> ContextMorphism:
    """A random morphism into ``cod``, adding variables to the domain when needed.

    Each component is an existing term of the required type or, with
    probability ``fresh_bias`` or when none exists, a new domain variable.
    """
    dom = dom if dom is not None else Context()
    terms: tuple = ()
    for b in range(len(cod)):
        need = subst_type(cod[b], terms)
        candidates = term_pool(th, dom, rounds=1, cap=24).of_type(need)
        if candidates and rng.random() >= fresh_bias:
            terms += (rng.choice(candidates),)
        else:
            dom = dom.extend((need,), (f"u{len(dom)}",))
            terms += (Var(len(dom) - 1),)
    return ContextMorphism(dom, cod, terms)


def random_formula(
    th: Theory, ctx: Context, rng: random.Random, depth: int = 3, max_ext: int = 2, max_parts: int = 3
) -> Formula:
    """A formula of nesting depth at most ``depth`` (atoms have depth 0)."""
    if depth <= 0:
        return TOP if rng.random() < 0.6 else BOT
    kind = rng.choice(["atom", "not", "and", "or", "exists", "forall", "exists", "forall"])
    if kind == "atom":
        return TOP if rng.random() < 0.6 else BOT
    if kind == "not":
        return Not(random_formula(th, ctx, rng, depth - 1, max_ext, max_parts))
    if kind in ("and", "or"):
        parts = tuple(random_formula(th, ctx, rng, depth - 1, max_ext, max_parts) for _ in range(rng.randint(0, max_parts)))
        return And(parts) if kind == "and" else Or(parts)
    wide = ctx
    for _ in range(rng.randint(1, max_ext)):
        a = random_type(th, term_pool(th, wide, rounds=1, cap=16), rng)
        if a is None:
            break
        wide = wide.extend((a,), (f"b{len(wide)}",))
    ext = tuple(wide.entries[len(ctx):])
    body = random_formula(th, wide, rng, depth - 1, max_ext, max_parts)
    if not ext:
        return body
    return (Exists if kind == "exists" else Forall)(ext, body, wide.all_names()[len(ctx):])
