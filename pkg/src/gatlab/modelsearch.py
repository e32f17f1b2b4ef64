"""Exhaustive enumeration of finite models and the countermodel finder.

Models are generated in a fixed canonical order. Each step either fills one
operation entry or picks the size ``0..bound`` of one fiber (elements are
``"0"``, ``"1"``, ...). After every choice the equations that mention the
decided symbol are re-checked on the part of the model that is already
determined, which prunes most of the tree early.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .formulas import Formula
from .kernel import App, Context, Equation, OpDecl, SortDecl, TermEq, Theory, TypeExpr, Var
from .semantics import FiniteModel, enumerate_context, eval_formula

class _Partial:
    """Carriers and tables under construction; undefined lookups give None."""

    def __init__(self) -> None:
        self.carriers: dict = {}
        self.tables: dict = {}

    def term(self, t, x: tuple):
        if isinstance(t, Var):
            return x[t.index]
        args = []
        for a in t.args:
            v = self.term(a, x)
            if v is None:
                return None
            args.append(v)
        return self.tables.get(t.op, {}).get(tuple(args))

    def fiber_of(self, a: TypeExpr, x: tuple) -> Optional[tuple]:
        index = []
        for t in a.args:
            v = self.term(t, x)
            if v is None:
                return None
            index.append(v)
        return self.carriers.get(a.sort, {}).get(tuple(index))

    def elements(self, ctx: Context) -> Iterator[tuple]:
        """Tuples of the context whose every fiber is already decided."""
        entries = ctx.entries

        def go(i: int, x: tuple) -> Iterator[tuple]:
            if i == len(entries):
                yield x
                return
            fiber = self.fiber_of(entries[i], x)
            if not fiber:
                return
            for e in fiber:
                yield from go(i + 1, x + (e,))

        yield from go(0, ())

    def snapshot(self, th: Theory, name: str) -> FiniteModel:
        carriers = {s: {k: v for k, v in fs.items() if v} for s, fs in self.carriers.items()}
        tables = {o: dict(t) for o, t in self.tables.items()}
        return FiniteModel(th, carriers, tables, name)


def _symbols_of_term(t, acc: set) -> None:
    if isinstance(t, App):
        acc.add(t.op)
        for a in t.args:
            _symbols_of_term(a, acc)


def _symbols_of_type(a: TypeExpr, acc: set) -> None:
    acc.add(a.sort)
    for t in a.args:
        _symbols_of_term(t, acc)


def _equation_symbols(eq: Equation) -> frozenset:
    acc: set = set()
    for a in eq.telescope.entries:
        _symbols_of_type(a, acc)
    body = eq.body
    if isinstance(body, TermEq):
        _symbols_of_term(body.lhs, acc)
        _symbols_of_term(body.rhs, acc)
        _symbols_of_type(body.at, acc)
    else:
        _symbols_of_type(body.lhs, acc)
        _symbols_of_type(body.rhs, acc)
    return frozenset(acc)


def _violated(P: _Partial, eq: Equation) -> bool:
    body = eq.body
    for x in P.elements(eq.telescope):
        if isinstance(body, TermEq):
            left, right = P.term(body.lhs, x), P.term(body.rhs, x)
            if left is not None and right is not None and left != right:
                return True
        else:
            left, right = P.fiber_of(body.lhs, x), P.fiber_of(body.rhs, x)
            if left is not None and right is not None and left != right:
                return True
    return False


@dataclass(frozen=True)
class _Plan:
    decls: tuple  # sort and operation declarations in theory order
    watchers: dict  # symbol -> equations to re-check once it changes


def _plan(th: Theory) -> _Plan:
    decls = tuple(d for d in th.decls if isinstance(d, (SortDecl, OpDecl)))
    watchers: dict = {}
    for eq in th.equations:
        for s in _equation_symbols(eq):
            watchers.setdefault(s, []).append(eq)
    return _Plan(decls, {k: tuple(v) for k, v in watchers.items()})


def _next_unit(plan: _Plan, P: _Partial):
    """The next decision: the first ready operation entry, else the first open fiber."""
    for d in plan.decls:
        if isinstance(d, OpDecl):
            table = P.tables[d.name]
            for args in P.elements(d.telescope):
                if args not in table:
                    fiber = P.fiber_of(d.result, args)
                    if fiber is not None:
                        return d, args, fiber
    for d in plan.decls:
        if isinstance(d, SortDecl):
            fs = P.carriers[d.name]
            for index in P.elements(d.telescope):
                if index not in fs:
                    return d, index, None
    return None


def enumerate_models(th: Theory, bound: int) -> Iterator[FiniteModel]:
    """Every model whose fibers have at most ``bound`` elements, in canonical order.

    Decisions are taken one at a time: an operation entry as soon as its
    arguments and result fiber are known (values in fiber order), otherwise
    the size of the first undecided fiber in declaration and index order.
    """
    plan = _plan(th)
    P = _Partial()
    for d in plan.decls:
        (P.carriers if isinstance(d, SortDecl) else P.tables)[d.name] = {}
    counter = [0]

    def consistent(symbol: str) -> bool:
        return not any(_violated(P, eq) for eq in plan.watchers.get(symbol, ()))

    def step() -> Iterator[FiniteModel]:
        unit = _next_unit(plan, P)
        if unit is None:
            counter[0] += 1
            yield P.snapshot(th, f"model{counter[0]}")
            return
        d, key, fiber = unit
        if fiber is None:
            fs = P.carriers[d.name]
            for size in range(bound + 1):
                fs[key] = tuple(str(n) for n in range(size))
                if consistent(d.name):
                    yield from step()
            del fs[key]
        else:
            table = P.tables[d.name]
            for v in fiber:
                table[key] = v
                if consistent(d.name):
                    yield from step()
            table.pop(key, None)

    yield from step()


@lru_cache(maxsize=16)
def models_up_to(th: Theory, bound: int) -> tuple:
    """Cached, materialized :func:`enumerate_models`."""
    return tuple(enumerate_models(th, bound))


@dataclass(frozen=True)
class Countermodel:
    model: FiniteModel
    element: tuple
    index: int  # position of the model in the canonical order

    def as_dict(self) -> dict:
        M = self.model
        return {
            "model_index": self.index,
            "element": list(self.element),
            "carriers": {s: {",".join(k): list(v) for k, v in fs.items()} for s, fs in M.carriers.items()},
        }


def find_countermodel(
    th: Theory, phi: Formula, psi: Formula, ctx: Context, max_size: int = 3, cached: bool = True
) -> Optional[Countermodel]:
    """First model and ``x ∈ M(Γ)`` with ``φ(x)`` true and ``ψ(x)`` false, or None."""
    models = models_up_to(th, max_size) if cached else enumerate_models(th, max_size)
    for n, M in enumerate(models):
        for x in enumerate_context(M, ctx):
            if eval_formula(M, ctx, phi, x) and not eval_formula(M, ctx, psi, x):
                return Countermodel(M, x, n)
    return None
