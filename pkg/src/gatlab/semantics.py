"""Finite set-valued models and the evaluation of terms and formulas in them.

Elements are strings. A fiber ``M_S(t)`` is addressed by the sort name and the
tuple ``t`` of elements interpreting the sort's telescope; fibers that a model
does not list are empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .errors import MissingTableEntry
from .formulas import And, Bot, Exists, Forall, Formula, Not, Or, Top
from .kernel import Context, Equation, TermEq, Theory, TypeExpr, Var


@dataclass(frozen=True)
class FiniteModel:
    theory: Theory
    carriers: Mapping[str, Mapping[tuple, tuple]]
    tables: Mapping[str, Mapping[tuple, str]]
    name: str = field(default="", compare=False)

    def __hash__(self) -> int:
        return hash(id(self.theory))

    def fiber(self, sort: str, index: tuple) -> tuple:
        return self.carriers.get(sort, {}).get(index, ())

    def fiber_of(self, a: TypeExpr, x: tuple) -> tuple:
        if not a.args:
            return self.carriers.get(a.sort, {}).get((), ())
        return self.fiber(a.sort, tuple(eval_term(self, t, x) for t in a.args))

    def lookup(self, op: str, args: tuple) -> str:
        try:
            return self.tables[op][args]
        except KeyError:
            raise MissingTableEntry(f"no entry for {op}{args!r} in model {self.name!r}") from None

    def size(self) -> int:
        """Total number of elements over all fibers."""
        return sum(len(v) for fibers in self.carriers.values() for v in fibers.values())


def eval_term(M: FiniteModel, t, x: tuple) -> str:
    if isinstance(t, Var):
        return x[t.index]
    if not t.args:
        return M.lookup(t.op, ())
    return M.lookup(t.op, tuple(eval_term(M, a, x) for a in t.args))


def extensions(M: FiniteModel, ext: tuple, x: tuple) -> Iterator[tuple]:
    """All ``y`` with ``x + y`` in ``M(Γ.ext)``, in lexicographic order."""
    if not ext:
        yield ()
        return
    head, rest = ext[0], ext[1:]
    for e in M.fiber_of(head, x):
        if rest:
            for tail in extensions(M, rest, x + (e,)):
                yield (e,) + tail
        else:
            yield (e,)


def enumerate_context(M: FiniteModel, ctx: Context) -> list:
    """``M(Γ)`` as an ordered list of element tuples."""
    return list(extensions(M, tuple(ctx.entries), ()))


def eval_formula(M: FiniteModel, ctx: Optional[Context], phi: Formula, x: tuple) -> bool:
    """Truth of ``φ`` at ``x ∈ M(Γ)``. ``ctx`` is only used for its length."""
    if ctx is not None and len(x) != len(ctx):
        raise ValueError(f"element of length {len(x)} for a context of length {len(ctx)}")
    return _holds(M, phi, x)


def _holds(M: FiniteModel, phi: Formula, x: tuple) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Not):
        return not _holds(M, phi.body, x)
    if isinstance(phi, And):
        return all(_holds(M, p, x) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_holds(M, p, x) for p in phi.parts)
    if isinstance(phi, Exists):
        return any(_holds(M, phi.body, x + y) for y in extensions(M, phi.ext, x))
    if isinstance(phi, Forall):
        return all(_holds(M, phi.body, x + y) for y in extensions(M, phi.ext, x))
    raise TypeError(f"not a formula: {phi!r}")


def satisfying(M: FiniteModel, ctx: Context, phi: Formula) -> frozenset:
    """The subset of ``M(Γ)`` defined by ``φ``."""
    return frozenset(x for x in enumerate_context(M, ctx) if _holds(M, phi, x))


# ---------------------------------------------------------------------------
# Model checking


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    at: tuple
    detail: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "where": self.where, "at": list(self.at), "detail": self.detail}


@dataclass(frozen=True)
class ModelCheck:
    violation: Optional[Violation] = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _eq_name(eq: Equation, i: int) -> str:
    return eq.name or f"equation #{i}"


def check_model(th: Theory, M: FiniteModel) -> ModelCheck:
    """Verify typing of every table and every equation, exhaustively.

    Raises MissingTableEntry when an operation table is not total.
    """
    for sort, fibers in M.carriers.items():
        if not th.has_sort(sort):
            return ModelCheck(Violation("fiber", sort, (), "sort not declared by the theory"))
        valid = set(enumerate_context(M, th.sort(sort).telescope))
        for index, elems in fibers.items():
            if index not in valid:
                return ModelCheck(Violation("fiber", sort, index, "index is not an element of the sort's telescope"))
            if len(set(elems)) != len(elems):
                return ModelCheck(Violation("fiber", sort, index, "repeated element"))
    for op_name in M.tables:
        if not th.has_op(op_name):
            return ModelCheck(Violation("table", op_name, (), "operation not declared by the theory"))
    for op in th.ops:
        table = M.tables.get(op.name, {})
        args_all = enumerate_context(M, op.telescope)
        for args in args_all:
            if args not in table:
                raise MissingTableEntry(f"operation {op.name} has no entry for {args!r}")
            value = table[args]
            if value not in M.fiber_of(op.result, args):
                return ModelCheck(
                    Violation("typing", op.name, args, f"value {value!r} is not in the result fiber")
                )
        if len(table) != len(args_all):
            extra = sorted(set(table) - set(args_all))
            return ModelCheck(Violation("table", op.name, extra[0], "entry outside the operation's telescope"))
    for i, eq in enumerate(th.equations):
        body = eq.body
        for x in enumerate_context(M, eq.telescope):
            if isinstance(body, TermEq):
                lhs, rhs = eval_term(M, body.lhs, x), eval_term(M, body.rhs, x)
                if lhs != rhs:
                    return ModelCheck(
                        Violation("equation", _eq_name(eq, i), x, f"left side gives {lhs!r}, right side {rhs!r}")
                    )
            else:
                lhs, rhs = M.fiber_of(body.lhs, x), M.fiber_of(body.rhs, x)
                if lhs != rhs:
                    return ModelCheck(
                        Violation("equation", _eq_name(eq, i), x, f"type sides have different carriers {lhs} and {rhs}")
                    )
    return ModelCheck()


def make_model(th: Theory, carriers: dict, tables: dict, name: str = "") -> FiniteModel:
    """Build a model, normalizing containers to tuples and dropping empty fibers."""
    cs = {s: {tuple(k): tuple(v) for k, v in fibers.items() if v} for s, fibers in carriers.items()}
    ts = {o: {tuple(k): v for k, v in table.items()} for o, table in tables.items()}
    return FiniteModel(th, cs, ts, name)


def product_size(M: FiniteModel, ctx: Context) -> int:
    return len(enumerate_context(M, ctx))


def all_elements(M: FiniteModel) -> Iterator[tuple]:
    """(sort, index, element) for every element of every fiber, in table order."""
    for sort, fibers in M.carriers.items():
        for index, elems in fibers.items():
            for e in elems:
                yield sort, index, e

