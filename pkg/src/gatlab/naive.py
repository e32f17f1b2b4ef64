"""A second, deliberately plain formula interpreter used as a test oracle.

It shares nothing with :mod:`gatlab.semantics` beyond reading a model's
tables. Each quantifier enumerates the whole of ``X(Γ')`` for the extended
context and keeps the tuples whose restriction along the display map is the
current element.
"""

from __future__ import annotations

from .formulas import And, Bot, Exists, Forall, Not, Or, Top
from .kernel import Var


class NaiveInterpreter:
    def __init__(self, model):
        self.model = model
        self._interp_cache: dict = {}

    def term(self, t, x: tuple) -> str:
        if isinstance(t, Var):
            return x[t.index]
        args = tuple(self.term(a, x) for a in t.args)
        return self.model.tables[t.op][args]

    def _pool(self, sort: str) -> list:
        seen: dict = {}
        for elems in self.model.carriers.get(sort, {}).values():
            for e in elems:
                seen.setdefault(e, None)
        return list(seen)

    def _member(self, entry, x: tuple, e: str) -> bool:
        index = tuple(self.term(t, x) for t in entry.args)
        return e in self.model.carriers.get(entry.sort, {}).get(index, ())

    def interpretations(self, entries: tuple) -> list:
        """X(Γ) for the telescope ``entries``: candidate tuples filtered entry by entry."""
        cached = self._interp_cache.get(entries)
        if cached is not None:
            return cached
        tuples = [()]
        for entry in entries:
            pool = self._pool(entry.sort)
            tuples = [x + (e,) for x in tuples for e in pool if self._member(entry, x, e)]
        self._interp_cache[entries] = tuples
        return tuples

    def holds(self, entries: tuple, phi, x: tuple) -> bool:
        """Truth of ``phi`` at ``x``, where ``entries`` is the ambient telescope."""
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Bot):
            return False
        if isinstance(phi, Not):
            return not self.holds(entries, phi.body, x)
        if isinstance(phi, And):
            for p in phi.parts:
                if not self.holds(entries, p, x):
                    return False
            return True
        if isinstance(phi, Or):
            for p in phi.parts:
                if self.holds(entries, p, x):
                    return True
            return False
        if isinstance(phi, (Exists, Forall)):
            extended = entries + tuple(phi.ext)
            k = len(entries)
            over_x = [y for y in self.interpretations(extended) if y[:k] == x]
            if isinstance(phi, Exists):
                return any(self.holds(extended, phi.body, y) for y in over_x)
            return all(self.holds(extended, phi.body, y) for y in over_x)
        raise TypeError(f"not a formula: {phi!r}")


def naive_eval(model, ctx, phi, x: tuple) -> bool:
    return NaiveInterpreter(model).holds(tuple(ctx.entries), phi, x)
