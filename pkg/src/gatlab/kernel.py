"""Terms, types, contexts and theories, with elaboration and bounded equality.

Variables are absolute positions in the ambient telescope: ``Var(0)`` is the
first entry of the context, whatever the context's length. A term valid in a
context therefore stays valid, unchanged, in every extension of it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Union

from .errors import (
    ArityMismatch,
    EqualityUndecided,
    GatError,
    IllFormedTelescope,
    TypeMismatch,
    UnknownSymbol,
)

DEFAULT_FUEL = 1000


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"#{self.index}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


@dataclass(frozen=True)
class TypeExpr:
    sort: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.sort
        return f"{self.sort}({', '.join(map(str, self.args))})"


def term_text(t: Term, names: tuple) -> str:
    """Render with variable names; levels without a name print as ``#i``."""
    if isinstance(t, Var):
        return names[t.index] if t.index < len(names) else f"#{t.index}"
    if not t.args:
        return t.op
    return f"{t.op}({', '.join(term_text(a, names) for a in t.args)})"


def type_text(a: TypeExpr, names: tuple) -> str:
    if not a.args:
        return a.sort
    return f"{a.sort}({', '.join(term_text(t, names) for t in a.args)})"


def subst_term(t: Term, image: tuple) -> Term:
    """Replace ``Var(i)`` by ``image[i]``."""
    if isinstance(t, Var):
        return image[t.index]
    if not t.args:
        return t
    return App(t.op, tuple(subst_term(a, image) for a in t.args))


def subst_type(a: TypeExpr, image: tuple) -> TypeExpr:
    if not a.args:
        return a
    return TypeExpr(a.sort, tuple(subst_term(t, image) for t in a.args))


def term_vars(t: Term, acc: Optional[set] = None) -> set:
    acc = set() if acc is None else acc
    if isinstance(t, Var):
        acc.add(t.index)
    else:
        for a in t.args:
            term_vars(a, acc)
    return acc


def type_vars(a: TypeExpr) -> set:
    acc: set = set()
    for t in a.args:
        term_vars(t, acc)
    return acc


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_key(t: Term) -> tuple:
    """Total structural order used to orient ground equations."""
    if isinstance(t, Var):
        return (0, t.index)
    return (1, t.op, tuple(term_key(a) for a in t.args))


def _orient(lhs, rhs, size, key):
    if (size(lhs), key(lhs)) >= (size(rhs), key(rhs)):
        return lhs, rhs
    return rhs, lhs


def _type_size(a: TypeExpr) -> int:
    return 1 + sum(term_size(t) for t in a.args)


def _type_key(a: TypeExpr) -> tuple:
    return (a.sort, tuple(term_key(t) for t in a.args))


@dataclass(frozen=True)
class Context:
    """A telescope; entry ``i`` may mention ``Var(0)`` .. ``Var(i-1)``."""

    entries: tuple = ()
    names: tuple = field(default=(), compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> TypeExpr:
        return self.entries[i]

    def __iter__(self) -> Iterator[TypeExpr]:
        return iter(self.entries)

    def name(self, i: int) -> str:
        if i < len(self.names) and self.names[i]:
            return self.names[i]
        return f"v{i}"

    def all_names(self) -> tuple:
        return tuple(self.name(i) for i in range(len(self.entries)))

    def prefix(self, k: int) -> "Context":
        return Context(self.entries[:k], self.names[:k])

    def extend(self, types: Iterable[TypeExpr], names: Iterable[str] = ()) -> "Context":
        types = tuple(types)
        names = tuple(names)
        if len(names) < len(types):
            names = names + ("",) * (len(types) - len(names))
        return Context(self.entries + types, self.all_names() + names)

    def __str__(self) -> str:
        names = self.all_names()
        return "(" + ", ".join(f"{names[i]} : {type_text(a, names)}" for i, a in enumerate(self.entries)) + ")"


@dataclass(frozen=True)
class SortDecl:
    name: str
    telescope: Context


@dataclass(frozen=True)
class OpDecl:
    name: str
    telescope: Context
    result: TypeExpr


@dataclass(frozen=True)
class TermEq:
    lhs: Term
    rhs: Term
    at: TypeExpr


@dataclass(frozen=True)
class TypeEq:
    lhs: TypeExpr
    rhs: TypeExpr


@dataclass(frozen=True)
class Equation:
    telescope: Context
    body: Union[TermEq, TypeEq]
    name: str = ""


@dataclass(frozen=True)
class Pragma:
    """``confluent`` or ``equality SORT EQSORT``."""

    kind: str
    args: tuple = ()


Decl = Union[SortDecl, OpDecl, Equation, Pragma]


@dataclass(frozen=True, eq=False)
class Theory:
    """An elaborated theory. Declaration order is its well-founded order.

    Construct through :func:`elaborate_theory`; compares by identity.
    """

    name: str
    decls: tuple = ()

    @cached_property
    def sorts(self) -> list:
        return [d for d in self.decls if isinstance(d, SortDecl)]

    @cached_property
    def ops(self) -> list:
        return [d for d in self.decls if isinstance(d, OpDecl)]

    @cached_property
    def equations(self) -> list:
        return [d for d in self.decls if isinstance(d, Equation)]

    @cached_property
    def _sort_map(self) -> dict:
        return {d.name: d for d in self.sorts}

    @cached_property
    def _op_map(self) -> dict:
        return {d.name: d for d in self.ops}

    @cached_property
    def confluent(self) -> bool:
        return any(isinstance(d, Pragma) and d.kind == "confluent" for d in self.decls)

    @cached_property
    def equality(self) -> dict:
        """Map from a sort to the Eq sort that reflects equality on it."""
        return {
            d.args[0]: d.args[1]
            for d in self.decls
            if isinstance(d, Pragma) and d.kind == "equality"
        }

    def sort(self, name: str) -> SortDecl:
        try:
            return self._sort_map[name]
        except KeyError:
            raise UnknownSymbol(f"unknown sort {name!r}") from None

    def op(self, name: str) -> OpDecl:
        try:
            return self._op_map[name]
        except KeyError:
            raise UnknownSymbol(f"unknown operation {name!r}") from None

    def has_sort(self, name: str) -> bool:
        return name in self._sort_map

    def has_op(self, name: str) -> bool:
        return name in self._op_map

    def prefix(self, k: int) -> "Theory":
        return Theory(self.name, self.decls[:k])

    @cached_property
    def rewriter(self) -> "Rewriter":
        return Rewriter(self)

    def __repr__(self) -> str:
        return (
            f"Theory({self.name!r}, sorts={len(self.sorts)}, ops={len(self.ops)}, "
            f"equations={len(self.equations)})"
        )


# ---------------------------------------------------------------------------
# Rewriting


class _OutOfFuel(Exception):
    pass


def _match(pat, t, sigma: dict) -> bool:
    """Syntactic matching; ``Var`` in a pattern is a pattern variable."""
    if isinstance(pat, Var):
        bound = sigma.get(pat.index)
        if bound is None:
            sigma[pat.index] = t
            return True
        return bound == t
    if isinstance(t, Var) or t.op != pat.op or len(t.args) != len(pat.args):
        return False
    return all(_match(p, a, sigma) for p, a in zip(pat.args, t.args))


def _match_type(pat: TypeExpr, a: TypeExpr, sigma: dict) -> bool:
    if pat.sort != a.sort or len(pat.args) != len(a.args):
        return False
    return all(_match(p, t, sigma) for p, t in zip(pat.args, a.args))


@dataclass(frozen=True)
class _Rule:
    lhs: object
    rhs: object
    arity: int


@dataclass(frozen=True)
class _GroundRules:
    terms: dict
    types: dict

    @property
    def empty(self) -> bool:
        return not self.terms and not self.types


class Rewriter:
    """Innermost-leftmost rewriting with the theory's equations, oriented as written.

    An equation whose left side is a variable, or which does not mention every
    telescope variable on its left side, cannot be used as a rule. It is used
    instead through its ground instances in a given context: whenever the
    context contains variables that instantiate its telescope.
    """

    def __init__(self, theory: Theory):
        self.theory = theory
        self.term_rules: list[_Rule] = []
        self.type_rules: list[_Rule] = []
        self.hypothetical: list[Equation] = []
        for eq in theory.equations:
            body = eq.body
            n = len(eq.telescope)
            if isinstance(body, TermEq):
                usable = isinstance(body.lhs, App) and term_vars(body.lhs) >= set(range(n))
                if usable:
                    self.term_rules.append(_Rule(body.lhs, body.rhs, n))
                else:
                    self.hypothetical.append(eq)
            else:
                if type_vars(body.lhs) >= set(range(n)):
                    self.type_rules.append(_Rule(body.lhs, body.rhs, n))
                else:
                    self.hypothetical.append(eq)
        self._by_op: dict[str, list[_Rule]] = {}
        for r in self.term_rules:
            self._by_op.setdefault(r.lhs.op, []).append(r)
        self._by_sort: dict[str, list[_Rule]] = {}
        for r in self.type_rules:
            self._by_sort.setdefault(r.lhs.sort, []).append(r)
        self._ground_cache: dict[Context, _GroundRules] = {}

    # -- core loop -------------------------------------------------------

    def _norm_term(self, t: Term, ground: _GroundRules, budget: list) -> Term:
        if isinstance(t, App) and t.args:
            t = App(t.op, tuple(self._norm_term(a, ground, budget) for a in t.args))
        if isinstance(t, App):
            for rule in self._by_op.get(t.op, ()):
                sigma: dict = {}
                if _match(rule.lhs, t, sigma):
                    budget[0] -= 1
                    if budget[0] < 0:
                        raise _OutOfFuel
                    image = tuple(sigma[i] for i in range(rule.arity))
                    return self._norm_term(subst_term(rule.rhs, image), ground, budget)
        target = ground.terms.get(t)
        if target is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise _OutOfFuel
            return self._norm_term(target, ground, budget)
        return t

    def _norm_type(self, a: TypeExpr, ground: _GroundRules, budget: list) -> TypeExpr:
        a = TypeExpr(a.sort, tuple(self._norm_term(t, ground, budget) for t in a.args))
        for rule in self._by_sort.get(a.sort, ()):
            sigma: dict = {}
            if _match_type(rule.lhs, a, sigma):
                budget[0] -= 1
                if budget[0] < 0:
                    raise _OutOfFuel
                image = tuple(sigma[i] for i in range(rule.arity))
                return self._norm_type(subst_type(rule.rhs, image), ground, budget)
        target = ground.types.get(a)
        if target is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise _OutOfFuel
            return self._norm_type(target, ground, budget)
        return a

    _NO_GROUND = _GroundRules({}, {})

    def normalize(self, ctx: Context, t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, bool]:
        ground = self.ground_rules(ctx)
        try:
            return self._norm_term(t, ground, [fuel]), True
        except (_OutOfFuel, RecursionError):
            return t, False

    def normalize_type(self, ctx: Context, a: TypeExpr, fuel: int = DEFAULT_FUEL) -> tuple[TypeExpr, bool]:
        ground = self.ground_rules(ctx)
        try:
            return self._norm_type(a, ground, [fuel]), True
        except (_OutOfFuel, RecursionError):
            return a, False

    # -- ground instances of hypothetical equations -----------------------

    def _plain_type(self, a: TypeExpr) -> Optional[TypeExpr]:
        try:
            return self._norm_type(a, self._NO_GROUND, [DEFAULT_FUEL])
        except (_OutOfFuel, RecursionError):
            return None

    def _plain_term(self, t: Term) -> Optional[Term]:
        try:
            return self._norm_term(t, self._NO_GROUND, [DEFAULT_FUEL])
        except (_OutOfFuel, RecursionError):
            return None

    def _instances(self, eq: Equation, ctx: Context) -> Iterator[tuple]:
        """Substitutions from the equation's telescope into ``ctx``.

        Positions are filled from last to first. An unfilled position takes an
        ambient variable of the right sort; matching its declared type against
        the variable's type then fills earlier positions.
        """
        tele = eq.telescope
        n = len(tele)
        ctx_types = [self._plain_type(a) for a in ctx.entries]

        def plain_equal(th, c, a, b) -> Verdict:
            na, nb = self._plain_type(a), self._plain_type(b)
            return Verdict.YES if na is not None and na == nb else Verdict.UNKNOWN

        def infer_plain(t: Term) -> Optional[TypeExpr]:
            try:
                return self._plain_type(_infer(self.theory, ctx, t, plain_equal))
            except GatError:
                return None

        def go(j: int, sigma: dict) -> Iterator[dict]:
            if j < 0:
                yield sigma
                return
            if j in sigma:
                actual = infer_plain(sigma[j])
                if actual is None:
                    return
                s2 = dict(sigma)
                if _match_type(tele[j], actual, s2):
                    yield from go(j - 1, s2)
                return
            for v, a in enumerate(ctx_types):
                if a is None or a.sort != tele[j].sort:
                    continue
                s2 = dict(sigma)
                s2[j] = Var(v)
                if _match_type(tele[j], a, s2):
                    yield from go(j - 1, s2)

        for sigma in go(n - 1, {}):
            image = tuple(sigma[i] for i in range(n))
            ok = True
            for j in range(n):
                expected = self._plain_type(subst_type(tele[j], image))
                actual = infer_plain(image[j])
                if expected is None or expected != actual:
                    ok = False
                    break
            if ok:
                yield image

    def ground_rules(self, ctx: Context) -> _GroundRules:
        cached = self._ground_cache.get(ctx)
        if cached is not None:
            return cached
        terms: dict = {}
        types: dict = {}
        for eq in self.hypothetical:
            for image in self._instances(eq, ctx):
                body = eq.body
                if isinstance(body, TermEq):
                    lhs = self._plain_term(subst_term(body.lhs, image))
                    rhs = self._plain_term(subst_term(body.rhs, image))
                    if lhs is None or rhs is None or lhs == rhs:
                        continue
                    big, small = _orient(lhs, rhs, term_size, term_key)
                    terms.setdefault(big, small)
                else:
                    lhs = self._plain_type(subst_type(body.lhs, image))
                    rhs = self._plain_type(subst_type(body.rhs, image))
                    if lhs is None or rhs is None or lhs == rhs:
                        continue
                    big, small = _orient(lhs, rhs, _type_size, _type_key)
                    types.setdefault(big, small)
        result = _GroundRules(terms, types)
        self._ground_cache[ctx] = result
        return result


# ---------------------------------------------------------------------------
# Judgments


def normalize(th: Theory, ctx: Context, t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, bool]:
    """Normal form of ``t`` and whether rewriting finished within ``fuel`` steps."""
    return th.rewriter.normalize(ctx, t, fuel)


def normalize_type(th: Theory, ctx: Context, a: TypeExpr, fuel: int = DEFAULT_FUEL) -> tuple[TypeExpr, bool]:
    return th.rewriter.normalize_type(ctx, a, fuel)


def _verdict(th: Theory, ctx: Context, same: bool) -> Verdict:
    if same:
        return Verdict.YES
    if th.confluent and th.rewriter.ground_rules(ctx).empty:
        return Verdict.NO
    return Verdict.UNKNOWN


def types_equal(th: Theory, ctx: Context, a: TypeExpr, b: TypeExpr, fuel: int = DEFAULT_FUEL) -> Verdict:
    if a == b:
        return Verdict.YES
    na, ok_a = normalize_type(th, ctx, a, fuel)
    nb, ok_b = normalize_type(th, ctx, b, fuel)
    if not (ok_a and ok_b):
        return Verdict.YES if na == nb else Verdict.UNKNOWN
    return _verdict(th, ctx, na == nb)


def terms_equal(
    th: Theory, ctx: Context, s: Term, t: Term, at: Optional[TypeExpr] = None, fuel: int = DEFAULT_FUEL
) -> Verdict:
    """Equality of two terms of type ``at``. The type only documents the judgment."""
    if s == t:
        return Verdict.YES
    ns, ok_s = normalize(th, ctx, s, fuel)
    nt, ok_t = normalize(th, ctx, t, fuel)
    if not (ok_s and ok_t):
        return Verdict.YES if ns == nt else Verdict.UNKNOWN
    return _verdict(th, ctx, ns == nt)


def _judged_equal(th, ctx, a, b) -> Verdict:
    return types_equal(th, ctx, a, b)


def _infer(th: Theory, ctx: Context, t: Term, eq: Callable) -> TypeExpr:
    if isinstance(t, Var):
        if not 0 <= t.index < len(ctx):
            raise UnknownSymbol(f"variable #{t.index} out of range in a context of length {len(ctx)}")
        return ctx[t.index]
    decl = th.op(t.op)
    if len(t.args) != len(decl.telescope):
        raise ArityMismatch(
            f"{t.op} expects {len(decl.telescope)} arguments, got {len(t.args)}"
        )
    for j, arg in enumerate(t.args):
        actual = _infer(th, ctx, arg, eq)
        expected = subst_type(decl.telescope[j], t.args[:j])
        verdict = eq(th, ctx, expected, actual)
        if verdict is not Verdict.YES:
            raise TypeMismatch(
                f"argument {j} of {t.op}: expected {expected}, got {actual} (equality: {verdict})",
                expected,
                actual,
                verdict,
            )
    return subst_type(decl.result, t.args)


def infer_type(th: Theory, ctx: Context, t: Term) -> TypeExpr:
    """Type of ``t``: the variable's entry or the instantiated result type."""
    return _infer(th, ctx, t, _judged_equal)


def check_term(th: Theory, ctx: Context, t: Term, expected: TypeExpr) -> None:
    """Raise unless ``t`` has a type judged equal (Yes) to ``expected``."""
    actual = infer_type(th, ctx, t)
    verdict = types_equal(th, ctx, expected, actual)
    if verdict is Verdict.UNKNOWN:
        raise EqualityUndecided(f"cannot decide {actual} == {expected}")
    if verdict is Verdict.NO:
        raise TypeMismatch(f"expected {expected}, got {actual}", expected, actual, verdict)


def wf_type(th: Theory, ctx: Context, a: TypeExpr) -> None:
    decl = th.sort(a.sort)
    if len(a.args) != len(decl.telescope):
        raise ArityMismatch(f"sort {a.sort} expects {len(decl.telescope)} arguments, got {len(a.args)}")
    for j, arg in enumerate(a.args):
        actual = infer_type(th, ctx, arg)
        expected = subst_type(decl.telescope[j], a.args[:j])
        verdict = types_equal(th, ctx, expected, actual)
        if verdict is not Verdict.YES:
            raise TypeMismatch(
                f"argument {j} of {a.sort}: expected {expected}, got {actual} (equality: {verdict})",
                expected,
                actual,
                verdict,
            )


def wf_context(th: Theory, ctx: Context) -> None:
    """Raise unless every entry is a well-formed type over its prefix."""
    for i, a in enumerate(ctx.entries):
        try:
            wf_type(th, ctx.prefix(i), a)
        except GatError as err:
            raise err.within(f"context entry {i} ({ctx.name(i)})")


# ---------------------------------------------------------------------------
# Elaboration


def _check_telescope(th: Theory, decl_name: str, tele: Context) -> None:
    for i, a in enumerate(tele.entries):
        try:
            wf_type(th, tele.prefix(i), a)
        except GatError as err:
            raise IllFormedTelescope(decl_name, i, err).at(err.span) from err


def _decl_name(d: Decl, index: int) -> str:
    if isinstance(d, (SortDecl, OpDecl)):
        return d.name
    if isinstance(d, Equation):
        return d.name or f"equation #{index}"
    return f"pragma {d.kind}"


def _check_against(th: Theory, ctx: Context, t: Term, at: TypeExpr, side: str) -> None:
    actual = infer_type(th, ctx, t)
    verdict = types_equal(th, ctx, at, actual)
    if verdict is Verdict.UNKNOWN:
        raise EqualityUndecided(f"{side}: cannot decide {actual} == {at}")
    if verdict is Verdict.NO:
        raise TypeMismatch(f"{side}: expected {at}, got {actual}", at, actual, verdict)


def _check_equality_pragma(th: Theory, sort: str, eq_sort: str) -> None:
    base = th.sort(sort)
    eq = th.sort(eq_sort)
    k = len(base.telescope)
    shape = base.telescope.entries + (
        TypeExpr(sort, tuple(Var(i) for i in range(k))),
        TypeExpr(sort, tuple(Var(i) for i in range(k))),
    )
    if eq.telescope.entries != shape:
        raise TypeMismatch(
            f"{eq_sort} must be indexed by the telescope of {sort} followed by two elements of {sort}"
        )


def check_decl(th: Theory, d: Decl, index: int = 0) -> None:
    """Check one declaration against the theory of everything declared before it."""
    name = _decl_name(d, index)
    try:
        if isinstance(d, SortDecl):
            if th.has_sort(d.name) or th.has_op(d.name):
                raise UnknownSymbol(f"{d.name!r} is already declared")
            _check_telescope(th, d.name, d.telescope)
        elif isinstance(d, OpDecl):
            if th.has_sort(d.name) or th.has_op(d.name):
                raise UnknownSymbol(f"{d.name!r} is already declared")
            _check_telescope(th, d.name, d.telescope)
            wf_type(th, d.telescope, d.result)
        elif isinstance(d, Equation):
            _check_telescope(th, name, d.telescope)
            body = d.body
            if isinstance(body, TermEq):
                wf_type(th, d.telescope, body.at)
                _check_against(th, d.telescope, body.lhs, body.at, "left side")
                _check_against(th, d.telescope, body.rhs, body.at, "right side")
            else:
                wf_type(th, d.telescope, body.lhs)
                wf_type(th, d.telescope, body.rhs)
        elif isinstance(d, Pragma):
            if d.kind == "equality":
                if len(d.args) != 2:
                    raise ArityMismatch("pragma equality takes a sort and its Eq sort")
                _check_equality_pragma(th, d.args[0], d.args[1])
            elif d.kind != "confluent":
                raise UnknownSymbol(f"unknown pragma {d.kind!r}")
    except IllFormedTelescope:
        raise
    except GatError as err:
        raise err.within(name)


def elaborate_theory(decls: Iterable[Decl], name: str = "") -> Theory:
    """Check declarations in order; each may use only the ones before it."""
    decls = tuple(decls)
    for i, d in enumerate(decls):
        check_decl(Theory(name, decls[:i]), d, i)
    return Theory(name, decls)
