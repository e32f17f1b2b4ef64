"""Entailment proofs: trees of rule instances checked node by node.

Rule names and their schemas (``Φ ⊢_Γ Ψ`` is a node in context Γ):

========================  =========================================================
refl                      Φ ⊢ Φ
trans                     Φ ⊢ Χ and Χ ⊢ Ψ give Φ ⊢ Ψ
top / bot                 Φ ⊢ ⊤ and ⊥ ⊢ Φ
noncontra / lem           Φ ∧ ¬Φ ⊢ ⊥ and ⊤ ⊢ Φ ∨ ¬Φ
or-elim / or-intro        ⋁Φᵢ ⊢ Ψ iff every Φᵢ ⊢ Ψ (intro reads it backwards at ``:index i``)
and-intro / and-elim      Ψ ⊢ ⋀Φᵢ iff every Ψ ⊢ Φᵢ (elim reads it backwards at ``:index i``)
exists-left / -unleft     ∃ext.Ψ ⊢_Γ Φ iff Ψ ⊢_Γ.ext p*Φ
forall-right / -unright   Φ ⊢_Γ ∀ext.Ψ iff p*Φ ⊢_Γ.ext Ψ
========================  =========================================================

The backwards quantifier rules live in the extended context and name the
length of the base context with ``:base n``; ``p`` is the display map that
forgets everything past level n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .dsl.ast import Atom, SList
from .dsl.elab import equality_formula
from .dsl.parser import parse_sexprs
from .errors import ContextMismatch, GatError, ParseError, RuleMismatch
from .formulas import BOT, TOP, And, Exists, Forall, Not, Or, formula_text, implies, weaken, wf_formula
from .kernel import App, Context, Theory, TypeExpr, Var

RULE_GROUPS = {
    "refl": "order",
    "trans": "order",
    "top": "bounds",
    "bot": "bounds",
    "noncontra": "negation",
    "lem": "negation",
    "or-elim": "lattice",
    "or-intro": "lattice",
    "and-intro": "lattice",
    "and-elim": "lattice",
    "exists-left": "quantifier",
    "exists-unleft": "quantifier",
    "forall-right": "quantifier",
    "forall-unright": "quantifier",
}


@dataclass(frozen=True)
class ProofNode:
    rule: str
    ctx: Context
    lhs: object
    rhs: object
    premises: tuple = ()
    index: Optional[int] = None
    base: Optional[int] = None
    span: object = field(default=None, compare=False, repr=False)

    def rules_used(self) -> set:
        out = {self.rule}
        for p in self.premises:
            out |= p.rules_used()
        return out


# ---------------------------------------------------------------------------
# Checking


def _premise_count(node: ProofNode, path: tuple, n: int) -> None:
    if len(node.premises) != n:
        raise RuleMismatch(node.rule, path, f"expects {n} premise(s), got {len(node.premises)}")


def _expect_ctx(node: ProofNode, i: int, ctx: Context, path: tuple) -> None:
    got = node.premises[i].ctx
    if got != ctx:
        raise ContextMismatch(path + (i,), f"premise lives in {got} but rule {node.rule} needs {ctx}", node.rule)


def _same(node: ProofNode, path: tuple, what: str, got, want, where: Optional[Context] = None) -> None:
    if got != want:
        names = (where or node.ctx).all_names()
        raise RuleMismatch(
            node.rule, path, f"{what} is {formula_text(got, names)} but the rule needs {formula_text(want, names)}"
        )


def _split_display(node: ProofNode, path: tuple) -> tuple:
    """(base context, extension) for the backwards quantifier rules."""
    n = node.base
    if n is None or not 0 <= n < len(node.ctx):
        raise RuleMismatch(node.rule, path, f":base must name a proper prefix of the context, got {n}")
    return node.ctx.prefix(n), tuple(node.ctx.entries[n:])


def check_node(th: Theory, node: ProofNode, path: tuple = ()) -> None:
    """Raise RuleMismatch or ContextMismatch unless the tree is a derivation."""
    rule = node.rule
    if rule not in RULE_GROUPS:
        raise RuleMismatch(rule, path, "unknown rule")
    for side, phi in (("left side", node.lhs), ("right side", node.rhs)):
        try:
            wf_formula(th, node.ctx, phi)
        except GatError as err:
            raise RuleMismatch(rule, path, f"{side} is not a formula in {node.ctx}: {err}") from None
    L, R, ctx, prem = node.lhs, node.rhs, node.ctx, node.premises

    if rule == "refl":
        _premise_count(node, path, 0)
        _same(node, path, "right side", R, L)
    elif rule == "trans":
        _premise_count(node, path, 2)
        _expect_ctx(node, 0, ctx, path)
        _expect_ctx(node, 1, ctx, path)
        _same(node, path, "left side of the first premise", prem[0].lhs, L)
        _same(node, path, "right side of the second premise", prem[1].rhs, R)
        _same(node, path, "middle formula of the second premise", prem[1].lhs, prem[0].rhs)
    elif rule == "top":
        _premise_count(node, path, 0)
        _same(node, path, "right side", R, TOP)
    elif rule == "bot":
        _premise_count(node, path, 0)
        _same(node, path, "left side", L, BOT)
    elif rule == "noncontra":
        _premise_count(node, path, 0)
        _same(node, path, "right side", R, BOT)
        if not (isinstance(L, And) and len(L.parts) == 2):
            raise RuleMismatch(rule, path, "left side must be a conjunction of a formula and its negation")
        _same(node, path, "second conjunct", L.parts[1], Not(L.parts[0]))
    elif rule == "lem":
        _premise_count(node, path, 0)
        _same(node, path, "left side", L, TOP)
        if not (isinstance(R, Or) and len(R.parts) == 2):
            raise RuleMismatch(rule, path, "right side must be a disjunction of a formula and its negation")
        _same(node, path, "second disjunct", R.parts[1], Not(R.parts[0]))
    elif rule == "or-elim":
        if not isinstance(L, Or):
            raise RuleMismatch(rule, path, "left side must be a disjunction")
        _premise_count(node, path, len(L.parts))
        for i, part in enumerate(L.parts):
            _expect_ctx(node, i, ctx, path)
            _same(node, path, f"left side of premise {i}", prem[i].lhs, part)
            _same(node, path, f"right side of premise {i}", prem[i].rhs, R)
    elif rule == "and-intro":
        if not isinstance(R, And):
            raise RuleMismatch(rule, path, "right side must be a conjunction")
        _premise_count(node, path, len(R.parts))
        for i, part in enumerate(R.parts):
            _expect_ctx(node, i, ctx, path)
            _same(node, path, f"left side of premise {i}", prem[i].lhs, L)
            _same(node, path, f"right side of premise {i}", prem[i].rhs, part)
    elif rule == "or-intro":
        _premise_count(node, path, 1)
        _expect_ctx(node, 0, ctx, path)
        big = prem[0].lhs
        if not isinstance(big, Or) or node.index is None or not 0 <= node.index < len(big.parts):
            raise RuleMismatch(rule, path, "premise must be a disjunction on the left, selected by :index")
        _same(node, path, "left side", L, big.parts[node.index])
        _same(node, path, "right side", R, prem[0].rhs)
    elif rule == "and-elim":
        _premise_count(node, path, 1)
        _expect_ctx(node, 0, ctx, path)
        big = prem[0].rhs
        if not isinstance(big, And) or node.index is None or not 0 <= node.index < len(big.parts):
            raise RuleMismatch(rule, path, "premise must be a conjunction on the right, selected by :index")
        _same(node, path, "right side", R, big.parts[node.index])
        _same(node, path, "left side", L, prem[0].lhs)
    elif rule in ("exists-left", "forall-right"):
        quant, kind = (L, Exists) if rule == "exists-left" else (R, Forall)
        if not isinstance(quant, kind):
            side = "left" if kind is Exists else "right"
            raise RuleMismatch(rule, path, f"{side} side must be {'an existential' if kind is Exists else 'a universal'}")
        _premise_count(node, path, 1)
        wide = ctx.extend(quant.ext, quant.names)
        _expect_ctx(node, 0, wide, path)
        other = weaken(R if kind is Exists else L, len(ctx), len(wide))
        if kind is Exists:
            _same(node, path, "premise left side", prem[0].lhs, quant.body, wide)
            _same(node, path, "premise right side (the pullback p*Φ)", prem[0].rhs, other, wide)
        else:
            _same(node, path, "premise left side (the pullback p*Φ)", prem[0].lhs, other, wide)
            _same(node, path, "premise right side", prem[0].rhs, quant.body, wide)
    elif rule in ("exists-unleft", "forall-unright"):
        _premise_count(node, path, 1)
        base, ext = _split_display(node, path)
        _expect_ctx(node, 0, base, path)
        p = prem[0]
        if rule == "exists-unleft":
            _same(node, path, "premise left side", p.lhs, Exists(ext, L), base)
            _same(node, path, "right side (the pullback p*Φ)", R, weaken(p.rhs, len(base), len(ctx)))
        else:
            _same(node, path, "premise right side", p.rhs, Forall(ext, R), base)
            _same(node, path, "left side (the pullback p*Φ)", L, weaken(p.lhs, len(base), len(ctx)))
    for i, p in enumerate(prem):
        check_node(th, p, path + (i,))


@dataclass(frozen=True)
class ProofVerdict:
    accepted: bool
    rule: Optional[str] = None
    path: tuple = ()
    error: Optional[str] = None
    tag: Optional[str] = None

    def as_dict(self) -> dict:
        if self.accepted:
            return {"accepted": True}
        return {"accepted": False, "rule": self.rule, "node": list(self.path), "error": self.tag, "detail": self.error}


def check_proof(th: Theory, node: ProofNode) -> ProofVerdict:
    try:
        check_node(th, node)
    except (RuleMismatch, ContextMismatch) as err:
        return ProofVerdict(False, err.rule, err.path, str(err), err.tag)
    return ProofVerdict(True)


# ---------------------------------------------------------------------------
# S-expression syntax


def _atom(x, what: str) -> str:
    if not isinstance(x, Atom):
        raise ParseError(f"expected {what}, got a list", getattr(x, "span", None))
    return x.text


def sexpr_term(th: Theory, names: tuple, x):
    if isinstance(x, Atom):
        for i in range(len(names) - 1, -1, -1):
            if names[i] == x.text:
                return Var(i)
        if th.has_op(x.text):
            return App(x.text, ())
        raise ParseError(f"unknown variable or constant {x.text!r}", x.span)
    if not x.items:
        raise ParseError("empty term", x.span)
    op = _atom(x.items[0], "an operation name")
    if not th.has_op(op):
        raise ParseError(f"unknown operation {op!r}", x.span)
    return App(op, tuple(sexpr_term(th, names, a) for a in x.items[1:]))


def sexpr_type(th: Theory, names: tuple, x) -> TypeExpr:
    if isinstance(x, Atom):
        head, args = x.text, ()
    else:
        head, args = _atom(x.items[0], "a sort name"), x.items[1:]
    if not th.has_sort(head):
        raise ParseError(f"unknown sort {head!r}", x.span)
    return TypeExpr(head, tuple(sexpr_term(th, names, a) for a in args))


def sexpr_tele(th: Theory, ctx: Context, x) -> Context:
    """``((x Ob) (f (Hom x y)))`` extending ``ctx``."""
    if not isinstance(x, SList):
        raise ParseError("expected a list of bindings", x.span)
    out = ctx
    for b in x.items:
        if not isinstance(b, SList) or len(b.items) != 2:
            raise ParseError("a binding is (name type)", b.span)
        name = _atom(b.items[0], "a variable name")
        out = out.extend((sexpr_type(th, out.all_names(), b.items[1]),), (name,))
    return out


_NULLARY = {"true": TOP, "false": BOT}


def sexpr_formula(th: Theory, ctx: Context, x):
    names = ctx.all_names()
    if isinstance(x, Atom):
        if x.text in _NULLARY:
            return _NULLARY[x.text]
        raise ParseError(f"unknown formula {x.text!r}", x.span)
    if not x.items:
        raise ParseError("empty formula", x.span)
    head = _atom(x.items[0], "a connective")
    args = x.items[1:]
    if head == "not" and len(args) == 1:
        return Not(sexpr_formula(th, ctx, args[0]))
    if head == "and":
        return And(tuple(sexpr_formula(th, ctx, a) for a in args))
    if head == "or":
        return Or(tuple(sexpr_formula(th, ctx, a) for a in args))
    if head == "implies" and len(args) == 2:
        return implies(sexpr_formula(th, ctx, args[0]), sexpr_formula(th, ctx, args[1]))
    if head in ("exists", "forall") and len(args) == 2:
        wide = sexpr_tele(th, ctx, args[0])
        ext = tuple(wide.entries[len(ctx):])
        body = sexpr_formula(th, wide, args[1])
        if not ext:
            return body
        return (Exists if head == "exists" else Forall)(ext, body, wide.all_names()[len(ctx):])
    if head == "=" and len(args) == 2:
        s, t = sexpr_term(th, names, args[0]), sexpr_term(th, names, args[1])
        return equality_formula(th, ctx, s, t, x.span)
    raise ParseError(f"malformed formula headed by {head!r}", x.span)


def _keywords(items: tuple) -> tuple[dict, list]:
    opts: dict = {}
    rest = []
    i = 0
    while i < len(items):
        it = items[i]
        if isinstance(it, Atom) and not it.quoted and it.text.startswith(":"):
            if i + 1 >= len(items):
                raise ParseError(f"option {it.text} needs a value", it.span)
            opts[it.text[1:]] = items[i + 1]
            i += 2
        else:
            rest.append(it)
            i += 1
    return opts, rest


def _int(x) -> int:
    text = _atom(x, "a number")
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected a number, got {text!r}", x.span) from None


def _premise_context(rule: str, ctx: Context, lhs, rhs, base: Optional[int]) -> Context:
    """Where a premise lives when the file does not say."""
    if rule == "exists-left" and isinstance(lhs, Exists):
        return ctx.extend(lhs.ext, lhs.names)
    if rule == "forall-right" and isinstance(rhs, Forall):
        return ctx.extend(rhs.ext, rhs.names)
    if rule in ("exists-unleft", "forall-unright") and base is not None and 0 <= base <= len(ctx):
        return ctx.prefix(base)
    return ctx


def sexpr_node(th: Theory, ctx: Context, x) -> ProofNode:
    """``(RULE lhs rhs [:index i] [:base n] [:ctx bindings] premise...)``."""
    if not isinstance(x, SList) or len(x.items) < 3:
        raise ParseError("a proof node is (RULE lhs rhs premise...)", getattr(x, "span", None))
    rule = _atom(x.items[0], "a rule name")
    opts, rest = _keywords(x.items[1:])
    if "ctx" in opts:
        # An explicit context overrides the inferred one; the parent's rule
        # then decides whether it is the right one.
        ctx = sexpr_tele(th, Context(), opts["ctx"])
    lhs = sexpr_formula(th, ctx, rest[0])
    rhs = sexpr_formula(th, ctx, rest[1])
    index = _int(opts["index"]) if "index" in opts else None
    base = _int(opts["base"]) if "base" in opts else None
    below = _premise_context(rule, ctx, lhs, rhs, base)
    premises = tuple(sexpr_node(th, below, p) for p in rest[2:])
    return ProofNode(rule, ctx, lhs, rhs, premises, index, base, x.span)


@dataclass(frozen=True)
class ProofSpec:
    """One ``(proof ...)`` block: its theory, conclusion tree and expected outcome."""

    name: str
    theory: Theory
    theory_ref: str
    node: ProofNode
    expect: str  # "accept" | "reject"
    expect_rule: Optional[str] = None
    bound: Optional[int] = None


def _field(block: SList, key: str):
    for it in block.items[2:]:
        if isinstance(it, SList) and it.items and isinstance(it.items[0], Atom) and it.items[0].text == key:
            return it
    return None


def load_proofs(text: str, path: Optional[str] = None, base: Optional[Path] = None) -> list:
    from .loader import load_theory, resolve

    out = []
    for block in parse_sexprs(text, path):
        if not (isinstance(block, SList) and len(block.items) >= 2 and _atom(block.items[0], "proof") == "proof"):
            raise ParseError("a proof file holds (proof NAME ...) blocks", block.span)
        name = _atom(block.items[1], "a proof name")
        th_field = _field(block, "theory")
        if th_field is None or len(th_field.items) != 2:
            raise ParseError(f"proof {name}: missing (theory \"file.gat\")", block.span)
        ref = _atom(th_field.items[1], "a theory file")
        th = load_theory(resolve(ref, base))
        ctx_field = _field(block, "context")
        ctx = sexpr_tele(th, Context(), SList(ctx_field.items[1:], ctx_field.span)) if ctx_field else Context()
        exp = _field(block, "expect")
        expect = _atom(exp.items[1], "accept or reject") if exp else "accept"
        expect_rule = _atom(exp.items[2], "a rule name") if exp is not None and len(exp.items) > 2 else None
        bound_field = _field(block, "bound")
        bound = _int(bound_field.items[1]) if bound_field else None
        body = [
            it for it in block.items[2:]
            if isinstance(it, SList) and it.items and isinstance(it.items[0], Atom)
            and it.items[0].text not in ("theory", "context", "expect", "bound")
        ]
        if len(body) != 1:
            raise ParseError(f"proof {name}: expected exactly one root node", block.span)
        out.append(ProofSpec(name, th, ref, sexpr_node(th, ctx, body[0]), expect, expect_rule, bound))
    return out


def load_proof_file(path) -> list:
    from .loader import resolve

    p = resolve(str(path))
    return load_proofs(p.read_text(encoding="utf-8"), p.name, p.parent)


def run_spec(spec: ProofSpec) -> ProofVerdict:
    return check_proof(spec.theory, spec.node)


def conclusion(node: ProofNode) -> tuple:
    """(Γ, Φ, Ψ) established by an accepted tree."""
    return node.ctx, node.lhs, node.rhs

