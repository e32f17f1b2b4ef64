"""Theory files for single-sorted first-order signatures with reflected equality.

A relation symbol ``R`` of arity n becomes a dependent sort ``R(x1 .. xn : X)``
whose fibers have at most one element, so a model is a set with a subset of
``X^n`` per relation. Function symbols become operations. Equality on ``X``
is reflected into a sort ``EqX`` in the same way as for arrows in CatEq.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Signature:
    name: str
    relations: tuple = ()  # (name, arity)
    functions: tuple = ()  # (name, arity)
    sort: str = "X"


def _vars(n: int, prefix: str = "x") -> list:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def theory_source(sig: Signature) -> str:
    """Text of the ``.gat`` file for ``sig``."""
    X = sig.sort
    eq = f"Eq{X}"
    refl = f"r{X}"
    lines = [
        f"# Generated from the signature {sig.name}: relations {list(sig.relations)}, "
        f"functions {list(sig.functions)}.",
        f"theory {sig.name} {{",
        f"  sort {X};",
        f"  sort {eq} (x y : {X});",
        f"  op {refl} (x : {X}) : {eq}(x, x);",
        f"  eq reflect_{X} (x y : {X}, a : {eq}(x, y)) : x == y : {X};",
        f"  eq unique_{X} (x y : {X}, a : {eq}(x, y)) : a == {refl}(x) : {eq}(x, y);",
    ]
    for name, arity in sig.functions:
        xs = _vars(arity)
        tele = f" ({' '.join(xs)} : {X})" if xs else ""
        lines.append(f"  op {name}{tele} : {X};")
    for name, arity in sig.relations:
        xs = _vars(arity)
        args = ", ".join(xs)
        tele = f"{' '.join(xs)} : {X}, " if xs else ""
        at = f"{name}({args})" if xs else name
        sort_tele = f" ({' '.join(xs)} : {X})" if xs else ""
        lines.append(f"  sort {name}{sort_tele};")
        lines.append(f"  eq {name}_prop ({tele}p q : {at}) : p == q : {at};")
    lines.append("  pragma confluent;")
    lines.append(f"  pragma equality {X} {eq};")
    lines.append("}")
    return "\n".join(lines) + "\n"


RELATIONAL = Signature("SigEq", relations=(("R", 1), ("E", 2)))
POINTED = Signature("SigEqPointed", relations=(("P", 1),), functions=(("e", 0), ("s", 1)))

SHIPPED = {"sig_eq.gat": RELATIONAL, "sig_eq_pointed.gat": POINTED}
