"""Enumeration of small finite categories up to isomorphism.

A category is generated from a matrix of hom-set sizes; the composition
table is filled by backtracking with an associativity check after every
choice. Isomorphic copies are removed through a canonical code taken over
all object permutations and all relabelings of two-element hom-sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .catinst import FinCategory, make_category

OBJECT_NAMES = "abc"


@dataclass(frozen=True)
class CorpusBounds:
    """Up to ``max_objects`` objects and ``max_hom`` arrows per hom-set.

    Non-identity endomorphisms are allowed only in categories with at most
    ``endo_objects`` objects.
    """

    max_objects: int = 3
    max_hom: int = 2
    endo_objects: int = 2


DEFAULT_BOUNDS = CorpusBounds()


def _size_matrices(n: int, bounds: CorpusBounds) -> Iterator[dict]:
    objs = range(n)
    pairs = [(i, j) for i in objs for j in objs]
    endo_max = bounds.max_hom if n <= bounds.endo_objects else 1
    perms = list(itertools.permutations(objs))
    for sizes in itertools.product(range(bounds.max_hom + 1), repeat=len(pairs)):
        h = dict(zip(pairs, sizes))
        if any(not 1 <= h[(i, i)] <= endo_max for i in objs):
            continue
        if any(h[(i, j)] and h[(j, k)] and not h[(i, k)] for i in objs for j in objs for k in objs):
            continue
        key = tuple(h[p] for p in pairs)
        if any(tuple(h[(s[i], s[j])] for i, j in pairs) < key for s in perms):
            continue
        yield h


def _tables(n: int, h: dict) -> Iterator[dict]:
    """Associative composition tables for hom sizes ``h``; arrow ``(i, j, 0)`` on the diagonal is the identity."""
    objs = range(n)
    arrows = [(i, j, a) for i in objs for j in objs for a in range(h[(i, j)])]

    def is_id(x):
        return x[0] == x[1] and x[2] == 0

    slots = [(x, y) for x in arrows for y in arrows if x[1] == y[0] and not is_id(x) and not is_id(y)]
    triples = [(x, y, z) for x in arrows for y in arrows if x[1] == y[0] for z in arrows if y[1] == z[0]]
    comp: dict = {}

    def get(x, y):
        if is_id(x):
            return y
        if is_id(y):
            return x
        return comp.get((x, y))

    def consistent() -> bool:
        for x, y, z in triples:
            xy, yz = get(x, y), get(y, z)
            if xy is None or yz is None:
                continue
            left, right = get(xy, z), get(x, yz)
            if left is not None and right is not None and left != right:
                return False
        return True

    def rec(t: int) -> Iterator[dict]:
        if t == len(slots):
            yield dict(comp)
            return
        x, y = slots[t]
        for v in range(h[(x[0], y[1])]):
            comp[slots[t]] = (x[0], y[1], v)
            if consistent():
                yield from rec(t + 1)
        del comp[slots[t]]

    yield from rec(0)


def _code(n: int, h: dict, comp: dict, perm: tuple, swaps: dict) -> tuple:
    def move(x):
        i, j, a = x
        if swaps.get((i, j)):
            a = 1 - a
        return (perm[i], perm[j], a)

    pairs = [(i, j) for i in range(n) for j in range(n)]
    inv = {perm[i]: i for i in range(n)}
    sizes = tuple(h[(inv[i], inv[j])] for i, j in pairs)
    table = tuple(sorted((move(x), move(y), move(v)) for (x, y), v in comp.items()))
    return sizes, table


def canonical_code(n: int, h: dict, comp: dict) -> tuple:
    """Least code over object permutations and swaps of two-element off-diagonal hom-sets."""
    swappable = [(i, j) for i in range(n) for j in range(n) if i != j and h[(i, j)] == 2]
    best = None
    for perm in itertools.permutations(range(n)):
        for bits in itertools.product((0, 1), repeat=len(swappable)):
            c = _code(n, h, comp, perm, dict(zip(swappable, bits)))
            if best is None or c < best:
                best = c
    return best


def _build(n: int, code: tuple, name: str) -> FinCategory:
    sizes, table = code
    objs = OBJECT_NAMES[:n]
    pairs = [(i, j) for i in range(n) for j in range(n)]
    h = dict(zip(pairs, sizes))

    def label(x):
        i, j, a = x
        if i == j:
            return f"id_{objs[i]}" if a == 0 else f"e_{objs[i]}"
        return f"{'fg'[a]}_{objs[i]}{objs[j]}"

    arrows = [(label((i, j, a)), objs[i], objs[j]) for (i, j) in pairs for a in range(h[(i, j)]) if not (i == j and a == 0)]
    comps = {(label(x), label(y)): label(v) for x, y, v in table}
    return make_category(objs, arrows, comps, name=name)


def enumerate_categories(bounds: CorpusBounds = DEFAULT_BOUNDS) -> list:
    """One representative per isomorphism class, ordered by object count then code."""
    out = []
    for n in range(bounds.max_objects + 1):
        codes = set()
        for h in _size_matrices(n, bounds):
            for comp in _tables(n, h):
                codes.add(canonical_code(n, h, comp))
        for k, code in enumerate(sorted(codes)):
            out.append(_build(n, code, f"C{n}_{k}"))
    return out


CORPUS_FILE = "fincats.gcat"

_HEADER = """\
# Every category with at most three objects and at most two arrows per hom-set, one per
# isomorphism class; non-identity endomorphisms only with at most two objects.
# Regenerate with: gatlab corpus

"""


def corpus_text(bounds: CorpusBounds = DEFAULT_BOUNDS) -> str:
    from .loader import categories_text

    return _HEADER + categories_text(enumerate_categories(bounds))
