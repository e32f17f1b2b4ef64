"""Small-model checks for the truncated chain-complex theory."""

import itertools

from gatlab.builtin import builtin_theory
from gatlab.modelsearch import models_up_to
from gatlab.semantics import check_model, make_model

TH = builtin_theory("chain_f2_3")


def _trivial_above(carriers: dict, tables: dict) -> None:
    """Degrees 2 and 3 with a single zero chain."""
    for k in (2, 3):
        carriers[f"Z{k}"] = {(): ("0",)}
        carriers[f"C{k}"] = {("0",): ("0",)}
        tables[f"zero{k}"] = {(): "0"}
        tables[f"add{k}"] = {("0", "0", "0", "0"): "0"}


def test_only_the_zero_complex_fits_in_one_element():
    (M,) = models_up_to(TH, 1)
    assert all(fiber == ("0",) for fibers in M.carriers.values() for fiber in fibers.values())


def test_a_one_chain_with_nonzero_boundary():
    # Z0 = F2; C1 has the cycle 0 over 0 and a chain c with boundary 1.
    carriers = {"Z0": {(): ("0", "1")}, "Z1": {(): ("0",)}, "C1": {("0",): ("0",), ("1",): ("c",)}}
    xor = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"}
    over = {"0": "0", "1": "c"}
    add1 = {(x, y, over[x], over[y]): over[xor[(x, y)]] for x, y in itertools.product("01", repeat=2)}
    tables = {"zero0": {(): "0"}, "add0": xor, "zero1": {(): "0"}, "add1": add1}
    _trivial_above(carriers, tables)
    M = make_model(TH, carriers, tables, "boundary")
    assert check_model(TH, M).ok

    tables["add1"] = {**add1, ("1", "1", "c", "c"): "c"}
    bad = make_model(TH, carriers, tables, "bad")
    assert not check_model(TH, bad).ok
