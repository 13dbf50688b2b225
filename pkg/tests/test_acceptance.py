"""Acceptance suite: one test (or a few) per criterion, tolerances pinned.

All polynomial comparisons are exact.  Runtime budgets are asserted with
wall-clock timers and are generous relative to measured runs.
"""

import random
import time
from pathlib import Path

import pytest

from strategies import random_gauss, random_word
from virtbraid.braiding import braid_from_gauss
from virtbraid.gauss import canonical_code, emit_gauss, gauss_of_closure, parse_gauss, same_gauss_data
from virtbraid.invariant import q_invariant, q_of_gauss
from virtbraid.laurent import parse_poly
from virtbraid.moves import (
    STAB_TYPES,
    Mode,
    SearchLimits,
    apply_step,
    conjugate,
    destabilize_right,
    equiv_search,
    exchange,
    replay,
    stabilize_left,
    stabilize_right,
    verify_witness,
    welded_exchange_witness,
)
from virtbraid.words import (
    BraidWord,
    Flavor,
    Generator,
    applicable_rewrites,
    apply_rewrite,
    parse_word,
    permutation,
    writhe,
)

W = BraidWord.of
REF3 = (Path(__file__).parent / "data" / "three_crossing.gauss").read_text()
REF3_CODE = "loops 0 | (1.2+ 2.2+) | (1.1+ 3.1- 2.1+ 3.2-)"

B1 = parse_word("degree 3; t1 S1 t2 t1 s1 t2")
B2 = parse_word("degree 3; t1 S1 S2 t1 s1 s2")
B3 = parse_word("degree 3; S2 t1 S2 t1")
B4 = parse_word("degree 3; S2 S1 S2 s1")
L0 = parse_word("degree 2; t1 S1")
LPOS = parse_word("degree 3; t2 S2 s1")
LNEG = parse_word("degree 3; t2 S2 S1")

GOLDEN = [
    (B1, "0"),
    (B2, "q^-3 - q^-1 - q + q^3"),
    (B3, "q^-7 - q^-5 - q^-3 + 2q^-1 + q"),
    (B4, "q^-1 + q"),
    (L0, "1 - q^-2"),
    (LPOS, "-1 + q^2"),
    (LNEG, "1 + q^-6 - 2q^-4"),
]

# runtime budgets in seconds
BUDGET_AC1 = 1.0
BUDGET_AC2 = 30.0
BUDGET_AC4 = 60.0
SEARCH_LIMITS = SearchLimits(max_degree=4, max_length=10, max_depth=8)


@pytest.mark.criterion(1, "golden Q_{2,0} values, exact, under 1 s")
def test_ac1_golden_values():
    start = time.perf_counter()
    got = [q_invariant(w, 2, 0) for w, _ in GOLDEN]
    elapsed = time.perf_counter() - start
    for (w, expected), value in zip(GOLDEN, got):
        assert value == parse_poly(expected), (w, value)
    assert elapsed < BUDGET_AC1, elapsed


def _random_move(w: BraidWord, rng: random.Random) -> tuple[str, BraidWord]:
    kind = rng.choice(("VM0", "VM1", "VM2"))
    if kind == "VM0":
        rs = applicable_rewrites(w, Flavor.VB)
        return kind, apply_rewrite(w, rng.choice(rs))
    if kind == "VM1":
        g = BraidWord(w.degree, (Generator(rng.choice("sSt"), rng.randint(1, w.degree - 1)),))
        return kind, conjugate(w, g)
    return kind, stabilize_right(w, rng.choice(STAB_TYPES))


@pytest.mark.criterion(2, "Q_{2,0} unchanged over 200 random VM0/VM1/VM2 moves, under 30 s")
def test_ac2_invariance_suite():
    rng = random.Random(20260101)
    start = time.perf_counter()
    kinds = set()
    for _ in range(200):
        w = random_word(rng, max_degree=4, max_length=10)
        kind, out = _random_move(w, rng)
        kinds.add(kind)
        assert q_invariant(out, 2, 0) == q_invariant(w, 2, 0), (kind, w, out)
    assert kinds == {"VM0", "VM1", "VM2"}
    assert time.perf_counter() - start < BUDGET_AC2


@pytest.mark.criterion(3, "separation: exchange and left-stabilization pairs differ; strict search inconclusive")
def test_ac3_q_separates():
    assert q_invariant(B1) != q_invariant(B2)
    assert q_invariant(B3) != q_invariant(B4)
    assert q_invariant(LPOS) != q_invariant(L0)
    assert q_invariant(LNEG) != q_invariant(L0)
    # the pairs really are one exchange or left stabilization apart
    assert exchange(W(2, "t1 S1"), W(2, "t1 s1"), "right", "forward") == (B2, B1)
    assert stabilize_left(L0, "positive") == LPOS and stabilize_left(L0, "negative") == LNEG


@pytest.mark.criterion(3, "separation: exchange and left-stabilization pairs differ; strict search inconclusive")
@pytest.mark.parametrize("a,b", [(B1, B2), (B3, B4), (L0, LPOS), (L0, LNEG)], ids=["b1-b2", "b3-b4", "pos", "neg"])
def test_ac3_strict_search_inconclusive(a, b):
    assert SEARCH_LIMITS.max_depth == 8
    assert equiv_search(a, b, Mode.VB_STRICT, SEARCH_LIMITS) is None


@pytest.mark.criterion(4, "braiding round trip keeps Gauss data and Q_{2,0} (100 words, 50 Gauss inputs)")
def test_ac4_braiding_round_trip():
    rng = random.Random(4044)
    start = time.perf_counter()
    for _ in range(100):
        b = random_word(rng, max_degree=4, max_length=10)
        g = gauss_of_closure(b)
        w = braid_from_gauss(g)
        assert same_gauss_data(gauss_of_closure(w), g)
        assert q_invariant(w) == q_invariant(b)
    for _ in range(50):
        g = random_gauss(rng, max_crossings=5)
        w = braid_from_gauss(g)
        assert same_gauss_data(gauss_of_closure(w), g)
        assert q_invariant(w) == q_of_gauss(g)
    assert time.perf_counter() - start < BUDGET_AC4


@pytest.mark.criterion(5, "three-crossing reference data round-trips through text and braiding")
def test_ac5_reference_diagram():
    g = parse_gauss(REF3)
    assert sorted(g.crossings.items()) == [("v1", 1), ("v2", 1), ("v3", -1)]
    assert g.mu == 2 and len(g.arcs) == 6
    assert parse_gauss(emit_gauss(g)) == g
    assert canonical_code(g) == REF3_CODE
    assert canonical_code(g.relabel({"v1": "v3", "v2": "v1", "v3": "v2"})) == REF3_CODE
    w = braid_from_gauss(g)
    back = gauss_of_closure(w)
    assert same_gauss_data(back, g) and canonical_code(back) == REF3_CODE
    assert braid_from_gauss(back) == braid_from_gauss(parse_gauss(emit_gauss(back)))


@pytest.mark.criterion(6, "welded exchange witness replays step by step under WB")
def test_ac6_welded_witness():
    wit = welded_exchange_witness(W(2, "t1 S1"), W(2, "t1 s1"))
    assert (wit.start, wit.end) == (B2, B1)
    word = wit.start
    for step in wit.steps:
        word = apply_step(word, step, Mode.WB)
    assert word == wit.end
    assert verify_witness(wit, Mode.WB)
    assert not replay(wit, Mode.VB).ok  # the welded relation is essential


@pytest.mark.criterion(7, "rewrites keep permutation and writhe; stabilizations invert cleanly")
def test_ac7_structural_invariants():
    rng = random.Random(777)
    cases = 0
    while cases < 500:
        w = random_word(rng, max_degree=4, max_length=8)
        flavor = rng.choice(list(Flavor))
        rs = applicable_rewrites(w, flavor)
        r = rng.choice(rs)
        out = apply_rewrite(w, r, flavor)
        assert permutation(out) == permutation(w)
        assert writhe(out) == writhe(w)
        cases += 1
    for _ in range(100):
        b = random_word(rng)
        assert same_gauss_data(gauss_of_closure(stabilize_right(b, "virtual")), gauss_of_closure(b))
        for st in STAB_TYPES:
            assert destabilize_right(stabilize_right(b, st), st) == b
