import random

import pytest
from hypothesis import given, settings

from strategies import permutation_oracle, random_word, reduce_all_orders, words
from virtbraid.words import (
    RELATIONS,
    BraidWord,
    Flavor,
    RelationRewrite,
    RewriteError,
    WordError,
    applicable_rewrites,
    apply_rewrite,
    concat,
    embed,
    format_word,
    free_reduce,
    insertion_rewrites,
    inverse_rewrite,
    invert,
    parse_word,
    permutation,
    reduction_rewrites,
    writhe,
)

W = BraidWord.of


def test_parse_examples():
    w = parse_word("degree 2; s1 S1")
    assert w.degree == 2 and w.tokens == "s1 S1"
    b1 = parse_word("degree 3; t1 S1 t2 t1 s1 t2")
    assert len(b1) == 6 and format_word(b1) == "degree 3; t1 S1 t2 t1 s1 t2"
    with pytest.raises(WordError):
        parse_word("degree 2; s5")


def test_parse_errors():
    for bad in ("s1 s2", "degree 0;", "degree 2; x1", "degree 2; s0", "degree 3 s1"):
        with pytest.raises(WordError):
            parse_word(bad)


def test_parse_ignores_comments_and_spacing():
    w = parse_word("# a comment\ndegree 3;   s1\n  t2  ")
    assert format_word(w) == "degree 3; s1 t2"
    assert format_word(parse_word("degree 4;")) == "degree 4;"


@given(words())
def test_emit_parse_identity(w):
    assert parse_word(format_word(w)) == w


def test_concat_and_invert():
    assert concat(W(2, "s1"), W(2, "t1")) == W(2, "s1 t1")
    assert invert(W(2, "t1 S1")) == W(2, "s1 t1")
    assert invert(W(3, "")) == W(3, "")
    with pytest.raises(WordError):
        concat(W(2, "s1"), W(3, "s1"))


def test_free_reduce_examples():
    assert free_reduce(W(2, "s1 S1")) == W(2, "")
    assert free_reduce(W(3, "t2 t2 s1")) == W(3, "s1")
    assert free_reduce(W(3, "s1 t2 t2 S1")) == W(3, "")


@settings(max_examples=200)
@given(words(max_degree=3, max_length=6))
def test_free_reduce_matches_all_orders(w):
    finals = reduce_all_orders(w.letters)
    assert finals == {free_reduce(w).letters}


@given(words())
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r and r.degree == w.degree


@given(words())
def test_reduction_rewrites_replay(w):
    cur = w
    for r in reduction_rewrites(w):
        cur = apply_rewrite(cur, r)
    assert cur == free_reduce(w)


def test_permutation_examples():
    assert permutation(W(2, "t1 S1")) == (1, 2)
    assert permutation(W(3, "")) == (1, 2, 3)
    # strand from top 1 ends at bottom 3, so 1 -> 2 -> 3 -> 1 as a cycle
    assert permutation(W(3, "s1 s2")) == (2, 3, 1)


@given(words())
def test_permutation_matches_oracle(w):
    assert permutation(w) == permutation_oracle(w)


def test_writhe_examples():
    assert writhe(W(2, "s1 s1 s1")) == 3
    assert writhe(W(2, "t1 S1")) == -1
    assert writhe(W(3, "t1 S1 S2 t1 s1 s2")) == 0


def test_embed_examples():
    assert embed(W(2, "s1"), 1, 0) == W(3, "s2")
    assert embed(W(2, "t1"), 0, 1) == W(3, "t1")
    with pytest.raises(WordError):
        embed(W(2, "s1"), -1, 0)


@given(words(), words())
def test_embed_is_homomorphism(a, b):
    assert embed(embed(a, 1, 0), 0, 1) == embed(a, 1, 1)
    if a.degree == b.degree:
        assert embed(concat(a, b), 2, 1) == concat(embed(a, 2, 1), embed(b, 2, 1))
    assert embed(invert(a), 1, 2) == invert(embed(a, 1, 2))
    p = permutation(a)
    assert permutation(embed(a, 1, 1)) == (1,) + tuple(x + 1 for x in p) + (a.degree + 2,)


def test_applicable_rewrites_examples():
    yb = [r for r in applicable_rewrites(W(3, "s1 s2 s1")) if r.relation == "braid-YB"]
    assert any(r.position == 0 and r.direction == "ltr" for r in yb)
    welded_word = W(3, "t1 s2 s1")
    assert any(r.relation == "welded" for r in applicable_rewrites(welded_word, Flavor.WB))
    assert not any(r.relation == "welded" for r in applicable_rewrites(welded_word, Flavor.VB))
    assert all(r.is_insertion for r in applicable_rewrites(W(3, "")))
    assert applicable_rewrites(W(3, ""))


def test_apply_rewrite_examples():
    w = W(3, "s1 s2 s1")
    r = RelationRewrite("braid-YB", 0, "ltr", 1, 2, 0)
    assert apply_rewrite(w, r) == W(3, "s2 s1 s2")
    detour = RelationRewrite("mixed-detour", 0, "ltr", 1, None, 0)
    assert apply_rewrite(W(3, "s1 t2 t1"), detour) == W(3, "t2 t1 s2")
    with pytest.raises(RewriteError):
        apply_rewrite(W(3, "s2 s1 s1"), r)


def test_flavor_gate_on_apply():
    r = RelationRewrite("welded", 0, "ltr", 1)
    assert apply_rewrite(W(3, "t1 s2 s1"), r, Flavor.WB) == W(3, "s2 s1 t2")
    with pytest.raises(RewriteError):
        apply_rewrite(W(3, "t1 s2 s1"), r, Flavor.VB)
    star = RelationRewrite("welded-star", 0, "ltr", 1)
    assert apply_rewrite(W(3, "t1 S2 S1"), star, Flavor.WB_STAR) == W(3, "S2 S1 t2")
    with pytest.raises(RewriteError):
        apply_rewrite(W(3, "t1 S2 S1"), star, Flavor.WB)


def test_rewrite_text_round_trip():
    for w in (W(4, "s1 s2 s1 t3 s1"), W(3, "t1 s2 s1")):
        for r in applicable_rewrites(w, Flavor.WB):
            assert RelationRewrite.parse(str(r)) == r


def test_every_relation_family_listed():
    assert set(RELATIONS) == {
        "trivial", "braid-commute", "braid-YB", "tau-involution", "tau-commute", "tau-YB",
        "mixed-commute", "mixed-detour", "welded", "welded-star",
    }


@settings(max_examples=150)
@given(words(max_length=8))
def test_rewrites_preserve_permutation_and_writhe(w):
    for flavor in (Flavor.VB, Flavor.WB, Flavor.WB_STAR):
        for r in applicable_rewrites(w, flavor):
            out = apply_rewrite(w, r, flavor)
            assert out.degree == w.degree
            assert permutation(out) == permutation(w)
            assert writhe(out) == writhe(w)
            assert apply_rewrite(out, inverse_rewrite(r), flavor) == w


def test_listing_is_sorted_and_deterministic():
    rng = random.Random(5)
    for _ in range(30):
        w = random_word(rng, 4, 8)
        rs = applicable_rewrites(w, Flavor.WB)
        assert rs == applicable_rewrites(w, Flavor.WB)
        assert [r.position for r in rs] == sorted(r.position for r in rs)


def test_insertions_everywhere():
    w = W(3, "s1 t2")
    positions = {r.position for r in insertion_rewrites(w, Flavor.VB)}
    assert positions == {0, 1, 2}
