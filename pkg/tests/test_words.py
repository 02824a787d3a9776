import pytest
from hypothesis import given, settings, strategies as st

from pepcut.words import (Alphabet, AlphabetMismatch, PreconditionError, is_subword,
                          leftmost_embedding, longest_prefix_host, longest_suffix_carrier,
                          mirror, rightmost_embedding, shortest_prefix_overflow,
                          shortest_suffix_host)

import oracles

G = Alphabet(["a", "b", "c"])
w = G.word


def words(max_len=8, k=3):
    return st.lists(st.integers(0, k - 1), max_size=max_len).map(tuple)


def test_alphabet_tokens_and_display():
    A = Alphabet(["a", "~a''", "†"])
    x = A.word("~a'' † a")
    assert tuple(x) == (1, 2, 0)
    assert A.show(x) == "~a'' † a"
    with pytest.raises(KeyError):
        A.word("q")
    with pytest.raises(ValueError):
        Alphabet(["a", "a"])


def test_is_subword_examples():
    assert is_subword(w(""), w("a b c"))
    assert not is_subword(w("a a"), w("a"))
    B = Alphabet(["a", "b", "c", "~a", "~b", "~c"])
    # u(σ_1) against v(ρ_0) in the worked reduction example
    assert is_subword(B.word("a ~b b ~c c ~c"),
                      B.word("a ~a ~b ~c b ~a ~b ~c c ~a ~b ~c"))


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        is_subword(w("a"), Alphabet(["a"]).word("a"))


def test_leftmost_embedding_examples():
    assert leftmost_embedding(w("a b"), w("a a b")) == [0, 2]
    assert leftmost_embedding(w("a b c"), w("a b c")) == [0, 1, 2]
    assert leftmost_embedding(w("b"), w("a a")) is None
    assert rightmost_embedding(w("a b"), w("a a b")) == [1, 2]


@pytest.mark.parametrize("y,z,t,out", [("a b", "b", "a b b", "a b"), ("a b", "b", "b b", "b"),
                                       ("", "b", "b", "")])
def test_longest_suffix_carrier(y, z, t, out):
    assert longest_suffix_carrier(w(y), w(z), w(t)) == tuple(w(out))


@pytest.mark.parametrize("z,t,out", [("a b", "b", "a"), ("a b", "a b", ""), ("a b", "", "a b")])
def test_shortest_prefix_overflow(z, t, out):
    assert shortest_prefix_overflow(w(z), w(t)) == tuple(w(out))


@pytest.mark.parametrize("z,t,out", [("b", "a b b", "a b"), ("", "a b", "a b"), ("a b", "a b", "")])
def test_longest_prefix_host(z, t, out):
    assert longest_prefix_host(w(z), w(t)) == tuple(w(out))


@pytest.mark.parametrize("z,s,t,out", [("a", "b a", "", "a"), ("a", "b a", "a", ""),
                                       ("b a", "b a", "a", "b a")])
def test_shortest_suffix_host(z, s, t, out):
    assert shortest_suffix_host(w(z), w(s), w(t)) == tuple(w(out))


def test_residual_preconditions():
    with pytest.raises(PreconditionError):
        longest_suffix_carrier(w("a"), w("b"), w("a"))
    with pytest.raises(PreconditionError):
        longest_prefix_host(w("b"), w("a"))
    with pytest.raises(PreconditionError):
        shortest_suffix_host(w("c"), w("a"), w("b"))


@settings(max_examples=300, deadline=None)
@given(words(), words())
def test_embedding_matches_brute(s, t):
    assert is_subword(s, t) == oracles.embeds(s, t)
    assert leftmost_embedding(s, t) == oracles.leftmost_positions(s, t)
    assert is_subword(s, t) == is_subword(mirror(s), mirror(t))


@settings(max_examples=200, deadline=None)
@given(words(6), words(6), words(6))
def test_partial_order(x, y, z):
    assert is_subword(x, x)
    if is_subword(x, y) and is_subword(y, z):
        assert is_subword(x, z)
    if is_subword(x, y) and is_subword(y, x):
        assert x == y


@settings(max_examples=300, deadline=None)
@given(words(), words(), words())
def test_residuals_match_scan(y, z, t):
    assert shortest_prefix_overflow(z, t) == oracles.res_shortest_prefix_overflow(z, t)
    if oracles.embeds_rec(z, t):
        assert longest_suffix_carrier(y, z, t) == oracles.res_longest_suffix_carrier(y, z, t)
        assert longest_prefix_host(z, t) == oracles.res_longest_prefix_host(z, t)
    if oracles.embeds_rec(z, y + t):
        assert shortest_suffix_host(z, y, t) == oracles.res_shortest_suffix_host(z, y, t)
