import random

import pytest

from pepcut import automata
from pepcut.automata import Dfa, Nfa, minimize
from pepcut.regex import RegexError, dfa_to_regex, parse_regex
from pepcut.words import Alphabet, AlphabetMismatch

import oracles

B = Alphabet(["0", "1"])
U = Alphabet(["0"])


def lang(d, n, alphabet=None):
    return {tuple(w) for w in automata.enumerate_words(d, n)}


def random_dfa(rng, alphabet, max_states=4):
    n = rng.randint(1, max_states)
    delta = [[rng.randrange(n) for _ in alphabet] for _ in range(n)]
    acc = [q for q in range(n) if rng.random() < 0.5]
    return Dfa(alphabet, n, 0, acc, delta)


def brute(d, n):
    return {w for w in oracles.words_upto(len(d.alphabet), n)
            if oracles.dfa_accepts(d.delta, d.initial, d.accepting, w)}


def test_regex_examples():
    d = parse_regex("( 0 | 1 ) +", B)
    assert lang(d, 3) == {w for w in oracles.words_upto(2, 3) if w}
    assert lang(parse_regex("eps", U), 4) == {()}
    S = Alphabet(["a", "b", "1", "2"])
    R = parse_regex("1 2 ( a | b ) +", S)
    assert R.accepts(S.word("1 2 a")) and not R.accepts(S.word("1 2"))
    assert not R.accepts(S.word("2 1 a"))


def test_regex_errors():
    with pytest.raises(RegexError) as e:
        parse_regex("( 0 | 1", B)
    assert e.value.position == 4
    with pytest.raises(RegexError):
        parse_regex("0 | q", B)
    with pytest.raises(RegexError):
        parse_regex("* 0", B)
    with pytest.raises(RegexError):
        parse_regex("", B)


def test_regex_glued_operators_and_tokens_with_operators():
    assert lang(parse_regex("(0|1)+", B), 2) == lang(parse_regex("( 0 | 1 ) +", B), 2)
    A = Alphabet(["a*", "b"])
    d = parse_regex("a* b *", A)
    assert d.accepts((0,)) and d.accepts((0, 1, 1)) and not d.accepts((0, 0))


def test_regex_matches_python_re():
    rng = random.Random(7)
    atoms = ["0", "1", "eps"]
    for _ in range(300):
        def gen(depth):
            r = rng.random()
            if depth == 0 or r < 0.3:
                return rng.choice(atoms)
            if r < 0.55:
                return f"{gen(depth - 1)} {gen(depth - 1)}"
            if r < 0.75:
                return f"( {gen(depth - 1)} | {gen(depth - 1)} )"
            return f"( {gen(depth - 1)} ) {rng.choice('*+?')}"
        text = gen(3)
        pat = oracles.py_regex(text)
        d = minimize(parse_regex(text, B))
        for w in oracles.words_upto(2, 5):
            assert d.accepts(w) == bool(pat.fullmatch("".join(map(str, w)))), text


def test_dfa_to_regex_round_trip():
    rng = random.Random(3)
    for _ in range(150):
        d = random_dfa(rng, B)
        back = parse_regex(dfa_to_regex(d), B)
        assert automata.equivalent(d, back)


def test_boolean_ops():
    univ = Nfa.universal(B)
    assert automata.is_empty(automata.complement(univ))
    rng = random.Random(1)
    for _ in range(100):
        a, b = random_dfa(rng, B), random_dfa(rng, B)
        A, Bs = brute(a, 5), brute(b, 5)
        assert automata.is_empty(automata.intersection(a, automata.complement(a)))
        assert lang(automata.union(a, b), 5) == A | Bs
        assert lang(automata.intersection(a, b), 5) == A & Bs
        assert lang(automata.difference(a, b), 5) == A - Bs
        assert lang(automata.complement(a), 5) == set(oracles.words_upto(2, 5)) - A
    with pytest.raises(AlphabetMismatch):
        automata.union(univ, Nfa.universal(U))


def test_mirror_language():
    A = Alphabet(["a", "b"])
    m = automata.mirror_language(parse_regex("a b", A))
    assert lang(minimize(m), 4) == {(1, 0)}
    rng = random.Random(2)
    for _ in range(80):
        d = random_dfa(rng, B)
        mm = automata.mirror_language(automata.mirror_language(d))
        assert lang(minimize(mm), 5) == brute(d, 5)
        assert lang(minimize(automata.mirror_language(d)), 5) == {w[::-1] for w in brute(d, 5)}


def test_membership_examples():
    d = parse_regex("( 0 0 ) *", U)
    assert automata.membership(d, (0, 0))
    assert not automata.membership(d, (0,))


def test_minimize_and_determinize_preserve_language():
    rng = random.Random(5)
    for _ in range(100):
        d = random_dfa(rng, B, 5)
        m = minimize(d)
        assert m.n_states <= d.n_states + 1
        assert lang(m, 6) == brute(d, 6)
        assert minimize(m) == m


def test_signatures():
    d = minimize(parse_regex("( 0 0 ) *", U))
    s = lambda t: automata.signature(d, t)
    assert automata.signatures_equal(s((0,)), s((0, 0, 0)))
    assert not automata.signatures_equal(s((0,)), s((0, 0)))
    assert s(()) == tuple(range(d.n_states))
    rng = random.Random(4)
    for _ in range(100):
        dd = minimize(random_dfa(rng, B))
        w1, w2 = oracles.random_word(rng, 2, 5), oracles.random_word(rng, 2, 5)
        assert automata.signature(dd, w1 + w2) == automata.compose(
            automata.signature(dd, w1), automata.signature(dd, w2))
        if automata.signature(dd, w1) == automata.signature(dd, w2):
            for x in oracles.words_upto(2, 3):
                for y in oracles.words_upto(2, 2):
                    assert dd.accepts(x + w1 + y) == dd.accepts(x + w2 + y)


def test_suffix_signatures_consistent():
    rng = random.Random(8)
    for _ in range(50):
        d = minimize(random_dfa(rng, B))
        w = oracles.random_word(rng, 2, 6)
        sigs = automata.suffix_signatures(d, w)
        assert sigs == [automata.signature(d, w[i:]) for i in range(len(w) + 1)]


def test_size_bounds():
    assert automata.size_bounds(Nfa.universal(B)) == (1, 1)
    d = minimize(parse_regex("( 0 0 ) *", U))
    n, k = automata.size_bounds(d)
    assert k == 2
    assert n == oracles.transformation_closure(d.delta, 1) == 2
    A = Alphabet(["a", "b"])
    ab = minimize(parse_regex("a b", A))
    assert automata.size_bounds(ab)[1] == ab.n_states == 4
    rng = random.Random(9)
    for _ in range(50):
        dd = minimize(random_dfa(rng, B))
        assert automata.size_bounds(dd)[0] == oracles.transformation_closure(dd.delta, 2)


def test_size_bounds_cap_falls_back_to_power_bound():
    d = minimize(random_dfa(random.Random(0), B, 4))
    n, k = automata.size_bounds(d, cap=0)
    assert n == k ** k


def test_suffix_language_examples():
    A = Alphabet(["a", "b"])
    R = parse_regex("a b", A)
    assert lang(automata.suffix_language(R, 0), 3) == {(0, 1), (1,), ()}
    assert lang(automata.suffix_language(R, 1), 3) == {(1,), ()}
    assert lang(automata.suffix_language(R, 1, strict=True), 3) == {()}


def test_suffix_language_matches_brute():
    rng = random.Random(11)
    for _ in range(120):
        d = random_dfa(rng, B, 4)
        base = brute(d, 12)
        for k in range(4):
            for strict in (False, True):
                got = lang(automata.suffix_language(d, k, strict), 6)
                want = {w for w in oracles.suffix_set(base, k, strict) if len(w) <= 6}
                assert got == want, (d, k, strict)


def test_strip_short():
    d = parse_regex("0 *", U)
    assert lang(automata.strip_short(d, 2), 5) == {(0,) * n for n in range(3, 6)}
    assert automata.is_empty(automata.strip_short(parse_regex("eps", U), 0))
    assert lang(automata.strip_short(d, 0), 5) == {(0,) * n for n in range(1, 6)}


def test_enumerate_order_and_content():
    assert [tuple(w) for w in automata.enumerate_words(parse_regex("( 0 | 1 ) +", B), 2)] == \
        [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(automata.enumerate_words(Nfa.empty(B), 10)) == []
    assert [tuple(w) for w in automata.enumerate_words(parse_regex("( 0 0 ) *", U), 4)] == \
        [(), (0, 0), (0, 0, 0, 0)]
    rng = random.Random(12)
    for _ in range(80):
        d = random_dfa(rng, B)
        got = [tuple(w) for w in automata.enumerate_words(d, 5)]
        assert got == oracles.length_lex(brute(d, 5))


def test_is_finite():
    assert automata.is_finite(parse_regex("0 1 | 1", B))
    assert not automata.is_finite(parse_regex("0 1 *", B))
    assert automata.is_finite(Nfa.empty(B))
