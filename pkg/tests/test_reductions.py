import random
from itertools import product
from pathlib import Path

import pytest

from pepcut import automata
from pepcut.formats import load_semithue, parse_pcp, parse_semithue
from pepcut.pep import check_solution
from pepcut.reductions import (DecodeError, Derivation, EncodedAlphabet, LengthDiffPredicate,
                               ReductionError, build_step_languages, decode_semithue_solution,
                               derivation_to_solution, encode_pcp, encode_semithue, pcp_solutions,
                               pcp_to_pep_word, pep_to_pcp_word, segments, semithue_reach_oracle,
                               shuffle)
from pepcut.solver import solve

import oracles

DATA = Path(__file__).parent / "data"
SIGMA_PI = ("a'' ~†'' b'' ~†'' c'' ~†'' a ~b b ~c c ~c †' ~b' †' ~c' †' ~c' "
            "b ~b a ~c a ~c b'' ~†'' a'' ~†'' a'' ~†''")
U_ROW = "a ~b b ~c c ~c † ~† † ~† † ~† b ~b a ~c a ~c"
V_ROW = ("a ~a ~b ~c b ~a ~b ~c c ~a ~b ~c † ~† † ~† † ~† a b c ~b a b c ~c a b c ~c "
         "† ~† † ~† † ~† b ~a ~b ~c a ~a ~b ~c a ~a ~b ~c")


@pytest.fixture(scope="module")
def sexmp():
    S = load_semithue(str(DATA / "sexmp.st"))
    inst = encode_semithue(S)
    return S, inst


def system(text):
    return parse_semithue(text)


def random_system(rng, max_ups=3, max_len=4, max_rules=2):
    ups = "abc"[: rng.randint(1, max_ups)]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        n = rng.randint(1, 2)
        l = " ".join(rng.choice(ups) for _ in range(n))
        r = " ".join(rng.choice(ups) for _ in range(n))
        rules.append(f"rule {l} -> {r}")
    def finite_set():
        words = {" ".join(rng.choice(ups) for _ in range(rng.randint(1, max_len)))
                 for _ in range(rng.randint(1, 3))}
        return " | ".join(f"( {w} )" for w in sorted(words))
    return system(f"upsilon {' '.join(ups)}\n" + "\n".join(rules)
                  + f"\nP1 = {finite_set()}\nP2 = {finite_set()}\n")


# -- shuffle and step languages ---------------------------------------------------

def test_shuffle_examples(sexmp):
    S, inst = sexmp
    enc = EncodedAlphabet(S.upsilon)
    w = S.upsilon.word
    A = enc.alphabet
    assert A.show(shuffle(w("a b c"), w("b c c"), enc)) == "a ~b b ~c c ~c"
    assert shuffle((), (), enc) == ()
    assert A.show(shuffle(w("a b"), w("a b"), enc)) == "a ~a b ~b"
    with pytest.raises(ReductionError):
        shuffle(w("a"), w("a b"), enc)


def test_encoded_alphabet_size_and_order(sexmp):
    S, inst = sexmp
    enc = EncodedAlphabet(S.upsilon)
    assert len(enc.alphabet) == 6 * (len(S.upsilon) + 1)
    assert enc.alphabet.tokens[:8] == ("a", "b", "c", "†", "a'", "b'", "c'", "†'")
    assert enc.classify(enc.sym("b", "''", True)) == ("b", "''", True)


def test_step_language_examples(sexmp):
    S, inst = sexmp
    A = inst.sigma
    fwd, fwd_p1, bwd, bwd_p2 = build_step_languages(S)
    assert fwd.accepts(A.word("a ~b b ~c c ~c"))
    assert fwd_p1.accepts(A.word("a ~b b ~c c ~c"))
    assert bwd.accepts(A.word("b ~b a ~c a ~c"))
    assert bwd_p2.accepts(A.word("b ~b a ~c a ~c"))
    # two rule windows in one step
    assert not fwd.accepts(A.word("a ~b b ~c a ~b b ~c"))


def test_step_languages_match_one_step_brute():
    rng = random.Random(61)
    for _ in range(30):
        S = random_system(rng, max_ups=2)
        enc = EncodedAlphabet(S.upsilon)
        fwd, fwd_p1, bwd, bwd_p2 = build_step_languages(S, enc)
        k = len(S.upsilon)
        for n in range(0, 5):
            for x in product(range(k), repeat=n):
                succ = oracles.one_step_brute(S.rules, x)
                for y in product(range(k), repeat=n):
                    w = shuffle(x, y, enc)
                    w_back = shuffle(y, x, enc)
                    step = y in succ
                    assert fwd.accepts(w) == step
                    assert fwd_p1.accepts(w) == (step and S.P1.accepts(x))
                    assert bwd.accepts(w_back) == step
                    assert bwd_p2.accepts(w_back) == (step and S.P2.accepts(y))


def test_step_languages_reject_non_shuffles():
    rng = random.Random(62)
    S = random_system(rng, max_ups=2)
    enc = EncodedAlphabet(S.upsilon)
    fwd = build_step_languages(S, enc)[0]
    plain = [enc.of(a, bar=b) for a in range(len(S.upsilon)) for b in (False, True)]
    for n in range(7):
        for w in product(plain, repeat=n):
            alternating = all(enc.classify(s)[2] == bool(i % 2) for i, s in enumerate(w))
            if not alternating or n % 2:
                assert not fwd.accepts(w)


# -- the worked example ---------------------------------------------------------------

def test_sigma_pi_is_a_solution(sexmp):
    S, inst = sexmp
    spi = inst.sigma.word(SIGMA_PI)
    assert len(spi) == 30
    assert inst.R.accepts(spi)
    assert check_solution(inst, spi).ok
    assert inst.gamma.show(inst.u(spi)) == U_ROW
    assert inst.gamma.show(inst.v(spi)) == V_ROW


def test_derivation_to_solution_reproduces_sigma_pi(sexmp):
    S, inst = sexmp
    w = S.upsilon.word
    pi = [w("a b c"), w("b c c"), w("b a a")]
    assert inst.sigma.show(derivation_to_solution(S, pi)) == SIGMA_PI
    with pytest.raises(ReductionError):
        derivation_to_solution(S, pi[:2])


def test_decode_sigma_pi(sexmp):
    S, inst = sexmp
    pi = decode_semithue_solution(S, inst, inst.sigma.word(SIGMA_PI))
    assert pi.show(S.upsilon) == "abc -> bcc -> baa"


def segment_problems(inst, sigma):
    """Per-segment checks: adjacent segments host each other's u-images,
    inner segments share one length, and u/v images of a segment use
    disjoint letters."""
    segs = [b for _, b in segments(inst, sigma)]
    out = []
    for p in range(1, len(segs)):
        if not oracles.embeds_rec(inst.u(segs[p]), inst.v(segs[p - 1])):
            out.append(f"u(s_{p}) not in v(s_{p - 1})")
        if not oracles.embeds_rec(inst.u(segs[p - 1]), inst.v(segs[p])):
            out.append(f"u(s_{p - 1}) not in v(s_{p})")
    if len({len(s) for s in segs[1:-1]}) > 1:
        out.append("inner segment lengths differ")
    for p, s in enumerate(segs):
        if set(inst.u(s)) & set(inst.v(s)):
            out.append(f"u(s_{p}) and v(s_{p}) share letters")
    return out


def test_segment_lemmas_on_sigma_pi(sexmp):
    S, inst = sexmp
    spi = inst.sigma.word(SIGMA_PI)
    segs = segments(inst, spi)
    assert [len(b) for _, b in segs] == [6, 6, 6, 6, 6]
    assert segment_problems(inst, spi) == []


def test_decode_rejects_non_solutions(sexmp):
    S, inst = sexmp
    spi = inst.sigma.word(SIGMA_PI)
    with pytest.raises(ReductionError):
        decode_semithue_solution(S, inst, spi[:-2])


def test_round_trip_on_random_systems():
    rng = random.Random(63)
    done = 0
    for _ in range(200):
        S = random_system(rng)
        r = semithue_reach_oracle(S, max_steps=4)
        if not r.even_reachable:
            continue
        pi = r.even_derivation
        inst = encode_semithue(S)
        sigma = derivation_to_solution(S, pi)
        assert check_solution(inst, sigma).ok
        assert segment_problems(inst, sigma) == []
        assert decode_semithue_solution(S, inst, sigma) == pi
        done += 1
    assert done >= 20


def test_solver_solutions_decode():
    rng = random.Random(64)
    done = 0
    for _ in range(60):
        S = random_system(rng, max_ups=2, max_len=2, max_rules=2)
        inst = encode_semithue(S)
        res = solve(inst, 12, node_budget=300000)
        if res.found:
            pi = decode_semithue_solution(S, inst, res.witness)
            assert pi.problems(S, need_even=True) == []
            assert segment_problems(inst, res.witness) == []
            done += 1
    assert done >= 5


def test_system_validation():
    with pytest.raises(Exception, match="length-preserving"):
        system("upsilon a b\nrule a -> a b\nP1 = a\nP2 = b\n")
    with pytest.raises(Exception, match="empty word"):
        system("upsilon a b\nrule a -> b\nP1 = a *\nP2 = b\n")
    with pytest.raises(ReductionError):
        EncodedAlphabet(parse_semithue("upsilon a ~b\nrule a -> a\nP1 = a\nP2 = a\n").upsilon)


# -- oracle -------------------------------------------------------------------------------

def test_oracle_examples(sexmp):
    S, inst = sexmp
    r = semithue_reach_oracle(S)
    assert r.even_reachable and r.even_derivation.steps == 2
    assert r.even_derivation.show(S.upsilon) == "abc -> bcc -> baa"
    loop = system("upsilon a b\nrule a -> b\nP1 = a\nP2 = a\n")
    r = semithue_reach_oracle(loop)
    assert r.reachable and r.derivation.steps == 0
    assert not r.even_reachable and r.complete
    assert r.answer(False) and not r.answer(True)
    dead = system("upsilon a b c\nrule a -> b\nP1 = a\nP2 = c\n")
    r = semithue_reach_oracle(dead)
    assert not r.reachable and r.complete


def reach_brute(S, steps, cap):
    """Words reachable from P1 (words up to cap) in exactly n steps, per n."""
    k = len(S.upsilon)
    level = {x for x in oracles.words_upto(k, cap) if S.P1.accepts(x)}
    out = [level]
    for _ in range(steps):
        level = {y for x in level for y in oracles.one_step_brute(S.rules, x)}
        out.append(level)
    return out


def test_oracle_matches_brute_levels():
    rng = random.Random(65)
    for _ in range(100):
        S = random_system(rng)
        r = semithue_reach_oracle(S, max_steps=4, length_cap=4)
        levels = reach_brute(S, 4, 4)
        hit = [any(S.P2.accepts(y) for y in lv) for lv in levels]
        assert r.reachable == any(hit)
        assert r.even_reachable == (hit[2] or hit[4])
        if r.even_reachable:
            assert r.even_derivation.problems(S, need_even=True) == []


# -- PCP --------------------------------------------------------------------------------

def test_pcp_examples():
    yes = parse_pcp((DATA / "pcp_yes.pcp").read_text())
    enc = encode_pcp(yes)
    w = pcp_to_pep_word(yes, enc, yes.sigma.word("x"))
    assert enc.sigma.show(w) == "1 2 x"
    assert check_solution(enc, w).ok
    assert pep_to_pcp_word(yes, enc, w) == yes.sigma.word("x")
    no = parse_pcp((DATA / "pcp_no.pcp").read_text())
    assert not solve(encode_pcp(no), 6).found


def test_length_diff_predicate():
    p = parse_pcp("sigma x y\ngamma a b\nu x = a\nu y = a b\nv x = a a\nv y = b\n")
    enc = encode_pcp(p)
    pred = enc.Rp
    A = enc.sigma
    assert not pred.accepts(A.word("2 y x"))
    assert pred.accepts(A.word("2 x"))
    assert pred.accepts(A.word("x 2"))
    assert not pred.accepts(A.word("x x"))
    assert not pred.accepts(A.word("2 x 2"))
    assert not pred.accepts(A.word("1 2 x"))
    diff = {a: len(p.u.images[a]) - len(p.v.images[a]) for a in range(2)}
    for w in oracles.words_upto(4, 5):
        toks = [A.tokens[a] for a in w]
        want = (toks.count("2") == 1 and "1" not in toks
                and sum(diff[a] for a in w if a < 2) != 0)
        assert pred.accepts(w) == want


def test_encode_pcp_rejects_clashes():
    with pytest.raises(ReductionError):
        encode_pcp(parse_pcp("sigma 1\ngamma a\nu 1 = a\nv 1 = a\n"))
    with pytest.raises(ReductionError):
        encode_pcp(parse_pcp("sigma x\ngamma #\nu x = #\nv x = #\n"))


def test_pcp_correspondence_small():
    rng = random.Random(66)
    for _ in range(40):
        k = rng.randint(1, 2)
        toks = "xy"[:k]
        lines = [f"sigma {' '.join(toks)}", "gamma a b"]
        for side in "uv":
            for t in toks:
                img = " ".join(rng.choice("ab") for _ in range(rng.randint(0, 2)))
                lines.append(f"{side} {t} = {img}")
        p = parse_pcp("\n".join(lines) + "\n")
        brute = oracles.pcp_brute(p.u.images, p.v.images, k, 4)
        assert bool(pcp_solutions(p, 4)) == brute
        assert solve(encode_pcp(p), 6).found == brute
