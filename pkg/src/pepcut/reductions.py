"""Encoders showing two extensions are undecidable, with decoders and oracles.

* PCP to a partially codirected instance whose R' is the non-regular
  length-difference language {τ 2 τ' : |u(ττ')| != |v(ττ')|}.
* Reachability in length-preserving semi-Thue systems to the
  co-and-directed problem, where one rewrite step x -> y is written as the
  letter-by-letter interleaving of x with an overlined copy of y.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from . import automata
from .automata import Dfa, minimize
from .pep import CODIR, COANDDIR, Morphism, PepInstance, check_solution
from .regex import dfa_to_regex, parse_regex
from .words import Alphabet, Word


class ReductionError(ValueError):
    """Invalid reduction input."""


class DecodeError(AssertionError):
    """A verified solution failed to decode (never expected)."""


# -- PCP -----------------------------------------------------------------

@dataclass(frozen=True)
class PcpInstance:
    """Is there a nonempty x with u(x) = v(x)?"""

    sigma: Alphabet
    gamma: Alphabet
    u: Morphism
    v: Morphism


def pcp_solutions(p: PcpInstance, max_len: int) -> List[Word]:
    """Brute force: all x in Σ^+ with |x| <= max_len and u(x) = v(x)."""
    out = []
    for n in range(1, max_len + 1):
        for x in product(range(len(p.sigma)), repeat=n):
            if p.u(x) == p.v(x):
                out.append(Word(x, p.sigma))
    return out


class LengthDiffPredicate:
    """Membership in {τ 2 τ' : τ, τ' over the PCP letters, |u(ττ')| != |v(ττ')|}.

    One left-to-right pass with an integer counter and a marker flag.  The
    PCP letters are every symbol except ``marker`` and ``other`` (the "1").
    """

    def __init__(self, sigma: Alphabet, u: Morphism, v: Morphism, marker: int, other: int):
        self.sigma = sigma
        self.marker = marker
        self.other = other
        self.diff = [len(u.images[a]) - len(v.images[a]) for a in range(len(sigma))]

    @classmethod
    def for_instance(cls, sigma: Alphabet, u: Morphism, v: Morphism) -> "LengthDiffPredicate":
        if "1" not in sigma or "2" not in sigma:
            raise ReductionError("length-difference constraint needs symbols '1' and '2'")
        return cls(sigma, u, v, sigma.symbol("2"), sigma.symbol("1"))

    def accepts(self, w: Sequence[int]) -> bool:
        seen = False
        d = 0
        for a in w:
            if a == self.marker:
                if seen:
                    return False
                seen = True
            elif a == self.other:
                return False
            else:
                d += self.diff[a]
        return seen and d != 0

    def __repr__(self) -> str:
        return "LengthDiffPredicate()"


def encode_pcp(p: PcpInstance) -> PepInstance:
    """Add letters 1, 2 and #: u'(1) = v'(2) = ε, u'(2) = v'(1) = #,
    R = 1 2 Σ^+, R' = the length-difference predicate.

    x solves the PCP instance iff 1 2 x solves the encoded one.
    """
    for tok in ("1", "2"):
        if tok in p.sigma:
            raise ReductionError(f"PCP alphabet already uses {tok!r}")
    if "#" in p.gamma:
        raise ReductionError("PCP output alphabet already uses '#'")
    sigma = p.sigma.extend("1", "2")
    gamma = p.gamma.extend("#")
    sharp = gamma.symbol("#")
    u = Morphism(sigma, gamma, p.u.images + ((), (sharp,)))
    v = Morphism(sigma, gamma, p.v.images + ((sharp,), ()))
    letters = " | ".join(p.sigma.tokens)
    src = f"1 2 ( {letters} ) +"
    R = parse_regex(src, sigma)
    Rp = LengthDiffPredicate.for_instance(sigma, u, v)
    return PepInstance(sigma, gamma, u, v, R, Rp, CODIR, R_source=src)


def pcp_to_pep_word(p: PcpInstance, enc: PepInstance, x: Sequence[int]) -> Word:
    return Word((enc.sigma.symbol("1"), enc.sigma.symbol("2")) + tuple(x), enc.sigma)


def pep_to_pcp_word(p: PcpInstance, enc: PepInstance, w: Sequence[int]) -> Word:
    head = (enc.sigma.symbol("1"), enc.sigma.symbol("2"))
    if tuple(w[:2]) != head:
        raise ReductionError("not an encoded PCP word")
    return Word(w[2:], p.sigma)


# -- semi-Thue systems -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SemiThueSystem:
    """Length-preserving rules over ``upsilon`` with source/target sets."""

    upsilon: Alphabet
    rules: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    P1: Dfa
    P2: Dfa
    P1_source: Optional[str] = None
    P2_source: Optional[str] = None

    def __post_init__(self):
        rules = tuple((tuple(l), tuple(r)) for l, r in self.rules)
        object.__setattr__(self, "rules", rules)
        for l, r in rules:
            if len(l) != len(r):
                raise ReductionError("rules must be length-preserving")
            if not l:
                raise ReductionError("rules must have nonempty sides")
        for name in ("P1", "P2"):
            d = getattr(self, name)
            if d.alphabet != self.upsilon:
                raise ReductionError(f"{name} must be over the system alphabet")
            object.__setattr__(self, name, minimize(d))
        if self.P1.accepts(()):
            raise ReductionError("the empty word must not be in P1")

    def successors(self, x: Sequence[int]) -> List[Tuple[int, int, Tuple[int, ...]]]:
        """All (rule index, position, result) for one rewrite of x."""
        x = tuple(x)
        out = []
        for k, (l, r) in enumerate(self.rules):
            for i in range(len(x) - len(l) + 1):
                if x[i:i + len(l)] == l:
                    out.append((k, i, x[:i] + r + x[i + len(l):]))
        return out

    def steps_to(self, x: Sequence[int], y: Sequence[int]) -> List[Tuple[int, int]]:
        y = tuple(y)
        return [(k, i) for k, i, z in self.successors(x) if z == y]


@dataclass(frozen=True)
class Derivation:
    """x_0 -> x_1 -> ... -> x_m, one rewrite per arrow."""

    words: Tuple[Tuple[int, ...], ...]

    @property
    def steps(self) -> int:
        return len(self.words) - 1

    def problems(self, S: SemiThueSystem, need_even: bool = False) -> List[str]:
        out = []
        if not self.words:
            return ["empty derivation"]
        for i in range(1, len(self.words)):
            if not S.steps_to(self.words[i - 1], self.words[i]):
                out.append(f"step {i} is not a rewrite")
        if not S.P1.accepts(self.words[0]):
            out.append("first word not in P1")
        if not S.P2.accepts(self.words[-1]):
            out.append("last word not in P2")
        if need_even and (self.steps == 0 or self.steps % 2):
            out.append(f"need an even nonzero number of steps, got {self.steps}")
        return out

    def show(self, upsilon: Alphabet) -> str:
        return " -> ".join(upsilon.show(w, "") if all(len(t) == 1 for t in upsilon.tokens)
                           else upsilon.show(w) for w in self.words)


DAGGER = "†"
OVERLINE = "~"
PLAIN_COPY, PRIME, DPRIME = "", "'", "''"


class EncodedAlphabet:
    """Six copies of Υ ∪ {†}: plain, primed, double-primed, each also
    overlined (overline written as a ``~`` prefix)."""

    def __init__(self, upsilon: Alphabet):
        if DAGGER in upsilon:
            raise ReductionError(f"{DAGGER!r} is reserved")
        for t in upsilon.tokens:
            if t.startswith(OVERLINE) or t.endswith("'"):
                raise ReductionError(f"token {t!r} clashes with the copy naming")
        self.upsilon = upsilon
        self.base = list(upsilon.tokens) + [DAGGER]
        toks = []
        for bar in ("", OVERLINE):
            for mark in (PLAIN_COPY, PRIME, DPRIME):
                toks.extend(bar + b + mark for b in self.base)
        self.alphabet = Alphabet(toks)

    def sym(self, base: str, mark: str = PLAIN_COPY, bar: bool = False) -> int:
        return self.alphabet.symbol((OVERLINE if bar else "") + base + mark)

    def of(self, y: int, mark: str = PLAIN_COPY, bar: bool = False) -> int:
        """Copy of system letter ``y`` (an Υ symbol id)."""
        return self.sym(self.upsilon.tokens[y], mark, bar)

    def dagger(self, mark: str = PLAIN_COPY, bar: bool = False) -> int:
        return self.sym(DAGGER, mark, bar)

    def classify(self, s: int) -> Tuple[str, str, bool]:
        """(base token, mark, overlined) of an encoded symbol."""
        tok = self.alphabet.tokens[s]
        bar = tok.startswith(OVERLINE)
        if bar:
            tok = tok[len(OVERLINE):]
        for mark in (DPRIME, PRIME):
            if tok.endswith(mark):
                return tok[: -len(mark)], mark, bar
        return tok, PLAIN_COPY, bar


def shuffle(x: Sequence[int], y: Sequence[int], enc: EncodedAlphabet,
            xmark: str = PLAIN_COPY, ymark: str = PLAIN_COPY,
            xdagger: bool = False, ydagger: bool = False) -> Word:
    """x_0 ~y_0 x_1 ~y_1 ... for equal-length system words.

    ``xmark``/``ymark`` choose the copy used on each track; a ``*dagger``
    flag fills that track with † instead (only its length is used).
    """
    if len(x) != len(y):
        raise ReductionError("shuffle needs words of equal length")
    out = []
    for a, b in zip(x, y):
        out.append(enc.dagger(xmark) if xdagger else enc.of(a, xmark))
        out.append(enc.dagger(ymark, True) if ydagger else enc.of(b, ymark, True))
    return Word(out, enc.alphabet)


def unshuffle(w: Sequence[int], enc: EncodedAlphabet) -> Tuple[List[Tuple[str, str]], List[Tuple[str, str]]]:
    """Split into (plain-track, overline-track) lists of (base, mark)."""
    if len(w) % 2:
        raise DecodeError("odd-length shuffle block")
    xs, ys = [], []
    for i in range(0, len(w), 2):
        b1, m1, bar1 = enc.classify(w[i])
        b2, m2, bar2 = enc.classify(w[i + 1])
        if bar1 or not bar2:
            raise DecodeError("shuffle block does not alternate plain/overlined")
        xs.append((b1, m1))
        ys.append((b2, m2))
    return xs, ys


# -- the co-and-directed encoding ----------------------------------------------

def _alt(items: Sequence[str]) -> str:
    items = list(items)
    if not items:
        return "empty"
    # always grouped: a postfix operator must apply to the whole alternative
    return "( " + " | ".join(items) + " )"


def _step_regex(S: SemiThueSystem, enc: EncodedAlphabet, backward: bool) -> str:
    ups = S.upsilon.tokens
    ident = _alt([f"{t} {OVERLINE}{t}" for t in ups])
    windows = []
    for l, r in S.rules:
        x, y = (r, l) if backward else (l, r)
        windows.append(enc.alphabet.show(shuffle(x, y, enc)))
    return f"{ident} * {_alt(['( ' + w + ' )' for w in windows])} {ident} *"


def _filler_regex(enc: EncodedAlphabet, plain_dagger: bool, mark: str) -> str:
    ups = enc.upsilon.tokens
    if plain_dagger:
        pair = _alt([f"{DAGGER}{mark} {OVERLINE}{t}{mark}" for t in ups])
    else:
        pair = _alt([f"{t}{mark} {OVERLINE}{DAGGER}{mark}" for t in ups])
    return f"{pair} +"


def _track_automaton(P: Dfa, enc: EncodedAlphabet, overline_track: bool) -> Dfa:
    """Shuffles x ⧢ y (plain Υ letters, |x| = |y|) whose plain track x (or
    overline track y) is accepted by P."""
    A = enc.alphabet
    ups = range(len(enc.upsilon))
    n = P.n_states
    sink = 2 * n
    delta = [[sink] * len(A) for _ in range(2 * n + 1)]
    for p in range(n):
        for a in ups:
            # phase 0 (state p): expecting a plain letter
            delta[p][enc.of(a)] = p + n if overline_track else P.delta[p][a] + n
            # phase 1 (state p + n): expecting an overlined letter
            delta[p + n][enc.of(a, bar=True)] = P.delta[p][a] if overline_track else p
    return Dfa(A, 2 * n + 1, P.initial, list(P.accepting), delta)


def build_step_languages(S: SemiThueSystem, enc: Optional[EncodedAlphabet] = None):
    """(T_fwd, T_fwd ∩ P1-track, T_bwd, T_bwd ∩ P2-track) as minimized DFAs.

    T_fwd holds x ⧢ y with x -> y in one step; T_bwd holds y ⧢ x.
    """
    enc = enc or EncodedAlphabet(S.upsilon)
    A = enc.alphabet
    fwd = minimize(parse_regex(_step_regex(S, enc, False), A))
    bwd = minimize(parse_regex(_step_regex(S, enc, True), A))
    fwd_p1 = automata.intersection(fwd, _track_automaton(S.P1, enc, False))
    bwd_p2 = automata.intersection(bwd, _track_automaton(S.P2, enc, False))
    return fwd, fwd_p1, bwd, bwd_p2


def _encoded_morphisms(enc: EncodedAlphabet) -> Tuple[Morphism, Morphism]:
    A = enc.alphabet
    w_ups = [enc.of(a) for a in range(len(enc.upsilon))]
    u_img: Dict[int, Tuple[int, ...]] = {}
    v_img: Dict[int, Tuple[int, ...]] = {}
    dag = enc.dagger()
    for a in range(len(enc.upsilon)):
        pa = enc.of(a)
        u_img[pa], v_img[pa] = (pa,), (dag,)
        u_img[enc.of(a, PRIME)], v_img[enc.of(a, PRIME)] = (dag,), (pa,)
        u_img[enc.of(a, DPRIME)], v_img[enc.of(a, DPRIME)] = (), (pa,)
    u_img[enc.dagger(PRIME)], v_img[enc.dagger(PRIME)] = (dag,), tuple(w_ups)
    u_img[enc.dagger(DPRIME)], v_img[enc.dagger(DPRIME)] = (), tuple(w_ups)
    # plain † never occurs in R; map it to itself
    u_img[dag], v_img[dag] = (dag,), (dag,)

    def bar(img):
        return tuple(A.symbol(OVERLINE + A.tokens[s]) for s in img)

    for s in list(u_img):
        sb = A.symbol(OVERLINE + A.tokens[s])
        u_img[sb], v_img[sb] = bar(u_img[s]), bar(v_img[s])
    u = Morphism(A, A, tuple(u_img[s] for s in range(len(A))))
    v = Morphism(A, A, tuple(v_img[s] for s in range(len(A))))
    return u, v


def encode_semithue(S: SemiThueSystem) -> PepInstance:
    """The co-and-directed instance that has a solution iff some x in P1
    rewrites to some y in P2 in an even, nonzero number of steps."""
    enc = EncodedAlphabet(S.upsilon)
    A = enc.alphabet
    _, fwd_p1, _, bwd_p2 = build_step_languages(S, enc)
    fwd = _step_regex(S, enc, False)
    bwd = _step_regex(S, enc, True)
    edge = _filler_regex(enc, False, DPRIME)
    odd_fill = _filler_regex(enc, True, PRIME)
    even_fill = _filler_regex(enc, False, PRIME)
    src = (f"{edge} ( {dfa_to_regex(fwd_p1)} ) {odd_fill} "
           f"( ( {bwd} ) {even_fill} ( {fwd} ) {odd_fill} ) * "
           f"( {dfa_to_regex(bwd_p2)} ) {edge}")
    R = parse_regex(src, A)
    u, v = _encoded_morphisms(enc)
    inst = PepInstance(A, A, u, v, R, None, COANDDIR, R_source=src)
    inst._cache["encoding"] = enc
    return inst


def derivation_to_solution(S: SemiThueSystem, pi: "Derivation | Sequence[Sequence[int]]",
                           enc: Optional[EncodedAlphabet] = None) -> Word:
    """σ_π = ρ_0 σ_1 ρ_1 ... σ_2k ρ_2k for an even derivation from P1 to P2."""
    if not isinstance(pi, Derivation):
        pi = Derivation(tuple(tuple(w) for w in pi))
    bad = pi.problems(S, need_even=True)
    if bad:
        raise ReductionError("; ".join(bad))
    enc = enc or EncodedAlphabet(S.upsilon)
    xs = pi.words
    m = len(xs) - 1
    out: List[int] = []
    out += shuffle(xs[0], xs[0], enc, DPRIME, DPRIME, ydagger=True)
    for i in range(1, m + 1):
        if i % 2:
            out += shuffle(xs[i - 1], xs[i], enc)
        else:
            out += shuffle(xs[i], xs[i - 1], enc)
        if i == m:
            out += shuffle(xs[m], xs[m], enc, DPRIME, DPRIME, ydagger=True)
        elif i % 2:
            out += shuffle(xs[i], xs[i], enc, PRIME, PRIME, xdagger=True)
        else:
            out += shuffle(xs[i], xs[i], enc, PRIME, PRIME, ydagger=True)
    return Word(out, enc.alphabet)


def segments(inst: PepInstance, sigma: Sequence[int]) -> List[Tuple[str, Tuple[int, ...]]]:
    """Maximal blocks of σ by letter class: ``step`` (plain copies, with
    or without overline), ``prime`` or ``dprime``."""
    enc = _encoding_of(inst)
    out: List[Tuple[str, List[int]]] = []
    for s in sigma:
        _, mark, _ = enc.classify(s)
        cls = {PLAIN_COPY: "step", PRIME: "prime", DPRIME: "dprime"}[mark]
        if out and out[-1][0] == cls:
            out[-1][1].append(s)
        else:
            out.append((cls, [s]))
    return [(c, tuple(b)) for c, b in out]


def _encoding_of(inst: PepInstance) -> EncodedAlphabet:
    enc = inst._cache.get("encoding")
    if enc is None:
        raise ReductionError("instance was not produced by encode_semithue")
    return enc


def decode_semithue_solution(S: SemiThueSystem, inst: PepInstance, sigma: Sequence[int]) -> Derivation:
    """Recover x_0 -> ... -> x_2k from a verified solution."""
    v = check_solution(inst, sigma)
    if not v.ok:
        raise ReductionError(f"not a solution ({v.kind})")
    enc = _encoding_of(inst)
    ups = S.upsilon
    segs = segments(inst, sigma)
    steps = [b for c, b in segs if c == "step"]
    shape = [c for c, _ in segs]
    expect = ["dprime"] + ["step", "prime"] * (len(steps) - 1) + ["step", "dprime"]
    if shape != expect or not steps or len(steps) % 2:
        raise DecodeError(f"unexpected block structure {shape}")

    def word(track):
        return tuple(ups.symbol(b) for b, _ in track)

    words: List[Tuple[int, ...]] = []
    for i, block in enumerate(steps, 1):
        xs, ys = unshuffle(block, enc)
        plain, bar = word(xs), word(ys)
        before, after = (plain, bar) if i % 2 else (bar, plain)
        if not words:
            words.append(before)
        elif words[-1] != before:
            raise DecodeError(f"step {i} does not start where step {i - 1} ended")
        words.append(after)
    pi = Derivation(tuple(words))
    bad = pi.problems(S, need_even=True)
    if bad:
        raise DecodeError("; ".join(bad))
    return pi


# -- reachability oracle ---------------------------------------------------------

@dataclass(frozen=True)
class ReachResult:
    """Plain reachability (any number of steps, zero included) and even
    nonzero reachability, each with a shortest witness when found."""

    reachable: bool
    derivation: Optional[Derivation]
    even_reachable: bool
    even_derivation: Optional[Derivation]
    complete: bool
    length_cap: int
    max_steps: Optional[int]
    states: int

    def answer(self, even_only: bool) -> bool:
        return self.even_reachable if even_only else self.reachable


class OracleBudgetExceeded(RuntimeError):
    pass


def default_length_cap(S: SemiThueSystem) -> int:
    longest = max((len(l) for l, _ in S.rules), default=0)
    return S.P1.n_states + S.P2.n_states + longest


def semithue_reach_oracle(S: SemiThueSystem, max_steps: Optional[int] = None,
                          length_cap: Optional[int] = None, state_budget: int = 10 ** 6) -> ReachResult:
    """Breadth-first closure from the words of P1 up to ``length_cap``.

    ``max_steps=None`` runs to saturation (finite because rewriting
    preserves length).  ``complete`` is True when the closure saturated and
    P1 has no word beyond the cap, so a negative answer is definitive.
    """
    if max_steps is not None and max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    if length_cap is None:
        length_cap = default_length_cap(S)
    sources = [tuple(w) for w in automata.enumerate_words(S.P1, length_cap)]
    plain_hit = next((x for x in sources if S.P2.accepts(x)), None)
    plain_pi = Derivation((plain_hit,)) if plain_hit is not None else None
    even_pi = None
    # nodes are (word, parity of steps); only reached with >= 1 step
    parent: Dict[Tuple[Tuple[int, ...], int], Tuple[Tuple[int, ...], int]] = {}
    frontier = []
    for x in sources:
        for _, _, y in sorted(S.successors(x), key=lambda t: t[2]):
            node = (y, 1)
            if node not in parent:
                parent[node] = (x, -1)
                frontier.append(node)
    steps = 1

    def trace(node):
        path = [node[0]]
        while True:
            prev = parent[node]
            path.append(prev[0])
            if prev[1] == -1:
                break
            node = prev
        return Derivation(tuple(reversed(path)))

    saturated = False
    while True:
        for node in frontier:
            y, par = node
            if S.P2.accepts(y):
                if plain_pi is None:
                    plain_pi = trace(node)
                if par == 0 and even_pi is None:
                    even_pi = trace(node)
        if plain_pi is not None and even_pi is not None:
            break
        if not frontier:
            saturated = True
            break
        if max_steps is not None and steps >= max_steps:
            break
        nxt = []
        for node in frontier:
            y, par = node
            for _, _, z in sorted(S.successors(y), key=lambda t: t[2]):
                child = (z, 1 - par)
                if child not in parent:
                    parent[child] = node
                    nxt.append(child)
        if len(parent) > state_budget:
            raise OracleBudgetExceeded(f"more than {state_budget} states")
        frontier = nxt
        steps += 1
    complete = (plain_pi is not None and even_pi is not None) or (
        saturated and automata.is_empty(automata.strip_short(S.P1, length_cap)))
    return ReachResult(plain_pi is not None, plain_pi, even_pi is not None, even_pi,
                       complete, length_cap, max_steps, len(parent))
