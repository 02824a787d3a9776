"""Words over finite alphabets and the scattered-subword order.

Words are tuples of small integers (symbol ids).  An :class:`Alphabet`
interns display tokens and converts between token text and words.  A
:class:`Word` is a tuple subclass that remembers its alphabet, so the
embedding primitives can refuse to compare words from different alphabets;
plain tuples are accepted everywhere and are not checked.

The four residual operations (``longest_suffix_carrier`` and friends) scan
candidate prefixes/suffixes in order and test embedding directly.  They are
deliberately simple: everything built on margins trusts them.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

Symbol = int
WordLike = Sequence[int]

EPSILON: Tuple[int, ...] = ()


class AlphabetMismatch(ValueError):
    """Two words (or a word and an automaton) use different alphabets."""


class PreconditionError(ValueError):
    """A residual operation was called outside its domain."""


class Alphabet:
    """An ordered list of display tokens; token order is symbol order."""

    __slots__ = ("tokens", "_index")

    def __init__(self, tokens: Iterable[str]):
        tokens = tuple(tokens)
        index = {}
        for i, tok in enumerate(tokens):
            if not tok or any(c.isspace() for c in tok):
                raise ValueError(f"invalid token {tok!r}")
            if tok in index:
                raise ValueError(f"duplicate token {tok!r}")
            index[tok] = i
        self.tokens = tokens
        self._index = index

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(range(len(self.tokens)))

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.tokens == other.tokens

    def __hash__(self) -> int:
        return hash(self.tokens)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.tokens)!r})"

    def symbol(self, token: str) -> Symbol:
        try:
            return self._index[token]
        except KeyError:
            raise KeyError(f"unknown token {token!r}") from None

    def word(self, text: "str | Iterable[str]") -> "Word":
        """Build a word from whitespace-separated tokens (or a token list)."""
        if isinstance(text, str):
            toks = text.split()
        else:
            toks = list(text)
        return Word((self.symbol(t) for t in toks), self)

    def show(self, w: WordLike, sep: str = " ") -> str:
        return sep.join(self.tokens[a] for a in w)

    def token_list(self, w: WordLike) -> list:
        return [self.tokens[a] for a in w]

    def extend(self, *tokens: str) -> "Alphabet":
        return Alphabet(self.tokens + tokens)


class Word(tuple):
    """A tuple of symbol ids tagged with its alphabet."""

    alphabet: Optional[Alphabet]

    def __new__(cls, symbols: Iterable[int] = (), alphabet: Optional[Alphabet] = None):
        w = super().__new__(cls, symbols)
        if alphabet is not None:
            n = len(alphabet)
            for a in w:
                if not 0 <= a < n:
                    raise ValueError(f"symbol {a} outside alphabet of size {n}")
        w.alphabet = alphabet
        return w

    def __repr__(self) -> str:
        if self.alphabet is None:
            return f"Word({tuple(self)!r})"
        return f"Word({self.alphabet.show(self)!r})"


def _check(*words) -> None:
    seen = None
    for w in words:
        alph = getattr(w, "alphabet", None)
        if alph is None:
            continue
        if seen is None:
            seen = alph
        elif alph != seen:
            raise AlphabetMismatch(f"{seen!r} vs {alph!r}")


def mirror(w: WordLike) -> Tuple[int, ...]:
    return tuple(reversed(w))


def is_subword(s: WordLike, t: WordLike) -> bool:
    """True iff ``s`` embeds in ``t`` as a scattered subsequence."""
    _check(s, t)
    return _embeds(s, t)


def _embeds(s: WordLike, t: WordLike) -> bool:
    n = len(s)
    if n == 0:
        return True
    if n > len(t):
        return False
    i = 0
    for b in t:
        if b == s[i]:
            i += 1
            if i == n:
                return True
    return False


def leftmost_embedding(s: WordLike, t: WordLike) -> Optional[list]:
    """Lexicographically least increasing positions p with t[p_i] = s_i.

    Greedy matching is optimal here.  Rightmost embeddings are obtained by
    mirroring both words and mapping positions back.
    """
    _check(s, t)
    positions = []
    i = 0
    n = len(s)
    for j, b in enumerate(t):
        if i == n:
            break
        if b == s[i]:
            positions.append(j)
            i += 1
    return positions if i == n else None


def rightmost_embedding(s: WordLike, t: WordLike) -> Optional[list]:
    p = leftmost_embedding(mirror(s), mirror(t))
    if p is None:
        return None
    last = len(t) - 1
    return [last - j for j in reversed(p)]


def longest_suffix_carrier(y: WordLike, z: WordLike, t: WordLike) -> Tuple[int, ...]:
    """Longest suffix x of y such that x·z embeds in t (requires z ⊑ t)."""
    _check(y, z, t)
    z = tuple(z)
    if not _embeds(z, t):
        raise PreconditionError("z does not embed in t")
    y = tuple(y)
    for start in range(len(y) + 1):
        x = y[start:]
        if _embeds(x + z, t):
            return x
    raise AssertionError("unreachable: empty suffix always qualifies")


def shortest_prefix_overflow(z: WordLike, t: WordLike) -> Tuple[int, ...]:
    """Shortest prefix x of z such that x⁻¹z embeds in t."""
    _check(z, t)
    z = tuple(z)
    for end in range(len(z) + 1):
        if _embeds(z[end:], t):
            return z[:end]
    raise AssertionError("unreachable: z itself always qualifies")


def longest_prefix_host(z: WordLike, t: WordLike) -> Tuple[int, ...]:
    """Longest prefix x of t such that z embeds in x⁻¹t (requires z ⊑ t)."""
    _check(z, t)
    t = tuple(t)
    if not _embeds(z, t):
        raise PreconditionError("z does not embed in t")
    for end in range(len(t), -1, -1):
        if _embeds(z, t[end:]):
            return t[:end]
    raise AssertionError("unreachable")


def shortest_suffix_host(z: WordLike, s: WordLike, t: WordLike) -> Tuple[int, ...]:
    """Shortest suffix x of s such that z embeds in x·t (requires z ⊑ s·t)."""
    _check(z, s, t)
    s = tuple(s)
    t = tuple(t)
    if not _embeds(z, s + t):
        raise PreconditionError("z does not embed in s·t")
    for start in range(len(s), -1, -1):
        x = s[start:]
        if _embeds(z, x + t):
            return x
    raise AssertionError("unreachable")


def is_prefix(p: WordLike, w: WordLike) -> bool:
    return len(p) <= len(w) and tuple(w[: len(p)]) == tuple(p)


def is_suffix(p: WordLike, w: WordLike) -> bool:
    return len(p) <= len(w) and tuple(w[len(w) - len(p):]) == tuple(p)


def length_lex_key(w: WordLike):
    """Sort key for the canonical (length, then symbol-order) ordering."""
    return (len(w), tuple(w))
