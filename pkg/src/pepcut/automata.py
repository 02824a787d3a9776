"""Finite automata over an :class:`~pepcut.words.Alphabet`.

States are integers ``0..n-1``.  :class:`Nfa` allows ε-moves internally
(the regex compiler and the concatenation/star combinators produce them);
every query works up to ε-closure.  :class:`Dfa` is always complete, with
an explicit sink when one is needed, and :func:`minimize` numbers states
in breadth-first order over the declared symbol order, so two minimized
DFAs for the same language are identical tuples.

Congruence signatures are elements of the transition monoid: the vector
``q -> delta*(q, w)``.  Equal signatures imply syntactic equivalence, and
the index of this refinement is at most ``m**m`` for an ``m``-state DFA.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .words import Alphabet, AlphabetMismatch, Word, WordLike

Signature = Tuple[int, ...]


class Nfa:
    """Nondeterministic automaton with optional ε-transitions."""

    __slots__ = ("alphabet", "n_states", "initial", "accepting", "trans", "eps")

    def __init__(self, alphabet: Alphabet, n_states: int, initial: Iterable[int],
                 accepting: Iterable[int], trans=None, eps=None):
        self.alphabet = alphabet
        self.n_states = n_states
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        if trans is None:
            trans = [{} for _ in range(n_states)]
        if eps is None:
            eps = [() for _ in range(n_states)]
        self.trans = tuple(
            {a: frozenset(ts) for a, ts in row.items() if ts} for row in trans
        )
        self.eps = tuple(frozenset(e) for e in eps)
        if len(self.trans) != n_states or len(self.eps) != n_states:
            raise ValueError("transition table size does not match state count")
        for q in self.initial | self.accepting:
            if not 0 <= q < n_states:
                raise ValueError(f"state {q} out of range")
        k = len(alphabet)
        for row, e in zip(self.trans, self.eps):
            for a, ts in row.items():
                if not 0 <= a < k:
                    raise ValueError(f"symbol {a} outside alphabet")
                for t in ts:
                    if not 0 <= t < n_states:
                        raise ValueError(f"state {t} out of range")
            for t in e:
                if not 0 <= t < n_states:
                    raise ValueError(f"state {t} out of range")

    def __repr__(self) -> str:
        return f"<Nfa {self.n_states} states over {list(self.alphabet.tokens)}>"

    # -- basic languages ---------------------------------------------------

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Nfa":
        return cls(alphabet, 1, [0], [])

    @classmethod
    def epsilon(cls, alphabet: Alphabet) -> "Nfa":
        return cls(alphabet, 1, [0], [0])

    @classmethod
    def symbol(cls, alphabet: Alphabet, a: int) -> "Nfa":
        return cls(alphabet, 2, [0], [1], [{a: {1}}, {}])

    @classmethod
    def symbols(cls, alphabet: Alphabet, syms: Iterable[int]) -> "Nfa":
        syms = set(syms)
        return cls(alphabet, 2, [0], [1], [{a: {1} for a in syms}, {}])

    @classmethod
    def word(cls, alphabet: Alphabet, w: WordLike) -> "Nfa":
        n = len(w) + 1
        trans = [{w[i]: {i + 1}} for i in range(len(w))] + [{}]
        return cls(alphabet, n, [0], [n - 1], trans)

    @classmethod
    def finite(cls, alphabet: Alphabet, words: Iterable[WordLike]) -> "Nfa":
        out = cls.empty(alphabet)
        for w in words:
            out = out.union(cls.word(alphabet, w))
        return out

    @classmethod
    def universal(cls, alphabet: Alphabet) -> "Nfa":
        return cls(alphabet, 1, [0], [0], [{a: {0} for a in alphabet}])

    # -- combinators (structural, ε-based) ---------------------------------

    def _shifted(self, offset: int):
        trans = [{a: {t + offset for t in ts} for a, ts in row.items()} for row in self.trans]
        eps = [{t + offset for t in e} for e in self.eps]
        return trans, eps

    def _same_alphabet(self, other: "Nfa") -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet!r} vs {other.alphabet!r}")

    def union(self, other: "Nfa") -> "Nfa":
        self._same_alphabet(other)
        n = self.n_states
        t1, e1 = self._shifted(0)
        t2, e2 = other._shifted(n)
        return Nfa(self.alphabet, n + other.n_states,
                   set(self.initial) | {q + n for q in other.initial},
                   set(self.accepting) | {q + n for q in other.accepting},
                   t1 + t2, e1 + e2)

    def concat(self, other: "Nfa") -> "Nfa":
        self._same_alphabet(other)
        n = self.n_states
        t1, e1 = self._shifted(0)
        t2, e2 = other._shifted(n)
        for q in self.accepting:
            e1[q] = set(e1[q]) | {p + n for p in other.initial}
        return Nfa(self.alphabet, n + other.n_states, self.initial,
                   {q + n for q in other.accepting}, t1 + t2, e1 + e2)

    def plus(self) -> "Nfa":
        trans, eps = self._shifted(0)
        for q in self.accepting:
            eps[q] = set(eps[q]) | set(self.initial)
        return Nfa(self.alphabet, self.n_states, self.initial, self.accepting, trans, eps)

    def star(self) -> "Nfa":
        # fresh accepting start state so that ε is accepted without
        # letting other initial states become accepting
        n = self.n_states
        trans, eps = self._shifted(0)
        for q in self.accepting:
            eps[q] = set(eps[q]) | {n}
        trans.append({})
        eps.append(set(self.initial))
        return Nfa(self.alphabet, n + 1, [n], {n}, trans, eps)

    def optional(self) -> "Nfa":
        return self.union(Nfa.epsilon(self.alphabet))

    # -- queries -------------------------------------------------------------

    def closure(self, states: Iterable[int]) -> FrozenSet[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for p in self.eps[q]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def step(self, states: FrozenSet[int], a: int) -> FrozenSet[int]:
        nxt = set()
        for q in states:
            ts = self.trans[q].get(a)
            if ts:
                nxt |= ts
        return self.closure(nxt)

    def accepts(self, w: WordLike) -> bool:
        cur = self.closure(self.initial)
        for a in w:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.accepting)


class Dfa:
    """Complete deterministic automaton; ``delta[q][a]`` is the successor."""

    __slots__ = ("alphabet", "n_states", "initial", "accepting", "delta")

    def __init__(self, alphabet: Alphabet, n_states: int, initial: int,
                 accepting: Iterable[int], delta: Sequence[Sequence[int]]):
        self.alphabet = alphabet
        self.n_states = n_states
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.delta = tuple(tuple(row) for row in delta)
        k = len(alphabet)
        if len(self.delta) != n_states:
            raise ValueError("transition table size does not match state count")
        for row in self.delta:
            if len(row) != k:
                raise ValueError("transition function must be total")
            for t in row:
                if not 0 <= t < n_states:
                    raise ValueError(f"state {t} out of range")
        if not 0 <= initial < n_states:
            raise ValueError("initial state out of range")

    def __repr__(self) -> str:
        return f"<Dfa {self.n_states} states over {list(self.alphabet.tokens)}>"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Dfa) and self.alphabet == other.alphabet
                and self.n_states == other.n_states and self.initial == other.initial
                and self.accepting == other.accepting and self.delta == other.delta)

    def __hash__(self) -> int:
        return hash((self.n_states, self.initial, self.accepting, self.delta))

    def run(self, w: WordLike, start: Optional[int] = None) -> int:
        q = self.initial if start is None else start
        delta = self.delta
        for a in w:
            q = delta[q][a]
        return q

    def accepts(self, w: WordLike) -> bool:
        return self.run(w) in self.accepting

    def to_nfa(self) -> Nfa:
        trans = [{a: {t} for a, t in enumerate(row)} for row in self.delta]
        return Nfa(self.alphabet, self.n_states, [self.initial], self.accepting, trans)

    def coreachable(self) -> FrozenSet[int]:
        """States from which some accepting state is reachable."""
        rev = [set() for _ in range(self.n_states)]
        for q, row in enumerate(self.delta):
            for t in row:
                rev[t].add(q)
        seen = set(self.accepting)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for p in rev[q]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)


Automaton = Union[Nfa, Dfa]


def as_dfa(x: Automaton) -> Dfa:
    if isinstance(x, Dfa):
        return x
    return determinize(x)


def as_nfa(x: Automaton) -> Nfa:
    if isinstance(x, Nfa):
        return x
    return x.to_nfa()


def determinize(n: Nfa) -> Dfa:
    """Subset construction; the empty subset becomes the sink."""
    if isinstance(n, Dfa):
        return n
    k = len(n.alphabet)
    start = n.closure(n.initial)
    index: Dict[FrozenSet[int], int] = {start: 0}
    order = [start]
    delta: List[List[int]] = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for a in range(k):
            nxt = n.step(cur, a)
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        delta.append(row)
        i += 1
    accepting = [j for j, s in enumerate(order) if s & n.accepting]
    return Dfa(n.alphabet, len(order), 0, accepting, delta)


def _renumber_bfs(d: Dfa, classes: Optional[Sequence[int]] = None) -> Dfa:
    """Quotient by ``classes`` (default: identity) and renumber reachable
    states breadth-first in symbol order."""
    if classes is None:
        classes = list(range(d.n_states))
    rep: Dict[int, int] = {}
    for q in range(d.n_states):
        rep.setdefault(classes[q], q)
    k = len(d.alphabet)
    start = classes[d.initial]
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        q = rep[order[i]]
        row = []
        for a in range(k):
            c = classes[d.delta[q][a]]
            j = index.get(c)
            if j is None:
                j = index[c] = len(order)
                order.append(c)
            row.append(j)
        delta.append(row)
        i += 1
    accepting = [j for j, c in enumerate(order) if rep[c] in d.accepting]
    return Dfa(d.alphabet, len(order), 0, accepting, delta)


def minimize(d: Automaton) -> Dfa:
    """Moore partition refinement followed by canonical BFS numbering."""
    d = _renumber_bfs(as_dfa(d))
    k = len(d.alphabet)
    classes = [1 if q in d.accepting else 0 for q in range(d.n_states)]
    n_classes = len(set(classes))
    while True:
        keys = {}
        new = []
        for q in range(d.n_states):
            key = (classes[q],) + tuple(classes[d.delta[q][a]] for a in range(k))
            new.append(keys.setdefault(key, len(keys)))
        if len(keys) == n_classes:
            break
        classes, n_classes = new, len(keys)
    return _renumber_bfs(d, classes)


def _product(a: Dfa, b: Dfa, accept) -> Dfa:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet!r} vs {b.alphabet!r}")
    k = len(a.alphabet)
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for s in range(k):
            nxt = (a.delta[p][s], b.delta[q][s])
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        delta.append(row)
        i += 1
    acc = [j for j, (p, q) in enumerate(order) if accept(p in a.accepting, q in b.accepting)]
    return Dfa(a.alphabet, len(order), 0, acc, delta)


def complement(a: Automaton) -> Dfa:
    d = as_dfa(a)
    return minimize(Dfa(d.alphabet, d.n_states, d.initial,
                        set(range(d.n_states)) - d.accepting, d.delta))


_OPS = {
    "union": lambda x, y: x or y,
    "intersection": lambda x, y: x and y,
    "difference": lambda x, y: x and not y,
}


def combine(op: str, a: Automaton, b: Optional[Automaton] = None) -> Dfa:
    """Boolean combination, minimized.  ``complement`` ignores ``b``."""
    if op == "complement":
        return complement(a)
    try:
        f = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    if b is None:
        raise ValueError(f"{op} needs two operands")
    return minimize(_product(as_dfa(a), as_dfa(b), f))


def union(a: Automaton, b: Automaton) -> Dfa:
    return combine("union", a, b)


def intersection(a: Automaton, b: Automaton) -> Dfa:
    return combine("intersection", a, b)


def difference(a: Automaton, b: Automaton) -> Dfa:
    return combine("difference", a, b)


def mirror_language(n: Automaton) -> Nfa:
    """Reverse every transition and swap initial/accepting states."""
    n = as_nfa(n)
    trans = [dict() for _ in range(n.n_states)]
    eps = [set() for _ in range(n.n_states)]
    for q in range(n.n_states):
        for a, ts in n.trans[q].items():
            for t in ts:
                trans[t].setdefault(a, set()).add(q)
        for t in n.eps[q]:
            eps[t].add(q)
    return Nfa(n.alphabet, n.n_states, n.accepting, n.initial, trans, eps)


def membership(d: Automaton, w: WordLike) -> bool:
    alph = getattr(w, "alphabet", None)
    if alph is not None and alph != d.alphabet:
        raise AlphabetMismatch(f"{alph!r} vs {d.alphabet!r}")
    return d.accepts(w)


def is_empty(a: Automaton) -> bool:
    d = as_dfa(a)
    return d.initial not in d.coreachable()


def is_finite(a: Automaton) -> bool:
    """True iff the language is finite (no live cycle)."""
    d = minimize(a)
    live = d.coreachable()
    # reachable states are all states after minimize; keep live ones
    color = {}

    def has_cycle(q) -> bool:
        stack = [(q, iter(set(d.delta[q])))]
        color[q] = 1
        while stack:
            node, it = stack[-1]
            for t in it:
                if t not in live:
                    continue
                c = color.get(t, 0)
                if c == 1:
                    return True
                if c == 0:
                    color[t] = 1
                    stack.append((t, iter(set(d.delta[t]))))
                    break
            else:
                color[node] = 2
                stack.pop()
        return False

    for q in range(d.n_states):
        if q in live and color.get(q, 0) == 0 and has_cycle(q):
            return False
    return True


def equivalent(a: Automaton, b: Automaton) -> bool:
    return minimize(a) == minimize(b)


# -- congruence signatures -------------------------------------------------

def signature(d: Dfa, w: WordLike) -> Signature:
    """State transformation induced by ``w``: ``q -> delta*(q, w)``."""
    delta = d.delta
    out = []
    for q in range(d.n_states):
        for a in w:
            q = delta[q][a]
        out.append(q)
    return tuple(out)


def compose(s1: Signature, s2: Signature) -> Signature:
    """Signature of ``w1·w2`` from those of ``w1`` and ``w2``."""
    return tuple(s2[q] for q in s1)


def signatures_equal(s1: Signature, s2: Signature) -> bool:
    return tuple(s1) == tuple(s2)


def suffix_signatures(d: Dfa, w: WordLike) -> List[Signature]:
    """Signatures of all suffixes ``w[i:]`` for ``i = 0..len(w)``."""
    n = len(w)
    sigs: List[Signature] = [()] * (n + 1)
    cur = tuple(range(d.n_states))
    sigs[n] = cur
    for i in range(n - 1, -1, -1):
        col = [row[w[i]] for row in d.delta]
        cur = tuple(cur[col[q]] for q in range(d.n_states))
        sigs[i] = cur
    return sigs


def monoid_size(d: Dfa, cap: int = 20000) -> Optional[int]:
    """Size of the transition monoid by closure; None when above ``cap``."""
    k = len(d.alphabet)
    gens = [tuple(d.delta[q][a] for q in range(d.n_states)) for a in range(k)]
    ident = tuple(range(d.n_states))
    seen = {ident}
    queue = deque([ident])
    while queue:
        s = queue.popleft()
        for g in gens:
            t = compose(s, g)
            if t not in seen:
                seen.add(t)
                if len(seen) > cap:
                    return None
                queue.append(t)
    return len(seen)


def size_bounds(d: Automaton, cap: int = 20000) -> Tuple[int, int]:
    """``(n_R, k_R)``: monoid size (or ``m**m`` above the cap) and the
    state count of the minimized DFA."""
    m = minimize(d)
    n = monoid_size(m, cap)
    if n is None:
        n = m.n_states ** m.n_states
    return n, m.n_states


# -- language transforms ---------------------------------------------------

def suffix_language(n: Automaton, k: int = 0, strict: bool = False) -> Nfa:
    """Suffixes left after removing at least ``k`` (``> k`` if strict)
    leading letters from words of ``n``.

    Product of ``n`` with a saturating removal counter: in the removing
    phase each letter edge of ``n`` becomes an ε-move that bumps the counter;
    once the counter is saturated the automaton may switch to reading.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = as_nfa(n)
    need = k + 1 if strict else k
    m = n.n_states
    width = need + 1

    def rem(q, c):
        return q * width + c

    def rd(q):
        return m * width + q

    total = m * width + m
    trans = [dict() for _ in range(total)]
    eps = [set() for _ in range(total)]
    for q in range(m):
        for c in range(width):
            s = rem(q, c)
            for t in n.eps[q]:
                eps[s].add(rem(t, c))
            c2 = min(c + 1, need)
            for a, ts in n.trans[q].items():
                for t in ts:
                    eps[s].add(rem(t, c2))
            if c == need:
                eps[s].add(rd(q))
        s = rd(q)
        for t in n.eps[q]:
            eps[s].add(rd(t))
        for a, ts in n.trans[q].items():
            trans[s][a] = {rd(t) for t in ts}
    initial = [rem(q, 0) for q in n.initial]
    accepting = [rd(q) for q in n.accepting]
    return Nfa(n.alphabet, total, initial, accepting, trans, eps)


def strip_short(n: Automaton, M: int) -> Nfa:
    """Words of ``n`` strictly longer than ``M``."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    n = as_nfa(n)
    width = M + 2
    total = n.n_states * width
    trans = [dict() for _ in range(total)]
    eps = [set() for _ in range(total)]
    for q in range(n.n_states):
        for c in range(width):
            s = q * width + c
            c2 = min(c + 1, M + 1)
            for t in n.eps[q]:
                eps[s].add(t * width + c)
            for a, ts in n.trans[q].items():
                trans[s][a] = {t * width + c2 for t in ts}
    initial = [q * width for q in n.initial]
    accepting = [q * width + M + 1 for q in n.accepting]
    return Nfa(n.alphabet, total, initial, accepting, trans, eps)


def concat_star(n: Automaton, syms: Iterable[int]) -> Nfa:
    """``L(n) · S*`` for a set of symbols ``S``."""
    n = as_nfa(n)
    return n.concat(Nfa.symbols(n.alphabet, syms).star())


def reembed(n: Automaton, alphabet: Alphabet, mapping: Optional[Sequence[int]] = None) -> Nfa:
    """Relabel an automaton onto a larger alphabet (symbol ``a`` becomes
    ``mapping[a]``, identity by default)."""
    n = as_nfa(n)
    if mapping is None:
        if alphabet.tokens[: len(n.alphabet)] != n.alphabet.tokens:
            raise AlphabetMismatch("target alphabet does not extend source alphabet")
        mapping = list(range(len(n.alphabet)))
    trans = [{mapping[a]: ts for a, ts in row.items()} for row in n.trans]
    return Nfa(alphabet, n.n_states, n.initial, n.accepting, trans, n.eps)


# -- enumeration -----------------------------------------------------------

def _live_table(d: Dfa, max_len: int) -> List[FrozenSet[int]]:
    """``live[r]``: states that accept some word of length exactly ``r``."""
    live = [frozenset(d.accepting)]
    for _ in range(max_len):
        prev = live[-1]
        live.append(frozenset(q for q in range(d.n_states)
                              if any(t in prev for t in d.delta[q])))
    return live


def enumerate_words(d: Automaton, max_len: int) -> Iterator[Word]:
    """Words of ``L(d)`` up to ``max_len`` in length-then-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    d = as_dfa(d)
    live = _live_table(d, max_len)
    k = len(d.alphabet)
    for length in range(max_len + 1):
        if d.initial not in live[length]:
            continue
        # iterative DFS, children in symbol order
        prefix: List[int] = []
        stack = [(d.initial, 0)]
        while stack:
            q, a = stack[-1]
            depth = len(stack) - 1
            if depth == length:
                yield Word(prefix, d.alphabet)
                stack.pop()
                if prefix:
                    prefix.pop()
                continue
            rem = length - depth - 1
            while a < k and d.delta[q][a] not in live[rem]:
                a += 1
            if a == k:
                stack.pop()
                if prefix:
                    prefix.pop()
                continue
            stack[-1] = (q, a + 1)
            prefix.append(a)
            stack.append((d.delta[q][a], 0))


# public alias; the short name would shadow the builtin inside
# this module
enumerate_language = enumerate_words


def all_words(alphabet: Alphabet, max_len: int) -> Iterator[Tuple[int, ...]]:
    """Every word of length <= max_len, length-lex order."""
    from itertools import product
    k = len(alphabet)
    for n in range(max_len + 1):
        yield from product(range(k), repeat=n)
