"""Regex syntax for constraint languages.

Grammar (tokens are whitespace separated; operator characters may also be
glued to tokens, e.g. ``(0|1)+``)::

    union  := concat ('|' concat)*
    concat := postfix+
    postfix:= atom ('*' | '+' | '?')*
    atom   := TOKEN | 'eps' | 'empty' | '(' union ')'

Precedence is postfix > concatenation > union.  A chunk that is exactly a
declared alphabet token is always read as that token, so tokens may contain
operator characters as long as they are written with surrounding spaces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .automata import Dfa, Nfa, minimize
from .words import Alphabet

OPERATORS = "|*+?()"
KEYWORDS = ("eps", "empty")


class RegexError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at token {position}")
        self.position = position


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Sym:
    symbol: int


@dataclass(frozen=True)
class Cat:
    parts: Tuple


@dataclass(frozen=True)
class Alt:
    parts: Tuple


@dataclass(frozen=True)
class Star:
    body: object


@dataclass(frozen=True)
class Plus:
    body: object


@dataclass(frozen=True)
class Opt:
    body: object


def tokenize(text: str, alphabet: Alphabet) -> List[str]:
    out: List[str] = []
    for chunk in text.split():
        if chunk in alphabet or chunk in KEYWORDS:
            out.append(chunk)
            continue
        buf = ""
        for ch in chunk:
            if ch in OPERATORS:
                if buf:
                    out.append(buf)
                    buf = ""
                out.append(ch)
            else:
                buf += ch
        if buf:
            out.append(buf)
    return out


class _Parser:
    def __init__(self, toks: List[str], alphabet: Alphabet):
        self.toks = toks
        self.pos = 0
        self.alphabet = alphabet

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def union(self):
        parts = [self.concat()]
        while self.peek() == "|":
            self.take()
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else Alt(tuple(parts))

    def concat(self):
        parts = []
        while self.peek() is not None and self.peek() not in ("|", ")"):
            parts.append(self.postfix())
        if not parts:
            raise RegexError("expected expression", self.pos)
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def postfix(self):
        node = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.take()
            node = {"*": Star, "+": Plus, "?": Opt}[op](node)
        return node

    def atom(self):
        at = self.pos
        tok = self.take()
        if tok is None:
            raise RegexError("unexpected end of input", at)
        if tok == "(":
            node = self.union()
            if self.take() != ")":
                raise RegexError("expected ')'", self.pos - 1)
            return node
        if tok in ("*", "+", "?", "|", ")"):
            raise RegexError(f"unexpected {tok!r}", at)
        if tok == "eps":
            return Eps()
        if tok == "empty":
            return Empty()
        if tok not in self.alphabet:
            raise RegexError(f"unknown token {tok!r}", at)
        return Sym(self.alphabet.symbol(tok))


def parse(text: str, alphabet: Alphabet):
    """Parse regex text into an AST."""
    toks = tokenize(text, alphabet)
    if not toks:
        raise RegexError("empty regex", 0)
    p = _Parser(toks, alphabet)
    node = p.union()
    if p.peek() is not None:
        raise RegexError(f"unexpected {p.peek()!r}", p.pos)
    return node


def compile_ast(node, alphabet: Alphabet) -> Nfa:
    if isinstance(node, Empty):
        return Nfa.empty(alphabet)
    if isinstance(node, Eps):
        return Nfa.epsilon(alphabet)
    if isinstance(node, Sym):
        return Nfa.symbol(alphabet, node.symbol)
    if isinstance(node, Cat):
        out = compile_ast(node.parts[0], alphabet)
        for p in node.parts[1:]:
            out = out.concat(compile_ast(p, alphabet))
        return out
    if isinstance(node, Alt):
        out = compile_ast(node.parts[0], alphabet)
        for p in node.parts[1:]:
            out = out.union(compile_ast(p, alphabet))
        return out
    if isinstance(node, Star):
        return compile_ast(node.body, alphabet).star()
    if isinstance(node, Plus):
        return compile_ast(node.body, alphabet).plus()
    if isinstance(node, Opt):
        return compile_ast(node.body, alphabet).optional()
    raise TypeError(f"not a regex node: {node!r}")


def parse_regex(text: str, alphabet: Alphabet) -> Nfa:
    """Regex text to an automaton accepting its denotation."""
    return compile_ast(parse(text, alphabet), alphabet)


# -- printing --------------------------------------------------------------

def _cat(*parts):
    flat = []
    for p in parts:
        if isinstance(p, Empty):
            return Empty()
        if isinstance(p, Eps):
            continue
        if isinstance(p, Cat):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return Eps()
    return flat[0] if len(flat) == 1 else Cat(tuple(flat))


def _alt(*parts):
    flat = []
    for p in parts:
        if isinstance(p, Empty):
            continue
        items = p.parts if isinstance(p, Alt) else (p,)
        for q in items:
            if q not in flat:
                flat.append(q)
    if not flat:
        return Empty()
    if len(flat) == 2 and Eps() in flat:
        other = flat[0] if flat[1] == Eps() else flat[1]
        if isinstance(other, (Star, Opt)):
            return other
        if isinstance(other, Plus):
            return Star(other.body)
        return Opt(other)
    return flat[0] if len(flat) == 1 else Alt(tuple(flat))


def _star(p):
    if isinstance(p, (Empty, Eps)):
        return Eps()
    if isinstance(p, (Star, Plus, Opt)):
        return Star(p.body)
    return Star(p)


def to_text(node, alphabet: Alphabet) -> str:
    def go(n, prec):
        # prec: 0 union, 1 concat, 2 postfix operand
        if isinstance(n, Empty):
            return "empty"
        if isinstance(n, Eps):
            return "eps"
        if isinstance(n, Sym):
            return alphabet.tokens[n.symbol]
        if isinstance(n, Alt):
            s = " | ".join(go(p, 1) for p in n.parts)
            return f"( {s} )" if prec > 0 else s
        if isinstance(n, Cat):
            s = " ".join(go(p, 2) for p in n.parts)
            return f"( {s} )" if prec > 1 else s
        op = {Star: "*", Plus: "+", Opt: "?"}[type(n)]
        return f"{go(n.body, 2)} {op}"
    return go(node, 0)


def dfa_to_ast(d: Dfa):
    """State elimination on the minimized, trimmed DFA (deterministic)."""
    d = minimize(d)
    live = d.coreachable()
    if d.initial not in live:
        return Empty()
    states = [q for q in range(d.n_states) if q in live]
    S, F = -1, -2
    edges = {}

    def add(i, j, r):
        edges[(i, j)] = _alt(edges.get((i, j), Empty()), r)

    add(S, d.initial, Eps())
    for q in states:
        for a, t in enumerate(d.delta[q]):
            if t in live:
                add(q, t, Sym(a))
        if q in d.accepting:
            add(q, F, Eps())
    remaining = [S, F] + states
    for q in sorted(states, reverse=True):
        loop = _star(edges.pop((q, q), Empty()))
        ins = [(i, r) for (i, j), r in edges.items() if j == q and i != q]
        outs = [(j, r) for (i, j), r in edges.items() if i == q and j != q]
        for i, _ in ins:
            del edges[(i, q)]
        for j, _ in outs:
            del edges[(q, j)]
        for i, r1 in ins:
            for j, r2 in outs:
                add(i, j, _cat(r1, loop, r2))
        remaining.remove(q)
    return edges.get((S, F), Empty())


def dfa_to_regex(d, alphabet: Alphabet = None) -> str:
    d = minimize(d)
    return to_text(dfa_to_ast(d), alphabet or d.alphabet)
