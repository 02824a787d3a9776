"""Bounded-complete search for PEP solutions, counting, and ∃∞ certificates.

The search is a depth-first walk of Σ* in symbol order, driven by the
minimized DFA of R.  Two prunings are applied:

* liveness: a branch is abandoned when no accepting state of R is reachable
  within the remaining length budget;
* prefix embedding: for variants that constrain prefixes (``dir_partial``
  on prefixes in R', ``co_and_dir`` on every prefix) a prefix that already
  violates ``u(τ) ⊑ v(τ)`` can never be extended into a solution.

Prefix embedding is tracked incrementally with a greedy two-pointer match,
which is exact because the leftmost embedding is optimal.

For ``co_and_dir`` the walk also carries, for every start position, what is
left of ``u(suffix)`` after greedily matching it into ``v(suffix)``.  Starts
whose image is fully matched are dropped: the start at the current position
imposes a stronger condition on the rest of the word.  Together with the R
state and the prefix remainder this determines every future check exactly,
so subtrees that produced no solution are memoised by that key.  A pending
remainder also bounds the rest of the word from below: it must embed in the
v-image of a path to acceptance, and the shortest such path is found by a
breadth-first search over (R state, matched length).
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from . import automata
from .automata import Dfa
from .pep import (CODIR, COANDDIR, DIR, PLAIN, ColoredSolution, PepInstance, PumpCertificate,
                  check_solution, find_pump_pair, pump)
from .words import Word, _embeds, length_lex_key

DEFAULT_NODE_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"node budget exhausted after {nodes} expansions")
        self.nodes = nodes


@dataclass(frozen=True)
class SolveResult:
    """``kind`` is ``found``, ``none_up_to``, ``none_certified`` or
    ``budget_exceeded``."""

    kind: str
    witness: Optional[Word] = None
    max_len: int = 0
    bound: Optional[int] = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.kind == "found"


@dataclass(frozen=True)
class CountResult:
    """``kind`` is ``infinite``, ``finite_at_least``, ``exact`` or
    ``budget_exceeded``.

    ``n`` counts the solutions (or non-solutions) seen up to ``max_len``;
    ``certificate`` backs ``infinite``; ``justification`` explains ``exact``.
    """

    kind: str
    n: int = 0
    max_len: int = 0
    certificate: object = None
    justification: Optional[str] = None
    witnesses: Tuple[Word, ...] = ()


def _distance_to_accept(d: Dfa) -> List[float]:
    rev = [[] for _ in range(d.n_states)]
    for q, row in enumerate(d.delta):
        for t in row:
            rev[t].append(q)
    inf = float("inf")
    dist = [inf] * d.n_states
    queue = deque()
    for q in d.accepting:
        dist[q] = 0
        queue.append(q)
    while queue:
        q = queue.popleft()
        for p in rev[q]:
            if dist[p] == inf:
                dist[p] = dist[q] + 1
                queue.append(p)
    return dist


_LOOKAHEAD = 12


class _Search:
    """Shared DFS machinery for :func:`solve` and :func:`iter_solutions`."""

    def __init__(self, inst: PepInstance, max_len: int, node_budget: int):
        self.inst = inst
        self.max_len = max_len
        self.limit = max_len
        self.budget = node_budget
        self.nodes = 0
        self.accepted = 0
        self.R = inst.R
        self.dist = _distance_to_accept(inst.R)
        self.k = len(inst.sigma)
        self.u = inst.u.images
        self.v = inst.v.images
        self.prefix_mode = None
        self.memo = inst.variant == COANDDIR
        self.failed = {}
        self.image_cache = {}
        self.need_cache = {}
        # letters with equal v-images are interchangeable for the lookahead
        groups = {}
        for a in range(len(inst.sigma)):
            groups.setdefault(tuple(self.v[a]), []).append(a)
        self.v_groups = list(groups)
        self.succ_bits = [[sum(set(1 << row[a] for a in members)) for row in inst.R.delta]
                          for members in groups.values()]
        self.acc_mask = sum(1 << p for p in set(inst.R.accepting))
        self.Kv = max(inst.v.K, 1)
        if inst.variant == COANDDIR:
            self.prefix_mode = "all"
        elif inst.variant == DIR:
            self.prefix_mode = "regular" if inst.Rp_regular else "predicate"

    def run(self, on_accept):
        """DFS; ``on_accept(word)`` is called on every accepted candidate that
        passes the full check.  It may lower ``self.limit``."""
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * self.max_len + 1000))
        word: List[int] = []
        U: List[int] = []
        V: List[int] = []
        rp = self.inst.Rp if self.prefix_mode == "regular" else None
        rp_state = rp.initial if rp is not None else None
        self._dfs(self.R.initial, word, U, V, 0, 0, rp_state, (), on_accept)

    def _prefix_ok(self, word, rp_state, matched_all: bool) -> bool:
        mode = self.prefix_mode
        if mode is None or matched_all:
            return True
        if mode == "all":
            return False
        if mode == "regular":
            return rp_state not in self.inst.Rp.accepting
        return not self.inst.Rp.accepts(tuple(word))

    def _suffix_step(self, rest, a):
        """Remainders after reading ``a``, reduced to the ⊑-maximal ones."""
        ua, va = self.u[a], self.v[a]
        out = set()
        for x in rest + ((),):
            x = x + ua
            m = 0
            for c in va:
                if m < len(x) and x[m] == c:
                    m += 1
            if m < len(x):
                out.add(x[m:])
        keep = [x for x in out if not any(x != y and _embeds(x, y) for y in out)]
        return tuple(sorted(keep))

    def _dfs(self, q, word, U, V, i, j, rp_state, rest, on_accept):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)
        depth = len(word)
        key = None
        if self.memo:
            room = self.limit - depth
            if any(len(x) > room * self.Kv or self._need_prefix(q, x, room) > room
                   for x in rest):
                return
            key = (q, tuple(U[i:]) if i < len(U) else None, tuple(V[j:]), rest)
            if self.failed.get(key, -1) >= room:
                return
            found_before = self.accepted
        if q in self.R.accepting and not rest:
            w = tuple(word)
            if check_solution(self.inst, w).ok:
                self.accepted += 1
                on_accept(w)
        dist = self.dist
        delta = self.R.delta[q]
        for a in range(self.k):
            t = delta[a]
            if depth + 1 + dist[t] > self.limit:
                continue
            # extend the greedy u-into-v matching
            nu, nv = len(U), len(V)
            U.extend(self.u[a])
            V.extend(self.v[a])
            ni, nj = i, j
            lu, lv = len(U), len(V)
            while ni < lu and nj < lv:
                if U[ni] == V[nj]:
                    ni += 1
                nj += 1
            word.append(a)
            rp2 = None
            if self.prefix_mode == "regular":
                rp2 = self.inst.Rp.delta[rp_state][a]
            if self._prefix_ok(word, rp2, ni == lu):
                rest2 = self._suffix_step(rest, a) if self.memo else ()
                self._dfs(t, word, U, V, ni, nj, rp2, rest2, on_accept)
            word.pop()
            del U[nu:]
            del V[nv:]
        if key is not None and self.accepted == found_before:
            self.failed[key] = max(self.failed.get(key, -1), room)

    def _need_prefix(self, q, x, room):
        # a factor of x is a weaker demand, so this is still a lower bound
        if len(x) <= _LOOKAHEAD:
            return self._need_cached(q, x)
        return max(self._need_cached(q, x[:_LOOKAHEAD]), self._need_cached(q, x[-_LOOKAHEAD:]))

    def _need_cached(self, q, x):
        key = (q, x)
        got = self.need_cache.get(key)
        if got is None:
            got = self._need(q, x, self.max_len)
            self.need_cache[key] = got
        return got

    def _need(self, q, x, bound):
        """Fewest letters f with q·f accepting and x ⊑ v(f), or ``bound + 1``
        if that exceeds ``bound``.  Layered BFS over sets of R-states (as
        bitmasks), one set per matched prefix length of x."""
        n = len(x)
        adv = []
        for k in range(n + 1):
            row = []
            for va in self.v_groups:
                m = k
                for c in va:
                    if m < n and x[m] == c:
                        m += 1
                row.append(m)
            adv.append(row)
        layer = [0] * (n + 1)
        layer[0] = 1 << q
        seen = list(layer)
        acc = self.acc_mask
        image = self._image
        for steps in range(bound + 1):
            if layer[n] & acc:
                return steps
            new = [0] * (n + 1)
            for k in range(n + 1):
                mask = layer[k]
                if mask:
                    row = adv[k]
                    for g in range(len(row)):
                        new[row[g]] |= image(mask, g)
            done = 0
            for k in range(n, -1, -1):
                # reaching further into x is never worse
                new[k] &= ~(seen[k] | done)
                seen[k] |= new[k]
                done |= seen[k]
            if not any(new):
                break
            layer = new
        return bound + 1

    def _image(self, mask, a):
        key = (mask, a)
        got = self.image_cache.get(key)
        if got is None:
            got = 0
            col = self.succ_bits[a]
            p = 0
            m = mask
            while m:
                if m & 1:
                    got |= col[p]
                m >>= 1
                p += 1
            self.image_cache[key] = got
        return got


def solve(inst: PepInstance, max_len: int, node_budget: int = DEFAULT_NODE_BUDGET,
          hbound_budget: int = 200000) -> SolveResult:
    """Length-lex least solution of length <= max_len."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    search = _Search(inst, max_len, node_budget)
    best: List[Tuple[int, ...]] = []

    def on_accept(w):
        best[:] = [w]
        search.limit = len(w) - 1

    try:
        search.run(on_accept)
    except BudgetExceeded as e:
        return SolveResult("budget_exceeded", max_len=max_len, nodes=e.nodes)
    if best:
        return SolveResult("found", Word(best[0], inst.sigma), max_len, nodes=search.nodes)
    bound = short_bound(inst, hbound_budget)
    if bound is not None and bound <= max_len:
        return SolveResult("none_certified", None, max_len, bound, search.nodes)
    return SolveResult("none_up_to", None, max_len, bound, search.nodes)


def iter_solutions(inst: PepInstance, max_len: int,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> List[Word]:
    """All solutions of length <= max_len, length-lex sorted."""
    search = _Search(inst, max_len, node_budget)
    found: List[Tuple[int, ...]] = []
    search.run(found.append)
    found.sort(key=length_lex_key)
    return [Word(w, inst.sigma) for w in found]


def brute_force_solutions(inst: PepInstance, max_len: int) -> List[Word]:
    """Reference enumeration: every word of Σ^{<=max_len} filtered by
    :func:`check_solution`."""
    return [Word(w, inst.sigma) for w in automata.all_words(inst.sigma, max_len)
            if check_solution(inst, w).ok]


# -- theoretical bounds ---------------------------------------------------

def length_bound(n: int, k: int, gamma_size: int, node_budget: int = 200000) -> Optional[int]:
    """``2·H(n, k, gamma_size)`` when the length function is computable
    within the budget."""
    from .higman import h_bound
    res = h_bound(n, k, gamma_size, node_budget)
    if res.value is None:
        return None
    return 2 * res.value


def congruence_index(inst: PepInstance) -> Optional[int]:
    """``n_R · n_R'`` for the oriented instance (None for non-regular R')."""
    o = inst._oriented()
    if not o.Rp_regular:
        return None
    nr, _ = automata.size_bounds(o.R)
    nrp, _ = automata.size_bounds(o.Rp)
    return nr * nrp


def short_bound(inst: PepInstance, node_budget: int = 200000) -> Optional[int]:
    """Length beyond which a solution can always be cut, if computable."""
    if inst.variant == COANDDIR:
        return None
    idx = congruence_index(inst)
    if idx is None:
        return None
    return length_bound(idx + 1, inst.u.K, len(inst.gamma), node_budget)


# -- counting and infinity -----------------------------------------------------

def _find_certificate(inst: PepInstance, sols) -> Optional[PumpCertificate]:
    if inst.variant == COANDDIR:
        return None
    if not inst._oriented().Rp_regular:
        return None
    for w in sols:
        colored = ColoredSolution(inst, w)
        cert = find_pump_pair(inst, colored)
        if cert is not None:
            # re-verify before reporting
            for k in (2, 3):
                pump(inst, colored, cert.a, cert.b, k)
            return cert
    return None


def infinite_check(inst: PepInstance, max_len: int,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[PumpCertificate]:
    """Pump certificate from some solution of length <= max_len, if any.

    Sound (a certificate proves infinitely many solutions) but incomplete:
    absence only means no certificate exists among these short solutions.
    """
    return _find_certificate(inst, iter_solutions(inst, max_len, node_budget))


def count(inst: PepInstance, max_len: int, node_budget: int = DEFAULT_NODE_BUDGET,
          hbound_budget: int = 200000) -> CountResult:
    try:
        sols = iter_solutions(inst, max_len, node_budget)
    except BudgetExceeded:
        return CountResult("budget_exceeded", max_len=max_len)
    cert = _find_certificate(inst, sols)
    if cert is not None:
        return CountResult("infinite", len(sols), max_len, cert, witnesses=tuple(sols))
    why = _no_long_solutions(inst, max_len, node_budget, hbound_budget)
    if why is not None:
        return CountResult("exact", len(sols), max_len, None, why, tuple(sols))
    return CountResult("finite_at_least", len(sols), max_len, witnesses=tuple(sols))


def _no_long_solutions(inst: PepInstance, M: int, node_budget: int, hbound_budget: int) -> Optional[str]:
    """Justification that no solution is longer than M, or None."""
    stripped = automata.strip_short(inst.R, M)
    if automata.is_empty(stripped):
        return f"R has no word longer than {M}"
    inst2 = inst.with_(R=automata.minimize(stripped), R_source=None)
    bound = short_bound(inst2, hbound_budget)
    if bound is None:
        return None
    try:
        res = solve(inst2, bound, node_budget, hbound_budget)
    except BudgetExceeded:
        return None
    if res.kind == "none_certified":
        return f"instance restricted to length > {M} has no solution up to its short bound {bound}"
    return None
