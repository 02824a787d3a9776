"""Controlled bad sequences and the length function H.

A sequence x_1, ..., x_l of words is n-good when it has an increasing
(embedding) subsequence of length n, n-bad otherwise, and k-controlled when
|x_i| <= i·k for every i (1-based).  H(n, k, s) is the depth of the tree of
all n-bad k-controlled sequences over an s-letter alphabet; the tree is
walked literally, with no memoization across branches.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .words import _embeds

Word = Tuple[int, ...]


def is_n_good(seq: Sequence[Sequence[int]], n: int) -> bool:
    """True iff seq has an embedding-increasing subsequence of length n."""
    if n <= 0:
        return True
    best: List[int] = []
    for j, x in enumerate(seq):
        b = 1 + max((best[i] for i in range(j) if _embeds(seq[i], x)), default=0)
        if b >= n:
            return True
        best.append(b)
    return False


def is_controlled(seq: Sequence[Sequence[int]], k: int) -> bool:
    return all(len(x) <= i * k for i, x in enumerate(seq, 1))


def words_up_to(s: int, max_len: int) -> List[Word]:
    out: List[Word] = []
    for m in range(max_len + 1):
        out.extend(product(range(s), repeat=m))
    return out


@dataclass(frozen=True)
class HResult:
    """``value`` is H(n, k, s), or None when the node budget ran out."""

    n: int
    k: int
    gamma_size: int
    value: Optional[int]
    nodes: int

    @property
    def budget_exceeded(self) -> bool:
        return self.value is None


class _Budget(Exception):
    pass


def h_bound(n: int, k: int, gamma_size: int, node_budget: int = 1_000_000) -> HResult:
    """Longest n-bad k-controlled sequence over ``gamma_size`` letters."""
    if n < 0 or k < 0 or gamma_size < 1:
        raise ValueError("need n, k >= 0 and gamma_size >= 1")
    if n <= 1:
        # every nonempty sequence is 1-good (and 0-good)
        return HResult(n, k, gamma_size, 0, 1)
    nodes = 0

    def candidates(i: int) -> Iterator[Word]:
        for m in range(i * k + 1):
            yield from product(range(gamma_size), repeat=m)

    seq: List[Word] = []
    chain: List[int] = []  # longest increasing subsequence ending at each element

    def depth() -> int:
        # every examined candidate counts, so wide levels hit the budget too
        nonlocal nodes
        i = len(seq) + 1
        best = len(seq)
        for x in candidates(i):
            nodes += 1
            if nodes > node_budget:
                raise _Budget
            c = 1 + max((chain[j] for j in range(len(seq)) if _embeds(seq[j], x)), default=0)
            if c >= n:
                continue
            seq.append(x)
            chain.append(c)
            best = max(best, depth())
            seq.pop()
            chain.pop()
        return best

    try:
        value = depth()
    except _Budget:
        return HResult(n, k, gamma_size, None, nodes)
    return HResult(n, k, gamma_size, value, nodes)


def bad_sequences(n: int, k: int, gamma_size: int, max_depth: Optional[int] = None) -> Iterator[Tuple[Word, ...]]:
    """Every nonempty n-bad k-controlled sequence (tree nodes, preorder)."""
    seq: List[Word] = []

    def walk():
        i = len(seq) + 1
        if max_depth is not None and i > max_depth:
            return
        for x in words_up_to(gamma_size, i * k):
            seq.append(x)
            if not is_n_good(seq, n):
                yield tuple(seq)
                yield from walk()
            seq.pop()

    yield from walk()


@dataclass
class MonotonicityReport:
    values: Dict[Tuple[int, int, int], Optional[int]]
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def monotonicity_probe(ns: Sequence[int], ks: Sequence[int], ss: Sequence[int],
                       node_budget: int = 1_000_000) -> MonotonicityReport:
    """Compute H on a grid and check it is nondecreasing in each argument
    (comparisons involving an uncomputed point are skipped)."""
    values: Dict[Tuple[int, int, int], Optional[int]] = {}
    for n in ns:
        for k in ks:
            for s in ss:
                values[(n, k, s)] = h_bound(n, k, s, node_budget).value
    violations = []
    for (n, k, s), h in values.items():
        if h is None:
            continue
        for nb in ((n + 1, k, s), (n, k + 1, s), (n, k, s + 1)):
            h2 = values.get(nb)
            if h2 is not None and h2 < h:
                violations.append(f"H{(n, k, s)}={h} > H{nb}={h2}")
    return MonotonicityReport(values, violations)
