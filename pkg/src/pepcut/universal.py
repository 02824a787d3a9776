"""Universal questions: is every (or almost every) σ in R a solution?

Partial codirectness is eliminated by reducing to a plain "almost all"
instance over the union of three languages:

* R itself (whole-word failures),
* suffixes of R that lie in R' (infinitely many distinct bad suffixes),
* suffixes of R left after removing more than k_R letters, intersected
  with R' and padded with a neutral letter (one bad suffix shared by
  infinitely many words of R).

The checkers here are bounded: they enumerate R up to a length and report
the first counterexample.  A counterexample is upgraded to an infinite
family when it contains a loop of R's DFA whose u-image is longer than its
v-image; pumping that loop keeps the word in R and keeps u longer than v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import automata
from .automata import Nfa, minimize
from .pep import (CODIR, DIR, PLAIN, Morphism, PepError, PepInstance, check_solution,
                  mirror_instance)
from .solver import CountResult
from .words import Alphabet, Word, _embeds


def fresh_token(alphabet: Alphabet, base: str = "z") -> str:
    if base not in alphabet:
        return base
    i = 1
    while f"{base}{i}" in alphabet:
        i += 1
    return f"{base}{i}"


def _with_neutral_letter(inst: PepInstance, token: str):
    sigma = inst.sigma.extend(token)
    u = inst.u.extended(sigma, [()])
    v = inst.v.extended(sigma, [()])
    return sigma, u, v, sigma.symbol(token)


def pad_forall_to_forall_inf(inst: PepInstance, token: Optional[str] = None) -> PepInstance:
    """Add a neutral letter z (u(z) = v(z) = ε) and pad R and R' with z*.

    Every σ in R becomes the infinite family σ·z^k with the same verdict, so
    "all σ are solutions" turns into "almost all σ are solutions".
    """
    if inst.variant not in (CODIR, DIR, PLAIN):
        raise PepError("padding applies to plain and partially (co)directed instances")
    if not inst.Rp_regular:
        raise PepError("padding needs a regular R'")
    token = token or fresh_token(inst.sigma)
    if token in inst.sigma:
        raise PepError(f"padding token {token!r} already in the alphabet")
    sigma, u, v, z = _with_neutral_letter(inst, token)
    R = automata.concat_star(automata.reembed(inst.R, sigma), [z])
    Rp = automata.concat_star(automata.reembed(inst.Rp, sigma), [z])
    return PepInstance(sigma, inst.gamma, u, v, minimize(R),
                       None if inst.variant == PLAIN else minimize(Rp), inst.variant)


@dataclass(frozen=True, eq=False)
class ForallReduction:
    """The plain instance whose "almost all" question answers the input's.

    ``whole``, ``suffixes`` and ``far_suffixes`` are the three parts before
    the union (over the input alphabet); ``pad_token`` is the neutral letter
    appended to the third part, or None when that part is empty.
    """

    output: PepInstance
    whole: object
    suffixes: object
    far_suffixes: object
    k_R: int
    pad_token: Optional[str]
    mirrored: bool = False


def reduce_to_forall_inf_pep(inst: PepInstance, k_R: Optional[int] = None,
                             token: Optional[str] = None) -> ForallReduction:
    """Reduce an "almost all" partially codirected instance to a plain one.

    ``k_R`` defaults to the state count of R's minimized DFA.  Directed
    instances are mirrored first; the plain question is mirror-invariant.
    """
    mirrored = inst.variant == DIR
    if mirrored:
        inst = mirror_instance(inst)
    if inst.variant not in (CODIR, PLAIN):
        raise PepError("reduction needs a plain or partially (co)directed instance")
    if not inst.Rp_regular:
        raise PepError("reduction needs a regular R'")
    if k_R is None:
        k_R = automata.size_bounds(inst.R)[1]
    all_suffixes = automata.suffix_language(inst.R, 0)
    far = automata.suffix_language(inst.R, k_R, strict=True)
    part2 = automata.intersection(all_suffixes, inst.Rp)
    part3 = automata.intersection(far, inst.Rp)
    if automata.is_empty(part3):
        sigma, u, v, pad = inst.sigma, inst.u, inst.v, None
        R = automata.union(inst.R, part2)
    else:
        pad = token or fresh_token(inst.sigma)
        if pad in inst.sigma:
            raise PepError(f"padding token {pad!r} already in the alphabet")
        sigma, u, v, z = _with_neutral_letter(inst, pad)
        lift = lambda n: automata.reembed(n, sigma)
        R = automata.union(automata.union(lift(inst.R), lift(part2)),
                           automata.concat_star(lift(part3), [z]))
    out = PepInstance(sigma, inst.gamma, u, v, minimize(R), None, PLAIN)
    return ForallReduction(out, inst.R, part2, part3, k_R, pad, mirrored)


def reduce_forall(inst: PepInstance, k_R: Optional[int] = None) -> ForallReduction:
    """The "all σ" question as an "almost all" plain instance (pad, then reduce)."""
    return reduce_to_forall_inf_pep(pad_forall_to_forall_inf(inst), k_R)


# -- witness classification -------------------------------------------------

def bad_suffixes(inst: PepInstance, sigma: Sequence[int]) -> List[int]:
    """Start indices i of suffixes σ[i:] in R' with u(σ[i:]) ⋢ v(σ[i:])."""
    out = []
    for i in range(len(sigma) + 1):
        tau = tuple(sigma[i:])
        if inst.Rp.accepts(tau) and not _embeds(inst.u(tau), inst.v(tau)):
            out.append(i)
    return out


def witness_types(inst: PepInstance, sigma: Sequence[int]) -> Tuple[bool, bool]:
    """(type 1, type 2) for a word of a partially codirected instance.

    Type 1: u(σ) ⋢ v(σ).  Type 2: some suffix in R' has u ⋢ v.
    """
    t1 = not _embeds(inst.u(sigma), inst.v(sigma))
    return t1, bool(bad_suffixes(inst, sigma))


# -- bounded checkers ----------------------------------------------------------

@dataclass(frozen=True)
class LoopCertificate:
    """σ = αβγ with β a nonempty loop of R's DFA, |u(σ)| > |v(σ)| and
    |u(β)| > |v(β)|: every αβ^kγ with k >= 1 is in R and is not a solution."""

    word: Tuple[int, ...]
    start: int
    end: int

    def pumped(self, k: int) -> Tuple[int, ...]:
        w = self.word
        return w[:self.start] + w[self.start:self.end] * k + w[self.end:]


def loop_certificate(inst: PepInstance, sigma: Sequence[int]) -> Optional[LoopCertificate]:
    sigma = tuple(sigma)
    if len(inst.u(sigma)) <= len(inst.v(sigma)):
        return None
    states = [inst.R.initial]
    for a in sigma:
        states.append(inst.R.delta[states[-1]][a])
    for j in range(1, len(sigma) + 1):
        for i in range(j - 1, -1, -1):
            if states[i] != states[j]:
                continue
            beta = sigma[i:j]
            if len(inst.u(beta)) > len(inst.v(beta)):
                return LoopCertificate(sigma, i, j)
    return None


def verify_loop_certificate(inst: PepInstance, cert: LoopCertificate, ks=(1, 2, 3, 4)) -> bool:
    for k in ks:
        w = cert.pumped(k)
        if not inst.R.accepts(w) or check_solution(inst, w).ok:
            return False
    return True


@dataclass(frozen=True)
class UniversalVerdict:
    """``kind`` is ``holds_up_to``, ``fails`` or ``fails_infinitely``.

    ``counterexamples`` counts non-solutions seen; for the "almost all"
    check a ``holds_up_to`` verdict may still have uncertified ones.
    """

    kind: str
    max_len: int
    counterexample: Optional[Word] = None
    certificate: Optional[LoopCertificate] = None
    counterexamples: int = 0


def non_solutions(inst: PepInstance, max_len: int):
    """Words of R up to max_len that are not solutions, length-lex order."""
    for w in automata.enumerate_words(inst.R, max_len):
        if not check_solution(inst, w).ok:
            yield w


def forall_check(inst: PepInstance, max_len: int) -> UniversalVerdict:
    """Is every σ in R of length <= max_len a solution?"""
    for w in non_solutions(inst, max_len):
        cert = loop_certificate(inst, w)
        kind = "fails_infinitely" if cert else "fails"
        return UniversalVerdict(kind, max_len, w, cert, 1)
    return UniversalVerdict("holds_up_to", max_len)


def forall_inf_check(inst: PepInstance, max_len: int) -> UniversalVerdict:
    """Bounded "almost all" check: fails only on a certified infinite family."""
    seen = 0
    for w in non_solutions(inst, max_len):
        seen += 1
        cert = loop_certificate(inst, w)
        if cert is not None:
            return UniversalVerdict("fails_infinitely", max_len, w, cert, seen)
    return UniversalVerdict("holds_up_to", max_len, counterexamples=seen)


def count_non_solutions(inst: PepInstance, max_len: int) -> CountResult:
    found = list(non_solutions(inst, max_len))
    for w in found:
        cert = loop_certificate(inst, w)
        if cert is not None:
            return CountResult("infinite", len(found), max_len, cert, witnesses=tuple(found))
    if automata.is_empty(automata.strip_short(inst.R, max_len)):
        return CountResult("exact", len(found), max_len, None,
                           f"R has no word longer than {max_len}", tuple(found))
    return CountResult("finite_at_least", len(found), max_len, witnesses=tuple(found))
