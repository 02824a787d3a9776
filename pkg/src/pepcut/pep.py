"""PEP instances, solution checking, index coloring, margins, cutting and
pumping.

All margin and cutting machinery works in the *codirect* orientation.
Instances of the direct variant are mirrored on entry
(:func:`color_indices` does this transparently) and every word handed back
to the caller is mirrored back, so callers only ever see words in their own
orientation.  Indices carried by :class:`ColoredSolution` and the
certificates refer to the oriented word ``colored.word``.

Notation: for a fixed word ``σ`` of length ``N`` and ``0 <= i <= j <= N``,
``u[i:j]`` below means ``u(σ[i:j])``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import automata
from .automata import Dfa, Nfa, minimize, suffix_signatures
from .words import (Alphabet, Word, WordLike, _embeds, longest_prefix_host,
                    longest_suffix_carrier, mirror, shortest_prefix_overflow,
                    shortest_suffix_host)

PLAIN = "plain"
DIR = "dir_partial"
CODIR = "codir_partial"
COANDDIR = "co_and_dir"
VARIANTS = (PLAIN, DIR, CODIR, COANDDIR)

BLUE = "blue"
RED = "red"


class PepError(ValueError):
    """Invalid instance or operation misuse."""


class CutError(PepError):
    """A cut or pump precondition does not hold."""


class MarginError(PepError):
    """Margin requested at an index of the wrong color."""


class MarginUndefined(PepError):
    """The left v-margin t_i does not exist at this index."""


class LemmaViolation(AssertionError):
    """A cutting/iteration lemma guarantee failed (a bug, never expected)."""


# -- morphisms -----------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """Symbol-to-word map Σ -> Γ*; ``images[a]`` is the image of symbol a."""

    sigma: Alphabet
    gamma: Alphabet
    images: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        images = tuple(tuple(img) for img in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.sigma):
            raise PepError("morphism must be total on sigma")
        g = len(self.gamma)
        for img in images:
            for b in img:
                if not 0 <= b < g:
                    raise PepError(f"image symbol {b} outside gamma")

    @classmethod
    def from_tokens(cls, sigma: Alphabet, gamma: Alphabet, table: Dict[str, "str | Sequence[str]"]):
        images = []
        for tok in sigma.tokens:
            if tok not in table:
                raise PepError(f"no image for {tok!r}")
            images.append(tuple(gamma.word(table[tok])))
        return cls(sigma, gamma, tuple(images))

    @property
    def K(self) -> int:
        """Expansion factor: longest image length."""
        return max((len(img) for img in self.images), default=0)

    def __call__(self, w: WordLike) -> Tuple[int, ...]:
        return apply_morphism(self, w)

    def mirrored(self) -> "Morphism":
        return Morphism(self.sigma, self.gamma, tuple(mirror(img) for img in self.images))

    def extended(self, sigma: Alphabet, extra: Sequence[Sequence[int]]) -> "Morphism":
        return Morphism(sigma, self.gamma, self.images + tuple(tuple(e) for e in extra))


def apply_morphism(m: Morphism, w: WordLike) -> Word:
    out: List[int] = []
    images = m.images
    for a in w:
        out.extend(images[a])
    return Word(out, m.gamma)


# -- constraint languages ----------------------------------------------------

class MirroredPredicate:
    """Mirror of a non-regular membership predicate."""

    is_regular = False

    def __init__(self, inner):
        self.inner = inner

    def accepts(self, w: WordLike) -> bool:
        return self.inner.accepts(mirror(w))

    def mirrored(self):
        return self.inner

    def __repr__(self) -> str:
        return f"MirroredPredicate({self.inner!r})"


def _is_regular(c) -> bool:
    return isinstance(c, Dfa)


def mirror_constraint(c):
    if isinstance(c, (Dfa, Nfa)):
        return minimize(automata.mirror_language(c))
    if hasattr(c, "mirrored"):
        return c.mirrored()
    return MirroredPredicate(c)


# -- instances -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PepInstance:
    """``(Σ, Γ, u, v, R, R', variant)``.

    ``Rp`` is a :class:`Dfa` or any object with ``accepts(word)`` (used for
    the non-regular length-difference predicate).  For ``co_and_dir`` the
    constraint is Σ* and is set automatically.  ``R_source``/``Rp_source``
    keep the regex text the instance was read from, when there is one.
    """

    sigma: Alphabet
    gamma: Alphabet
    u: Morphism
    v: Morphism
    R: Dfa
    Rp: object = None
    variant: str = PLAIN
    R_source: Optional[str] = None
    Rp_source: Optional[str] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise PepError(f"unknown variant {self.variant!r}")
        if self.u.sigma != self.sigma or self.v.sigma != self.sigma:
            raise PepError("morphisms must be defined on sigma")
        if self.u.gamma != self.gamma or self.v.gamma != self.gamma:
            raise PepError("morphisms must map into gamma")
        R = self.R
        if not isinstance(R, (Dfa, Nfa)) or R.alphabet != self.sigma:
            raise PepError("R must be an automaton over sigma")
        object.__setattr__(self, "R", minimize(R))
        Rp = self.Rp
        if self.variant == COANDDIR:
            Rp = minimize(Nfa.universal(self.sigma))
        elif Rp is None:
            Rp = minimize(Nfa.empty(self.sigma))
        if isinstance(Rp, (Dfa, Nfa)):
            if Rp.alphabet != self.sigma:
                raise PepError("R' must be over sigma")
            Rp = minimize(Rp)
        elif not hasattr(Rp, "accepts"):
            raise PepError("R' must be an automaton or a membership predicate")
        if self.variant == PLAIN and _is_regular(Rp) and not automata.is_empty(Rp):
            raise PepError("plain instances have R' = empty")
        object.__setattr__(self, "Rp", Rp)

    @property
    def Rp_regular(self) -> bool:
        return _is_regular(self.Rp)

    def Rp_accepts(self, w: WordLike) -> bool:
        return self.Rp.accepts(w)

    def with_(self, **changes) -> "PepInstance":
        changes.setdefault("_cache", {})
        return replace(self, **changes)

    def _rp_mirror(self) -> Optional[Dfa]:
        if not self.Rp_regular:
            return None
        m = self._cache.get("rp_mirror")
        if m is None:
            m = self._cache["rp_mirror"] = minimize(automata.mirror_language(self.Rp))
        return m

    def _oriented(self) -> "PepInstance":
        """The codirect-orientation instance used by margin machinery."""
        if self.variant != DIR:
            return self
        o = self._cache.get("oriented")
        if o is None:
            o = self._cache["oriented"] = mirror_instance(self)
        return o


def mirror_instance(inst: PepInstance) -> PepInstance:
    """Mirror images and languages; swap dir and codir.

    ``co_and_dir`` is its own mirror class: images and R are mirrored, the
    variant is kept.
    """
    variant = {DIR: CODIR, CODIR: DIR}.get(inst.variant, inst.variant)
    Rp = None if inst.variant == COANDDIR else mirror_constraint(inst.Rp)
    return PepInstance(inst.sigma, inst.gamma, inst.u.mirrored(), inst.v.mirrored(),
                       minimize(automata.mirror_language(inst.R)), Rp, variant)


# -- solution checking ---------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`check_solution`.

    ``kind`` is ``solution``, ``fails_membership`` or ``fails_embedding``.
    For embedding failures ``side`` is ``whole``, ``prefix`` or ``suffix``
    and ``index`` is the split point: the offending factor is ``σ[:index]``
    (prefix) or ``σ[index:]`` (suffix).
    """

    kind: str
    side: Optional[str] = None
    index: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.kind == "solution"

    def __bool__(self) -> bool:
        return self.ok


SOLUTION = Verdict("solution")


def _image_offsets(m: Morphism, w: WordLike):
    flat: List[int] = []
    off = [0]
    for a in w:
        flat.extend(m.images[a])
        off.append(len(flat))
    return tuple(flat), off


def _suffix_membership(inst: PepInstance, w: Tuple[int, ...]) -> List[bool]:
    """``[σ[i:] ∈ R' for i in 0..N]``."""
    n = len(w)
    m = inst._rp_mirror()
    if m is None:
        return [bool(inst.Rp.accepts(w[i:])) for i in range(n + 1)]
    out = [False] * (n + 1)
    q = m.initial
    out[n] = q in m.accepting
    for i in range(n - 1, -1, -1):
        q = m.delta[q][w[i]]
        out[i] = q in m.accepting
    return out


def _prefix_membership(inst: PepInstance, w: Tuple[int, ...]) -> List[bool]:
    """``[σ[:i] ∈ R' for i in 0..N]``."""
    n = len(w)
    if not inst.Rp_regular:
        return [bool(inst.Rp.accepts(w[:i])) for i in range(n + 1)]
    d = inst.Rp
    out = [False] * (n + 1)
    q = d.initial
    out[0] = q in d.accepting
    for i in range(n):
        q = d.delta[q][w[i]]
        out[i + 1] = q in d.accepting
    return out


def check_solution(inst: PepInstance, sigma: WordLike) -> Verdict:
    w = tuple(sigma)
    if not inst.R.accepts(w):
        return Verdict("fails_membership")
    uw, uo = _image_offsets(inst.u, w)
    vw, vo = _image_offsets(inst.v, w)
    n = len(w)
    if not _embeds(uw, vw):
        return Verdict("fails_embedding", "whole", 0)
    variant = inst.variant
    if variant == PLAIN:
        return SOLUTION
    need_pre = variant in (DIR, COANDDIR)
    need_suf = variant in (CODIR, COANDDIR)
    if variant == COANDDIR:
        pre_in = suf_in = [True] * (n + 1)
    else:
        pre_in = _prefix_membership(inst, w) if need_pre else None
        suf_in = _suffix_membership(inst, w) if need_suf else None
    for i in range(n + 1):
        if need_pre and pre_in[i] and not _embeds(uw[: uo[i]], vw[: vo[i]]):
            return Verdict("fails_embedding", "prefix", i)
        if need_suf and suf_in[i] and not _embeds(uw[uo[i]:], vw[vo[i]:]):
            return Verdict("fails_embedding", "suffix", i)
    return SOLUTION


def is_solution(inst: PepInstance, sigma: WordLike) -> bool:
    return check_solution(inst, sigma).ok


# -- coloring and margins -------------------------------------------------------

class ColoredSolution:
    """A word with per-index colors and lazily computed margins.

    Always in codirect orientation: ``word`` is the input mirrored when the
    instance is of the direct variant (``mirrored`` is then True).
    """

    def __init__(self, inst: PepInstance, sigma: WordLike):
        if inst.variant == COANDDIR:
            raise PepError("no coloring theory for co_and_dir instances")
        self.source = inst
        self.mirrored = inst.variant == DIR
        self.inst = inst._oriented()
        w = tuple(sigma)
        self.word: Tuple[int, ...] = mirror(w) if self.mirrored else w
        self.N = len(self.word)
        self.uw, self.uo = _image_offsets(self.inst.u, self.word)
        self.vw, self.vo = _image_offsets(self.inst.v, self.word)
        N = self.N
        self.colors = tuple(
            BLUE if _embeds(self.uw[self.uo[i]:], self.vw[self.vo[i]:]) else RED
            for i in range(N + 1)
        )
        self._memo: Dict[Tuple[str, int], object] = {}
        self._sigs = None

    def __repr__(self) -> str:
        return f"<ColoredSolution N={self.N} colors={''.join(c[0] for c in self.colors)}>"

    # factor images
    def u(self, i: int, j: int) -> Tuple[int, ...]:
        return self.uw[self.uo[i]: self.uo[j]]

    def v(self, i: int, j: int) -> Tuple[int, ...]:
        return self.vw[self.vo[i]: self.vo[j]]

    def is_blue(self, i: int) -> bool:
        return self.colors[i] == BLUE

    def blue_indices(self) -> List[int]:
        return [i for i, c in enumerate(self.colors) if c == BLUE]

    def red_indices(self) -> List[int]:
        return [i for i, c in enumerate(self.colors) if c == RED]

    def _margin(self, kind: str, i: int, want: str, compute):
        if not 0 <= i <= self.N:
            raise IndexError(i)
        if self.colors[i] != want:
            raise MarginError(f"margin {kind} needs a {want} index, {i} is {self.colors[i]}")
        key = (kind, i)
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def l(self, i: int) -> Tuple[int, ...]:
        """Left u-margin: longest suffix of u[0:i] with l·u[i:N] ⊑ v[i:N]."""
        N = self.N
        return self._margin("l", i, BLUE, lambda: longest_suffix_carrier(
            self.u(0, i), self.u(i, N), self.v(i, N)))

    def r(self, i: int) -> Tuple[int, ...]:
        """Right u-margin: shortest prefix r of u[i:N] with r⁻¹u[i:N] ⊑ v[i:N]."""
        N = self.N
        return self._margin("r", i, RED, lambda: shortest_prefix_overflow(
            self.u(i, N), self.v(i, N)))

    def s(self, i: int) -> Tuple[int, ...]:
        """Right v-margin: longest prefix s of v[i:N] with u[i:N] ⊑ s⁻¹v[i:N]."""
        N = self.N
        return self._margin("s", i, BLUE, lambda: longest_prefix_host(
            self.u(i, N), self.v(i, N)))

    def t(self, i: int) -> Optional[Tuple[int, ...]]:
        """Left v-margin: shortest suffix t of v[0:i] with u[i:N] ⊑ t·v[i:N];
        None when u[i:N] does not even embed in v[0:N]."""
        N = self.N

        def compute():
            if not _embeds(self.u(i, N), self.vw):
                return None
            return shortest_suffix_host(self.u(i, N), self.v(0, i), self.v(i, N))
        return self._margin("t", i, RED, compute)

    def signatures(self):
        """Per-index pair of suffix signatures for R and R'."""
        if self._sigs is None:
            inst = self.inst
            sr = suffix_signatures(inst.R, self.word)
            if inst.Rp_regular:
                sp = suffix_signatures(inst.Rp, self.word)
            else:
                sp = None
            self._sigs = (sr, sp)
        return self._sigs

    def congruent(self, i: int, j: int) -> bool:
        sr, sp = self.signatures()
        if sp is None:
            raise PepError("congruence needs a regular R'")
        return sr[i] == sr[j] and sp[i] == sp[j]

    def to_caller(self, w: WordLike) -> Word:
        """Map an oriented word back to the caller's orientation."""
        w = mirror(w) if self.mirrored else tuple(w)
        return Word(w, self.source.sigma)


def color_indices(inst: PepInstance, sigma: WordLike) -> ColoredSolution:
    return ColoredSolution(inst, sigma)


def left_margin_u(inst: PepInstance, colored: ColoredSolution, i: int):
    return colored.l(i)


def right_margin_u(inst: PepInstance, colored: ColoredSolution, i: int):
    return colored.r(i)


def right_margin_v(inst: PepInstance, colored: ColoredSolution, i: int):
    return colored.s(i)


def left_margin_v(inst: PepInstance, colored: ColoredSolution, i: int):
    t = colored.t(i)
    if t is None:
        raise MarginUndefined(f"t_{i} undefined: u[{i}:N] does not embed in v(σ)")
    return t


def congruent(inst: PepInstance, sigma: WordLike, i: int, j: int) -> bool:
    """Suffix congruence of σ[i:] and σ[j:] for R and R'.

    For direct instances the word is mirrored first and indices are read in
    the mirrored word (prefix semantics), matching :class:`ColoredSolution`.
    """
    if inst.variant == COANDDIR:
        d = inst.R
        sr = suffix_signatures(d, tuple(sigma))
        return sr[i] == sr[j]
    return ColoredSolution(inst, sigma).congruent(i, j)


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class CutCertificate:
    """Congruent same-color indices ``a < b`` whose margins allow a cut.

    ``margins`` is ``(l_a, l_b)`` for blue pairs and ``(r_a, r_b)`` for red
    ones.  Indices refer to the oriented word; ``word`` is the caller-facing
    solution being cut.
    """

    a: int
    b: int
    color: str
    margins: Tuple[Tuple[int, ...], Tuple[int, ...]]
    word: Tuple[int, ...] = ()
    mirrored: bool = False


@dataclass(frozen=True)
class PumpCertificate:
    """Congruent same-color indices ``a < b`` whose margins allow pumping.

    ``margins`` is ``(s_a, s_b)`` for blue pairs and ``(t_a, t_b)`` for red
    ones.  ``k`` is the exponent when the certificate records a concrete pump.
    """

    a: int
    b: int
    color: str
    margins: Tuple[Tuple[int, ...], Tuple[int, ...]]
    word: Tuple[int, ...] = ()
    mirrored: bool = False
    k: Optional[int] = None


def _require_solution(colored: ColoredSolution) -> None:
    v = check_solution(colored.inst, colored.word)
    if not v.ok:
        raise CutError(f"word is not a solution ({v.kind})")


def _cut_reason(colored: ColoredSolution, a: int, b: int) -> Optional[str]:
    """None when (a, b) satisfies a cutting lemma, else why not."""
    if not 0 <= a < b <= colored.N:
        return f"need 0 <= a < b <= N, got a={a}, b={b}"
    if colored.colors[a] != colored.colors[b]:
        return f"indices have different colors ({colored.colors[a]}, {colored.colors[b]})"
    if not colored.congruent(a, b):
        return "indices are not congruent"
    if colored.is_blue(a):
        if not _embeds(colored.l(a), colored.l(b)):
            return "blue pair but l_a does not embed in l_b"
    else:
        if not _embeds(colored.r(b), colored.r(a)):
            return "red pair but r_b does not embed in r_a"
    return None


def cut(inst: PepInstance, colored: ColoredSolution, a: int, b: int) -> Word:
    """σ[0:a)·σ[b:N) for a qualifying pair; the result is re-verified."""
    _require_solution(colored)
    why = _cut_reason(colored, a, b)
    if why is not None:
        raise CutError(why)
    w = colored.word
    out = w[:a] + w[b:]
    if not check_solution(colored.inst, out).ok:
        raise LemmaViolation(f"cut ({a}, {b}) produced a non-solution")
    return colored.to_caller(out)


def _pump_reason(colored: ColoredSolution, a: int, b: int) -> Optional[str]:
    if not 0 <= a < b <= colored.N:
        return f"need 0 <= a < b <= N, got a={a}, b={b}"
    if colored.colors[a] != colored.colors[b]:
        return f"indices have different colors ({colored.colors[a]}, {colored.colors[b]})"
    if not colored.congruent(a, b):
        return "indices are not congruent"
    if colored.is_blue(a):
        if not _embeds(colored.s(b), colored.s(a)):
            return "blue pair but s_b does not embed in s_a"
    else:
        ta, tb = colored.t(a), colored.t(b)
        if ta is None or tb is None:
            return "red pair with undefined left v-margin"
        if not _embeds(ta, tb):
            return "red pair but t_a does not embed in t_b"
    return None


def pumped_word(w: Sequence[int], a: int, b: int, k: int) -> Tuple[int, ...]:
    w = tuple(w)
    return w[:a] + w[a:b] * k + w[b:]


def pump(inst: PepInstance, colored: ColoredSolution, a: int, b: int, k: int) -> Word:
    """σ[0:a)·σ[a:b)^k·σ[b:N) for a qualifying pair; re-verified."""
    if k < 1:
        raise CutError("k must be >= 1")
    _require_solution(colored)
    why = _pump_reason(colored, a, b)
    if why is not None:
        raise CutError(why)
    out = pumped_word(colored.word, a, b, k)
    if not check_solution(colored.inst, out).ok:
        raise LemmaViolation(f"pump ({a}, {b}, k={k}) produced a non-solution")
    return colored.to_caller(out)


def pump_inequality(colored: ColoredSolution, a: int, b: int, k: int) -> bool:
    """Whether s_a·(u[a:b])^k ⊑ (v[a:b])^k·s_b holds for blue a < b."""
    return _embeds(colored.s(a) + colored.u(a, b) * k, colored.v(a, b) * k + colored.s(b))


def _pair_scan(indices: List[int]):
    # smallest b first, then largest a
    for jb, b in enumerate(indices):
        for ja in range(jb - 1, -1, -1):
            yield indices[ja], b


def find_cut_pair(inst: PepInstance, colored: ColoredSolution) -> Optional[CutCertificate]:
    """First qualifying cut pair: blue pairs, then red pairs."""
    word = colored.to_caller(colored.word)
    for color, idx in ((BLUE, colored.blue_indices()), (RED, colored.red_indices())):
        for a, b in _pair_scan(idx):
            if not colored.congruent(a, b):
                continue
            if color == BLUE:
                ma, mb = colored.l(a), colored.l(b)
                ok = _embeds(ma, mb)
            else:
                ma, mb = colored.r(a), colored.r(b)
                ok = _embeds(mb, ma)
            if ok:
                return CutCertificate(a, b, color, (ma, mb), tuple(word), colored.mirrored)
    return None


def find_pump_pair(inst: PepInstance, colored: ColoredSolution) -> Optional[PumpCertificate]:
    """First qualifying pump pair: blue pairs, then red pairs (pairs with
    an undefined left v-margin are skipped)."""
    word = colored.to_caller(colored.word)
    for color, idx in ((BLUE, colored.blue_indices()), (RED, colored.red_indices())):
        for a, b in _pair_scan(idx):
            if not colored.congruent(a, b):
                continue
            if color == BLUE:
                ma, mb = colored.s(a), colored.s(b)
                ok = _embeds(mb, ma)
            else:
                ma, mb = colored.t(a), colored.t(b)
                ok = ma is not None and mb is not None and _embeds(ma, mb)
            if ok:
                return PumpCertificate(a, b, color, (ma, mb), tuple(word), colored.mirrored)
    return None


def minimize_solution(inst: PepInstance, sigma: WordLike) -> Word:
    """Cut until no qualifying pair remains (each cut strictly shortens)."""
    w = Word(tuple(sigma), inst.sigma)
    if not check_solution(inst, w).ok:
        raise CutError("minimize needs a solution")
    while True:
        colored = ColoredSolution(inst, w)
        cert = find_cut_pair(inst, colored)
        if cert is None:
            return w
        w = cut(inst, colored, cert.a, cert.b)


def apply_pump(inst: PepInstance, cert: PumpCertificate, k: int) -> Word:
    """Re-run the pump recorded in ``cert`` with exponent ``k``."""
    colored = ColoredSolution(inst, cert.word)
    return pump(inst, colored, cert.a, cert.b, k)


def margin_control_violations(colored: ColoredSolution) -> List[str]:
    """Check the four margin-length bounds along a solution.

    Blue indices g_1 < ... < g_N1 and red b_1 < ... < b_N2 (1-based):
    |l_{g_i}| <= (i-1)K_u, |r_{b_i}| <= (N2-i+1)K_u,
    |s_{g_i}| <= (N1-i+1)K_v, |t_{b_i}| <= i*K_v where t is defined.

    The t bound is i*K_v, not (i-1)*K_v: a defined t at the first red index
    is nonempty (an empty one would make the index blue), and it is a suffix
    of the image of the preceding letter.
    """
    Ku, Kv = colored.inst.u.K, colored.inst.v.K
    blues, reds = colored.blue_indices(), colored.red_indices()
    n1, n2 = len(blues), len(reds)
    bad = []
    for i, g in enumerate(blues, 1):
        if len(colored.l(g)) > (i - 1) * Ku:
            bad.append(f"|l_{g}| > {(i - 1) * Ku}")
        if len(colored.s(g)) > (n1 - i + 1) * Kv:
            bad.append(f"|s_{g}| > {(n1 - i + 1) * Kv}")
    for i, b in enumerate(reds, 1):
        if len(colored.r(b)) > (n2 - i + 1) * Ku:
            bad.append(f"|r_{b}| > {(n2 - i + 1) * Ku}")
        t = colored.t(b)
        if t is not None and len(t) > i * Kv:
            bad.append(f"|t_{b}| > {i * Kv}")
    return bad
