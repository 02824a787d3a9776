"""Line-based text formats for instances, semi-Thue systems and PCP.

Instance file::

    # variant is plain, dir, codir or coanddir
    variant codir
    sigma 0 1
    gamma a b
    u 0 = a
    # an empty right side is the empty word
    u 1 =
    v 0 = a a
    v 1 = b
    R = 0 + 1 *
    # Rp is a regex, none, all, or lenpred
    Rp = 0 *

Semi-Thue file: ``upsilon a b c``, ``rule a b -> b c``, ``P1 = <regex>``,
``P2 = <regex>``.  PCP file: ``sigma``, ``gamma``, ``u``/``v`` lines.

Lines whose first non-blank character is ``#`` are comments; a ``#`` inside
a line is an ordinary token.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import automata
from .automata import minimize
from .pep import CODIR, COANDDIR, DIR, PLAIN, Morphism, PepInstance
from .reductions import LengthDiffPredicate, PcpInstance, SemiThueSystem
from .regex import RegexError, dfa_to_regex, parse_regex
from .words import Alphabet

VARIANT_NAMES = {"plain": PLAIN, "dir": DIR, "codir": CODIR, "coanddir": COANDDIR}
VARIANT_KEYWORDS = {v: k for k, v in VARIANT_NAMES.items()}


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        where = f"{path or '<input>'}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + message)
        self.line = line
        self.path = path


@dataclass
class _Lines:
    """Keyword-indexed lines of a file, with line numbers for diagnostics."""

    path: Optional[str]
    entries: List[Tuple[int, str, str]] = field(default_factory=list)

    def error(self, message: str, line: Optional[int] = None) -> FormatError:
        return FormatError(message, line, self.path)

    def all(self, key: str) -> List[Tuple[int, str]]:
        return [(n, rest) for n, k, rest in self.entries if k == key]

    def one(self, key: str, required: bool = True) -> Optional[Tuple[int, str]]:
        found = self.all(key)
        if len(found) > 1:
            raise self.error(f"duplicate {key!r} line", found[1][0])
        if not found:
            if required:
                raise self.error(f"missing {key!r} line")
            return None
        return found[0]


def _split(text: str, path: Optional[str], keys: Tuple[str, ...]) -> _Lines:
    out = _Lines(path)
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key.endswith("=") and key[:-1] in keys:
            key, rest = key[:-1], "= " + rest
        if key not in keys:
            raise FormatError(f"unknown directive {key!r}", n, path)
        out.entries.append((n, key, rest.strip()))
    return out


def _after_eq(lines: _Lines, n: int, rest: str, what: str) -> str:
    if not rest.startswith("="):
        raise lines.error(f"expected '=' after {what}", n)
    return rest[1:].strip()


def _alphabet(lines: _Lines, key: str) -> Alphabet:
    n, rest = lines.one(key)
    toks = rest.split()
    if not toks:
        raise lines.error(f"{key} needs at least one token", n)
    if len(set(toks)) != len(toks):
        raise lines.error(f"repeated token in {key}", n)
    return Alphabet(toks)


def _morphisms(lines: _Lines, sigma: Alphabet, gamma: Alphabet) -> Tuple[Morphism, Morphism]:
    out = []
    for key in ("u", "v"):
        images: Dict[str, Tuple[int, ...]] = {}
        for n, rest in lines.all(key):
            left, eq, right = rest.partition("=")
            if not eq:
                raise lines.error(f"expected '{key} <token> = <word>'", n)
            tok = left.strip()
            if tok not in sigma:
                raise lines.error(f"{key} image for undeclared token {tok!r}", n)
            if tok in images:
                raise lines.error(f"duplicate {key} image for {tok!r}", n)
            img = []
            for t in right.split():
                if t not in gamma:
                    raise lines.error(f"image token {t!r} not in gamma", n)
                img.append(gamma.symbol(t))
            images[tok] = tuple(img)
        missing = [t for t in sigma.tokens if t not in images]
        if missing:
            raise lines.error(f"no {key} image for {', '.join(missing)}")
        out.append(Morphism(sigma, gamma, tuple(images[t] for t in sigma.tokens)))
    return out[0], out[1]


def _regex(lines: _Lines, n: int, text: str, alphabet: Alphabet):
    try:
        return parse_regex(text, alphabet)
    except (RegexError, KeyError) as e:
        raise lines.error(f"bad regex: {e}", n) from None


# -- instances ---------------------------------------------------------------

INSTANCE_KEYS = ("variant", "sigma", "gamma", "u", "v", "R", "Rp")


def parse_instance(text: str, path: Optional[str] = None) -> PepInstance:
    lines = _split(text, path, INSTANCE_KEYS)
    got = lines.one("variant", required=False)
    variant = PLAIN
    if got is not None:
        n, rest = got
        if rest not in VARIANT_NAMES:
            raise lines.error(f"unknown variant {rest!r}", n)
        variant = VARIANT_NAMES[rest]
    sigma = _alphabet(lines, "sigma")
    gamma = _alphabet(lines, "gamma")
    u, v = _morphisms(lines, sigma, gamma)
    n, rest = lines.one("R")
    R_src = _after_eq(lines, n, rest, "R")
    R = _regex(lines, n, R_src, sigma)
    Rp = None
    Rp_src = None
    got = lines.one("Rp", required=False)
    if got is not None:
        n, rest = got
        Rp_src = _after_eq(lines, n, rest, "Rp")
        if Rp_src == "none":
            Rp = None
        elif Rp_src == "all":
            Rp = automata.Nfa.universal(sigma)
        elif Rp_src == "lenpred":
            try:
                Rp = LengthDiffPredicate.for_instance(sigma, u, v)
            except ValueError as e:
                raise lines.error(str(e), n) from None
        else:
            Rp = _regex(lines, n, Rp_src, sigma)
        if variant == PLAIN and Rp_src != "none":
            if Rp_src == "lenpred" or not automata.is_empty(Rp):
                raise lines.error("plain instances take Rp = none", n)
        if variant == COANDDIR and Rp_src != "all":
            raise lines.error("coanddir instances take Rp = all (or no Rp line)", n)
    try:
        return PepInstance(sigma, gamma, u, v, R, Rp, variant, R_source=R_src, Rp_source=Rp_src)
    except ValueError as e:
        raise lines.error(str(e)) from None


def _rp_text(inst: PepInstance) -> str:
    if isinstance(inst.Rp, LengthDiffPredicate):
        return "lenpred"
    if not inst.Rp_regular:
        raise FormatError("R' is a predicate with no text form")
    if inst.variant == COANDDIR:
        return "all"
    if automata.is_empty(inst.Rp):
        return "none"
    if automata.equivalent(inst.Rp, automata.Nfa.universal(inst.sigma)):
        return "all"
    if inst.Rp_source not in (None, "none", "all", "lenpred"):
        return inst.Rp_source
    return dfa_to_regex(inst.Rp)


def _image_line(key: str, tok: str, img, gamma: Alphabet) -> str:
    right = gamma.show(img)
    return f"{key} {tok} = {right}" if right else f"{key} {tok} ="


def format_instance(inst: PepInstance) -> str:
    """Canonical text form (parse of this text gives back the instance)."""
    lines = [f"variant {VARIANT_KEYWORDS[inst.variant]}",
             "sigma " + " ".join(inst.sigma.tokens),
             "gamma " + " ".join(inst.gamma.tokens)]
    for key, m in (("u", inst.u), ("v", inst.v)):
        for tok, img in zip(inst.sigma.tokens, m.images):
            lines.append(_image_line(key, tok, img, inst.gamma))
    lines.append("R = " + (inst.R_source if inst.R_source is not None else dfa_to_regex(inst.R)))
    lines.append("Rp = " + _rp_text(inst))
    return "\n".join(lines) + "\n"


def load_instance(path: str) -> PepInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), path)


# -- semi-Thue systems ---------------------------------------------------------

SEMITHUE_KEYS = ("upsilon", "rule", "P1", "P2")


def parse_semithue(text: str, path: Optional[str] = None) -> SemiThueSystem:
    lines = _split(text, path, SEMITHUE_KEYS)
    ups = _alphabet(lines, "upsilon")
    rules = []
    for n, rest in lines.all("rule"):
        left, arrow, right = rest.partition("->")
        if not arrow:
            raise lines.error("expected 'rule <word> -> <word>'", n)
        try:
            rules.append((ups.word(left), ups.word(right)))
        except KeyError as e:
            raise lines.error(str(e.args[0]), n) from None
    Ps, srcs = [], []
    for key in ("P1", "P2"):
        n, rest = lines.one(key)
        srcs.append(_after_eq(lines, n, rest, key))
        Ps.append(minimize(_regex(lines, n, srcs[-1], ups)))
    try:
        return SemiThueSystem(ups, tuple(rules), Ps[0], Ps[1], srcs[0], srcs[1])
    except ValueError as e:
        raise lines.error(str(e)) from None


def format_semithue(S: SemiThueSystem) -> str:
    ups = S.upsilon
    lines = ["upsilon " + " ".join(ups.tokens)]
    for l, r in S.rules:
        lines.append(f"rule {ups.show(l)} -> {ups.show(r)}")
    p1 = S.P1_source if S.P1_source is not None else dfa_to_regex(S.P1)
    p2 = S.P2_source if S.P2_source is not None else dfa_to_regex(S.P2)
    lines += [f"P1 = {p1}", f"P2 = {p2}"]
    return "\n".join(lines) + "\n"


def load_semithue(path: str) -> SemiThueSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_semithue(fh.read(), path)


# -- PCP -------------------------------------------------------------------------

PCP_KEYS = ("sigma", "gamma", "u", "v")


def parse_pcp(text: str, path: Optional[str] = None) -> PcpInstance:
    lines = _split(text, path, PCP_KEYS)
    sigma = _alphabet(lines, "sigma")
    gamma = _alphabet(lines, "gamma")
    u, v = _morphisms(lines, sigma, gamma)
    return PcpInstance(sigma, gamma, u, v)


def format_pcp(p: PcpInstance) -> str:
    lines = ["sigma " + " ".join(p.sigma.tokens), "gamma " + " ".join(p.gamma.tokens)]
    for key, m in (("u", p.u), ("v", p.v)):
        for tok, img in zip(p.sigma.tokens, m.images):
            lines.append(_image_line(key, tok, img, p.gamma))
    return "\n".join(lines) + "\n"


def load_pcp(path: str) -> PcpInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_pcp(fh.read(), path)
