"""``pep`` command line tool.

Exit status: 0 when the question was answered, 1 when the answer is only
bounded or inconclusive (including an exhausted budget), 2 on input errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Dict, List, Optional, Sequence

from . import formats, higman, solver, universal
from .pep import (CutCertificate, PepError, PumpCertificate, check_solution, color_indices,
                  find_pump_pair, minimize_solution, pump)
from .reductions import (DecodeError, Derivation, ReductionError, decode_semithue_solution,
                         derivation_to_solution, encode_pcp, encode_semithue,
                         semithue_reach_oracle)
from .regex import RegexError
from .universal import LoopCertificate
from .words import Alphabet

ANSWERED, BOUNDED, INPUT_ERROR = 0, 1, 2
REPORT_KEYS = ("command", "kind", "witness", "certificate", "stats", "completeness", "data")


class Report:
    def __init__(self, command: str, kind: str, *, witness=None, certificate=None,
                 stats=None, completeness: str = "certified", data=None, text: str = "",
                 status: int = ANSWERED):
        self.doc = dict(zip(REPORT_KEYS, (command, kind, witness, certificate, stats or {},
                                          completeness, data or {})))
        self.text = text
        self.status = status

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.doc, ensure_ascii=False, indent=2) + "\n"
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _tokens(alphabet: Alphabet, w) -> List[str]:
    return alphabet.token_list(w)


def _show(alphabet: Alphabet, w) -> str:
    return alphabet.show(w) if len(w) else "ε"


def _certificate_doc(inst, cert) -> Optional[Dict]:
    if cert is None:
        return None
    if isinstance(cert, LoopCertificate):
        return {"type": "loop", "word": _tokens(inst.sigma, cert.word),
                "start": cert.start, "end": cert.end}
    kind = "cut" if isinstance(cert, CutCertificate) else "pump"
    doc = {"type": kind, "a": cert.a, "b": cert.b, "color": cert.color,
           "margins": [_tokens(inst.gamma, m) if m is not None else None for m in cert.margins],
           "word": _tokens(inst.sigma, cert.word), "mirrored": cert.mirrored}
    if isinstance(cert, PumpCertificate):
        doc["k"] = cert.k
    return doc


def _certificate_text(inst, cert) -> str:
    if cert is None:
        return ""
    if isinstance(cert, LoopCertificate):
        w = cert.word
        return (f"loop certificate: {_show(inst.sigma, w[:cert.start])} [ "
                f"{_show(inst.sigma, w[cert.start:cert.end])} ] {_show(inst.sigma, w[cert.end:])}")
    kind = "cut" if isinstance(cert, CutCertificate) else "pump"
    ma, mb = (_show(inst.gamma, m) if m is not None else "-" for m in cert.margins)
    side = " (indices in the mirrored word)" if cert.mirrored else ""
    return f"{kind} certificate: {cert.color} pair a={cert.a} b={cert.b}, margins {ma} / {mb}{side}"


def _word_arg(alphabet: Alphabet, toks: Sequence[str]):
    # a single argument may hold several whitespace-separated tokens
    flat = [t for arg in toks for t in arg.split()]
    return alphabet.word(flat)


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> Report:
    inst = formats.load_instance(args.instance)
    w = _word_arg(inst.sigma, args.word)
    v = check_solution(inst, w)
    kind = "solution" if v.ok else "non_solution"
    data = {"reason": v.kind, "side": v.side, "index": v.index}
    text = kind if v.ok else f"{kind}: {v.kind}" + (f" ({v.side} at {v.index})" if v.side else "")
    return Report("check", kind, witness=_tokens(inst.sigma, w), data=data, text=text)


def cmd_solve(args) -> Report:
    inst = formats.load_instance(args.instance)
    r = solver.solve(inst, args.max_len, args.node_budget)
    stats = {"nodes": r.nodes, "max_len": r.max_len, "short_bound": r.bound}
    if r.kind == "found":
        return Report("solve", "found", witness=_tokens(inst.sigma, r.witness), stats=stats,
                      text=f"found: {_show(inst.sigma, r.witness)}")
    if r.kind == "none_certified":
        return Report("solve", r.kind, stats=stats,
                      text=f"no solution (certified: short bound {r.bound} <= {r.max_len})")
    if r.kind == "budget_exceeded":
        return Report("solve", r.kind, stats=stats, completeness="bounded", status=BOUNDED,
                      text=f"budget exceeded after {r.nodes} nodes")
    return Report("solve", r.kind, stats=stats, completeness="bounded", status=BOUNDED,
                  text=f"no solution up to length {r.max_len}")


def _count_report(command: str, inst, r: solver.CountResult, what: str) -> Report:
    stats = {"max_len": r.max_len, "seen": r.n}
    cert = _certificate_doc(inst, r.certificate)
    if r.kind == "infinite":
        return Report(command, "infinite", certificate=cert, stats=stats,
                      text=f"infinitely many {what}\n{_certificate_text(inst, r.certificate)}")
    if r.kind == "exact":
        return Report(command, "exact", stats=stats, data={"n": r.n, "justification": r.justification},
                      text=f"exactly {r.n} {what} ({r.justification})")
    if r.kind == "budget_exceeded":
        return Report(command, r.kind, stats=stats, completeness="bounded", status=BOUNDED,
                      text="budget exceeded")
    return Report(command, "finite_at_least", stats=stats, data={"n": r.n},
                  completeness="bounded", status=BOUNDED,
                  text=f"at least {r.n} {what} (none certified beyond length {r.max_len})")


def cmd_count(args) -> Report:
    inst = formats.load_instance(args.instance)
    return _count_report("count", inst, solver.count(inst, args.max_len, args.node_budget), "solutions")


def cmd_infinite(args) -> Report:
    inst = formats.load_instance(args.instance)
    cert = solver.infinite_check(inst, args.max_len, args.node_budget)
    if cert is None:
        return Report("infinite", "no_certificate", stats={"max_len": args.max_len},
                      completeness="bounded", status=BOUNDED,
                      text=f"no pump certificate among solutions up to length {args.max_len} "
                           "(this does not rule out infinitely many solutions)")
    return Report("infinite", "infinite", certificate=_certificate_doc(inst, cert),
                  stats={"max_len": args.max_len},
                  text=f"infinitely many solutions\n{_certificate_text(inst, cert)}")


def cmd_minimize(args) -> Report:
    inst = formats.load_instance(args.instance)
    w = _word_arg(inst.sigma, args.word)
    m = minimize_solution(inst, w)
    return Report("minimize", "minimized", witness=_tokens(inst.sigma, m),
                  data={"original_length": len(w), "length": len(m)},
                  text=f"minimized: {_show(inst.sigma, m)}")


def cmd_pump(args) -> Report:
    inst = formats.load_instance(args.instance)
    w = _word_arg(inst.sigma, args.word)
    if not check_solution(inst, w).ok:
        raise PepError("pump needs a solution")
    colored = color_indices(inst, w)
    cert = find_pump_pair(inst, colored)
    if cert is None:
        return Report("pump", "no_certificate", completeness="bounded", status=BOUNDED,
                      text="no pump certificate on this solution")
    k = args.k if args.k is not None else 2
    out = pump(inst, colored, cert.a, cert.b, k)
    cert = dataclasses.replace(cert, k=k)
    return Report("pump", "pumped", witness=_tokens(inst.sigma, out),
                  certificate=_certificate_doc(inst, cert), data={"k": k},
                  text=f"pumped (k={k}): {_show(inst.sigma, out)}\n{_certificate_text(inst, cert)}")


def _universal_report(command: str, inst, v: universal.UniversalVerdict) -> Report:
    stats = {"max_len": v.max_len, "non_solutions_seen": v.counterexamples}
    if v.kind == "holds_up_to":
        note = ""
        if v.counterexamples:
            note = f" ({v.counterexamples} uncertified non-solutions seen)"
        return Report(command, v.kind, stats=stats, completeness="bounded", status=BOUNDED,
                      text=f"holds up to length {v.max_len}{note}")
    text = f"{v.kind.replace('_', ' ')}: {_show(inst.sigma, v.counterexample)}"
    if v.certificate is not None:
        text += "\n" + _certificate_text(inst, v.certificate)
    return Report(command, v.kind, witness=_tokens(inst.sigma, v.counterexample),
                  certificate=_certificate_doc(inst, v.certificate), stats=stats, text=text)


def cmd_forall(args) -> Report:
    inst = formats.load_instance(args.instance)
    return _universal_report("forall", inst, universal.forall_check(inst, args.max_len))


def cmd_forallinf(args) -> Report:
    inst = formats.load_instance(args.instance)
    return _universal_report("forallinf", inst, universal.forall_inf_check(inst, args.max_len))


def cmd_countnonsol(args) -> Report:
    inst = formats.load_instance(args.instance)
    return _count_report("countnonsol", inst, universal.count_non_solutions(inst, args.max_len),
                         "non-solutions")


def _instance_report(command: str, inst, data=None) -> Report:
    text = formats.format_instance(inst)
    d = {"instance": text}
    d.update(data or {})
    return Report(command, "instance", data=d, text=text)


def cmd_reduce_forall(args) -> Report:
    inst = formats.load_instance(args.instance)
    red = universal.reduce_forall(inst, args.k) if args.all else \
        universal.reduce_to_forall_inf_pep(inst, args.k)
    return _instance_report("reduce-forall", red.output,
                            {"k_R": red.k_R, "pad_token": red.pad_token, "mirrored": red.mirrored})


def cmd_encode_pcp(args) -> Report:
    return _instance_report("encode-pcp", encode_pcp(formats.load_pcp(args.pcp)))


def cmd_encode_semithue(args) -> Report:
    return _instance_report("encode-semithue", encode_semithue(formats.load_semithue(args.system)))


def _derivation_doc(S, pi: Derivation) -> List[List[str]]:
    return [S.upsilon.token_list(w) for w in pi.words]


def cmd_decode(args) -> Report:
    S = formats.load_semithue(args.system)
    inst = encode_semithue(S)
    w = _word_arg(inst.sigma, args.word)
    pi = decode_semithue_solution(S, inst, w)
    return Report("decode", "derivation", witness=_tokens(inst.sigma, w),
                  data={"derivation": _derivation_doc(S, pi)}, text=pi.show(S.upsilon))


def cmd_derive_encode(args) -> Report:
    S = formats.load_semithue(args.system)
    words = [S.upsilon.word(w) for w in args.words]
    inst = encode_semithue(S)
    w = derivation_to_solution(S, words)
    return Report("derive-encode", "solution", witness=_tokens(inst.sigma, w),
                  data={"length": len(w)}, text=inst.sigma.show(w))


def cmd_reach_oracle(args) -> Report:
    S = formats.load_semithue(args.system)
    r = semithue_reach_oracle(S, args.max_steps, args.length_cap)
    ok = r.answer(args.even_only)
    pi = r.even_derivation if args.even_only else r.derivation
    stats = {"states": r.states, "length_cap": r.length_cap, "max_steps": r.max_steps}
    data = {"reachable": r.reachable, "even_reachable": r.even_reachable,
            "derivation": _derivation_doc(S, r.derivation) if r.derivation else None,
            "even_derivation": _derivation_doc(S, r.even_derivation) if r.even_derivation else None}
    label = "even nonzero " if args.even_only else ""
    if ok:
        return Report("reach-oracle", "reachable", stats=stats, data=data,
                      text=f"{label}reachable: {pi.show(S.upsilon)}")
    if r.complete:
        return Report("reach-oracle", "unreachable", stats=stats, data=data,
                      text=f"{label}unreachable")
    return Report("reach-oracle", "unreachable_up_to", stats=stats, data=data,
                  completeness="bounded", status=BOUNDED,
                  text=f"{label}not reached within the step/length caps")


def cmd_hbound(args) -> Report:
    r = higman.h_bound(args.n, args.k, args.s, args.node_budget)
    stats = {"nodes": r.nodes}
    if r.value is None:
        return Report("hbound", "budget_exceeded", stats=stats, completeness="bounded",
                      status=BOUNDED, text=f"budget exceeded after {r.nodes} nodes")
    return Report("hbound", "value", stats=stats, data={"value": r.value}, text=str(r.value))


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pep", description="Regular Post embedding problems with partial (co)directness.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *, instance=False, word=False, max_len=False, budget=False, help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        if instance:
            sp.add_argument("instance")
        if word:
            sp.add_argument("word", nargs="*", help="word tokens")
        if max_len:
            sp.add_argument("--max-len", type=int, default=10)
        if budget:
            sp.add_argument("--node-budget", type=int, default=solver.DEFAULT_NODE_BUDGET)
        return sp

    add("check", cmd_check, instance=True, word=True, help="is the word a solution?")
    add("solve", cmd_solve, instance=True, max_len=True, budget=True, help="least solution up to a length")
    add("count", cmd_count, instance=True, max_len=True, budget=True, help="count solutions")
    add("infinite", cmd_infinite, instance=True, max_len=True, budget=True,
        help="look for a pump certificate")
    add("minimize", cmd_minimize, instance=True, word=True, help="cut a solution down")
    sp = add("pump", cmd_pump, instance=True, word=True, help="pump a solution")
    sp.add_argument("--k", type=int, default=None)
    add("forall", cmd_forall, instance=True, max_len=True, help="are all words of R solutions?")
    add("forallinf", cmd_forallinf, instance=True, max_len=True,
        help="are almost all words of R solutions?")
    add("countnonsol", cmd_countnonsol, instance=True, max_len=True, help="count non-solutions")
    sp = add("reduce-forall", cmd_reduce_forall, instance=True,
             help="reduce to a plain almost-all instance")
    sp.add_argument("--k", type=int, default=None, help="removal threshold (default: DFA size of R)")
    sp.add_argument("--all", action="store_true", help="reduce the all-words question (pads first)")
    sp = sub.add_parser("encode-pcp", help="encode a PCP instance")
    sp.set_defaults(func=cmd_encode_pcp)
    sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sp.add_argument("pcp")
    for name, func, extra in (("encode-semithue", cmd_encode_semithue, None),
                              ("decode", cmd_decode, "word"),
                              ("derive-encode", cmd_derive_encode, "words"),
                              ("reach-oracle", cmd_reach_oracle, None)):
        sp = sub.add_parser(name)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        sp.add_argument("system")
        if extra == "word":
            sp.add_argument("word", nargs="*")
        elif extra == "words":
            sp.add_argument("words", nargs="+", help="one quoted word per derivation step")
    sp = sub.choices["reach-oracle"]
    sp.add_argument("--max-steps", type=int, default=None)
    sp.add_argument("--length-cap", type=int, default=None)
    sp.add_argument("--even-only", action="store_true")
    sp = sub.add_parser("hbound", help="length of the longest controlled bad sequence")
    sp.set_defaults(func=cmd_hbound)
    sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sp.add_argument("n", type=int)
    sp.add_argument("k", type=int)
    sp.add_argument("s", type=int)
    sp.add_argument("--node-budget", type=int, default=1_000_000)
    return p


INPUT_ERRORS = (formats.FormatError, RegexError, PepError, ReductionError, KeyError,
                ValueError, OSError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except DecodeError as e:
        print(f"pep: internal decode failure: {e}", file=sys.stderr)
        return BOUNDED
    except INPUT_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"pep: error: {msg}", file=sys.stderr)
        return INPUT_ERROR
    sys.stdout.write(report.render(args.format))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
