"""Batch command-line front end.

Every command takes a theory file plus, usually, a term (inline
expression or @file). Exit codes: 0 pass, 1 failed verdict or type
error, 2 usage or parse errors. ``--json`` prints machine-readable
reports on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graph, jterms, kernel, model, realizability as rz, retract
from .graph import GraphError, Theory
from .harness import GenConfig, gen_term, stream
from .parser import ParseError, parse_term, parse_theory, print_term
from .syntax import BaseTy, BaseVertex, Id, NatTy, Term


class UsageError(Exception):
    pass


def _read_theory(path: str) -> Theory:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read(), filename=path)


def _read_term(spec: str, theory: Theory) -> Term:
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            return parse_term(fh.read(), theory, filename=spec[1:])
    return parse_term(spec, theory)


def _fuel_flag(args) -> int:
    if args.fuel is not None:
        return args.fuel
    env = os.environ.get("TML_FUEL")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return 200


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_check(args) -> int:
    theory = _read_theory(args.theory)
    t = _read_term(args.term, theory)
    if args.type:
        ty = _read_term(args.type, theory)
        kernel.check_type(theory, (), t, ty)
        _emit(args, {"kind": "check", "verdict": "pass",
                     "type": print_term(ty)},
              f"ok: term checks against {print_term(ty)}")
    else:
        ty = kernel.infer_type(theory, (), t)
        _emit(args, {"kind": "check", "verdict": "pass",
                     "type": print_term(ty)},
              print_term(ty))
    return 0


def cmd_normalize(args) -> int:
    theory = _read_theory(args.theory)
    t = _read_term(args.term, theory)
    kernel.infer_type(theory, (), t)
    nf = kernel.normalize(theory, (), t)
    _emit(args, {"kind": "normalize", "verdict": "pass",
                 "normal_form": print_term(nf)}, print_term(nf))
    return 0


def _show_value(theory: Theory, v) -> str:
    match v:
        case model.VVertex(name):
            return f"vertex {name}"
        case model.VWord(w):
            if not w.letters:
                return f"identity word at {w.source}"
            body = " . ".join(e if o == 1 else f"{e}^" for e, o in w.letters)
            return f"word {body} : {w.source} -> {w.target}"
        case model.VNum(n):
            return f"numeral {n}"
        case model.VPair(a, b):
            return f"pair ({_show_value(theory, a)}, {_show_value(theory, b)})"
        case model.VTriv():
            return "trivial path"
    return "function value"


def cmd_eval(args) -> int:
    theory = _read_theory(args.theory)
    t = _read_term(args.term, theory)
    kernel.infer_type(theory, (), t)
    v = model.eval_term(theory, (), t)
    _emit(args, {"kind": "eval", "verdict": "pass",
                 "value": _show_value(theory, v)}, _show_value(theory, v))
    return 0


def cmd_realize(args) -> int:
    theory = _read_theory(args.theory)
    t = _read_term(args.term, theory)
    ty = kernel.infer_type(theory, (), t)
    r = rz.realize(theory, (), (), t, ty)
    ok = rz.check_realizes(theory, (), r, t, ty)
    match r:
        case rz.RBase(p):
            detail = print_term(p)
        case rz.RNat(n, proof):
            detail = f"numeral {n}, proof {print_term(proof)}"
        case rz.RStar():
            detail = "realized identity proof"
        case rz.RPair(_, _):
            detail = "pair of realizers"
        case _:
            detail = "realizer operation"
    _emit(args, {"kind": "realize", "verdict": "pass" if ok else "fail",
                 "realizer": detail},
          detail if ok else f"realizer fails its clause: {detail}")
    return 0 if ok else 1


def cmd_canon(args) -> int:
    theory = _read_theory(args.theory)
    t = _read_term(args.term, theory)
    kernel.check_type(theory, (), t, NatTy())
    numeral, proof = retract.canon_nat(theory, t)
    _emit(args, {"kind": "canon", "verdict": "pass",
                 "numeral": print_term(numeral), "proof": print_term(proof)},
          f"{print_term(numeral)}\nproof: {print_term(proof)}")
    return 0


def cmd_pi0(args) -> int:
    theory = _read_theory(args.theory)
    samples: list[Term] = [BaseVertex(v) for v in theory.vertices]
    rng_count = max(0, args.samples - len(samples))
    for i in range(rng_count):
        try:
            samples.append(gen_term(theory, GenConfig(
                seed=args.seed * 7919 + i, fuel=3,
                type_target=BaseTy(theory.name))))
        except Exception:
            continue
    report = retract.pi0_report(theory, samples)
    _emit(args, json.loads(report.to_json()),
          f"pi0: {'pass' if report.verdict else 'fail'} "
          f"({report.samples} samples)")
    return 0 if report.verdict else 1


def cmd_retract(args) -> int:
    theory = _read_theory(args.theory)
    report = retract.retract_report(theory, fuel=_fuel_flag(args),
                                    seed=args.seed)
    _emit(args, json.loads(report.to_json()),
          f"retract: {'pass' if report.verdict else 'fail'} "
          f"({report.samples} samples, {report.millis} ms)")
    if report.verdict:
        eq = retract.equivalence_report(theory, fuel=_fuel_flag(args),
                                        seed=args.seed)
        _emit(args, json.loads(eq.to_json()),
              f"equivalence: {'pass' if eq.verdict else 'fail'} "
              f"({eq.samples} samples, {eq.millis} ms)")
        return 0 if eq.verdict else 1
    return 1


def cmd_word(args) -> int:
    theory = _read_theory(args.theory)
    w = graph.parse_word_expr(theory, args.term)
    if w.letters:
        body = " . ".join(e if o == 1 else f"{e}^" for e, o in w.letters)
    else:
        body = f"1@{w.source}"
    _emit(args, {"kind": "word", "verdict": "pass", "reduced": body,
                 "source": w.source, "target": w.target},
          f"{body} : {w.source} -> {w.target}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tml",
        description="Type checker and evaluators for the theory "
                    "generated by a reflexive graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, term=True, type_flag=False):
        p = sub.add_parser(name)
        p.add_argument("theory", help="theory file (.mlg)")
        if term:
            p.add_argument("term", help="term expression or @file")
        if type_flag:
            p.add_argument("--type", help="expected type expression")
        p.add_argument("--json", action="store_true")
        p.add_argument("--fuel", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=50)
        p.set_defaults(fn=fn)
        return p

    add("check", cmd_check, type_flag=True)
    add("normalize", cmd_normalize)
    add("eval", cmd_eval)
    add("realize", cmd_realize)
    add("canon", cmd_canon)
    add("pi0", cmd_pi0, term=False)
    add("retract", cmd_retract, term=False)
    add("word", cmd_word)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except kernel.TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (rz.RealizeUnsupported, model.EvalUnsupported,
            model.NotANumber) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
