"""Command-line front end: ``nztcheck <command> ...``.

Exit status: 0 when a result was produced (a false verdict included), 1 on
usage or input errors, 2 when a size cap or search guard refused the work.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .core import InstructionSequence, parse, render
from .dispatch import STRATEGIES, decide, exhaustive_min_search
from .errors import CapExceeded, GuardExceeded, PgaSyntaxError, PreconditionError, PropSyntaxError
from .executor import RegisterState, Terminated, brute_force_check, default_cap, execute, symbolic_check
from .generators import gen_tstnz, gen_tstnz_prime, min_len
from .membership import DEFAULT_READING, READINGS, is_member_pc, is_member_pce
from .poly import classify
from .reduction import (ReductionParams, build_psi, compile_phi_star, parse_prop, psi_inputs,
                        sat_oracle)
from .transforms import chi, eliminate, fix_register

SCHEMA = "nztcheck/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps({"schema": SCHEMA, "command": args.command, **payload}, indent=2))
    else:
        print(text)


def _read_program(path: str) -> InstructionSequence:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return parse(text)


def _write_or_print(args, x: InstructionSequence, payload: dict) -> None:
    text = render(x)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    _emit(args, {**payload, "program": text, "len": len(x)}, text)


def _parse_bits(text: str) -> tuple:
    raw = text.replace(",", "").replace(" ", "")
    if not raw or set(raw) - {"0", "1"}:
        raise UsageError(f"input must be a string of bits b1 b2 ... bn, got {text!r}")
    return tuple(int(c) for c in raw)


def _parse_assignment(text: str) -> dict:
    alpha = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            i, b = part.split("=")
            alpha[int(i)] = int(b)
        except ValueError as e:
            raise UsageError(f"bad assignment {part!r}; expected i=b") from e
    return alpha


def cmd_gen(args):
    x = gen_tstnz(args.n) if args.kind == "tstnz" else gen_tstnz_prime(args.n)
    _write_or_print(args, x, {"family": args.kind, "n": args.n})


def cmd_run(args):
    x = _read_program(args.program)
    bits = _parse_bits(args.inputs)
    trace = [] if args.trace else None
    res = execute(x, RegisterState.fresh(bits), trace)
    if isinstance(res, Terminated):
        payload = {"outcome": "terminated", "output": res.output, "steps": res.steps}
        text = f"terminated with output {res.output} after {res.steps} steps"
    else:
        payload = {"outcome": "inaction", "reason": res.reason.value, "at": res.at, "steps": res.steps}
        text = f"inaction ({res.reason.value}) at instruction {res.at}"
    if trace is not None:
        payload["trace"] = [{"position": p, "instruction": str(u), "reply": r} for p, u, r in trace]
        text = "\n".join(f"{p:>5}  {str(u):<16} {'' if r is None else r}" for p, u, r in trace) + "\n" + text
    _emit(args, {"input": list(bits), **payload}, text)


def cmd_check(args):
    x = _read_program(args.program)
    v = decide(x, args.n, args.strategy, cap=args.cap, jobs=args.jobs, reading=args.reading)
    lines = [f"{str(v.result).lower()}  (strategy {v.strategy_used}, len {v.length}, min_len {v.min_len})"]
    lines += [f"  {k}: {json.dumps(val)}" for k, val in v.certificate.items()]
    _emit(args, {"verdict": v.as_dict()}, "\n".join(lines))


def cmd_classify(args):
    x = _read_program(args.program)
    n = args.n if args.n is not None else x.max_input_index()
    g = classify(x)
    payload = {
        "n": n, "len": len(x), "good": g.is_good, "very_good": g.is_very_good,
        "multiply_read": {str(k): v for k, v in sorted(g.multiply_read.items())},
    }
    if n >= 1:
        payload["min_len"] = min_len(n)
        payload["shortest_length_for_n"] = len(x) == min_len(n)
        payload["member_pc"] = is_member_pc(x, n).member
        payload["member_pce"] = is_member_pce(x, n, args.reading).member
    text = "\n".join(f"{k}: {json.dumps(v)}" for k, v in payload.items())
    _emit(args, payload, text)


def cmd_transform(args):
    x = _read_program(args.program)
    if args.op == "chi":
        if args.aux_index is None:
            raise UsageError("--aux-index is required for chi")
        y = chi(x, args.aux_index)
        detail = {"aux_index": args.aux_index}
    else:
        if not args.assign:
            raise UsageError(f"--assign is required for {args.op}")
        alpha = _parse_assignment(args.assign)
        if args.op == "fix":
            if len(alpha) != 1:
                raise UsageError("fix takes exactly one i=b pair")
            ((i, b),) = alpha.items()
            y = fix_register(x, i, b)
        else:
            y = eliminate(x, alpha)
        detail = {"assign": {str(k): v for k, v in alpha.items()}}
    _write_or_print(args, y, {"op": args.op, **detail})


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"--q must be a rational like 2/5, got {text!r}") from e


def cmd_reduce(args):
    prop = parse_prop(args.prop)
    params = ReductionParams(_fraction(args.q), args.m)
    x = build_psi(prop, params)
    n_inputs = psi_inputs(prop, params)
    payload = {"prop": str(prop), "prop_len": len(prop), "q": str(params.q), "m": params.m,
               "c": params.c, "c_prime": params.c_prime, "N": n_inputs,
               "phi_len": len(compile_phi_star(prop)) + 2, "min_len_N": min_len(n_inputs)}
    text = render(x)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.verify:
        cap = default_cap()
        unsat = not sat_oracle(prop).satisfiable
        if n_inputs <= cap:
            computes, method = brute_force_check(x, n_inputs, cap, jobs=args.jobs), "brute"
        elif args.symbolic:
            computes, method = symbolic_check(x, n_inputs), "symbolic"
        else:
            raise CapExceeded(n_inputs, cap)
        payload["verify"] = {"method": method, "computes": computes, "unsat": unsat,
                             "agree": computes == unsat}
    lines = [text, f"N = {n_inputs}, len = {len(x)}"]
    if "verify" in payload:
        ver = payload["verify"]
        lines.append(f"computes tstnz^N: {ver['computes']}; unsat: {ver['unsat']} ({ver['method']})")
    _emit(args, {**payload, "program": text, "len": len(x)}, "\n".join(lines))


def cmd_search(args):
    r = exhaustive_min_search(args.n, args.max_len, jobs=args.jobs)
    payload = r.as_dict()
    if args.emit_witnesses:
        payload["witnesses"] = [render(w) for w in r.witnesses]
    lines = [f"min_found: {r.min_found}"]
    if args.emit_witnesses:
        lines += [render(w) for w in r.witnesses]
    else:
        lines.append(f"{len(r.witnesses)} witnesses ({len(r.canonical_witnesses)} up to aux renaming)")
    _emit(args, payload, "\n".join(lines))


def cmd_minlen(args):
    value = min_len(args.n)
    _emit(args, {"n": args.n, "min_len": value}, str(value))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for brute force and search")

    parser = _Parser(prog="nztcheck", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="emit a reference program")
    p.add_argument("--family", "--kind", dest="kind", choices=("tstnz", "tstnz-prime"),
                   default="tstnz-prime")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", parents=[common], help="execute a program on one input")
    p.add_argument("--program", required=True)
    p.add_argument("--inputs", "--input", dest="inputs", required=True,
                   help="bits b1 b2 ... bn, e.g. 0110 or 0,1,1,0")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", parents=[common], help="decide whether a program computes tstnz^n")
    p.add_argument("--program", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--reading", choices=READINGS, default=DEFAULT_READING,
                   help="reachability condition used for a doubly-read register")
    p.add_argument("--cap", type=int, default=None, help="largest n for exhaustive evaluation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", parents=[common], help="syntactic classification")
    p.add_argument("--program", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--reading", choices=READINGS, default=DEFAULT_READING)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("transform", parents=[common], help="register elimination or aux flip")
    p.add_argument("--program", required=True)
    p.add_argument("--op", choices=("eliminate", "fix", "chi"), required=True)
    p.add_argument("--assign", help='e.g. "1=0,4=1"')
    p.add_argument("--aux-index", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reduce", parents=[common], help="build the program for a proposition")
    p.add_argument("--prop", required=True)
    p.add_argument("--q", default="2/5")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true",
                   help="compare correctness with unsatisfiability (exhaustive when N <= cap)")
    p.add_argument("--symbolic", action="store_true",
                   help="with --verify, use the exact BDD check when N exceeds the cap")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("search", parents=[common], help="exhaustive shortest-program search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--emit-witnesses", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("minlen", parents=[common], help="length of the shortest tstnz^n program")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_minlen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CapExceeded, GuardExceeded) as e:
        print(f"nztcheck: refused: {e}", file=sys.stderr)
        return 2
    except (UsageError, PgaSyntaxError, PropSyntaxError, PreconditionError, ValueError) as e:
        print(f"nztcheck: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
