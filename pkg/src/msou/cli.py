"""Batch command line.

Exit codes: 0 ok, 1 the checked property failed, 2 usage or parse error,
3 budget exceeded.  ``-`` reads a file argument from standard input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import codec, minsky, reduction, vecseq
from .evaluate import BudgetExceeded, EvalBudget, EvaluationError, evaluate
from .logic import Alphabet, FormulaError, analyze, parse_formula, render_formula

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _machine(path):
    return minsky.parse_machine(_read(path))


def _word(path):
    return codec.parse_word(_read(path))


def cmd_decode(args) -> int:
    word = _word(args.wordfile)
    n = args.n or max(word, default=0)
    t = codec.decode_tree_sequence(word, n)
    if args.dot:
        text = codec.tree_to_dot(t)
    else:
        text = codec.tree_to_text(t).rstrip("\n")
    payload = {"depth": t.depth, "trees": _as_lists(t.trees),
               "degrees": {str(k): codec.degree_sequence(t, k) for k in range(1, t.depth)}}
    if args.dot:
        payload["dot"] = text
    _emit(args, payload, text)
    return OK


def _as_lists(node):
    return [_as_lists(c) for c in node]


def cmd_encode(args) -> int:
    t = codec.tree_from_text(_read(args.treefile))
    word = codec.encode_tree_sequence(t)
    _emit(args, {"word": word}, codec.format_word(word))
    return OK


def cmd_compile(args) -> int:
    f = reduction.machine_to_formula(_machine(args.machinefile))
    text = render_formula(f)
    stats = analyze(f)
    _emit(args, {"formula": text, "size": stats.size,
                 "quantifier_depth": stats.quantifier_depth}, text)
    return OK


def _find_run(args, m):
    if args.max_len > args.budget:
        raise BudgetExceeded(f"--max-len {args.max_len} exceeds --budget {args.budget}")
    return minsky.find_accepting_run(m, args.max_len, args.max_counter)


def cmd_simulate(args) -> int:
    m = _machine(args.machinefile)
    r = _find_run(args, m)
    if r is None:
        _emit(args, {"run": None}, "no accepting run within bounds")
        return FAILED
    desc = minsky.describe_run(r)
    text = "\n".join(f"{c.state} {c.c1} {c.c2}" for c in r.configurations)
    _emit(args, {"run": r.to_json(), "description": list(desc)},
          text + "\ndescription: " + " ".join(map(str, desc)))
    return OK


def cmd_witness(args) -> int:
    m = _machine(args.machinefile)
    r = _find_run(args, m)
    if r is None:
        print("no accepting run within bounds", file=sys.stderr)
        if args.json:
            print(json.dumps({"word": None}))
        return FAILED
    desc = minsky.describe_run(r)
    t = reduction.witness_tree_sequence(reduction.WitnessParams(desc, args.trees))
    word = codec.encode_tree_sequence(t)
    _emit(args, {"word": word, "description": list(desc), "trees": args.trees},
          codec.format_word(word))
    return OK


def cmd_check_witness(args) -> int:
    m = _machine(args.machinefile)
    word = _word(args.wordfile)
    t = codec.decode_tree_sequence(word, 4)
    report = reduction.check_conditions(t, m, args.ignore_prefix)
    lines = [f"({k}) {'true' if getattr(report, k) else 'false'}" for k in "abcd"]
    lines.append("description: " + " ".join(map(str, report.description)))
    _emit(args, report.to_json(), "\n".join(lines))
    return OK if report.all_true else FAILED


def _parse_assignment(items):
    env = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad assignment {item!r}; expected name=value")
        if name[:1].isupper():
            env[name] = frozenset(int(v) for v in value.split(",") if v)
        else:
            env[name] = int(value)
    return env


def cmd_eval(args) -> int:
    word = _word(args.wordfile)
    env = _parse_assignment(args.assign)
    n = args.n or max(word, default=1)
    f = parse_formula(_read(args.formulafile), Alphabet(n), free=env.keys())
    budget = EvalBudget(u_threshold=args.u_threshold, max_word_length=args.budget,
                        max_set_depth=args.max_set_depth)
    value = evaluate(f, word, env, budget)
    _emit(args, {"value": value, "u_threshold": args.u_threshold}, str(value).lower())
    return OK if value else FAILED


def cmd_vecseq(args) -> int:
    p = vecseq.EquivParams(args.B, args.B_prime) if args.op != "identity" else None
    if args.op == "mix":
        F = vecseq.window_from_json(_read(args.files[0]))
        G = vecseq.window_from_json(_read(args.files[1]))
        r = vecseq.is_window_mix(F, G, p, args.budget)
        cex = list(r.counterexample) if r.counterexample is not None else None
        text = "mix" if r.is_mix else f"not a mix; counterexample selection {cex}"
        _emit(args, {"is_mix": r.is_mix, "counterexample": cex}, text)
        return OK if r.is_mix else FAILED
    if args.op == "equiv":
        f = vecseq.number_window_from_json(_read(args.files[0]))
        g = vecseq.number_window_from_json(_read(args.files[1]))
        value = vecseq.window_equiv(f, g, p)
        _emit(args, {"equivalent": value}, str(value).lower())
        return OK if value else FAILED
    res = vecseq.identity_mix_harness(args.side, args.d, args.budget, keep_examples=1)
    payload = {"d": res.d, "side": res.side, "B": res.params.B, "B_prime": res.params.B_prime,
               "candidates": res.candidates, "refuted": res.refuted}
    if res.counterexamples:
        G, cex = res.counterexamples[0]
        payload["example"] = {"candidate": [list(v) for v in G], "counterexample": list(cex)}
    _emit(args, payload, f"refuted {res.refuted}/{res.candidates} projection candidates")
    return OK if res.all_refuted else FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit one JSON document")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="work cap: max word length (eval), max run length "
                             "(simulate, witness), max selections (vecseq)")

    parser = argparse.ArgumentParser(prog="msou", parents=[common],
                                     description="MSO+U reduction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    sp = add("decode", cmd_decode, help="word -> tree sequence")
    sp.add_argument("wordfile")
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--n", type=int, help="alphabet size (default: largest letter)")

    sp = add("encode", cmd_encode, help="tree sequence -> canonical word")
    sp.add_argument("treefile")

    sp = add("compile", cmd_compile, help="machine -> closed formula")
    sp.add_argument("machinefile")

    for name, fn in (("simulate", cmd_simulate), ("witness", cmd_witness)):
        sp = add(name, fn)
        sp.add_argument("machinefile")
        sp.add_argument("--max-len", type=int, default=10)
        sp.add_argument("--max-counter", type=int, default=6)
        if name == "witness":
            sp.add_argument("--trees", type=int, required=True)

    sp = add("check-witness", cmd_check_witness, help="conditions (a)-(d) on a word")
    sp.add_argument("machinefile")
    sp.add_argument("wordfile")
    sp.add_argument("--ignore-prefix", type=int, default=0)

    sp = add("eval", cmd_eval, help="bounded evaluation of a formula on a word")
    sp.add_argument("formulafile")
    sp.add_argument("wordfile")
    sp.add_argument("--u-threshold", type=int, default=2)
    sp.add_argument("--n", type=int, help="alphabet size (default: largest letter)")
    sp.add_argument("--max-set-depth", type=int, default=3)
    sp.add_argument("--assign", action="append", metavar="VAR=VALUE",
                    help="free variable: x=3 or X=0,2,5")

    sp = add("vecseq", cmd_vecseq, help="window operations on JSON vector sequences")
    sp.add_argument("op", choices=["mix", "equiv", "identity"])
    sp.add_argument("files", nargs="*")
    sp.add_argument("--B", type=int, default=0)
    sp.add_argument("--B-prime", type=int, default=0)
    sp.add_argument("--side", type=int, default=3)
    sp.add_argument("--d", type=int, default=2)
    return parser


_DEFAULT_BUDGET = {"eval": 16, "simulate": 64, "witness": 64}


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    if not hasattr(args, "budget"):
        args.budget = _DEFAULT_BUDGET.get(args.command, vecseq.DEFAULT_MIX_BUDGET)
    if args.command == "vecseq" and args.op in ("mix", "equiv") and len(args.files) != 2:
        parser.error(f"vecseq {args.op} takes two JSON files")
    if sum(1 for v in vars(args).values() if v == "-") > 1:
        parser.error("at most one argument may read standard input")
    try:
        return args.func(args)
    except (BudgetExceeded, vecseq.MixBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (UsageError, FormulaError, EvaluationError, codec.CodecError,
            minsky.MachineError, vecseq.WindowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main(argv=None) -> None:
    try:
        code = dispatch(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not our failure
        sys.stdout = None
        code = OK
    sys.exit(code)


if __name__ == "__main__":
    main()
