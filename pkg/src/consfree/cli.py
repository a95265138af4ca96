"""Command-line front end.

Subcommands: run, analyze, sweep, bound, mcv-encode, mcv-decode, mcv-eval,
tm-run, tm-compile.  Exit status 0 on success (the True/False verdict is
part of the report, not the status), 2 when a run times out, gets stuck,
or trips the nontermination guard, 1 on usage and parse errors.

Reports are emitted in one of three formats: human (key = value lines),
csv-record (fixed column set, see records.COLUMNS), json-record (one JSON
object per line, fixed field order).  Identical invocations produce byte
identical output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import analysis, circuits, machines, nondet, records
from .engines import (
    Budget,
    detect_call_overlap,
    eval_memo,
    eval_stack,
    eval_tree,
    reach_bound,
)
from .errors import CfError, ParseError, ReachBoundExceeded, Stuck, Timeout, ValidationError
from .randgen import INPUT_GENERATORS, input_bits
from .syntax import Bits, Program, format_bits, has_choose, parse_input, parse_program

ENGINES = ("tree", "stack", "stack-tco", "memo", "ncf-search", "ncf-saturate", "confirm")
NCF_ENGINES = ("ncf-search", "ncf-saturate")
FORMATS = ("human", "csv-record", "json-record")
DEFAULT_BUDGET_STEPS = 10**7


@dataclass
class RunSpec:
    """Everything one dispatch needs; built from the parsed argument vector."""

    subcommand: str
    program_path: Optional[str] = None
    input_text: Optional[str] = None
    input_file: Optional[str] = None
    engine: str = "tree"
    budget: int = DEFAULT_BUDGET_STEPS
    fmt: str = "human"
    tco: bool = False
    assert_suffix: bool = False
    seed: int = 0
    generator: str = "ones"
    sweep_range: Optional[str] = None
    circuit_path: Optional[str] = None
    bits_text: Optional[str] = None
    machine_path: Optional[str] = None
    list_form: bool = False
    n_max: int = 64


class UsageError(CfError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(message)


def _load_program(path: str) -> Program:
    return parse_program(Path(path).read_text(encoding="utf-8"), ncf=True)


def _input_from(spec: RunSpec) -> Bits:
    if spec.input_file:
        return parse_input(Path(spec.input_file).read_text(encoding="utf-8"))
    return parse_input(spec.input_text or "")


def _emit(rec: dict, fmt: str, header: bool = True) -> None:
    if fmt == "json-record":
        print(records.to_json(rec))
    elif fmt == "csv-record":
        if header:
            print(records.csv_header())
        print(records.to_csv_row(rec))
    else:
        for line in records.human_lines(rec):
            print(line)


def _run_one(program, name, x, spec: RunSpec) -> dict:
    budget = Budget(spec.budget)
    check = spec.assert_suffix
    engine = spec.engine
    if engine == "tree":
        _, stats = eval_tree(program, x, budget, check_suffix=check)
        return records.stats_record(engine, name, len(x), stats)
    if engine == "stack":
        stats = eval_stack(program, x, budget, spec.tco, check_suffix=check)
        return records.stats_record(engine, name, len(x), stats)
    if engine == "stack-tco":
        stats = eval_stack(program, x, budget, True, check_suffix=check)
        return records.stats_record(engine, name, len(x), stats)
    if engine == "memo":
        stats = eval_memo(program, x, check_suffix=check)
        return records.stats_record(engine, name, len(x), stats)
    if engine == "ncf-search":
        res = nondet.search(program, x, budget)
        if not res.accepted and res.paths_timed_out:
            raise Timeout(f"{res.paths_timed_out} paths exceeded the budget")
        return records.make_record(engine, name, len(x), res.accepted)
    if engine == "ncf-saturate":
        res = nondet.saturate(program, x)
        return records.make_record(
            engine,
            name,
            len(x),
            res.accepted,
            distinct_configs=res.configs,
            cache_entries=res.triples,
            time_steps=res.updates,
        )
    if engine == "confirm":
        cs = nondet.confirm_log2(program, x, budget)
        return records.make_record(
            engine,
            name,
            len(x),
            cs.result,
            time_steps=cs.tree_size,
            tree_size=cs.tree_size,
            max_confirm_frames=cs.max_confirm_frames,
            bound_ok=cs.bound_ok,
        )
    raise UsageError(f"unknown engine {engine!r}")


def _cmd_run(spec: RunSpec) -> int:
    program = _load_program(spec.program_path)
    if has_choose(program) and spec.engine not in NCF_ENGINES:
        raise UsageError(
            f"program contains choose; engine must be one of {', '.join(NCF_ENGINES)}"
        )
    x = _input_from(spec)
    name = Path(spec.program_path).name
    rec = _run_one(program, name, x, spec)
    _emit(rec, spec.fmt)
    return 0


def _cmd_analyze(spec: RunSpec) -> int:
    program = _load_program(spec.program_path)
    report = analysis.call_shape_report(program)
    name = Path(spec.program_path).name
    if spec.fmt == "json-record":
        import json

        print(
            json.dumps(
                {
                    "program": name,
                    "is_cftr": report.is_cftr,
                    "all_calls_linear": report.all_calls_linear,
                    "body_alpha": [[d, str(a)] for d, a in report.body_alpha],
                    "call_sites": report.to_records(),
                },
                separators=(", ", ": "),
            )
        )
    elif spec.fmt == "csv-record":
        print("definition,path,fname,classification")
        for r in report.to_records():
            print(f"{r['definition']},{r['path']},{r['fname']},{r['classification']}")
    else:
        print(f"program = {name}")
        print(f"is_cftr = {'true' if report.is_cftr else 'false'}")
        print(f"all_calls_linear = {'true' if report.all_calls_linear else 'false'}")
        for d, a in report.body_alpha:
            print(f"alpha {d} = {a}")
        for r in report.to_records():
            print(f"site {r['definition']}[{r['path']}] {r['fname']}: {r['classification']}")
    return 0


def _cmd_sweep(spec: RunSpec) -> int:
    program = _load_program(spec.program_path)
    if has_choose(program) and spec.engine not in NCF_ENGINES:
        raise UsageError(
            f"program contains choose; engine must be one of {', '.join(NCF_ENGINES)}"
        )
    name = Path(spec.program_path).name
    try:
        lo, hi = spec.sweep_range.split("..")
        n_lo, n_hi = int(lo), int(hi)
    except (ValueError, AttributeError):
        raise UsageError("sweep range must look like 1..14")
    first = True
    for n in range(n_lo, n_hi + 1):
        x = input_bits(spec.generator, n, spec.seed)
        try:
            rec = _run_one(program, name, x, spec)
        except Timeout:
            rec = records.make_record(spec.engine, name, n, "timeout")
        except (Stuck, ReachBoundExceeded) as exc:
            kind = "stuck" if isinstance(exc, Stuck) else "reach-bound"
            rec = records.make_record(spec.engine, name, n, kind)
        _emit(rec, spec.fmt, header=first)
        first = False
    return 0


def _cmd_bound(spec: RunSpec) -> int:
    program = _load_program(spec.program_path)
    name = Path(spec.program_path).name
    print("program,n,reach_bound")
    for n in range(0, spec.n_max + 1):
        print(f"{name},{n},{reach_bound(program, n)}")
    return 0


def _cmd_mcv_encode(spec: RunSpec) -> int:
    c = circuits.parse_circuit(Path(spec.circuit_path).read_text(encoding="utf-8"))
    enc = circuits.encode_mcv(c)
    print(format_bits(enc.bits, list_form=spec.list_form))
    return 0


def _cmd_mcv_decode(spec: RunSpec) -> int:
    text = spec.bits_text
    if text and Path(text).is_file():
        text = Path(text).read_text(encoding="utf-8")
    bits = parse_input(text or "")
    print(circuits.format_circuit(circuits.decode_mcv(bits)), end="")
    return 0


def _cmd_mcv_eval(spec: RunSpec) -> int:
    c = circuits.parse_circuit(Path(spec.circuit_path).read_text(encoding="utf-8"))
    print("True" if circuits.eval_circuit(c) else "False")
    return 0


def _cmd_tm_run(spec: RunSpec) -> int:
    m = machines.parse_machine(Path(spec.machine_path).read_text(encoding="utf-8"))
    x = _input_from(spec)
    accept, steps = machines.run_tm(m, x, Budget(spec.budget))
    rec = records.make_record("tm", Path(spec.machine_path).name, len(x), accept, time_steps=steps)
    _emit(rec, spec.fmt)
    return 0


def _cmd_tm_compile(spec: RunSpec) -> int:
    m = machines.parse_machine(Path(spec.machine_path).read_text(encoding="utf-8"))
    from .syntax import pretty_print

    print(pretty_print(machines.compile_tm(m)), end="")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="consfree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, engine=True):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET_STEPS)
        p.add_argument("--format", dest="fmt", choices=FORMATS, default="human")
        if engine:
            p.add_argument("--engine", choices=ENGINES, default="tree")
            p.add_argument("--tco", action="store_true", help="tail-call reuse for the stack engine")
            p.add_argument("--assert-suffix-lemma", dest="assert_suffix", action="store_true",
                           help="check every value is a boolean or input suffix")

    p = sub.add_parser("run", help="evaluate a program on one input")
    p.add_argument("program")
    p.add_argument("input", nargs="?", default="")
    p.add_argument("--input-file")
    common(p)

    p = sub.add_parser("analyze", help="call-shape report and tail-recursion check")
    p.add_argument("program")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="human")

    p = sub.add_parser("sweep", help="run over an input-size range")
    p.add_argument("program")
    p.add_argument("range", help="size range like 1..14")
    p.add_argument("--gen", dest="generator", choices=INPUT_GENERATORS, default="ones")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("bound", help="configuration-count bound table")
    p.add_argument("program")
    p.add_argument("--n-max", dest="n_max", type=int, default=64)

    p = sub.add_parser("mcv-encode", help="encode a circuit file as a bit string")
    p.add_argument("circuit")
    p.add_argument("--list-form", action="store_true")

    p = sub.add_parser("mcv-decode", help="decode a bit string (literal or file) to a circuit")
    p.add_argument("bits")

    p = sub.add_parser("mcv-eval", help="evaluate a circuit file directly")
    p.add_argument("circuit")

    p = sub.add_parser("tm-run", help="run a machine description on an input")
    p.add_argument("machine")
    p.add_argument("input", nargs="?", default="")
    p.add_argument("--input-file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET_STEPS)
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="human")

    p = sub.add_parser("tm-compile", help="compile a machine description to a program")
    p.add_argument("machine")

    return parser


def _to_spec(args) -> RunSpec:
    spec = RunSpec(subcommand=args.subcommand)
    mapping = {
        "program": "program_path",
        "input": "input_text",
        "input_file": "input_file",
        "engine": "engine",
        "budget": "budget",
        "fmt": "fmt",
        "tco": "tco",
        "assert_suffix": "assert_suffix",
        "seed": "seed",
        "generator": "generator",
        "range": "sweep_range",
        "circuit": "circuit_path",
        "bits": "bits_text",
        "machine": "machine_path",
        "list_form": "list_form",
        "n_max": "n_max",
    }
    for src, dst in mapping.items():
        if hasattr(args, src):
            setattr(spec, dst, getattr(args, src))
    return spec


_DISPATCH = {
    "run": _cmd_run,
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "bound": _cmd_bound,
    "mcv-encode": _cmd_mcv_encode,
    "mcv-decode": _cmd_mcv_decode,
    "mcv-eval": _cmd_mcv_eval,
    "tm-run": _cmd_tm_run,
    "tm-compile": _cmd_tm_compile,
}


def dispatch(spec: RunSpec) -> int:
    return _DISPATCH[spec.subcommand](spec)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return dispatch(_to_spec(args))
    except (Timeout, Stuck, ReachBoundExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ParseError, ValidationError, OSError, CfError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
