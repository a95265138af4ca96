"""Straight-line and/or programs and their bit-string wire format.

A circuit is a list of assignments `xi := xj OP xk` over variables indexed
from 0; variable 0 is the constant False and variable 1 the constant True,
and neither is ever assigned.  Instructions are stored (and encoded) most
recently assigned first, so the output variable is the first list element
and every operand refers to the constants or to the target of a later list
element.

Wire format: a unary header of block_len ones followed by one zero, where
block_len = ceil(log2(num_vars)); then per instruction, in stored order,
the target index in block_len binary bits (most significant first), one
operator bit (OR = 0, AND = 1), and the two operand indices.  End of input
terminates the program; there is no trailing delimiter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from random import Random
from typing import Tuple

from . import corpus
from .errors import MalformedCircuit, MalformedEncoding, ParseError
from .syntax import Bits, Program

OP_OR = "OR"
OP_AND = "AND"


@dataclass(frozen=True, slots=True)
class Instruction:
    lhs: int
    op: str  # OP_OR or OP_AND
    arg1: int
    arg2: int


@dataclass(frozen=True, slots=True)
class StraightLineProgram:
    instructions: Tuple[Instruction, ...]  # reverse execution order
    num_vars: int  # total variable count including the two constants


@dataclass(frozen=True, slots=True)
class McvEncoding:
    bits: Bits
    block_len: int


def validate_circuit(c: StraightLineProgram) -> None:
    if not c.instructions:
        raise MalformedCircuit("a circuit needs at least one instruction")
    if c.num_vars != len(c.instructions) + 2:
        raise MalformedCircuit(
            f"num_vars is {c.num_vars} but {len(c.instructions)} instructions define "
            f"{len(c.instructions)} variables beyond the two constants"
        )
    assigned = set()
    for ins in c.instructions:
        if ins.op not in (OP_OR, OP_AND):
            raise MalformedCircuit(f"unknown operator {ins.op!r}")
        if ins.lhs in (0, 1):
            raise MalformedCircuit("the constant variables x0 and x1 cannot be assigned")
        if ins.lhs in assigned:
            raise MalformedCircuit(f"variable x{ins.lhs} is assigned twice")
        assigned.add(ins.lhs)
    if assigned != set(range(2, c.num_vars)):
        raise MalformedCircuit("assigned variables must be exactly x2..x{num_vars-1}")
    later = {0, 1}  # targets of later list elements = earlier in execution order
    for ins in reversed(c.instructions):
        for a in (ins.arg1, ins.arg2):
            if a not in later:
                raise MalformedCircuit(
                    f"x{ins.lhs} uses x{a} before it is computed"
                )
        later.add(ins.lhs)


def eval_circuit(c: StraightLineProgram) -> bool:
    """Run the instructions in execution order with stored values."""
    validate_circuit(c)
    values = {0: False, 1: True}
    for ins in reversed(c.instructions):
        a, b = values[ins.arg1], values[ins.arg2]
        values[ins.lhs] = (a or b) if ins.op == OP_OR else (a and b)
    return values[c.instructions[0].lhs]


# ---------------------------------------------------------------------------
# Wire format


def block_length(num_vars: int) -> int:
    return max(1, (num_vars - 1).bit_length())


def encode_mcv(c: StraightLineProgram) -> McvEncoding:
    validate_circuit(c)
    k = block_length(c.num_vars)
    bits = [1] * k + [0]
    for ins in c.instructions:
        bits.extend(int(b) for b in format(ins.lhs, f"0{k}b"))
        bits.append(0 if ins.op == OP_OR else 1)
        bits.extend(int(b) for b in format(ins.arg1, f"0{k}b"))
        bits.extend(int(b) for b in format(ins.arg2, f"0{k}b"))
    return McvEncoding(tuple(bits), k)


def decode_mcv(bits: Bits) -> StraightLineProgram:
    k = 0
    while k < len(bits) and bits[k] == 1:
        k += 1
    if k == 0:
        raise MalformedEncoding(0, "unary header must start with a one")
    if k >= len(bits):
        raise MalformedEncoding(len(bits) - 1, "unary header is not terminated by a zero")
    pos = k + 1
    rec = 3 * k + 1
    body = len(bits) - pos
    if body == 0:
        raise MalformedEncoding(pos, "no instructions after the header")
    if body % rec != 0:
        raise MalformedEncoding(len(bits) - 1, f"instruction records must be {rec} bits each")

    def field(p):
        return int("".join(str(b) for b in bits[p : p + k]), 2)

    instructions = []
    while pos < len(bits):
        lhs = field(pos)
        op = OP_AND if bits[pos + k] else OP_OR
        arg1 = field(pos + k + 1)
        arg2 = field(pos + 2 * k + 1)
        instructions.append(Instruction(lhs, op, arg1, arg2))
        pos += rec
    c = StraightLineProgram(tuple(instructions), len(instructions) + 2)
    try:
        validate_circuit(c)
    except MalformedCircuit as exc:
        raise MalformedEncoding(k + 1, str(exc)) from exc
    if block_length(c.num_vars) != k:
        raise MalformedEncoding(0, f"header says {k} bits per index, circuit needs "
                                   f"{block_length(c.num_vars)}")
    return c


# ---------------------------------------------------------------------------
# Text format: one instruction per line, "x5 := x4 OR x3"


def parse_circuit(text: str) -> StraightLineProgram:
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        try:
            target, rest = line.split(":=")
            a1, op, a2 = rest.split()
            if op.upper() not in (OP_OR, OP_AND):
                raise MalformedCircuit(f"unknown operator {op!r}")
            instructions.append(
                Instruction(_var_index(target.strip()), op.upper(), _var_index(a1), _var_index(a2))
            )
        except (ValueError, MalformedCircuit) as exc:
            raise ParseError(f"bad instruction {line!r} ({exc})", line=lineno) from exc
    c = StraightLineProgram(tuple(instructions), len(instructions) + 2)
    validate_circuit(c)
    return c


def _var_index(token: str) -> int:
    if not token.startswith("x") or not token[1:].isdigit():
        raise MalformedCircuit(f"expected a variable like x3, found {token!r}")
    return int(token[1:])


def format_circuit(c: StraightLineProgram) -> str:
    return "\n".join(f"x{i.lhs} := x{i.arg1} {i.op} x{i.arg2}" for i in c.instructions) + "\n"


# ---------------------------------------------------------------------------
# The bundled decider and test families


@lru_cache(maxsize=1)
def mcv_cf_program() -> Program:
    """The bundled deterministic program deciding encoded circuits.

    For any valid circuit c, running it on encode_mcv(c).bits yields True
    exactly when eval_circuit(c) does.  It works by recursive descent from
    the head of the input and re-derives every variable on demand, so it is
    not tail recursive and re-evaluates shared subcircuits.
    """
    return corpus.load_program("mcv")


def sample_circuit() -> StraightLineProgram:
    return parse_circuit(corpus.read_text("sample.circuit"))


def random_circuit(rng: Random, max_vars: int = 8) -> StraightLineProgram:
    """Uniform operand choice among already-computed variables, uniform op."""
    num_vars = rng.randint(3, max_vars)
    instructions = []
    for lhs in range(2, num_vars):  # execution order
        available = list(range(0, lhs))
        instructions.append(
            Instruction(
                lhs,
                rng.choice((OP_OR, OP_AND)),
                rng.choice(available),
                rng.choice(available),
            )
        )
    instructions.reverse()
    return StraightLineProgram(tuple(instructions), num_vars)


def reuse_chain_circuit(length: int) -> StraightLineProgram:
    """x_{i+1} := x_i AND x_i chains; every variable is read twice."""
    instructions = [
        Instruction(lhs, OP_AND, lhs - 1, lhs - 1) for lhs in range(2, length + 2)
    ]
    instructions.reverse()
    return StraightLineProgram(tuple(instructions), length + 2)
