from random import Random

import pytest
from hypothesis import given, settings

from consfree import corpus
from consfree.analysis import NESTED, call_shape_report, is_cftr
from consfree.circuits import (
    Instruction,
    StraightLineProgram,
    decode_mcv,
    encode_mcv,
    eval_circuit,
    format_circuit,
    mcv_cf_program,
    parse_circuit,
    random_circuit,
    reuse_chain_circuit,
    sample_circuit,
    validate_circuit,
)
from consfree.engines import Budget, detect_call_overlap, eval_memo, eval_tree
from consfree.errors import MalformedCircuit, MalformedEncoding, ParseError

from strategies import circuits_strategy

B = Budget

# the reference 44-bit wiring of the four-instruction sample circuit
SAMPLE_BITS = (
    1, 1, 1, 0,
    1, 0, 1, 0, 1, 0, 0, 0, 1, 1,
    1, 0, 0, 0, 0, 1, 1, 0, 1, 0,
    0, 1, 1, 1, 0, 1, 0, 0, 0, 0,
    0, 1, 0, 0, 0, 0, 1, 0, 0, 0,
)


def single(op):
    return StraightLineProgram((Instruction(2, op, 1, 0),), 3)


# -- direct evaluation -------------------------------------------------------


def test_sample_circuit_is_true():
    assert eval_circuit(sample_circuit()) is True


def test_single_or_true_and_false():
    assert eval_circuit(single("OR")) is True
    assert eval_circuit(single("AND")) is False


def test_out_of_order_assignment_is_legal():
    # x3 computed before x2; operands still refer only backwards in execution
    c = StraightLineProgram(
        (Instruction(2, "AND", 3, 1), Instruction(3, "OR", 1, 0)), 4
    )
    validate_circuit(c)
    assert eval_circuit(c) is True


@pytest.mark.parametrize(
    "bad",
    [
        StraightLineProgram((), 2),
        StraightLineProgram((Instruction(1, "OR", 0, 0),), 3),  # assigns a constant
        StraightLineProgram((Instruction(2, "XOR", 1, 0),), 3),  # unknown op
        StraightLineProgram((Instruction(2, "OR", 1, 0),) * 2, 4),  # double assign
        StraightLineProgram((Instruction(3, "OR", 1, 0),), 3),  # gap in targets
        # x2 := x3 ... with x3 never computed before it
        StraightLineProgram((Instruction(3, "OR", 1, 0), Instruction(2, "AND", 3, 1)), 4),
    ],
)
def test_malformed_circuits_rejected(bad):
    with pytest.raises(MalformedCircuit):
        eval_circuit(bad)


# -- wire format -------------------------------------------------------------


def test_encode_sample_bit_exact():
    enc = encode_mcv(sample_circuit())
    assert enc.bits == SAMPLE_BITS
    assert enc.block_len == 3


def test_single_instruction_layout():
    enc = encode_mcv(single("OR"))
    # header (2 + 1) plus one record of 3 * 2 + 1 bits
    assert len(enc.bits) == 10
    assert enc.block_len == 2
    assert enc.bits == (1, 1, 0, 1, 0, 0, 0, 1, 0, 0)


def test_decode_sample():
    assert decode_mcv(SAMPLE_BITS) == sample_circuit()


@pytest.mark.parametrize(
    "bits",
    [
        (1, 1),  # truncated header
        (0, 1, 1),  # header missing its leading one
        (1, 1, 0, 1, 0),  # record shorter than 7 bits
        (1, 1, 0),  # no instructions
        (1, 1, 0, 1, 0, 0, 1, 1, 1, 1),  # operand index out of range
        (1, 0) + (0, 1, 0, 0),  # block length 1 cannot index variable 2
    ],
)
def test_malformed_encodings_rejected(bits):
    with pytest.raises(MalformedEncoding):
        decode_mcv(bits)


def test_roundtrip_200_random_circuits():
    rng = Random(2024)
    for _ in range(200):
        c = random_circuit(rng, max_vars=8)
        assert decode_mcv(encode_mcv(c).bits) == c


@settings(max_examples=150, deadline=None)
@given(circuits_strategy())
def test_roundtrip_property(c):
    enc = encode_mcv(c)
    assert decode_mcv(enc.bits) == c
    # and the other direction: re-encoding a decoded string is the identity
    assert encode_mcv(decode_mcv(enc.bits)).bits == enc.bits


# -- text format -------------------------------------------------------------


def test_text_roundtrip():
    c = sample_circuit()
    assert parse_circuit(format_circuit(c)) == c


def test_text_parse_errors():
    with pytest.raises(ParseError):
        parse_circuit("x2 := x1 NAND x0")
    with pytest.raises(ParseError):
        parse_circuit("y2 := x1 OR x0")


# -- the bundled decider -----------------------------------------------------


def test_bundled_program_accepts_sample():
    _, stats = eval_tree(mcv_cf_program(), SAMPLE_BITS, B(10**5))
    assert stats.result is True


def test_bundled_program_memo_hits_on_shared_variable():
    stats = eval_memo(mcv_cf_program(), SAMPLE_BITS)
    assert stats.result is True
    assert stats.cache_hits >= 1


def test_bundled_program_single_instruction_cases():
    p = mcv_cf_program()
    for op, want in (("OR", True), ("AND", False)):
        _, stats = eval_tree(p, encode_mcv(single(op)).bits, B(10**5))
        assert stats.result is want


def test_bundled_program_differential_100_random():
    p = mcv_cf_program()
    rng = Random(7)
    for _ in range(100):
        c = random_circuit(rng, max_vars=8)
        got = eval_memo(p, encode_mcv(c).bits).result
        assert got is eval_circuit(c), format_circuit(c)


def test_bundled_program_shape():
    p = mcv_cf_program()
    assert not is_cftr(p)
    rep = call_shape_report(p)
    assert any(s.classification == NESTED for s in rep.sites)


def test_reuse_heavy_circuits_overlap_and_blow_up():
    p = mcv_cf_program()
    tree_times = []
    for m in (2, 4, 6):
        bits = encode_mcv(reuse_chain_circuit(m)).bits
        rep = detect_call_overlap(p, bits, B(10**7))
        assert rep.overlap is True
        _, stats = eval_tree(p, bits, B(10**7))
        assert stats.result is True
        tree_times.append(stats.time_steps)
        memo = eval_memo(p, bits)
        assert memo.result is True
        assert memo.time_steps < stats.time_steps
    # naive evaluation at least doubles per added reuse level, memoized stays flat
    assert tree_times[1] / tree_times[0] >= 2
    assert tree_times[2] / tree_times[1] >= 2
