import itertools

import pytest
from hypothesis import given, settings

from consfree import corpus
from consfree.errors import ParseError, ValidationError
from consfree.syntax import (
    Base,
    Call,
    Choose,
    FALSE_LIT,
    If,
    NIL_LIT,
    Program,
    TRUE_LIT,
    Var,
    format_bits,
    parse_input,
    parse_program,
    pretty_print,
    validate_program,
)

from strategies import programs


def test_parity_parses_to_two_definitions(parity):
    assert [d.name for d in parity.definitions] == ["entry", "even"]
    assert parity.entry.params == ("x",)
    assert parity.entry.body == Call("even", (Var("x"),))
    even = parity.definitions[1].body
    assert isinstance(even, If)
    assert even.cond == Base("null", Var("z"))
    assert even.then_branch == TRUE_LIT
    assert even.else_branch == Base("not", Call("even", (Base("tail", Var("z")),)))


def test_minimal_program():
    p = parse_program("main x = True")
    assert len(p.definitions) == 1
    assert p.entry.body == TRUE_LIT


def test_unknown_function_rejected():
    with pytest.raises(ValidationError) as e:
        parse_program("main x = f x")
    assert e.value.kind == "UnknownFunction"


def test_bare_unknown_name_is_unbound_var():
    with pytest.raises(ValidationError) as e:
        parse_program("main x = y")
    assert e.value.kind == "UnboundVar"


def test_duplicate_definition_rejected():
    with pytest.raises(ValidationError) as e:
        parse_program("main x = True\nmain y = False")
    assert e.value.kind == "DuplicateDef"


def test_entry_arity_enforced():
    for text in ("main x y = True\nother z = False", "main = True"):
        with pytest.raises(ValidationError) as e:
            parse_program(text)
        assert e.value.kind == "EntryArity"


def test_duplicate_params_rejected():
    with pytest.raises(ValidationError) as e:
        parse_program("main x = True\nf y y = False")
    assert e.value.kind == "DuplicateParam"


def test_arity_mismatch_rejected():
    with pytest.raises(ValidationError) as e:
        parse_program("main x = f x x\nf y = y")
    assert e.value.kind == "ArityMismatch"


def test_zero_ary_call_resolves():
    p = parse_program("main x = c\nc = True")
    assert p.entry.body == Call("c", ())


def test_choose_needs_ncf_flag():
    text = "main x = choose True False"
    with pytest.raises(ValidationError) as e:
        parse_program(text)
    assert e.value.kind == "ChooseNotAllowed"
    p = parse_program(text, ncf=True)
    assert p.entry.body == Choose(TRUE_LIT, FALSE_LIT)


def test_multiline_definition_continues_past_newline():
    p = parse_program("f x = if (null x) then True else\n      if f (tail x) then f (tail x) else False")
    assert len(p.definitions) == 1
    assert isinstance(p.entry.body.else_branch, If)


def test_primes_in_identifiers(parity2):
    assert parity2.entry.name == "entry'"


def test_comments_and_blank_lines():
    p = parse_program("-- leading note\n\nmain x = True -- trailing note\n")
    assert p.entry.body == TRUE_LIT


def test_keywords_cannot_be_names():
    with pytest.raises(ParseError):
        parse_program("if x = True")


def test_unexpected_character():
    with pytest.raises(ParseError) as e:
        parse_program("main x = 3")
    assert e.value.line == 1


# -- inputs ------------------------------------------------------------------


def test_parse_input_list_form():
    assert parse_input("[1,0,1,1]") == (1, 0, 1, 1)


def test_parse_input_compact_and_empty():
    assert parse_input("1011") == (1, 0, 1, 1)
    assert parse_input("") == ()
    assert parse_input("[]") == ()


def test_parse_input_rejects_other_digits():
    with pytest.raises(ParseError):
        parse_input("102")
    with pytest.raises(ParseError):
        parse_input("[1,2]")


def test_format_bits_roundtrip():
    for bits in ((), (1,), (1, 0, 1, 1)):
        assert parse_input(format_bits(bits)) == bits
        assert parse_input(format_bits(bits, list_form=True)) == bits


# -- printing ----------------------------------------------------------------


def test_pretty_print_roundtrip_corpus():
    for name in corpus.PROGRAMS:
        p = corpus.load_program(name)
        assert parse_program(pretty_print(p)) == p
    for name in corpus.NCF_PROGRAMS:
        p = corpus.load_program(name)
        assert parse_program(pretty_print(p), ncf=True) == p


def test_pretty_print_single_definition_is_one_line():
    text = pretty_print(parse_program("main x = True"))
    assert text == "main x = True\n"


def test_nested_if_roundtrip():
    p = parse_program("main x = if (if head x then False else True) then head x else main (tail x)")
    assert parse_program(pretty_print(p)) == p


@settings(max_examples=200, deadline=None)
@given(programs())
def test_pretty_print_roundtrip_random(p):
    assert parse_program(pretty_print(p)) == p


@settings(max_examples=100, deadline=None)
@given(programs(allow_choose=True))
def test_pretty_print_roundtrip_random_ncf(p):
    assert parse_program(pretty_print(p), ncf=True) == p


def test_validation_order_independent(parity, mcv_program):
    for p in (parity, mcv_program):
        rest = list(p.definitions[1:])
        for perm in itertools.islice(itertools.permutations(rest), 6):
            shuffled = Program((p.definitions[0],) + tuple(perm))
            assert validate_program(shuffled)  # no exception, any order


def test_validation_order_independent_for_invalid():
    bad = parse_program("main x = g x\ng y = y").definitions
    broken = Program((bad[0],))  # drop g
    with pytest.raises(ValidationError):
        validate_program(broken)
