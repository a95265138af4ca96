from random import Random

from hypothesis import given, settings

from consfree import corpus
from consfree.analysis import (
    AlphaClass,
    LINEAR_NONTAIL,
    NESTED,
    TAIL,
    alpha,
    call_shape_report,
    is_cftr,
)
from consfree.syntax import Base, Call, Choose, If, Var, parse_program
from consfree.randgen import random_expr, random_program

from strategies import exprs

X, T, N = AlphaClass.X, AlphaClass.T, AlphaClass.N


# Independent reference: classify via call positions instead of the
# recursive table.  Tail positions are the expression itself and, through a
# conditional (or choice), its branches; a call is in tail form when it sits
# at a tail position and its arguments contain no calls.
def _calls(e, tail_pos):
    t = type(e)
    if t is Call:
        nested = [c for a in e.args for c in _calls(a, False)]
        return [(e, tail_pos, not nested)] + nested
    if t is Base:
        return _calls(e.arg, False)
    if t is If:
        return (
            _calls(e.cond, False)
            + _calls(e.then_branch, tail_pos)
            + _calls(e.else_branch, tail_pos)
        )
    if t is Choose:
        return _calls(e.left, tail_pos) + _calls(e.right, tail_pos)
    return []


def reference_alpha(e):
    triples = _calls(e, True)
    if not triples:
        return X
    if all(tail and argfree for _, tail, argfree in triples):
        return T
    return N


def test_reference_disagrees_with_nothing_basic(parity):
    z = Var("z")
    assert alpha(Base("null", z)) is X
    assert alpha(Base("tail", z)) is X
    assert alpha(Call("even", (Var("x"),))) is T
    assert alpha(Call("even", (Base("tail", z),))) is T
    assert alpha(Base("not", Call("even", (Base("tail", z),)))) is N


def test_alpha_of_corpus_bodies(parity, parity2, q_program):
    assert alpha(parity.entry.body) is T
    assert alpha(parity.definitions[1].body) is N
    assert [alpha(d.body) for d in parity2.definitions] == [T, T]
    assert alpha(q_program.entry.body) is N


def test_is_cftr_verdicts(parity, parity2, mcv_program, endsone):
    assert not is_cftr(parity)
    assert is_cftr(parity2)
    assert not is_cftr(mcv_program)
    assert is_cftr(endsone)
    assert is_cftr(parse_program("main x = True"))


@settings(max_examples=1000, deadline=None)
@given(exprs(["x", "y"], [("f", 1), ("g", 2), ("h", 0)], allow_choose=True))
def test_alpha_matches_reference(e):
    assert alpha(e) is reference_alpha(e)


def test_alpha_matches_reference_seeded():
    rng = Random(20240817)
    sigs = [("f", 1), ("g", 2), ("h", 0)]
    for _ in range(1000):
        e = random_expr(rng, ["x", "y"], sigs, depth=4, allow_choose=True)
        assert alpha(e) is reference_alpha(e)


def test_parity_report(parity):
    rep = call_shape_report(parity)
    assert rep.is_cftr is False
    assert rep.all_calls_linear is True
    by_def = {(s.definition, s.classification) for s in rep.sites}
    assert ("entry", TAIL) in by_def
    assert ("even", LINEAR_NONTAIL) in by_def
    assert len(rep.sites) == 2


def test_mcv_report_has_nested_sites(mcv_program):
    rep = call_shape_report(mcv_program)
    assert not rep.is_cftr
    assert not rep.all_calls_linear
    assert any(s.classification == NESTED for s in rep.sites)


def test_nested_call_in_argument():
    p = parse_program("main x = f (f x)\nf y = y")
    rep = call_shape_report(p)
    inner = [s for s in rep.sites if s.path != ()]
    assert inner and all(s.classification == NESTED for s in inner)


def test_call_in_if_test_is_linear_nontail():
    p = parse_program("main x = if f x then True else False\nf y = head y")
    rep = call_shape_report(p)
    (site,) = rep.sites
    assert site.classification == LINEAR_NONTAIL


def test_report_serialization_shape(parity):
    recs = call_shape_report(parity).to_records()
    assert all(set(r) == {"definition", "path", "fname", "classification"} for r in recs)


def test_cftr_iff_all_sites_tail():
    rng = Random(7)
    for _ in range(300):
        p = random_program(rng)
        rep = call_shape_report(p)
        only_tail = all(s.classification == TAIL for s in rep.sites)
        if rep.is_cftr:
            assert only_tail
        if only_tail:
            assert rep.is_cftr
