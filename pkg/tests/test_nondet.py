from random import Random

import pytest

from consfree import corpus
from consfree.engines import Budget, eval_tree
from consfree.errors import OracleMismatch, Timeout
from consfree.nondet import (
    ConfirmStats,
    confirm_log2,
    ncf_decide_saturate,
    ncf_decide_search,
    saturate,
    search,
)
from consfree.randgen import random_bits, random_ncf_program
from consfree.syntax import Choose, Definition, Program, parse_program, validate_program

from conftest import all_inputs

B = Budget


# -- search ------------------------------------------------------------------


def test_choose_true_false_accepts():
    p = parse_program("main x = choose True False", ncf=True)
    assert ncf_decide_search(p, (), B(100)) is True


def test_choose_false_false_rejects():
    p = parse_program("main x = choose False False", ncf=True)
    assert ncf_decide_search(p, (), B(100)) is False


def test_search_finds_acceptance_behind_divergence():
    p = corpus.load_program("ncf_div")  # left branch diverges, right accepts
    assert ncf_decide_search(p, (1, 0), B(200)) is True


def test_search_times_out_when_rejection_is_uncertain():
    p = parse_program("main x = f x\nf y = choose (f y) False", ncf=True)
    with pytest.raises(Timeout):
        ncf_decide_search(p, (1,), B(200))


def test_search_stuck_paths_do_not_accept():
    p = parse_program("main x = choose (head x) False", ncf=True)
    res = search(p, (), B(100))  # head [] sticks on the left path
    assert res.accepted is False
    assert res.stuck_paths == 1


# -- saturation --------------------------------------------------------------


def test_saturate_finds_branch_beside_divergence():
    p = parse_program("main x = f x\nf y = choose (f y) True", ncf=True)
    assert ncf_decide_saturate(p, (1,)) is True


def test_saturate_empty_fixed_point_rejects():
    p = parse_program("main x = f x\nf y = f y")
    assert ncf_decide_saturate(p, (1,)) is False


def test_saturate_counts_are_sane():
    p = corpus.load_program("ncf_pick")
    res = saturate(p, (0, 1, 0))
    assert res.accepted is True
    assert res.configs >= 2
    assert res.triples >= res.configs - 1  # divergent configs may stay empty


def test_pick_decides_contains_one():
    p = corpus.load_program("ncf_pick")
    for x in all_inputs(6):
        want = 1 in x
        assert ncf_decide_saturate(p, x) is want
        assert ncf_decide_search(p, x, B(10**5)) is want


# -- differential: search vs saturate ----------------------------------------


def test_corpus_ncf_programs_agree():
    for name in corpus.NCF_PROGRAMS:
        p = corpus.load_program(name)
        for x in all_inputs(4):
            assert ncf_decide_search(p, x, B(10**4)) is ncf_decide_saturate(p, x), (name, x)


def test_500_random_ncf_programs_agree():
    rng = Random(4242)
    for i in range(500):
        p = random_ncf_program(rng)
        x = random_bits(rng, rng.randint(0, 4))
        got_search = ncf_decide_search(p, x, B(10**5))
        got_sat = ncf_decide_saturate(p, x)
        assert got_search is got_sat, (i, p, x)


def test_deterministic_programs_agree_with_tree(parity, parity2, endsone, q_program):
    for p in (parity, parity2, endsone, q_program):
        for x in all_inputs(4):
            want = eval_tree(p, x, B(10**5))[1].result is True
            assert ncf_decide_search(p, x, B(10**5)) is want
            assert ncf_decide_saturate(p, x) is want


def test_saturation_is_monotone_under_added_branches():
    # grafting an extra choice branch onto a body never turns acceptance off
    rng = Random(31337)
    flipped = 0
    for _ in range(200):
        p = random_ncf_program(rng)
        x = random_bits(rng, rng.randint(0, 3))
        before = ncf_decide_saturate(p, x)
        target = rng.randrange(len(p.definitions))
        d = p.definitions[target]
        extra = Choose(d.body, rng.choice([d.body, Choose(d.body, d.body)]))
        grown = validate_program(
            Program(
                tuple(
                    Definition(dd.name, dd.params, extra if i == target else dd.body)
                    for i, dd in enumerate(p.definitions)
                )
            ),
            ncf=True,
        )
        after = ncf_decide_saturate(grown, x)
        if before and not after:
            flipped += 1
    assert flipped == 0


# -- confirmation replay -----------------------------------------------------


def test_trivial_confirmation_uses_one_frame():
    cs = confirm_log2(parse_program("main x = True"), ())
    assert cs == ConfirmStats(True, 1, 2, True)


def test_confirm_bound_on_parity(parity):
    cs = confirm_log2(parity, (1,) * 32)
    assert cs.bound_ok is True
    assert cs.max_confirm_frames <= (cs.tree_size + 1).bit_length() + 1


def test_confirm_bound_across_corpus(parity, parity2, endsone, q_program):
    for p, x in (
        (parity, (0,) * 17),
        (parity2, (1,) * 33),
        (endsone, (1, 0, 1, 1)),
        (q_program, (1,) * 9),
    ):
        cs = confirm_log2(p, x)
        assert cs.bound_ok is True


def test_confirm_checks_every_node(parity):
    # corrupting any single node value must be caught
    root, _ = eval_tree(parity, (1, 0), B(10**4))
    import consfree.nondet as nd

    def corrupt_one(node, k):
        nodes = []

        def collect(m):
            nodes.append(m)
            for c in m.children:
                collect(c)

        collect(node)
        nodes[k].value = -3 if nodes[k].value != -3 else -1
        return node

    for k in range(1, 10):
        root, _ = eval_tree(parity, (1, 0), B(10**4))
        corrupt_one(root, k)
        prep = nd._prepare(parity, False)
        with pytest.raises(OracleMismatch):
            nd._confirm_tree(root, prep, (1, 0))


def test_confirm_result_matches_tree(q_program):
    cs = confirm_log2(q_program, (1, 1, 1))
    _, stats = eval_tree(q_program, (1, 1, 1), B(10**4))
    assert cs.result == stats.result
    assert cs.tree_size == stats.time_steps
