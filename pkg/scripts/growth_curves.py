#!/usr/bin/env python3
"""Step-count growth curves for the bundled corpus, as plot-ready CSV.

Runs the doubling-time program under the tree engine, the two tail
recursive programs under the stack engine, and the compiled adjacent-ones
machine under the memoizing engine, one record per input size.

    python3 scripts/growth_curves.py > curves.csv
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from consfree import corpus, machines, records
from consfree.engines import Budget, eval_memo, eval_stack, eval_tree
from consfree.randgen import input_bits


def main():
    budget = Budget(10**7)
    print(records.csv_header())

    q = corpus.load_program("q")
    for n in range(1, 15):
        _, stats = eval_tree(q, input_bits("ones", n), budget)
        print(records.to_csv_row(records.stats_record("tree", "q.cf", n, stats)))

    for name in corpus.CFTR_PROGRAMS:
        program = corpus.load_program(name)
        for n in (8, 16, 32, 64):
            stats = eval_stack(program, input_bits("alternating", n), budget, tco=True)
            print(records.to_csv_row(records.stats_record("stack-tco", name + ".cf", n, stats)))

    m = machines.parse_machine(corpus.read_text("contains11.tm"))
    compiled = machines.compile_tm(m)
    for n in range(0, 7):
        stats = eval_memo(compiled, input_bits("alternating", n))
        print(records.to_csv_row(records.stats_record("memo", "contains11(compiled)", n, stats)))


if __name__ == "__main__":
    main()
