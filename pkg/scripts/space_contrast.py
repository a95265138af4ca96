#!/usr/bin/env python3
"""Frame and bit usage of the two even-length deciders, with and without
tail-call reuse.  The accumulator version collapses to a single frame under
reuse; the non-tail version cannot.

    python3 scripts/space_contrast.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from consfree import corpus
from consfree.engines import Budget, eval_stack


def main():
    budget = Budget(10**7)
    print("program,n,tco,max_frames,max_space_bits")
    for name in ("parity", "parity2"):
        program = corpus.load_program(name)
        for n in (8, 16, 32, 64):
            for tco in (False, True):
                stats = eval_stack(program, (1,) * n, budget, tco)
                print(f"{name},{n},{tco},{stats.max_frames},{stats.max_space_bits}")


if __name__ == "__main__":
    main()
