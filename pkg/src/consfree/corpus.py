"""Bundled demonstration programs, circuits, and machine tables."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .syntax import Program, parse_program

PROGRAMS = ("parity", "parity2", "q", "endsone", "mcv")
NCF_PROGRAMS = ("ncf_choice", "ncf_pick", "ncf_div")
CIRCUITS = ("sample",)
MACHINES = ("contains11", "evenones")

# Corpus programs that are tail recursive end to end.
CFTR_PROGRAMS = ("parity2", "endsone")


def path(filename: str):
    """Filesystem path of a bundled corpus file (e.g. "parity.cf")."""
    p = resources.files(__package__) / "corpus" / filename
    if not p.is_file():
        raise FileNotFoundError(f"no bundled corpus file {filename!r}")
    return p


def read_text(filename: str) -> str:
    return path(filename).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_program(name: str) -> Program:
    """Parse a bundled .cf program by stem name; nondeterministic ones allowed."""
    return parse_program(read_text(name + ".cf"), ncf=name in NCF_PROGRAMS)
