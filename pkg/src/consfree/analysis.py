"""Static classification of call shapes: tail, linear non-tail, or nested.

The three-valued class of an expression is X (contains no calls to defined
functions), T (all calls are in tail form), or N (some call is not in tail
form), ordered X < T < N.  A whole program is tail recursive iff every
definition body classifies X or T.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

from .syntax import Base, Call, Choose, FalseLit, If, NilLit, Program, TrueLit, Var


class AlphaClass(enum.IntEnum):
    X = 0
    T = 1
    N = 2

    def __str__(self) -> str:
        return self.name


def alpha(e) -> AlphaClass:
    """Tail-form class of an expression.

    Constants and variables are X; a base operation stays X over an X
    argument and jumps to N otherwise; a call is T when every argument is X
    and N otherwise; a conditional with an X test takes the max of its
    branches and is N otherwise.  choose is treated like a two-branch
    conditional with an X test.
    """
    t = type(e)
    if t in (Var, TrueLit, FalseLit, NilLit):
        return AlphaClass.X
    if t is Base:
        return AlphaClass.X if alpha(e.arg) is AlphaClass.X else AlphaClass.N
    if t is Call:
        if all(alpha(a) is AlphaClass.X for a in e.args):
            return AlphaClass.T
        return AlphaClass.N
    if t is If:
        if alpha(e.cond) is AlphaClass.X:
            return max(alpha(e.then_branch), alpha(e.else_branch))
        return AlphaClass.N
    if t is Choose:
        return max(alpha(e.left), alpha(e.right))
    raise TypeError(f"not an expression: {e!r}")


def is_cftr(program: Program) -> bool:
    """True iff every definition body classifies X or T."""
    return all(alpha(d.body) <= AlphaClass.T for d in program.definitions)


TAIL = "tail"
LINEAR_NONTAIL = "linear-nontail"
NESTED = "nested"


@dataclass(frozen=True, slots=True)
class CallSite:
    definition: str
    path: Tuple[int, ...]  # child indices from the body root
    fname: str
    classification: str


@dataclass(frozen=True, slots=True)
class CallShapeReport:
    body_alpha: Tuple[Tuple[str, AlphaClass], ...]
    sites: Tuple[CallSite, ...]
    is_cftr: bool
    all_calls_linear: bool

    def to_records(self) -> list[dict]:
        return [
            {
                "definition": s.definition,
                "path": ".".join(str(i) for i in s.path),
                "fname": s.fname,
                "classification": s.classification,
            }
            for s in self.sites
        ]


def call_shape_report(program: Program) -> CallShapeReport:
    """Classify every call site of a validated program.

    A site inside the argument of a call to a defined function is nested; a
    non-nested site in tail position whose arguments are call free is tail;
    every other site is linear non-tail.
    """
    sites: list[CallSite] = []

    def walk(e, dname, path, tail_pos, in_call_arg):
        t = type(e)
        if t is Call:
            if in_call_arg:
                cls = NESTED
            elif tail_pos and all(alpha(a) is AlphaClass.X for a in e.args):
                cls = TAIL
            else:
                cls = LINEAR_NONTAIL
            sites.append(CallSite(dname, path, e.fname, cls))
            for i, a in enumerate(e.args):
                walk(a, dname, path + (i,), False, True)
        elif t is Base:
            walk(e.arg, dname, path + (0,), False, in_call_arg)
        elif t is If:
            walk(e.cond, dname, path + (0,), False, in_call_arg)
            walk(e.then_branch, dname, path + (1,), tail_pos, in_call_arg)
            walk(e.else_branch, dname, path + (2,), tail_pos, in_call_arg)
        elif t is Choose:
            walk(e.left, dname, path + (0,), tail_pos, in_call_arg)
            walk(e.right, dname, path + (1,), tail_pos, in_call_arg)

    for d in program.definitions:
        walk(d.body, d.name, (), True, False)

    return CallShapeReport(
        body_alpha=tuple((d.name, alpha(d.body)) for d in program.definitions),
        sites=tuple(sites),
        is_cftr=is_cftr(program),
        all_calls_linear=not any(s.classification == NESTED for s in sites),
    )
