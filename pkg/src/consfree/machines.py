"""One-tape machines and their compilation to constructor-free programs.

Machine model: states Q with a start state, a set of accepting states, the
tape alphabet {0, 1, B}, and a total transition map
delta : Q x {0,1,B} -> Q x {0,1,B} x {-1,0,+1}.  The input occupies tape
cells 1..n, cell 0 (and everything past n) starts blank, and the head
starts at cell 0.  A move left from cell 0 stays at cell 0.  A machine
halts by reaching a transition that leaves the total state unchanged
(self-looping "halted" states); it accepts when the halted state is
accepting.  The time_exponent k promises halting within about n**k steps.

Description file format ("--" comments allowed):

    start: <state>
    accept: <state> <state> ...
    time_exponent: <k>
    <state>,<symbol> -> <state>,<symbol>,<move>

with symbols 0, 1, B and moves -1, 0, +1.

Compilation: the emitted program answers "is the machine in an accepting
state at time T?" for T = (n+1)**k - 1, the largest value a k-digit
base-(n+1) counter can hold; self-looping halted states make the answer
insensitive to the exact T as long as the machine has halted by then.
Counters (times and head positions) are k-tuples of input suffixes read as
base-(n+1) digits, a digit being the suffix's length, so T is the tuple
(x, ..., x) and zero the tuple ([], ..., []).  Digit arithmetic is
compiled into helper functions: decrement is tail with borrow propagation
unrolled over the k components, digit complement walks two cursors, and
increment is complement-decrement-complement.  States and symbols become
function families returning booleans (one per state and per symbol), since
program values cannot carry a third alphabet letter.

Caveat: on the empty input every counter collapses to the single value 0,
so the compiled program reports acceptance at time 0, i.e. whether the
START state is accepting.  Machines whose behaviour on the empty input
matches their start-state flag (as the bundled demos do) compile exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Tuple

from .engines import DEFAULT_BUDGET
from .errors import CompileError, ParseError, Timeout
from .syntax import (
    Base,
    Bits,
    Call,
    Definition,
    FALSE_LIT,
    If,
    NIL_LIT,
    Program,
    TRUE_LIT,
    Var,
    validate_program,
)

SYMBOLS = ("0", "1", "B")
MOVES = (-1, 0, 1)

Transition = Tuple[str, str, int]  # (next state, written symbol, move)


@dataclass(frozen=True)
class TuringMachine:
    states: Tuple[str, ...]
    start: str
    accepting: FrozenSet[str]
    delta: Dict[Tuple[str, str], Transition]
    time_exponent: int


def validate_machine(m: TuringMachine) -> None:
    if m.start not in m.states:
        raise ParseError(f"start state {m.start!r} is not a state")
    for q in m.accepting:
        if q not in m.states:
            raise ParseError(f"accepting state {q!r} is not a state")
    for q in m.states:
        for a in SYMBOLS:
            if (q, a) not in m.delta:
                raise ParseError(f"delta is not total: no transition for ({q},{a})")
    for (q, a), (q2, a2, d) in m.delta.items():
        if q not in m.states or q2 not in m.states:
            raise ParseError(f"transition ({q},{a}) mentions an unknown state")
        if a not in SYMBOLS or a2 not in SYMBOLS:
            raise ParseError(f"transition ({q},{a}) uses a symbol outside 0,1,B")
        if d not in MOVES:
            raise ParseError(f"transition ({q},{a}) moves by {d}; only -1,0,+1 allowed")


def parse_machine(text: str) -> TuringMachine:
    start = None
    accepting: list[str] = []
    time_exponent = None
    delta: Dict[Tuple[str, str], Transition] = {}
    order: list[str] = []

    def note(state):
        if state not in order:
            order.append(state)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start:"):
            start = line.split(":", 1)[1].strip()
            note(start)
        elif line.startswith("accept:"):
            accepting = line.split(":", 1)[1].split()
            for q in accepting:
                note(q)
        elif line.startswith("time_exponent:"):
            time_exponent = int(line.split(":", 1)[1])
        elif "->" in line:
            try:
                lhs, rhs = line.split("->")
                q, a = (s.strip() for s in lhs.split(","))
                q2, a2, d = (s.strip() for s in rhs.split(","))
            except ValueError as exc:
                raise ParseError(f"bad transition line {line!r}", line=lineno) from exc
            if (q, a) in delta:
                raise ParseError(f"duplicate transition for ({q},{a})", line=lineno)
            delta[(q, a)] = (q2, a2, int(d))
            note(q)
            note(q2)
        else:
            raise ParseError(f"unrecognised line {line!r}", line=lineno)
    if start is None:
        raise ParseError("missing 'start:' header")
    if time_exponent is None:
        raise ParseError("missing 'time_exponent:' header")
    m = TuringMachine(tuple(order), start, frozenset(accepting), delta, time_exponent)
    validate_machine(m)
    return m


def format_machine(m: TuringMachine) -> str:
    lines = [
        f"start: {m.start}",
        "accept: " + " ".join(sorted(m.accepting)),
        f"time_exponent: {m.time_exponent}",
    ]
    for q in m.states:
        for a in SYMBOLS:
            q2, a2, d = m.delta[(q, a)]
            lines.append(f"{q},{a} -> {q2},{a2},{d:+d}" if d else f"{q},{a} -> {q2},{a2},0")
    return "\n".join(lines) + "\n"


def run_tm(m: TuringMachine, x: Bits, budget=None) -> tuple[bool, int]:
    """Direct execution; returns (accepted, steps to the halting fixpoint).

    The fixpoint test is exact: a transition that rewrites the scanned
    symbol to itself, stays in place (or pushes left off cell 0), and keeps
    the state is a halt.  Raises Timeout if no fixpoint is reached within
    budget.max_steps applications.
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    validate_machine(m)
    tape = {pos + 1: str(bit) for pos, bit in enumerate(x)}
    q, i, steps = m.start, 0, 0
    while True:
        a = tape.get(i, "B")
        q2, a2, d = m.delta[(q, a)]
        if q2 == q and a2 == a and (d == 0 or (d == -1 and i == 0)):
            return q in m.accepting, steps
        if steps >= budget.max_steps:
            raise Timeout(steps=steps)
        tape[i] = a2
        q = q2
        i = max(0, i + d)
        steps += 1


# ---------------------------------------------------------------------------
# Compilation


def _call(f, *args):
    return Call(f, tuple(args))


def _null(e):
    return Base("null", e)


def _tail(e):
    return Base("tail", e)


def _head(e):
    return Base("head", e)


def _and(a, b):
    return If(a, b, FALSE_LIT)


def _or_fold(alts):
    body = FALSE_LIT
    for alt in reversed(alts):
        body = If(alt, TRUE_LIT, body)
    return body


def _state_names(states) -> Dict[str, str]:
    names = {}
    taken = set()
    for q in states:
        base = "st_" + re.sub(r"[^A-Za-z0-9_]", "_", q)
        name = base
        serial = 2
        while name in taken:
            name = f"{base}_{serial}"
            serial += 1
        taken.add(name)
        names[q] = name
    return names


def compile_tm(m: TuringMachine) -> Program:
    """Emit a deterministic constructor-free program deciding what m decides.

    The program is valid but deliberately not tail recursive; evaluated
    naively it re-derives tape history many times over, while the memoizing
    engine runs it in time polynomial in the input length.
    """
    validate_machine(m)
    k = m.time_exponent
    if k < 1:
        raise CompileError("time_exponent must be at least 1")

    stn = _state_names(m.states)
    scn = {a: f"sc{a}" for a in SYMBOLS}
    syn = {a: f"sy{a}" for a in SYMBOLS}
    wrn = {a: f"wr{a}" for a in SYMBOLS}
    inin = {a: f"ini{a}" for a in SYMBOLS}
    wkn = {a: f"wk{a}" for a in SYMBOLS}

    tp = [f"t{j}" for j in range(1, k + 1)]
    ip = [f"i{j}" for j in range(1, k + 1)]
    up = [f"u{j}" for j in range(1, k + 1)]
    jp = [f"j{j}" for j in range(1, k + 1)]
    w = Var("w")

    def vs(params):
        return [Var(p) for p in params]

    def dec_of(digits):
        return [_call(f"dec{j}", *digits, w) for j in range(1, k + 1)]

    def ps_of(digits):
        return [_call(f"ps{j}", *digits, w) for j in range(1, k + 1)]

    def pairs_where(pred):
        return sorted(key for key in m.delta if pred(key, m.delta[key]))

    defs: list[Definition] = []

    # entry: accepting at the largest representable time, the all-n tuple
    x = Var("x")
    accept_alts = [
        _call(stn[q], *([x] * k), x) for q in sorted(m.accepting)
    ]
    defs.append(Definition("main", ("x",), _or_fold(accept_alts)))

    # state predicates
    for q in m.states:
        tvars = vs(tp)
        decs = dec_of(tvars)
        into = pairs_where(lambda key, tr, _q=q: tr[0] == _q)
        alts = [
            _and(_call(stn[p], *decs, w), _call(scn[a], *decs, w)) for (p, a) in into
        ]
        body = If(
            _call("czero", *tvars),
            TRUE_LIT if q == m.start else FALSE_LIT,
            _or_fold(alts),
        )
        defs.append(Definition(stn[q], (*tp, "w"), body))

    # scanned-symbol predicates: symbol at (t, position(t))
    for a in SYMBOLS:
        tvars = vs(tp)
        defs.append(
            Definition(
                scn[a], (*tp, "w"), _call(syn[a], *tvars, *ps_of(tvars), w)
            )
        )

    # tape-symbol predicates
    for a in SYMBOLS:
        tvars, ivars = vs(tp), vs(ip)
        decs = dec_of(tvars)
        body = If(
            _call("czero", *tvars),
            _call(inin[a], *ivars, w),
            If(
                _call("atpos", *decs, *ivars, w),
                _call(wrn[a], *decs, w),
                _call(syn[a], *decs, *ivars, w),
            ),
        )
        defs.append(Definition(syn[a], (*tp, *ip, "w"), body))

    # was the head at position i at time t?
    tvars, ivars = vs(tp), vs(ip)
    defs.append(
        Definition("atpos", (*tp, *ip, "w"), _call("ceq", *ps_of(tvars), *ivars))
    )

    # head-position digits
    for j in range(1, k + 1):
        tvars = vs(tp)
        decs = dec_of(tvars)
        prev = ps_of(decs)
        body = If(
            _call("czero", *tvars),
            NIL_LIT,
            If(
                _call("mvp", *decs, w),
                _call(f"inc{j}", *prev, w),
                If(
                    _call("mvm", *decs, w),
                    If(_call("poszero", *decs, w), NIL_LIT, _call(f"dec{j}", *prev, w)),
                    _call(f"ps{j}", *decs, w),
                ),
            ),
        )
        defs.append(Definition(f"ps{j}", (*tp, "w"), body))

    tvars = vs(tp)
    defs.append(Definition("poszero", (*tp, "w"), _call("czero", *ps_of(tvars))))

    # move predicates for the step taken at time t
    for name, want in (("mvp", 1), ("mvm", -1)):
        tvars = vs(tp)
        pairs = pairs_where(lambda key, tr, _d=want: tr[2] == _d)
        alts = [
            _and(_call(stn[q], *tvars, w), _call(scn[a], *tvars, w)) for (q, a) in pairs
        ]
        defs.append(Definition(name, (*tp, "w"), _or_fold(alts)))

    # symbol written by the step taken at time t
    for a in SYMBOLS:
        tvars = vs(tp)
        pairs = pairs_where(lambda key, tr, _a=a: tr[1] == _a)
        alts = [
            _and(_call(stn[q], *tvars, w), _call(scn[b], *tvars, w)) for (q, b) in pairs
        ]
        defs.append(Definition(wrn[a], (*tp, "w"), _or_fold(alts)))

    # initial tape: cell 0 blank, cells 1..n hold the input, blanks beyond
    for a in SYMBOLS:
        ivars = vs(ip)
        blank = TRUE_LIT if a == "B" else FALSE_LIT
        defs.append(
            Definition(
                inin[a],
                (*ip, "w"),
                If(_call("czero", *ivars), blank, _call(wkn[a], *dec_of(ivars), w, w)),
            )
        )
    for a in SYMBOLS:
        jvars = vs(jp)
        blank = TRUE_LIT if a == "B" else FALSE_LIT
        s = Var("s")
        if a == "1":
            found = _head(s)
        elif a == "0":
            found = Base("not", _head(s))
        else:
            found = FALSE_LIT
        body = If(
            _call("czero", *jvars),
            If(_null(s), blank, found),
            If(_null(s), blank, _call(wkn[a], *dec_of(jvars), _tail(s), w)),
        )
        defs.append(Definition(wkn[a], (*jp, "s", "w"), body))

    # counter helpers: digits are input suffixes, digit value = length
    body = TRUE_LIT
    for u in reversed(up):
        body = If(_null(Var(u)), body, FALSE_LIT)
    defs.append(Definition("czero", tuple(up), body))

    vp = [f"v{j}" for j in range(1, k + 1)]
    body = TRUE_LIT
    for u, v in reversed(list(zip(up, vp))):
        body = If(_call("deq", Var(u), Var(v)), body, FALSE_LIT)
    defs.append(Definition("ceq", (*up, *vp), body))

    defs.append(
        Definition(
            "deq",
            ("a", "b"),
            If(
                _null(Var("a")),
                _null(Var("b")),
                If(_null(Var("b")), FALSE_LIT, _call("deq", _tail(Var("a")), _tail(Var("b")))),
            ),
        )
    )
    defs.append(
        Definition(
            "co",
            ("s", "d"),
            If(_null(Var("d")), Var("s"), _call("co", _tail(Var("s")), _tail(Var("d")))),
        )
    )

    # dec{j}: digit j of (u - 1) for u > 0; a zero digit resets to n (= w)
    for j in range(1, k + 1):
        uj = Var(up[j - 1])
        inner = If(_null(uj), w, _tail(uj))
        for idx in range(j - 2, -1, -1):
            inner = If(_null(Var(up[idx])), inner, uj)
        defs.append(Definition(f"dec{j}", (*up, "w"), inner))

    # inc{j}: complement, decrement, complement back
    for j in range(1, k + 1):
        comp = [_call("co", w, Var(u)) for u in up]
        defs.append(
            Definition(
                f"inc{j}", (*up, "w"), _call("co", w, _call(f"dec{j}", *comp, w))
            )
        )

    return validate_program(Program(tuple(defs)))


def counter_digits(value: int, n: int, k: int) -> Tuple[int, ...]:
    """Reference encoding of a counter: k base-(n+1) digits, least significant
    first, each given as the digit value (the suffix length the program uses)."""
    if not 0 <= value <= (n + 1) ** k - 1:
        raise ValueError(f"{value} does not fit in {k} base-{n + 1} digits")
    digits = []
    for _ in range(k):
        digits.append(value % (n + 1))
        value //= n + 1
    return tuple(digits)
