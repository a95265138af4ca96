"""Instrumented execution engines for deterministic programs.

Four strategies over the same big-step rules, evaluated bottom-up and left
to right (call arguments before the body, the test of a conditional before
the selected branch):

* eval_tree   -- materialises the full evaluation tree; time is its node
                 count, with the top-level program judgment included.
* eval_stack  -- frame-accounting machine with optional tail-call reuse;
                 meters peak frame count and peak frame bits.
* eval_memo   -- caches one result per (function, argument tuple) and
                 evaluates each such configuration at most once; detects
                 nontermination by re-entry of an active configuration.
* detect_call_overlap -- reports whether any configuration is entered twice.

Space accounting is exact rather than asymptotic: every activation record
of a definition f has a fixed slot count, arity(f) plus the maximum number
of intermediate values the body's left-to-right schedule can hold at once,
and each slot costs ceil(log2(n + 3)) bits because a value is one of the
n + 3 possible booleans or input suffixes for an input of length n.

Values are encoded internally as ints: offsets >= 0 are input suffixes,
-1 is False and -2 is True.  Engines are single threaded per run; distinct
runs never share state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

from . import analysis
from .errors import ReachBoundExceeded, Stuck, SuffixPropertyViolation, Timeout, ValidationError
from .syntax import (
    Base,
    Bits,
    Call,
    Choose,
    FalseLit,
    If,
    NilLit,
    Program,
    Suffix,
    TrueLit,
    Value,
    Var,
    has_choose,
)

FALSE = -1
TRUE = -2

_OPC = {"not": 0, "null": 1, "head": 2, "tail": 3}


@dataclass(frozen=True)
class Budget:
    """Hard step limit; the (max_steps + 1)-th step raises Timeout."""

    max_steps: int

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")


DEFAULT_BUDGET = Budget(10**7)


@dataclass(frozen=True)
class RunStats:
    """Flat instrumentation record for one run.

    Fields that a given engine does not meter are None.  time_steps counts
    every judgment including the top-level program judgment; a memoized
    call that hits the cache contributes its call judgment only.
    """

    result: Value
    time_steps: int
    tree_depth: Optional[int] = None
    call_history_length: Optional[int] = None
    distinct_configs: Optional[int] = None
    max_frames: Optional[int] = None
    max_space_bits: Optional[int] = None
    cache_entries: Optional[int] = None
    cache_hits: Optional[int] = None


@dataclass(frozen=True)
class Config:
    """A (function, argument environment) pair, the unit of reach and caching."""

    fname: str
    bindings: Tuple[Tuple[str, Value], ...]

    @property
    def env(self) -> dict:
        return dict(self.bindings)


class OverlapReport(NamedTuple):
    overlap: bool
    first_repeated: Optional[Config]
    call_history_length: int
    distinct_configs: int


def reach_bound(program: Program, n: int) -> int:
    """Sum over definitions of (3 + n) ** arity: the configuration count cap."""
    return sum((3 + n) ** len(d.params) for d in program.definitions)


def slot_bits(n: int) -> int:
    """Bits per value slot: ceil(log2(n + 3))."""
    return (n + 2).bit_length()


# ---------------------------------------------------------------------------
# Static preparation: name resolution to indices, slot counts, tail sites.


class _PrepDef:
    __slots__ = ("name", "params", "arity", "body", "slots")

    def __init__(self, name, params, arity, body, slots):
        self.name = name
        self.params = params
        self.arity = arity
        self.body = body
        self.slots = slots


class _Prep:
    __slots__ = ("defs", "by_name", "has_choose")

    def __init__(self, defs, by_name, has_choose):
        self.defs = defs
        self.by_name = by_name
        self.has_choose = has_choose


def _need(e) -> int:
    """Max simultaneously-held intermediate values in the left-to-right schedule."""
    t = type(e)
    if t in (Var, TrueLit, FalseLit, NilLit):
        return 1
    if t is Base:
        return _need(e.arg)
    if t is If:
        return max(_need(e.cond), _need(e.then_branch), _need(e.else_branch))
    if t is Choose:
        return max(_need(e.left), _need(e.right))
    # call: argument i is computed while i-1 earlier values are held;
    # all m are held at the transfer instant; the result occupies one slot
    best = max(len(e.args), 1)
    for i, a in enumerate(e.args):
        best = max(best, i + _need(a))
    return best


def _to_rt(e, param_index, def_index, tail_pos):
    t = type(e)
    if t is Var:
        return ("v", param_index[e.name])
    if t is TrueLit:
        return ("k", TRUE)
    if t is FalseLit:
        return ("k", FALSE)
    if t is NilLit:
        return ("n",)
    if t is Base:
        return ("b", _OPC[e.op], _to_rt(e.arg, param_index, def_index, False))
    if t is If:
        return (
            "i",
            _to_rt(e.cond, param_index, def_index, False),
            _to_rt(e.then_branch, param_index, def_index, tail_pos),
            _to_rt(e.else_branch, param_index, def_index, tail_pos),
        )
    if t is Call:
        is_t_site = tail_pos and all(
            analysis.alpha(a) is analysis.AlphaClass.X for a in e.args
        )
        return (
            "c",
            def_index[e.fname],
            tuple(_to_rt(a, param_index, def_index, False) for a in e.args),
            is_t_site,
        )
    if t is Choose:
        return (
            "ch",
            _to_rt(e.left, param_index, def_index, tail_pos),
            _to_rt(e.right, param_index, def_index, tail_pos),
        )
    raise TypeError(f"not an executable expression: {e!r}")


@lru_cache(maxsize=256)
def _prepare_cached(program: Program, allow_choose: bool) -> _Prep:
    def_index = {d.name: i for i, d in enumerate(program.definitions)}
    defs = []
    any_choose = False
    for d in program.definitions:
        if has_choose(d.body):
            any_choose = True
            if not allow_choose:
                raise ValidationError(
                    "ChooseNotAllowed",
                    f"{d.name!r} contains choose; use a nondeterministic engine",
                )
        param_index = {p: i for i, p in enumerate(d.params)}
        body = _to_rt(d.body, param_index, def_index, True)
        defs.append(_PrepDef(d.name, d.params, len(d.params), body, len(d.params) + _need(d.body)))
    return _Prep(defs, def_index, any_choose)


def _prepare(program: Program, allow_choose: bool) -> _Prep:
    return _prepare_cached(program, allow_choose)


# ---------------------------------------------------------------------------
# Value helpers


def _apply_base(opc: int, v: int, x: Bits, n: int) -> int:
    if opc == 0:  # not
        if v == TRUE:
            return FALSE
        if v == FALSE:
            return TRUE
        raise Stuck("not applied to a list value")
    if opc == 1:  # null
        if v >= 0:
            return TRUE if v == n else FALSE
        raise Stuck("null applied to a boolean")
    if opc == 2:  # head
        if v >= 0:
            if v == n:
                raise Stuck("head applied to []")
            return TRUE if x[v] else FALSE
        raise Stuck("head applied to a boolean")
    # tail
    if v >= 0:
        if v == n:
            raise Stuck("tail applied to []")
        return v + 1
    raise Stuck("tail applied to a boolean")


def _check_value(v: int, n: int) -> None:
    if not (TRUE <= v <= n):
        raise SuffixPropertyViolation(f"value {v} outside booleans and suffixes of the input")


def to_public(v: int) -> Value:
    if v == TRUE:
        return True
    if v == FALSE:
        return False
    return Suffix(v)


def _public_config(prep: _Prep, key) -> Config:
    didx, env = key
    d = prep.defs[didx]
    return Config(d.name, tuple(zip(d.params, (to_public(v) for v in env))))


# ---------------------------------------------------------------------------
# Tree engine

_E, _B, _I1, _I2, _A, _C2 = range(6)


class CompNode:
    """One node of the evaluation tree.

    `rt` is the engine form of the expression (None at the top-level
    program judgment), `env` the argument tuple in scope, `value` the
    internally encoded result.  Children follow premise order: call
    arguments left to right then the body; a conditional has the test
    followed by the selected branch.
    """

    __slots__ = ("rt", "env", "value", "children", "size", "depth")

    def __init__(self, rt, env, value, children):
        self.rt = rt
        self.env = env
        self.value = value
        self.children = children
        size = 1
        depth = 0
        for c in children:
            size += c.size
            if c.depth > depth:
                depth = c.depth
        self.size = size
        self.depth = depth + 1


def eval_tree(
    program: Program, x: Bits, budget: Budget = DEFAULT_BUDGET, *, check_suffix: bool = False
) -> tuple[CompNode, RunStats]:
    """Build the unique evaluation tree of a deterministic program on x.

    Returns the root (the top-level program judgment, whose single child is
    the entry body judgment) and run statistics.  Raises Timeout when the
    budget is exhausted and Stuck on a rule-less judgment, which are
    distinct conditions.
    """
    prep = _prepare(program, False)
    n = len(x)
    limit = budget.max_steps
    steps = 1  # the top-level program judgment
    env0 = (0,)
    calls = 1
    seen = {(0, env0)}
    defs = prep.defs
    tasks = [(_E, defs[0].body, env0)]
    nodes: list[CompNode] = []
    while tasks:
        task = tasks.pop()
        k = task[0]
        if k == _E:
            e, env = task[1], task[2]
            steps += 1
            if steps > limit:
                raise Timeout(steps=steps)
            tag = e[0]
            if tag == "v":
                nodes.append(CompNode(e, env, env[e[1]], ()))
            elif tag == "k":
                nodes.append(CompNode(e, env, e[1], ()))
            elif tag == "n":
                nodes.append(CompNode(e, env, n, ()))
            elif tag == "b":
                tasks.append((_B, e, env))
                tasks.append((_E, e[2], env))
            elif tag == "i":
                tasks.append((_I1, e, env))
                tasks.append((_E, e[1], env))
            else:  # "c"
                args = e[2]
                if args:
                    tasks.append((_A, e, env, 1))
                    tasks.append((_E, args[0], env))
                else:
                    calls += 1
                    seen.add((e[1], ()))
                    tasks.append((_C2, e, env, ()))
                    tasks.append((_E, defs[e[1]].body, ()))
        elif k == _B:
            e, env = task[1], task[2]
            child = nodes.pop()
            v = _apply_base(e[1], child.value, x, n)
            if check_suffix:
                _check_value(v, n)
            nodes.append(CompNode(e, env, v, (child,)))
        elif k == _I1:
            e, env = task[1], task[2]
            cond = nodes.pop()
            if cond.value == TRUE:
                branch = e[2]
            elif cond.value == FALSE:
                branch = e[3]
            else:
                raise Stuck("if test did not evaluate to a boolean")
            tasks.append((_I2, e, env, cond))
            tasks.append((_E, branch, env))
        elif k == _I2:
            e, env, cond = task[1], task[2], task[3]
            branch = nodes.pop()
            nodes.append(CompNode(e, env, branch.value, (cond, branch)))
        elif k == _A:
            e, env, i = task[1], task[2], task[3]
            args = e[2]
            if i < len(args):
                tasks.append((_A, e, env, i + 1))
                tasks.append((_E, args[i], env))
            else:
                m = len(args)
                argnodes = tuple(nodes[-m:])
                del nodes[-m:]
                env2 = tuple(a.value for a in argnodes)
                if check_suffix:
                    for v in env2:
                        _check_value(v, n)
                calls += 1
                seen.add((e[1], env2))
                tasks.append((_C2, e, env, argnodes))
                tasks.append((_E, defs[e[1]].body, env2))
        else:  # _C2
            e, env, argnodes = task[1], task[2], task[3]
            body = nodes.pop()
            nodes.append(CompNode(e, env, body.value, argnodes + (body,)))
    body = nodes.pop()
    root = CompNode(None, env0, body.value, (body,))
    stats = RunStats(
        result=to_public(body.value),
        time_steps=steps,
        tree_depth=root.depth,
        call_history_length=calls,
        distinct_configs=len(seen),
    )
    return root, stats


# ---------------------------------------------------------------------------
# Stack engine


def _run_stack(program: Program, x: Bits, budget: Budget, tco: bool, check_suffix: bool):
    prep = _prepare(program, False)
    n = len(x)
    limit = budget.max_steps
    bps = slot_bits(n)
    defs = prep.defs
    steps = 1
    env0 = (0,)
    calls = 1
    seen = {(0, env0)}
    first_rep = None

    frames = [defs[0].slots]
    cur_slots = defs[0].slots
    max_frames = 1
    max_slots = cur_slots

    max_depth = 1
    tasks = [(_E, defs[0].body, env0, 2)]
    vals: list[int] = []
    POP = ("pop",)
    while tasks:
        task = tasks.pop()
        k = task[0]
        if k == _E:
            e, env, depth = task[1], task[2], task[3]
            steps += 1
            if steps > limit:
                raise Timeout(steps=steps)
            if depth > max_depth:
                max_depth = depth
            tag = e[0]
            if tag == "v":
                vals.append(env[e[1]])
            elif tag == "k":
                vals.append(e[1])
            elif tag == "n":
                vals.append(n)
            elif tag == "b":
                tasks.append((_B, e, x))
                tasks.append((_E, e[2], env, depth + 1))
            elif tag == "i":
                tasks.append((_I1, e, env, depth))
                tasks.append((_E, e[1], env, depth + 1))
            else:  # "c"
                args = e[2]
                if args:
                    tasks.append((_A, e, env, 1, depth))
                    tasks.append((_E, args[0], env, depth + 1))
                else:
                    key = (e[1], ())
                    calls += 1
                    if key in seen:
                        if first_rep is None:
                            first_rep = key
                    else:
                        seen.add(key)
                    d = defs[e[1]]
                    if tco and e[3]:
                        cur_slots += d.slots - frames[-1]
                        frames[-1] = d.slots
                    else:
                        frames.append(d.slots)
                        cur_slots += d.slots
                        if len(frames) > max_frames:
                            max_frames = len(frames)
                        tasks.append(POP)
                    if cur_slots > max_slots:
                        max_slots = cur_slots
                    tasks.append((_E, d.body, (), depth + 1))
        elif k == _B:
            e = task[1]
            v = _apply_base(e[1], vals.pop(), x, n)
            if check_suffix:
                _check_value(v, n)
            vals.append(v)
        elif k == _I1:
            e, env, depth = task[1], task[2], task[3]
            t = vals.pop()
            if t == TRUE:
                branch = e[2]
            elif t == FALSE:
                branch = e[3]
            else:
                raise Stuck("if test did not evaluate to a boolean")
            tasks.append((_E, branch, env, depth + 1))
        elif k == _A:
            e, env, i, depth = task[1], task[2], task[3], task[4]
            args = e[2]
            if i < len(args):
                tasks.append((_A, e, env, i + 1, depth))
                tasks.append((_E, args[i], env, depth + 1))
            else:
                m = len(args)
                env2 = tuple(vals[-m:])
                del vals[-m:]
                if check_suffix:
                    for v in env2:
                        _check_value(v, n)
                key = (e[1], env2)
                calls += 1
                if key in seen:
                    if first_rep is None:
                        first_rep = key
                else:
                    seen.add(key)
                d = defs[e[1]]
                if tco and e[3]:
                    cur_slots += d.slots - frames[-1]
                    frames[-1] = d.slots
                else:
                    frames.append(d.slots)
                    cur_slots += d.slots
                    if len(frames) > max_frames:
                        max_frames = len(frames)
                    tasks.append(POP)
                if cur_slots > max_slots:
                    max_slots = cur_slots
                tasks.append((_E, d.body, env2, depth + 1))
        else:  # pop
            cur_slots -= frames.pop()
    result = vals.pop()
    stats = RunStats(
        result=to_public(result),
        time_steps=steps,
        tree_depth=max_depth,
        call_history_length=calls,
        distinct_configs=len(seen),
        max_frames=max_frames,
        max_space_bits=max_slots * bps,
    )
    return stats, first_rep, prep


def eval_stack(
    program: Program,
    x: Bits,
    budget: Budget = DEFAULT_BUDGET,
    tco: bool = False,
    *,
    check_suffix: bool = False,
) -> RunStats:
    """Run with explicit activation-record accounting.

    With tco=True every call site that is in tail position and has
    call-free arguments reuses the top frame instead of pushing a new one.
    The result never depends on tco; only max_frames and max_space_bits do.
    """
    stats, _, _ = _run_stack(program, x, budget, tco, check_suffix)
    return stats


def detect_call_overlap(
    program: Program, x: Bits, budget: Budget = DEFAULT_BUDGET
) -> OverlapReport:
    """Report whether some configuration is entered twice in the call history."""
    stats, first_rep, prep = _run_stack(program, x, budget, False, False)
    cfg = _public_config(prep, first_rep) if first_rep is not None else None
    return OverlapReport(
        overlap=first_rep is not None,
        first_repeated=cfg,
        call_history_length=stats.call_history_length,
        distinct_configs=stats.distinct_configs,
    )


# ---------------------------------------------------------------------------
# Memoized engine

_MS = "store"
_ACTIVE = object()
_MISS = object()


def eval_memo(program: Program, x: Bits, *, check_suffix: bool = False) -> RunStats:
    """Evaluate with a (function, arguments) -> value cache.

    Every configuration's body is evaluated at most once; later calls with
    the same arguments hit the cache.  Re-entering a configuration that is
    still being evaluated is a provable loop and raises ReachBoundExceeded,
    so no step budget is needed: total work is bounded by the reach bound
    times the program size.
    """
    prep = _prepare(program, False)
    n = len(x)
    bound = reach_bound(program, n)
    defs = prep.defs
    steps = 1
    env0 = (0,)
    key0 = (0, env0)
    cache = {key0: _ACTIVE}
    hits = 0
    calls = 1
    max_depth = 1
    tasks = [(_MS, key0), (_E, defs[0].body, env0, 2)]
    vals: list[int] = []
    while tasks:
        task = tasks.pop()
        k = task[0]
        if k == _E:
            e, env, depth = task[1], task[2], task[3]
            steps += 1
            if depth > max_depth:
                max_depth = depth
            tag = e[0]
            if tag == "v":
                vals.append(env[e[1]])
            elif tag == "k":
                vals.append(e[1])
            elif tag == "n":
                vals.append(n)
            elif tag == "b":
                tasks.append((_B, e))
                tasks.append((_E, e[2], env, depth + 1))
            elif tag == "i":
                tasks.append((_I1, e, env, depth))
                tasks.append((_E, e[1], env, depth + 1))
            else:  # "c"
                args = e[2]
                if args:
                    tasks.append((_A, e, env, 1, depth))
                    tasks.append((_E, args[0], env, depth + 1))
                else:
                    calls += 1
                    key = (e[1], ())
                    v = cache.get(key, _MISS)
                    if v is _ACTIVE:
                        raise ReachBoundExceeded(
                            f"configuration of {defs[e[1]].name!r} re-entered while active"
                        )
                    if v is _MISS:
                        cache[key] = _ACTIVE
                        tasks.append((_MS, key))
                        tasks.append((_E, defs[e[1]].body, (), depth + 1))
                    else:
                        hits += 1
                        vals.append(v)
        elif k == _B:
            e = task[1]
            v = _apply_base(e[1], vals.pop(), x, n)
            if check_suffix:
                _check_value(v, n)
            vals.append(v)
        elif k == _I1:
            e, env, depth = task[1], task[2], task[3]
            t = vals.pop()
            if t == TRUE:
                branch = e[2]
            elif t == FALSE:
                branch = e[3]
            else:
                raise Stuck("if test did not evaluate to a boolean")
            tasks.append((_E, branch, env, depth + 1))
        elif k == _A:
            e, env, i, depth = task[1], task[2], task[3], task[4]
            args = e[2]
            if i < len(args):
                tasks.append((_A, e, env, i + 1, depth))
                tasks.append((_E, args[i], env, depth + 1))
            else:
                m = len(args)
                env2 = tuple(vals[-m:])
                del vals[-m:]
                if check_suffix:
                    for v in env2:
                        _check_value(v, n)
                calls += 1
                key = (e[1], env2)
                v = cache.get(key, _MISS)
                if v is _ACTIVE:
                    raise ReachBoundExceeded(
                        f"configuration of {defs[e[1]].name!r} re-entered while active"
                    )
                if v is _MISS:
                    cache[key] = _ACTIVE
                    if len(cache) > bound:
                        raise ReachBoundExceeded("distinct configurations exceed the reach bound")
                    tasks.append((_MS, key))
                    tasks.append((_E, defs[e[1]].body, env2, depth + 1))
                else:
                    hits += 1
                    vals.append(v)
        else:  # _MS
            cache[task[1]] = vals[-1]
    result = vals.pop()
    entries = len(cache)
    stats = RunStats(
        result=to_public(result),
        time_steps=steps,
        tree_depth=max_depth,
        call_history_length=calls,
        distinct_configs=entries,
        cache_entries=entries,
        cache_hits=hits,
    )
    return stats
