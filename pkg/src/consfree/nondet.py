"""Nondeterministic acceptance and the low-stack confirmation replay.

A program with choose expressions accepts an input when SOME resolution of
the choices evaluates to True.  Two deciders are provided:

* ncf_decide_search   -- exhaustive backtracking over choice strings, each
                         path re-run deterministically under its own step
                         budget.  Semi-decision: if no path accepts and at
                         least one path hit the budget, Timeout is raised.
* ncf_decide_saturate -- bottom-up least fixed point of the derivable
                         (configuration, value) pairs, reading the
                         evaluation rules as relations.  Always terminates,
                         in time polynomial in the configuration space;
                         no path enumeration.

confirm_log2 replays a completed deterministic run with a stack discipline
that recurses into the smaller premise of every multi-premise rule and
walks the largest premise iteratively, so the confirmation stack stays
logarithmic in the evaluation-tree size.  The guesses the procedure needs
(values and which premise has the smaller tree) are answered by the
completed run itself, acting as the oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .engines import (
    _apply_base,
    _prepare,
    Budget,
    CompNode,
    DEFAULT_BUDGET,
    FALSE,
    TRUE,
    eval_tree,
    reach_bound,
    to_public,
)
from .errors import OracleMismatch, Stuck, Timeout
from .syntax import Bits, Program, Value


# ---------------------------------------------------------------------------
# Backtracking search over the choice tree

_E, _B, _I1, _A = range(4)


@dataclass(frozen=True)
class SearchResult:
    accepted: bool
    paths_completed: int
    paths_timed_out: int
    stuck_paths: int


def search(program: Program, x: Bits, budget: Budget = DEFAULT_BUDGET) -> SearchResult:
    """Depth-first exploration of the choice tree, left branch first.

    At every choice the machine state is snapshotted so the right branch
    can be resumed later without re-running the shared prefix.  The step
    budget applies per path (steps along one resolution), so a timed-out
    path is abandoned while its siblings are still explored; an accepting
    resolution hiding beside a divergent one is found.
    """
    prep = _prepare(program, True)
    n = len(x)
    defs = prep.defs
    limit = budget.max_steps
    completed = timed_out = stuck = 0

    backtracks: list = []
    tasks = [(_E, defs[0].body, (0,))]
    vals: list[int] = []
    steps = 1

    while True:
        try:
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
                        vals.append(env[e[1]])
                    elif tag == "k":
                        vals.append(e[1])
                    elif tag == "n":
                        vals.append(n)
                    elif tag == "b":
                        tasks.append((_B, e))
                        tasks.append((_E, e[2], env))
                    elif tag == "i":
                        tasks.append((_I1, e, env))
                        tasks.append((_E, e[1], env))
                    elif tag == "ch":
                        right = tasks.copy()
                        right.append((_E, e[2], env))
                        backtracks.append((right, vals.copy(), steps))
                        tasks.append((_E, e[1], env))
                    else:  # "c"
                        args = e[2]
                        if args:
                            tasks.append((_A, e, env, 1))
                            tasks.append((_E, args[0], env))
                        else:
                            tasks.append((_E, defs[e[1]].body, ()))
                elif k == _B:
                    e = task[1]
                    vals.append(_apply_base(e[1], vals.pop(), x, n))
                elif k == _I1:
                    e, env = task[1], task[2]
                    t = vals.pop()
                    if t == TRUE:
                        branch = e[2]
                    elif t == FALSE:
                        branch = e[3]
                    else:
                        raise Stuck("if test did not evaluate to a boolean")
                    tasks.append((_E, branch, env))
                else:  # _A
                    e, env, i = task[1], task[2], task[3]
                    args = e[2]
                    if i < len(args):
                        tasks.append((_A, e, env, i + 1))
                        tasks.append((_E, args[i], env))
                    else:
                        m = len(args)
                        env2 = tuple(vals[-m:])
                        del vals[-m:]
                        tasks.append((_E, defs[e[1]].body, env2))
            completed += 1
            if vals.pop() == TRUE:
                return SearchResult(True, completed, timed_out, stuck)
        except Timeout:
            timed_out += 1
        except Stuck:
            stuck += 1
        if not backtracks:
            return SearchResult(False, completed, timed_out, stuck)
        tasks, vals, steps = backtracks.pop()


def ncf_decide_search(program: Program, x: Bits, budget: Budget = DEFAULT_BUDGET) -> bool:
    """True iff some resolution of the choices yields True within budget.

    Raises Timeout when no accepting path was found and at least one path
    exhausted its budget, since rejection is then not established.
    """
    res = search(program, x, budget)
    if not res.accepted and res.paths_timed_out:
        raise Timeout(f"{res.paths_timed_out} path(s) exceeded the budget with no accepting path")
    return res.accepted


# ---------------------------------------------------------------------------
# Saturation


@dataclass(frozen=True)
class SaturationResult:
    accepted: bool
    configs: int  # configurations demanded
    triples: int  # derived (configuration, value) pairs
    updates: int  # work-list evaluations performed


def saturate(program: Program, x: Bits) -> SaturationResult:
    """Least fixed point of derivable (configuration, value) pairs.

    Configurations are demanded starting from the entry; whenever a body
    evaluation consults a configuration, a dependency edge is recorded, and
    a configuration is re-evaluated only when one of its dependencies
    gained a value.  Always terminates: the pair space is finite.
    """
    prep = _prepare(program, True)
    n = len(x)
    defs = prep.defs
    store: dict = {}
    deps: dict = {}
    queue = deque()
    queued = set()

    def demand(key):
        if key not in store:
            store[key] = frozenset()
            deps[key] = set()
            queue.append(key)
            queued.add(key)

    key0 = (0, (0,))
    demand(key0)
    updates = 0

    while queue:
        key = queue.popleft()
        queued.discard(key)
        updates += 1

        def consult(dep_key, _key=key):
            demand(dep_key)
            deps[dep_key].add(_key)
            return store[dep_key]

        didx, env = key
        new = frozenset(_eval_rel(defs[didx].body, env, x, n, defs, consult))
        if new != store[key]:
            store[key] = new
            for dependent in deps[key]:
                if dependent not in queued:
                    queue.append(dependent)
                    queued.add(dependent)

    triples = sum(len(vs) for vs in store.values())
    assert triples <= reach_bound(program, n) * (n + 3)
    return SaturationResult(TRUE in store[key0], len(store), triples, updates)


def _eval_rel(e, env, x, n, defs, consult) -> set:
    tag = e[0]
    if tag == "v":
        return {env[e[1]]}
    if tag == "k":
        return {e[1]}
    if tag == "n":
        return {n}
    if tag == "b":
        out = set()
        for v in _eval_rel(e[2], env, x, n, defs, consult):
            try:
                out.add(_apply_base(e[1], v, x, n))
            except Stuck:
                pass  # no rule derives a value here
        return out
    if tag == "i":
        conds = _eval_rel(e[1], env, x, n, defs, consult)
        out = set()
        if TRUE in conds:
            out |= _eval_rel(e[2], env, x, n, defs, consult)
        if FALSE in conds:
            out |= _eval_rel(e[3], env, x, n, defs, consult)
        return out
    if tag == "ch":
        return _eval_rel(e[1], env, x, n, defs, consult) | _eval_rel(e[2], env, x, n, defs, consult)
    # "c"
    argsets = [sorted(_eval_rel(a, env, x, n, defs, consult)) for a in e[2]]
    out = set()
    for combo in product(*argsets):
        out |= consult((e[1], combo))
    return out


def ncf_decide_saturate(program: Program, x: Bits) -> bool:
    """True iff the entry configuration derives True; no path enumeration."""
    return saturate(program, x).accepted


# ---------------------------------------------------------------------------
# Logarithmic-stack confirmation replay


@dataclass(frozen=True)
class ConfirmStats:
    result: Value
    max_confirm_frames: int
    tree_size: int
    bound_ok: bool


def confirm_log2(program: Program, x: Bits, budget: Budget = DEFAULT_BUDGET) -> ConfirmStats:
    """Re-verify a completed run with a logarithmically bounded stack.

    The completed evaluation tree answers every guess.  At a node with
    several premises, the premises other than the largest are confirmed by
    recursive calls, smallest first, and the largest is confirmed in tail
    position, so each pushed frame targets a subtree of at most half the
    size at frame entry.  bound_ok records whether the peak frame count
    stayed within ceil(log2(tree_size + 1)) + 1, counting the root frame.
    """
    root, _stats = eval_tree(program, x, budget)
    prep = _prepare(program, False)
    max_frames = _confirm_tree(root, prep, x)
    size = root.size
    bound_ok = max_frames <= size.bit_length() + 1
    return ConfirmStats(to_public(root.value), max_frames, size, bound_ok)


def _confirm_tree(root: CompNode, prep, x: Bits) -> int:
    """Verify every judgment and return the peak confirmation-stack depth."""
    n = len(x)
    max_frames = 1

    def confirm(node: CompNode, depth: int) -> None:
        nonlocal max_frames
        if depth > max_frames:
            max_frames = depth
        while True:
            _verify(node, prep, x, n)
            children = node.children
            if not children:
                return
            if len(children) == 1:
                node = children[0]
                continue
            order = sorted(range(len(children)), key=lambda i: (children[i].size, i))
            for i in order[:-1]:
                confirm(children[i], depth + 1)
            node = children[order[-1]]

    confirm(root, 1)
    return max_frames


def _verify(node: CompNode, prep, x: Bits, n: int) -> None:
    e = node.rt
    ch = node.children
    if e is None:  # top-level program judgment
        if len(ch) != 1 or ch[0].rt is not prep.defs[0].body:
            raise OracleMismatch("malformed top-level judgment")
        if ch[0].value != node.value or ch[0].env != node.env:
            raise OracleMismatch("top-level value does not match the entry body")
        return
    tag = e[0]
    if tag == "v":
        if ch or node.env[e[1]] != node.value:
            raise OracleMismatch("variable judgment contradicts its environment")
    elif tag == "k":
        if ch or node.value != e[1]:
            raise OracleMismatch("constant judgment altered")
    elif tag == "n":
        if ch or node.value != n:
            raise OracleMismatch("empty-list judgment altered")
    elif tag == "b":
        if len(ch) != 1 or ch[0].rt is not e[2] or ch[0].env != node.env:
            raise OracleMismatch("base premise malformed")
        try:
            expected = _apply_base(e[1], ch[0].value, x, n)
        except Stuck as exc:
            raise OracleMismatch(f"base operation has no applicable rule: {exc}") from exc
        if expected != node.value:
            raise OracleMismatch("base operation result mismatch")
    elif tag == "i":
        if len(ch) != 2:
            raise OracleMismatch("conditional must have exactly two premises")
        cond, branch = ch
        if cond.rt is not e[1] or cond.env != node.env or branch.env != node.env:
            raise OracleMismatch("conditional premises malformed")
        if cond.value == TRUE:
            want = e[2]
        elif cond.value == FALSE:
            want = e[3]
        else:
            raise OracleMismatch("conditional test is not boolean")
        if branch.rt is not want or branch.value != node.value:
            raise OracleMismatch("conditional selected the wrong branch")
    elif tag == "c":
        args = e[2]
        if len(ch) != len(args) + 1:
            raise OracleMismatch("call premise count mismatch")
        for i, a in enumerate(args):
            if ch[i].rt is not a or ch[i].env != node.env:
                raise OracleMismatch("call argument premise malformed")
        body = ch[-1]
        env2 = tuple(c.value for c in ch[:-1])
        if body.rt is not prep.defs[e[1]].body or body.env != env2:
            raise OracleMismatch("call body premise malformed")
        if body.value != node.value:
            raise OracleMismatch("call value does not match its body")
    else:
        raise OracleMismatch(f"no rule for tag {tag!r}")
