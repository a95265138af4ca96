"""Seeded random program and input generators for differential testing.

random_program draws from the full grammar, so its output may diverge or
get stuck; callers run it under a budget.  random_ncf_program restricts
calls to later definitions (a DAG call graph), so every choice resolution
terminates, which the nondeterministic differential tests rely on.
"""

from __future__ import annotations

from random import Random

from .syntax import (
    Base,
    BASE_OPS,
    Bits,
    Call,
    Choose,
    Definition,
    FALSE_LIT,
    If,
    NIL_LIT,
    Program,
    TRUE_LIT,
    Var,
    validate_program,
)


def random_expr(rng: Random, params, callables, depth: int, allow_choose: bool = False):
    """callables: list of (name, arity) this expression may call."""
    leaves = ["const"]
    if params:
        leaves.append("var")
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kinds = leaves + ["base", "base", "if", "if"]
        if callables:
            kinds += ["call", "call"]
        if allow_choose:
            kinds += ["choose", "choose"]
        kind = rng.choice(kinds)
    if kind == "var":
        return Var(rng.choice(params))
    if kind == "const":
        return rng.choice((TRUE_LIT, FALSE_LIT, NIL_LIT, NIL_LIT))
    if kind == "base":
        return Base(rng.choice(BASE_OPS), random_expr(rng, params, callables, depth - 1, allow_choose))
    if kind == "if":
        return If(
            random_expr(rng, params, callables, depth - 1, allow_choose),
            random_expr(rng, params, callables, depth - 1, allow_choose),
            random_expr(rng, params, callables, depth - 1, allow_choose),
        )
    if kind == "choose":
        return Choose(
            random_expr(rng, params, callables, depth - 1, allow_choose),
            random_expr(rng, params, callables, depth - 1, allow_choose),
        )
    fname, arity = rng.choice(callables)
    return Call(
        fname,
        tuple(random_expr(rng, params, callables, depth - 1, allow_choose) for _ in range(arity)),
    )


def random_program(rng: Random, max_defs: int = 3, max_arity: int = 2, depth: int = 4) -> Program:
    """Arbitrary call graph; may diverge or get stuck at run time."""
    ndefs = rng.randint(1, max_defs)
    sigs = [("main", 1)] + [(f"f{i}", rng.randint(0, max_arity)) for i in range(1, ndefs)]
    defs = []
    for name, arity in sigs:
        params = tuple(f"p{j}" for j in range(arity)) if name != "main" else ("x",)
        defs.append(Definition(name, params, random_expr(rng, list(params), sigs, depth)))
    return validate_program(Program(tuple(defs)))


def random_ncf_program(rng: Random, max_defs: int = 3, max_arity: int = 2, depth: int = 4) -> Program:
    """Choice expressions allowed; calls point strictly downward, so it terminates."""
    ndefs = rng.randint(1, max_defs)
    sigs = [("main", 1)] + [(f"f{i}", rng.randint(0, max_arity)) for i in range(1, ndefs)]
    defs = []
    for i, (name, arity) in enumerate(sigs):
        params = tuple(f"p{j}" for j in range(arity)) if name != "main" else ("x",)
        callables = sigs[i + 1 :]
        defs.append(
            Definition(name, params, random_expr(rng, list(params), callables, depth, True))
        )
    return validate_program(Program(tuple(defs)), ncf=True)


def random_bits(rng: Random, n: int) -> Bits:
    return tuple(rng.randint(0, 1) for _ in range(n))


def input_bits(generator: str, n: int, seed: int = 0) -> Bits:
    """Named input families for size sweeps."""
    if generator == "ones":
        return (1,) * n
    if generator == "zeros":
        return (0,) * n
    if generator == "alternating":
        return tuple(i % 2 for i in range(n))
    if generator == "random":
        return random_bits(Random((seed, n)), n)
    raise ValueError(f"unknown input generator {generator!r}")


INPUT_GENERATORS = ("ones", "zeros", "alternating", "random")
