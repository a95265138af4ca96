"""Flat machine-readable run records with a fixed column set.

Every engine serialises into the same record shape; the engine field tells
the rows apart.  Column order is fixed so identical runs produce byte
identical output.
"""

from __future__ import annotations

import json

from .syntax import Suffix, Value

COLUMNS = (
    "engine",
    "program",
    "input_len",
    "result",
    "time_steps",
    "tree_depth",
    "call_history_length",
    "distinct_configs",
    "max_frames",
    "max_space_bits",
    "cache_entries",
    "cache_hits",
    "overlap",
    "max_confirm_frames",
    "tree_size",
    "bound_ok",
)


def format_result(v) -> str:
    if isinstance(v, str):
        return v
    if v is True:
        return "True"
    if v is False:
        return "False"
    if isinstance(v, Suffix):
        return f"suffix[{v.offset}]"
    raise TypeError(f"not a result value: {v!r}")


def make_record(engine: str, program: str, input_len: int, result, **fields) -> dict:
    rec = dict.fromkeys(COLUMNS)
    rec["engine"] = engine
    rec["program"] = program
    rec["input_len"] = input_len
    rec["result"] = format_result(result)
    for key, value in fields.items():
        if key not in rec:
            raise KeyError(f"unknown record field {key!r}")
        rec[key] = value
    return rec


def stats_record(engine: str, program: str, input_len: int, stats) -> dict:
    overlap = None
    if stats.call_history_length is not None and stats.distinct_configs is not None:
        overlap = stats.call_history_length > stats.distinct_configs
    return make_record(
        engine,
        program,
        input_len,
        stats.result,
        time_steps=stats.time_steps,
        tree_depth=stats.tree_depth,
        call_history_length=stats.call_history_length,
        distinct_configs=stats.distinct_configs,
        max_frames=stats.max_frames,
        max_space_bits=stats.max_space_bits,
        cache_entries=stats.cache_entries,
        cache_hits=stats.cache_hits,
        overlap=overlap,
    )


def _cell(v) -> str:
    if v is None:
        return ""
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def csv_header() -> str:
    return ",".join(COLUMNS)


def to_csv_row(rec: dict) -> str:
    return ",".join(_cell(rec[c]) for c in COLUMNS)


def to_json(rec: dict) -> str:
    return json.dumps(rec, separators=(", ", ": "))


def human_lines(rec: dict) -> list[str]:
    return [f"{c} = {_cell(rec[c])}" for c in COLUMNS if rec[c] is not None]
