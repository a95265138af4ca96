"""Laboratory for constructor-free first-order programs.

Programs compute over booleans and read-only suffixes of their input bit
string.  The package bundles a parser and printer, a static tail-call
classifier, four instrumented evaluation strategies, nondeterministic
acceptance deciders, a straight-line circuit wire format with a bundled
in-language decider, and a compiler from one-tape machines into programs.
"""

from .analysis import AlphaClass, CallShapeReport, alpha, call_shape_report, is_cftr
from .circuits import (
    McvEncoding,
    StraightLineProgram,
    decode_mcv,
    encode_mcv,
    eval_circuit,
    mcv_cf_program,
)
from .engines import (
    Budget,
    CompNode,
    Config,
    OverlapReport,
    RunStats,
    detect_call_overlap,
    eval_memo,
    eval_stack,
    eval_tree,
    reach_bound,
)
from .errors import (
    CfError,
    CompileError,
    MalformedCircuit,
    MalformedEncoding,
    OracleMismatch,
    ParseError,
    ReachBoundExceeded,
    Stuck,
    SuffixPropertyViolation,
    Timeout,
    ValidationError,
)
from .machines import TuringMachine, compile_tm, parse_machine, run_tm
from .nondet import (
    ConfirmStats,
    confirm_log2,
    ncf_decide_saturate,
    ncf_decide_search,
    saturate,
    search,
)
from .syntax import (
    Bits,
    Program,
    Suffix,
    Value,
    format_bits,
    parse_input,
    parse_program,
    pretty_print,
    validate_program,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
