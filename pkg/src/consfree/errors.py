"""Exception taxonomy shared by every layer of the toolkit."""


class CfError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CfError):
    """Bad concrete syntax in a program, input string, circuit, or machine file."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(CfError):
    """A structurally well-formed program that violates a static invariant.

    `kind` is one of: DuplicateDef, DuplicateParam, UnboundVar,
    UnknownFunction, ArityMismatch, EntryArity, ChooseNotAllowed.
    """

    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class Timeout(CfError):
    """The step budget was exhausted before the run finished."""

    def __init__(self, message="step budget exhausted", steps=None):
        self.steps = steps
        super().__init__(message)


class Stuck(CfError):
    """A judgment with no applicable evaluation rule (e.g. head of [])."""


class ReachBoundExceeded(CfError):
    """The memoized evaluator detected a provably nonterminating run."""


class SuffixPropertyViolation(CfError):
    """A run-time value escaped the boolean-or-input-suffix range."""


class OracleMismatch(CfError):
    """A confirmation step contradicted the oracle tree; indicates a bug."""


class MalformedCircuit(CfError):
    """A straight-line program violating the circuit invariants."""


class MalformedEncoding(CfError):
    """A bit string that does not follow the circuit wire format."""

    def __init__(self, position, reason):
        self.position = position
        self.reason = reason
        super().__init__(f"bad encoding at bit {position}: {reason}")


class CompileError(CfError):
    """A machine that cannot be compiled (e.g. time exponent < 1)."""
