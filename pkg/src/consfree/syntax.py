"""Syntax and static checking for a first-order, constructor-free language.

A program is a finite sequence of mutually recursive function definitions;
the first definition is the entry point and takes exactly one argument, the
input bit string.  Concrete grammar (`.cf` files):

    program    ::= definition+
    definition ::= name param* "=" expr
    expr       ::= "if" expr "then" expr "else" expr
                 | "choose" atom atom
                 | name atom*                 -- call, or a bare variable
                 | unary
    unary      ::= ("not" | "null" | "head" | "tail") unary | atom
    atom       ::= "True" | "False" | "[]" | name | "(" expr ")"

Identifiers start with a letter and continue with letters, digits, "_" or
"'".  "--" starts a comment running to end of line.  An expression may
continue across lines; a new definition opens at any line whose leading
tokens have the "name name* =" header shape ("=" is not an expression
token, so the shape is decisive).

Run-time values are booleans and suffixes of the input.  A suffix is held
as an integer offset into the single shared input string (offset == length
denotes []), so every value fits in O(log n) bits and the input is never
copied.  Bits and booleans are identified: head yields a boolean, and
True/False double as the bits 1/0.

`choose` is only legal when a program is validated with ncf=True; all
other forms are deterministic.

Everything in this module is immutable after construction, so parsed
programs can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from .errors import ParseError, ValidationError

KEYWORDS = frozenset(
    ["if", "then", "else", "True", "False", "not", "null", "head", "tail", "choose"]
)
BASE_OPS = ("not", "null", "head", "tail")

Bits = Tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Suffix:
    """Suffix of the run's input starting at `offset`; offset == len(input) is []."""

    offset: int


Value = Union[bool, Suffix]


# ---------------------------------------------------------------------------
# Abstract syntax


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class TrueLit:
    pass


@dataclass(frozen=True, slots=True)
class FalseLit:
    pass


@dataclass(frozen=True, slots=True)
class NilLit:
    pass


@dataclass(frozen=True, slots=True)
class Base:
    op: str  # one of BASE_OPS
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class If:
    cond: "Expr"
    then_branch: "Expr"
    else_branch: "Expr"


@dataclass(frozen=True, slots=True)
class Call:
    fname: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True, slots=True)
class Choose:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Ident:
    """Parser-internal bare name; validation resolves it to Var or a 0-ary Call."""

    name: str


Expr = Union[Var, TrueLit, FalseLit, NilLit, Base, If, Call, Choose, Ident]

TRUE_LIT = TrueLit()
FALSE_LIT = FalseLit()
NIL_LIT = NilLit()


@dataclass(frozen=True, slots=True)
class Definition:
    name: str
    params: Tuple[str, ...]
    body: Expr


@dataclass(frozen=True, slots=True)
class Program:
    definitions: Tuple[Definition, ...]

    @property
    def entry(self) -> Definition:
        return self.definitions[0]


def has_choose(e) -> bool:
    if isinstance(e, Program):
        return any(has_choose(d.body) for d in e.definitions)
    t = type(e)
    if t is Choose:
        return True
    if t is Base:
        return has_choose(e.arg)
    if t is If:
        return has_choose(e.cond) or has_choose(e.then_branch) or has_choose(e.else_branch)
    if t is Call:
        return any(has_choose(a) for a in e.args)
    return False


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "ident" | "kw" | "sym" | "nil" | "eof"
    text: str
    line: int
    col: int
    bol: bool  # first token on its line


def _lex(text: str) -> list[Token]:
    out = []
    i, line, col = 0, 1, 1
    last_line = 0
    size = len(text)

    def emit(kind, word, ln, cl):
        nonlocal last_line
        out.append(Token(kind, word, ln, cl, ln != last_line))
        last_line = ln

    while i < size:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif text.startswith("--", i):
            while i < size and text[i] != "\n":
                i += 1
        elif ch == "[":
            if i + 1 < size and text[i + 1] == "]":
                emit("nil", "[]", line, col)
                i += 2
                col += 2
            else:
                raise ParseError("expected ']' after '['", line, col)
        elif ch in "()=":
            emit("sym", ch, line, col)
            i += 1
            col += 1
        elif ch.isalpha() and ch.isascii():
            j = i
            while j < size and (text[j].isascii() and (text[j].isalnum() or text[j] in "_'")):
                j += 1
            word = text[i:j]
            emit("kw" if word in KEYWORDS else "ident", word, line, col)
            col += j - i
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("eof", "", line, col, line != last_line))
    return out


# ---------------------------------------------------------------------------
# Parser

_ATOM_STARTERS = {"True", "False"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.advance()

    def at_def_header(self) -> bool:
        # A definition starts at the beginning of a line with one or more
        # bare identifiers followed by '='.  Expressions may span lines; any
        # line whose leading tokens have that shape opens a new definition.
        t = self.peek()
        if t.kind != "ident" or not t.bol:
            return False
        j = self.i + 1
        while self.toks[j].kind == "ident":
            j += 1
        return self.toks[j].text == "="

    def starts_atom(self) -> bool:
        t = self.peek()
        return t.kind in ("ident", "nil") or t.text in _ATOM_STARTERS or t.text == "("

    def parse_program(self) -> Program:
        defs = []
        while self.peek().kind != "eof":
            if not self.at_def_header():
                t = self.peek()
                raise ParseError(
                    f"expected a definition, found {t.text or 'end of input'!r}", t.line, t.col
                )
            defs.append(self.parse_def())
        if not defs:
            t = self.peek()
            raise ParseError("expected a definition", t.line, t.col)
        return Program(tuple(defs))

    def parse_def(self) -> Definition:
        name = self.advance().text
        params = []
        while self.peek().kind == "ident":
            params.append(self.advance().text)
        self.expect("=")
        body = self.parse_expr()
        return Definition(name, tuple(params), body)

    def parse_expr(self) -> Expr:
        t = self.peek()
        if t.text == "if":
            self.advance()
            cond = self.parse_expr()
            self.expect("then")
            then_branch = self.parse_expr()
            self.expect("else")
            else_branch = self.parse_expr()
            return If(cond, then_branch, else_branch)
        if t.text == "choose":
            self.advance()
            return Choose(self.parse_atom(), self.parse_atom())
        if t.kind == "ident":
            name = self.advance().text
            args = []
            while self.starts_atom() and not self.at_def_header():
                args.append(self.parse_atom())
            return Call(name, tuple(args)) if args else Ident(name)
        return self.parse_unary()

    def parse_unary(self) -> Expr:
        t = self.peek()
        if t.text in BASE_OPS:
            self.advance()
            return Base(t.text, self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        t = self.peek()
        if t.text == "True":
            self.advance()
            return TRUE_LIT
        if t.text == "False":
            self.advance()
            return FALSE_LIT
        if t.kind == "nil":
            self.advance()
            return NIL_LIT
        if t.kind == "ident":
            return Ident(self.advance().text)
        if t.text == "(":
            self.advance()
            e = self.parse_expr()
            self.expect(")")
            return e
        raise ParseError(f"expected an expression, found {t.text or 'end of input'!r}", t.line, t.col)


# ---------------------------------------------------------------------------
# Validation

_VALIDATION_KINDS = (
    "DuplicateDef",
    "DuplicateParam",
    "UnboundVar",
    "UnknownFunction",
    "ArityMismatch",
    "EntryArity",
    "ChooseNotAllowed",
)


def validate_program(program: Program, *, ncf: bool = False) -> Program:
    """Check all static invariants and resolve bare names; returns the resolved program.

    Raises ValidationError. Validation is order independent: permuting the
    non-entry definitions never changes the outcome.
    """
    seen = set()
    for d in program.definitions:
        if d.name in seen:
            raise ValidationError("DuplicateDef", f"function {d.name!r} is defined twice")
        seen.add(d.name)
        if len(set(d.params)) != len(d.params):
            raise ValidationError("DuplicateParam", f"repeated parameter in {d.name!r}")
    entry = program.entry
    if len(entry.params) != 1:
        raise ValidationError(
            "EntryArity", f"entry function {entry.name!r} must take exactly one parameter"
        )
    arities = {d.name: len(d.params) for d in program.definitions}
    resolved = tuple(
        Definition(d.name, d.params, _resolve(d.body, d.name, frozenset(d.params), arities, ncf))
        for d in program.definitions
    )
    return Program(resolved)


def _resolve(e: Expr, owner: str, params: frozenset, arities: dict, ncf: bool) -> Expr:
    t = type(e)
    if t is Ident:
        if e.name in params:
            return Var(e.name)
        if e.name in arities:
            if arities[e.name] != 0:
                raise ValidationError(
                    "ArityMismatch",
                    f"{e.name!r} takes {arities[e.name]} arguments but is used bare in {owner!r}",
                )
            return Call(e.name, ())
        raise ValidationError("UnboundVar", f"{e.name!r} is not a parameter of {owner!r}")
    if t is Var:
        if e.name not in params:
            raise ValidationError("UnboundVar", f"{e.name!r} is not a parameter of {owner!r}")
        return e
    if t in (TrueLit, FalseLit, NilLit):
        return e
    if t is Base:
        return Base(e.op, _resolve(e.arg, owner, params, arities, ncf))
    if t is If:
        return If(
            _resolve(e.cond, owner, params, arities, ncf),
            _resolve(e.then_branch, owner, params, arities, ncf),
            _resolve(e.else_branch, owner, params, arities, ncf),
        )
    if t is Call:
        if e.fname not in arities:
            raise ValidationError("UnknownFunction", f"{e.fname!r} is not defined")
        if arities[e.fname] != len(e.args):
            raise ValidationError(
                "ArityMismatch",
                f"{e.fname!r} takes {arities[e.fname]} arguments, called with {len(e.args)}",
            )
        return Call(e.fname, tuple(_resolve(a, owner, params, arities, ncf) for a in e.args))
    if t is Choose:
        if not ncf:
            raise ValidationError(
                "ChooseNotAllowed", "choose requires validating the program with ncf=True"
            )
        return Choose(
            _resolve(e.left, owner, params, arities, ncf),
            _resolve(e.right, owner, params, arities, ncf),
        )
    raise TypeError(f"not an expression: {e!r}")


def parse_program(text: str, *, ncf: bool = False) -> Program:
    """Parse and validate a program from concrete syntax."""
    return validate_program(_Parser(_lex(text)).parse_program(), ncf=ncf)


# ---------------------------------------------------------------------------
# Pretty printer

def pretty_print(program: Program) -> str:
    """Canonical concrete syntax; parse_program(pretty_print(p)) == p."""
    lines = []
    for d in program.definitions:
        head = " ".join((d.name,) + d.params)
        lines.append(f"{head} = {_fmt(d.body, atom_ctx=False)}")
    return "\n".join(lines) + "\n"


def _fmt(e: Expr, atom_ctx: bool) -> str:
    t = type(e)
    if t is Var:
        return e.name
    if t is TrueLit:
        return "True"
    if t is FalseLit:
        return "False"
    if t is NilLit:
        return "[]"
    if t is Call and not e.args:
        return e.fname
    if t is Call:
        s = e.fname + " " + " ".join(_fmt(a, atom_ctx=True) for a in e.args)
    elif t is Base:
        s = f"{e.op} {_fmt(e.arg, atom_ctx=True)}"
    elif t is If:
        s = (
            f"if {_fmt(e.cond, atom_ctx=False)} "
            f"then {_fmt(e.then_branch, atom_ctx=False)} "
            f"else {_fmt(e.else_branch, atom_ctx=False)}"
        )
    elif t is Choose:
        s = f"choose {_fmt(e.left, atom_ctx=True)} {_fmt(e.right, atom_ctx=True)}"
    else:
        raise TypeError(f"cannot print unresolved expression: {e!r}")
    return f"({s})" if atom_ctx else s


# ---------------------------------------------------------------------------
# Bit-string inputs

def parse_input(text: str) -> Bits:
    """Parse an input bit string, compact ("1011") or list form ("[1,0,1,1]").

    "" and "[]" both denote the empty string.
    """
    s = text.strip()
    if s == "" or s == "[]":
        return ()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ParseError("unterminated '[' in input")
        bits = []
        for item in s[1:-1].split(","):
            item = item.strip()
            if item not in ("0", "1"):
                raise ParseError(f"bad list element {item!r}; expected 0 or 1")
            bits.append(int(item))
        return tuple(bits)
    for pos, ch in enumerate(s):
        if ch not in "01":
            raise ParseError(f"bad character {ch!r} in bit string", col=pos + 1)
    return tuple(int(ch) for ch in s)


def format_bits(bits: Bits, list_form: bool = False) -> str:
    if list_form:
        return "[" + ",".join(str(b) for b in bits) + "]"
    return "".join(str(b) for b in bits)


def suffix_bits(x: Bits, v: Suffix) -> Bits:
    """The concrete bit sequence a Suffix value denotes for input x."""
    return x[v.offset :]
