"""MSO+U formulas over words: syntax tree, s-expression parser, printer.

Position variables start with a lowercase letter, set variables with an
uppercase letter.  Labels refer to letters ``1..n`` of a declared
:class:`Alphabet`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class FormulaError(ValueError):
    """Base class for everything the parser rejects."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class UnknownLetterError(FormulaError):
    pass


class UnboundVariableError(FormulaError):
    pass


@dataclass(frozen=True)
class Alphabet:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"alphabet size must be a positive integer, got {self.n!r}")

    @property
    def letters(self) -> range:
        return range(1, self.n + 1)

    def __contains__(self, letter) -> bool:
        return isinstance(letter, int) and 1 <= letter <= self.n


# -- syntax tree -----------------------------------------------------------

@dataclass(frozen=True)
class LessEq:
    x: str
    y: str


@dataclass(frozen=True)
class Label:
    letter: int
    x: str


@dataclass(frozen=True)
class In:
    x: str
    X: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Or:
    args: tuple

    def __init__(self, *args):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExistsPos:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallPos:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Unbounded:
    """``U X. body``: body holds for arbitrarily large finite sets X."""
    var: str
    body: "Formula"


Formula = Union[LessEq, Label, In, Not, And, Or, Implies,
                ExistsPos, ForallPos, ExistsSet, ForallSet, Unbounded]

ATOMS = (LessEq, Label, In)
POS_QUANTIFIERS = (ExistsPos, ForallPos)
SET_QUANTIFIERS = (ExistsSet, ForallSet, Unbounded)
QUANTIFIERS = POS_QUANTIFIERS + SET_QUANTIFIERS

_KEYWORD = {
    ExistsPos: "exists", ForallPos: "forall",
    ExistsSet: "existsS", ForallSet: "forallS", Unbounded: "U",
}
_QUANT_BY_KEYWORD = {v: k for k, v in _KEYWORD.items()}

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


def is_position_var(name: str) -> bool:
    return bool(_IDENT.match(name)) and name[0].islower()


def is_set_var(name: str) -> bool:
    return bool(_IDENT.match(name)) and name[0].isupper()


def children(f: Formula) -> tuple:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Implies):
        return (f.left, f.right)
    return (f.body,)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk (iterative, so deep formulas are fine)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


# -- printing --------------------------------------------------------------

def render_formula(f: Formula) -> str:
    out: list[str] = []
    _render(f, out)
    return "".join(out)


def _render(f, out):
    if isinstance(f, LessEq):
        out.append(f"(<= {f.x} {f.y})")
    elif isinstance(f, Label):
        out.append(f"(label {f.letter} {f.x})")
    elif isinstance(f, In):
        out.append(f"(in {f.x} {f.X})")
    elif isinstance(f, Not):
        out.append("(not ")
        _render(f.arg, out)
        out.append(")")
    elif isinstance(f, (And, Or)):
        out.append("(and" if isinstance(f, And) else "(or")
        for g in f.args:
            out.append(" ")
            _render(g, out)
        out.append(")")
    elif isinstance(f, Implies):
        out.append("(implies ")
        _render(f.left, out)
        out.append(" ")
        _render(f.right, out)
        out.append(")")
    elif isinstance(f, QUANTIFIERS):
        out.append(f"({_KEYWORD[type(f)]} {f.var} ")
        _render(f.body, out)
        out.append(")")
    else:
        raise TypeError(f"not a formula: {f!r}")


def pretty_formula(f: Formula, width: int = 100) -> str:
    """Indented rendering; parses back to the same formula."""
    lines: list[str] = []

    def go(g, indent):
        flat = render_formula(g)
        if len(flat) + indent <= width or isinstance(g, ATOMS):
            lines.append(" " * indent + flat)
            return
        if isinstance(g, QUANTIFIERS):
            lines.append(" " * indent + f"({_KEYWORD[type(g)]} {g.var}")
        else:
            head = {Not: "not", And: "and", Or: "or", Implies: "implies"}[type(g)]
            lines.append(" " * indent + f"({head}")
        for c in children(g):
            go(c, indent + 2)
        lines[-1] += ")"

    go(f, 0)
    return "\n".join(lines)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if rest.strip():
                raise FormulaSyntaxError("unexpected character", pos)
            break
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    return tokens


def parse_formula(text: str, alphabet: Alphabet, free: Iterable[str] = ()) -> Formula:
    """Parse the parenthesized syntax.

    ``free`` lists variables that may occur unbound; anything else must be
    bound by an enclosing quantifier of the matching sort.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty input", 0)
    parser = _Parser(tokens, alphabet, len(text))
    free = set(free)
    for v in free:
        if not (is_position_var(v) or is_set_var(v)):
            raise FormulaError(f"bad free variable name {v!r}")
    f = parser.formula(frozenset(free))
    if parser.i != len(tokens):
        raise FormulaSyntaxError("trailing input", tokens[parser.i][1])
    return f


class _Parser:
    def __init__(self, tokens, alphabet, end):
        self.tokens = tokens
        self.alphabet = alphabet
        self.end = end
        self.i = 0

    def _next(self, what):
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError(f"unexpected end of input, expected {what}", self.end)
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _expect(self, lit):
        tok, pos = self._next(repr(lit))
        if tok != lit:
            raise FormulaSyntaxError(f"expected {lit!r}, got {tok!r}", pos)

    def _var(self, bound, sort):
        tok, pos = self._next(f"{sort} variable")
        ok = is_position_var(tok) if sort == "position" else is_set_var(tok)
        if not ok:
            raise FormulaSyntaxError(f"expected a {sort} variable, got {tok!r}", pos)
        if bound is not None and tok not in bound:
            raise UnboundVariableError(f"unbound {sort} variable {tok!r} at offset {pos}")
        return tok

    def formula(self, bound):
        self._expect("(")
        head, pos = self._next("operator")
        if head == "<=":
            f = LessEq(self._var(bound, "position"), self._var(bound, "position"))
        elif head == "label":
            tok, lpos = self._next("letter")
            if not tok.isdigit():
                raise FormulaSyntaxError(f"expected a letter, got {tok!r}", lpos)
            letter = int(tok)
            if letter not in self.alphabet:
                raise UnknownLetterError(
                    f"letter {letter} at offset {lpos} is outside alphabet 1..{self.alphabet.n}")
            f = Label(letter, self._var(bound, "position"))
        elif head == "in":
            f = In(self._var(bound, "position"), self._var(bound, "set"))
        elif head == "not":
            f = Not(self.formula(bound))
        elif head in ("and", "or"):
            args = []
            while self._peek() != ")":
                args.append(self.formula(bound))
            f = And(*args) if head == "and" else Or(*args)
        elif head == "implies":
            f = Implies(self.formula(bound), self.formula(bound))
        elif head in _QUANT_BY_KEYWORD:
            cls = _QUANT_BY_KEYWORD[head]
            sort = "position" if cls in POS_QUANTIFIERS else "set"
            var = self._var(None, sort)
            f = cls(var, self.formula(bound | {var}))
        else:
            raise FormulaSyntaxError(f"unknown operator {head!r}", pos)
        self._expect(")")
        return f

    def _peek(self):
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of input", self.end)
        return self.tokens[self.i][0]


# -- static analysis -------------------------------------------------------

@dataclass(frozen=True)
class FormulaStats:
    free_position_vars: frozenset
    free_set_vars: frozenset
    size: int
    quantifier_depth: int


def analyze(f: Formula) -> FormulaStats:
    free_pos: set = set()
    free_set: set = set()
    size = 0
    depth = 0
    # (node, bound variables, quantifier nesting above node)
    stack = [(f, frozenset(), 0)]
    while stack:
        g, bound, qd = stack.pop()
        size += 1
        if isinstance(g, LessEq):
            free_pos.update(v for v in (g.x, g.y) if v not in bound)
        elif isinstance(g, Label):
            if g.x not in bound:
                free_pos.add(g.x)
        elif isinstance(g, In):
            if g.x not in bound:
                free_pos.add(g.x)
            if g.X not in bound:
                free_set.add(g.X)
        elif isinstance(g, QUANTIFIERS):
            depth = max(depth, qd + 1)
            stack.append((g.body, bound | {g.var}, qd + 1))
        else:
            stack.extend((c, bound, qd) for c in children(g))
    return FormulaStats(frozenset(free_pos), frozenset(free_set), size, depth)


def letters_used(f: Formula) -> set:
    return {g.letter for g in subformulas(f) if isinstance(g, Label)}


def is_u_free(f: Formula) -> bool:
    return not any(isinstance(g, Unbounded) for g in subformulas(f))


# -- small constructors used by the formula builders ----------------------

TRUE = And()
FALSE = Or()


def conj(*fs) -> Formula:
    fs = [f for f in fs if f != TRUE]
    return fs[0] if len(fs) == 1 else And(*fs)


def disj(*fs) -> Formula:
    fs = [f for f in fs if f != FALSE]
    return fs[0] if len(fs) == 1 else Or(*fs)


def lt(x: str, y: str) -> Formula:
    return And(LessEq(x, y), Not(LessEq(y, x)))


def eq(x: str, y: str) -> Formula:
    return And(LessEq(x, y), LessEq(y, x))
