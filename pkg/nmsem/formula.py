"""
Propositional formulas: AST, parser, renderer and evaluation.

Grammar (loosest to tightest binding)::

    formula := imp
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := neg ("&" neg)*
    neg     := "~" neg | atom | "true" | "false" | "(" formula ")"
    atom    := [a-z][A-Za-z0-9_]*

``->`` associates to the right, ``&`` and ``|`` to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from nmsem.errors import FormulaSyntaxError, UnboundAtomError

RESERVED = frozenset({"true", "false"})
ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")

# binding strength used by render
_IMP, _OR, _AND, _NEG, _ATOM = 1, 2, 3, 4, 5


def is_atom_name(name: str) -> bool:
    return bool(ATOM_RE.fullmatch(name)) and name not in RESERVED


class Formula:
    """Base class of the immutable formula tree."""

    __slots__ = ()

    def atoms(self) -> frozenset[str]:
        return frozenset(_iter_atoms(self))

    def evaluate(self, valuation: Mapping[str, bool]) -> bool:
        return evaluate(self, valuation)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not is_atom_name(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


TRUE = Top()
FALSE = Bottom()


def _iter_atoms(f: Formula) -> Iterator[str]:
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            yield node.name
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or, Implies)):
            stack.append(node.left)
            stack.append(node.right)


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; ``true`` when empty."""
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TRUE if result is None else result


def disjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; ``false`` when empty."""
    result = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return FALSE if result is None else result


def as_formula(value: Formula | str) -> Formula:
    if isinstance(value, Formula):
        return value
    if isinstance(value, str):
        return parse(value)
    raise TypeError(f"expected a Formula or a string, got {type(value).__name__}")


# --- evaluation -------------------------------------------------------------

def evaluate(f: Formula, valuation: Mapping[str, bool]) -> bool:
    """
    Classical truth-table evaluation.

    Args:
        f: the formula
        valuation: truth value of every atom occurring in f

    Returns:
        bool: the truth value of f

    Raises:
        UnboundAtomError: an atom of f is missing from the valuation
    """
    if isinstance(f, Atom):
        try:
            return bool(valuation[f.name])
        except KeyError:
            raise UnboundAtomError(f.name) from None
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.child, valuation)
    if isinstance(f, And):
        return evaluate(f.left, valuation) and evaluate(f.right, valuation)
    if isinstance(f, Or):
        return evaluate(f.left, valuation) or evaluate(f.right, valuation)
    if isinstance(f, Implies):
        return (not evaluate(f.left, valuation)) or evaluate(f.right, valuation)
    raise TypeError(f"not a formula: {f!r}")


# --- rendering --------------------------------------------------------------

def _strength(f: Formula) -> int:
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Not):
        return _NEG
    return _ATOM


def _wrap(f: Formula, needs_parens: bool) -> str:
    text = render(f)
    return f"({text})" if needs_parens else text


def render(f: Formula) -> str:
    """Text form with the fewest parentheses that parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return "~" + _wrap(f.child, _strength(f.child) < _NEG)
    if isinstance(f, Implies):
        left = _wrap(f.left, _strength(f.left) <= _IMP)
        right = _wrap(f.right, _strength(f.right) < _IMP)
        return f"{left} -> {right}"
    if isinstance(f, (And, Or)):
        level = _strength(f)
        symbol = "&" if level == _AND else "|"
        left = _wrap(f.left, _strength(f.left) < level)
        right = _wrap(f.right, _strength(f.right) <= level)
        return f"{left} {symbol} {right}"
    raise TypeError(f"not a formula: {f!r}")


# --- parsing ----------------------------------------------------------------

_SPACE_RE = re.compile(r"\s*")
_LEXEME_RE = re.compile(r"->|[()~&|]|[a-z][A-Za-z0-9_]*")

END = "end of input"
ATOM = "atom"


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        pos = _SPACE_RE.match(text, pos).end()
        offset = len(text[:pos].encode("utf-8"))
        if pos >= len(text):
            tokens.append(_Token(END, "", offset))
            return tokens
        match = _LEXEME_RE.match(text, pos)
        if match is None:
            tokens.append(_Token("invalid", text[pos], offset))
            return tokens
        lexeme = match.group()
        if lexeme[0].isalpha():
            kind = lexeme if lexeme in RESERVED else ATOM
        else:
            kind = lexeme
        tokens.append(_Token(kind, lexeme, offset))
        pos = match.end()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.tried: set[str] = set()

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        self.tried = set()
        return token

    def accept(self, kind: str) -> bool:
        if self.current.kind == kind:
            self.advance()
            return True
        self.tried.add(kind)
        return False

    def fail(self, *needed: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(self.text, self.current.offset, self.tried | set(needed))

    def expect(self, kind: str) -> None:
        if not self.accept(kind):
            raise self.fail()

    def parse(self) -> Formula:
        f = self.imp()
        if self.current.kind != END:
            raise self.fail(END)
        return f

    def imp(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.neg()
        while self.accept("&"):
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        token = self.current
        if token.kind == "~":
            self.advance()
            return Not(self.neg())
        if token.kind == ATOM:
            self.advance()
            return Atom(token.text)
        if token.kind == "true":
            self.advance()
            return TRUE
        if token.kind == "false":
            self.advance()
            return FALSE
        if token.kind == "(":
            self.advance()
            f = self.imp()
            self.expect(")")
            return f
        raise self.fail("~", "(", ATOM, "true", "false")


def parse(text: str) -> Formula:
    """
    Parse a formula.

    Args:
        text: formula text in the grammar of this module

    Returns:
        Formula: the unique tree for ``text``

    Raises:
        FormulaSyntaxError: with the byte offset and expected token names
    """
    return _Parser(text).parse()
