"""Pratt parser for ODE right-hand sides.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ("^" exponent)?
    exponent:= ["("] ["-" | "+"] INTEGER [")"]
    atom    := INTEGER | IDENT | '(' expr ')'

Identifiers are ``x``, ``u``, ``u'`` / ``p`` and ``u''`` / ``q``.  Values are
built directly as canonical :class:`RationalExpr` objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .poly import JetVar
from .rational import RationalExpr

IDENTIFIERS = {
    "x": JetVar.X,
    "u": JetVar.U,
    "u'": JetVar.P,
    "p": JetVar.P,
    "u''": JetVar.Q,
    "q": JetVar.Q,
}

NONRATIONAL = {
    "exp", "log", "ln", "sqrt", "sin", "cos", "tan", "sinh", "cosh", "tanh",
    "asin", "acos", "atan", "abs", "pi", "e",
}


class ParseError(ValueError):
    """Malformed input; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'ident', 'op', 'end'
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<decimal>\d+\.\d*|\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "decimal":
            raise ParseError(
                f"decimal literal {m.group()!r} is not supported; use a ratio such as 3/2", pos
            )
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))  # type: ignore[arg-type]
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# binding powers
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20}
_PREFIX_BP = 30
_POWER_BP = 40


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.advance()
        if tok.text != text or tok.kind != "op":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.pos)
        return tok

    def parse(self) -> RationalExpr:
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expr(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return value

    def expr(self, min_bp: int) -> RationalExpr:
        left = self.prefix()
        while True:
            tok = self.peek()
            if tok.kind != "op":
                if tok.kind != "end":
                    raise ParseError(f"unexpected {tok.text!r}; missing operator?", tok.pos)
                return left
            if tok.text == "^":
                if _POWER_BP < min_bp:
                    return left
                self.advance()
                left = self.power(left, tok)
                continue
            bp = _INFIX.get(tok.text)
            if bp is None or bp <= min_bp:
                return left
            self.advance()
            right = self.expr(bp)
            if tok.text == "+":
                left = left + right
            elif tok.text == "-":
                left = left - right
            elif tok.text == "*":
                left = left * right
            else:
                if right.is_zero():
                    raise ParseError("division by zero", tok.pos)
                left = left / right

    def prefix(self) -> RationalExpr:
        tok = self.advance()
        if tok.kind == "int":
            return RationalExpr(int(tok.text))
        if tok.kind == "ident":
            return self.identifier(tok)
        if tok.kind == "op" and tok.text == "(":
            value = self.expr(0)
            self.expect(")")
            return value
        if tok.kind == "op" and tok.text in "+-":
            operand = self.expr(_PREFIX_BP)
            return -operand if tok.text == "-" else operand
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)

    def identifier(self, tok: Token) -> RationalExpr:
        name = tok.text
        if name in IDENTIFIERS:
            return RationalExpr.var(IDENTIFIERS[name])
        base = name.rstrip("'")
        if base == "u":
            raise ParseError(f"{name!r}: only u, u' and u'' may appear in the right-hand side", tok.pos)
        if base.lower() in NONRATIONAL:
            raise ParseError(
                f"non-rational function or constant {base!r} is not supported; "
                "the right-hand side must be a rational function of x, u, u', u''",
                tok.pos,
            )
        raise ParseError(f"unknown identifier {name!r}", tok.pos)

    def power(self, base: RationalExpr, caret: Token) -> RationalExpr:
        n = self.exponent()
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "^":
            raise ParseError("exponent must be an integer literal; parenthesise the base", nxt.pos)
        if n < 0 and base.is_zero():
            raise ParseError("division by zero", caret.pos)
        return base**n

    def exponent(self) -> int:
        tok = self.peek()
        paren = tok.kind == "op" and tok.text == "("
        if paren:
            self.advance()
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            sign = -1 if tok.text == "-" else 1
        tok = self.advance()
        if tok.kind != "int":
            raise ParseError("exponent must be an integer literal", tok.pos)
        if paren:
            nxt = self.peek()
            if not (nxt.kind == "op" and nxt.text == ")"):
                raise ParseError("exponent must be an integer literal", nxt.pos)
            self.advance()
        return sign * int(tok.text)


def parse(text: str) -> RationalExpr:
    """Parse ``text`` into a canonical rational expression in (x, u, p, q)."""
    return _Parser(text).parse()


def parse_in(text: str, allowed: Optional[set] = None, what: str = "expression") -> RationalExpr:
    """Parse and check that only the ``allowed`` jet variables occur."""
    value = parse(text)
    if allowed is not None:
        extra = [v.symbol for v in value.variables() if v not in allowed]
        if extra:
            names = ", ".join(sorted(v.symbol for v in allowed))
            raise ParseError(f"{what} may only depend on {names}; found {', '.join(extra)}", 0)
    return value
