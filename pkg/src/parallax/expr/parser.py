"""Recursive-descent parser and printer for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := rational | name | '(' expr ')' | '-' factor

The printer emits text that parses back to the same value on the same chart.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import DivisionByZeroPolynomial, ExprSyntaxError, UnknownSymbol

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()])|(?P<bad>\S))")

_BASE_START = ("integer", "name", "'('", "'-'")


def tokenize(source: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(source, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastgroup)
        if m.lastgroup == "bad":
            raise ExprSyntaxError(f"unexpected character {m.group('bad')!r} at {start}",
                                  start, _BASE_START)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, chart):
        self.src = source
        self.chart = chart
        self.toks = tokenize(source)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def is_op(self, *ops):
        kind, text, _ = self.peek()
        return kind == "op" and text in ops

    def fail(self, expected):
        kind, text, pos = self.peek()
        got = "end of input" if kind == "eof" else repr(text)
        raise ExprSyntaxError(f"unexpected {got} at position {pos}; expected {' or '.join(expected)}",
                              pos, expected)

    def parse(self):
        value = self.expr()
        if self.peek()[0] != "eof":
            self.fail(("operator", "end of input"))
        return value

    def expr(self):
        value = self.term()
        while self.is_op("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.is_op("*", "/"):
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero:
                    raise DivisionByZeroPolynomial(f"division by zero at position {pos}", position=pos)
                value = value / rhs
        return value

    def factor(self):
        value = self.base()
        if self.is_op("^"):
            _, _, pos = self.take()
            sign = 1
            if self.is_op("-"):
                self.take()
                sign = -1
            kind, text, _ = self.peek()
            if kind != "int":
                self.fail(("integer exponent",))
            self.take()
            n = sign * int(text)
            if n < 0 and value.is_zero:
                raise DivisionByZeroPolynomial(f"negative power of zero at position {pos}", position=pos)
            value = value ** n
        return value

    def base(self):
        kind, text, pos = self.peek()
        if kind == "int":
            self.take()
            return self.chart.const(int(text))
        if kind == "name":
            self.take()
            try:
                return self.chart.symbol(text)
            except UnknownSymbol:
                raise UnknownSymbol(f"unknown symbol {text!r} at position {pos}", name=text,
                                    position=pos, known=list(self.chart.symbols)) from None
        if kind == "op" and text == "(":
            self.take()
            value = self.expr()
            if not self.is_op(")"):
                self.fail(("')'",))
            self.take()
            return value
        if kind == "op" and text == "-":
            self.take()
            return -self.factor()
        self.fail(_BASE_START)


def parse_expr(source: str, chart=None, field=None, tower=None):
    """Parse ``source`` into a reduced :class:`RatExpr`.

    ``chart`` may be a :class:`Chart` or a sequence of variable names; in the
    latter case ``field`` (parameter names or a ConstField) and ``tower`` are
    used to build it.
    """
    from .core import Chart

    if not isinstance(chart, Chart):
        if tower is not None:
            chart = tower.chart
        else:
            chart = Chart(tuple(chart or ()), field)
    if not isinstance(source, str):
        raise TypeError("expression source must be text")
    return _Parser(source, chart).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _coef_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial_text(mon, symbols) -> str:
    parts = []
    for s, e in zip(symbols, mon):
        if e == 1:
            parts.append(s)
        elif e:
            parts.append(f"{s}^{e}")
    return "*".join(parts)


def _terms_text(items, symbols) -> str:
    if not items:
        return "0"
    out = []
    for k, (mon, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        mono = _monomial_text(mon, symbols)
        if not mono:
            body = _coef_text(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_coef_text(a)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_text(p) -> str:
    return _terms_text(p.items(), p.chart.symbols)


def to_text(f) -> str:
    """Canonical grammar text of a RatExpr (terms in decreasing graded-lex order)."""
    syms = f.chart.symbols
    num = f.numerator.items()
    den = f.denominator.items()
    ntxt = _terms_text(num, syms)
    if len(den) == 1 and not any(den[0][0]):
        return ntxt
    if len(num) > 1:
        ntxt = f"({ntxt})"
    dtxt = _terms_text(den, syms)
    simple = len(den) == 1 and den[0][1] == 1 and sum(1 for e in den[0][0] if e) == 1
    if not simple:
        dtxt = f"({dtxt})"
    return f"{ntxt}/{dtxt}"
