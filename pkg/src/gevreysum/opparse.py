"""Parser and printer for linear differential operator expressions.

Grammar (whitespace insensitive):

    expr  := term (('+' | '-') term)*
    term  := coeff '*'? 'D' ('^' uint)? | coeff | 'D' ('^' uint)?
    coeff := product of atoms joined by '*', each atom optionally '^' uint
    atom  := number | 'i' | 'z' | '(' polyexpr ')'

`D` is the derivative in z and may only carry nonnegative integer powers;
polynomial arithmetic with '+', '-', '*', '^' and parentheses is allowed in
coefficients.  The printer emits a canonical fully-parenthesised form whose
re-parse reproduces the operator exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import OperatorSyntaxError
from .newton import LinearOperator
from .series import FormalPowerSeries

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]+)"
    r"|(?P<op>[-+*^()]))"
)

Poly = list[complex]


def _poly_trim(p: Poly) -> Poly:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = [0j] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return _poly_trim(out)


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out = [0j] * (len(a) + len(b) - 1)
    for i, va in enumerate(a):
        if va == 0:
            continue
        for j, vb in enumerate(b):
            out[i + j] += va * vb
    return _poly_trim(out)


def _poly_pow(a: Poly, k: int) -> Poly:
    out: Poly = [1 + 0j]
    for _ in range(k):
        out = _poly_mul(out, a)
    return out


@dataclass
class _Token:
    kind: str  # "number" | "name" | "op" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_pos = len(text) - len(stripped)
            raise OperatorSyntaxError(f"unexpected character {text[bad_pos]!r}", bad_pos)
        kind = match.lastgroup or "op"
        tokens.append(_Token(kind, match.group(match.lastgroup), match.start(match.lastgroup)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, symbol: str) -> None:
        if self.cur.kind == "op" and self.cur.text == symbol:
            self.advance()
            return
        raise OperatorSyntaxError(f"expected {symbol!r}", self.cur.pos)

    def fail(self, message: str) -> OperatorSyntaxError:
        return OperatorSyntaxError(message, self.cur.pos)

    # --- coefficient grammar -------------------------------------------

    def parse_uint(self) -> int:
        if self.cur.kind == "op" and self.cur.text == "-":
            raise self.fail("negative power not allowed")
        if self.cur.kind != "number" or not self.cur.text.isdigit():
            raise self.fail("expected a nonnegative integer power")
        return int(self.advance().text)

    def parse_atom(self) -> Poly:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return [complex(float(tok.text))]
        if tok.kind == "name":
            if tok.text == "z":
                self.advance()
                return [0j, 1 + 0j]
            if tok.text == "i":
                self.advance()
                return [1j]
            if tok.text == "D":
                raise self.fail("D not allowed inside a coefficient")
            raise self.fail(f"unknown symbol {tok.text!r}")
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            poly = self.parse_polyexpr()
            self.expect_op(")")
            return poly
        raise self.fail("expected a number, 'z', 'i' or '('")

    def parse_atom_pow(self) -> Poly:
        atom = self.parse_atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            return _poly_pow(atom, self.parse_uint())
        return atom

    def parse_product(self) -> Poly:
        poly = self.parse_atom_pow()
        while self.cur.kind == "op" and self.cur.text == "*":
            if self.tokens[self.idx + 1].kind == "name" and self.tokens[self.idx + 1].text == "D":
                break  # the '*' belongs to the D factor of the term
            self.advance()
            poly = _poly_mul(poly, self.parse_atom_pow())
        return poly

    def parse_polyexpr(self) -> Poly:
        sign = 1 + 0j
        if self.cur.kind == "op" and self.cur.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        poly = _poly_mul([sign], self.parse_product())
        while self.cur.kind == "op" and self.cur.text in "+-":
            neg = self.advance().text == "-"
            rhs = self.parse_product()
            poly = _poly_add(poly, _poly_mul([-1 if neg else 1 + 0j], rhs))
        return poly

    # --- operator grammar ----------------------------------------------

    def parse_term(self) -> tuple[Poly, int]:
        if self.cur.kind == "name" and self.cur.text == "D":
            return [1 + 0j], self.parse_d_power()
        poly = self.parse_product()
        if self.cur.kind == "op" and self.cur.text == "*":
            self.advance()
            if not (self.cur.kind == "name" and self.cur.text == "D"):
                raise self.fail("expected 'D' after '*'")
        if self.cur.kind == "name" and self.cur.text == "D":
            return poly, self.parse_d_power()
        return poly, 0

    def parse_d_power(self) -> int:
        self.advance()  # consume D
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            if self.cur.kind == "op" and self.cur.text == "-":
                raise self.fail("negative D power not allowed")
            return self.parse_uint()
        return 1

    def parse_operator_expr(self) -> dict[int, Poly]:
        terms: dict[int, Poly] = {}
        sign = 1 + 0j
        if self.cur.kind == "op" and self.cur.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        poly, power = self.parse_term()
        terms[power] = _poly_mul([sign], poly)
        while self.cur.kind == "op" and self.cur.text in "+-":
            neg = self.advance().text == "-"
            poly, power = self.parse_term()
            signed = _poly_mul([-1 if neg else 1 + 0j], poly)
            terms[power] = _poly_add(terms.get(power, [0j]), signed)
        if self.cur.kind != "end":
            raise self.fail(f"unexpected token {self.cur.text!r}")
        return terms


def parse_operator(text: str) -> LinearOperator:
    """Parse an operator expression into a LinearOperator."""
    if not text.strip():
        raise OperatorSyntaxError("empty input", 0)
    parser = _Parser(text)
    terms = parser.parse_operator_expr()
    coeffs: dict[int, FormalPowerSeries] = {}
    for power, poly in terms.items():
        poly = _poly_trim(list(poly))
        if len(poly) == 1 and poly[0] == 0:
            continue
        coeffs[power] = FormalPowerSeries(tuple(poly))
    if not coeffs:
        raise OperatorSyntaxError("operator is identically zero", 0)
    order = max(coeffs)
    if order < 1:
        raise OperatorSyntaxError("operator must contain D", 0)
    return LinearOperator.from_dict(order, coeffs)


@dataclass(frozen=True)
class OperatorExpression:
    """Source text together with its parsed operator."""

    source: str
    operator: LinearOperator

    @classmethod
    def parse(cls, text: str) -> "OperatorExpression":
        return cls(source=text, operator=parse_operator(text))


def _format_float(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _format_complex(c: complex) -> str:
    sign = "-" if c.imag < 0 else "+"
    return f"({_format_float(c.real)}{sign}{_format_float(abs(c.imag))}*i)"


def _format_poly(series: FormalPowerSeries) -> str:
    parts = []
    for k, c in enumerate(series.coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(_format_complex(c))
        elif k == 1:
            parts.append(f"{_format_complex(c)}*z")
        else:
            parts.append(f"{_format_complex(c)}*z^{k}")
    if not parts:
        parts = [_format_complex(0j)]
    return "(" + " + ".join(parts) + ")"


def operator_to_text(op: LinearOperator) -> str:
    """Canonical printable form; re-parsing reproduces the operator."""
    terms = []
    for j in sorted((j for j, _ in op.coeffs), reverse=True):
        c = op.coeff(j)
        assert c is not None
        poly = _format_poly(c)
        if j == 0:
            terms.append(poly)
        elif j == 1:
            terms.append(f"{poly}*D")
        else:
            terms.append(f"{poly}*D^{j}")
    return " + ".join(terms)
