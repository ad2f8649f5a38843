"""Polynomial expressions and problem files.

Expression grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

A problem file is line oriented::

    ring x y z
    X: x*y - z^2
    D: z
    Y[3/2]: x*y
    W: x, y, z
    options: m_max=6, e_max=3
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import Polynomial, format_coeff, norm_coeff


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: Sequence[str] = ()):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        self.message = message
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, col {col}: {message}{detail}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.lastindex is None:
            break
        if m.group(1):
            toks.append(_Tok("int", m.group(1), col0 + m.start(1)))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), col0 + m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", line, col0 + m.start(3))
            toks.append(_Tok("op", ch, col0 + m.start(3)))
        else:
            break
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text)))
    return toks


_AFTER_OPERAND = ("'*'", "'+'", "'-'", "'^'", "')'", "end of expression")
_OPERAND_START = ("number", "variable", "'('", "'-'", "'+'")


class _ExprParser:
    def __init__(self, text: str, ring: tuple[str, ...], line: int = 1, col0: int = 1):
        self.ring = ring
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, tok: _Tok, expected: Sequence[str], msg: str | None = None):
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(msg or f"unexpected {what}", self.line, tok.col, expected)

    def parse(self, stop: Sequence[str] = ()) -> Polynomial:
        p = self.expr()
        t = self.peek()
        if t.kind == "end" or (t.kind == "op" and t.text in stop):
            return p
        self.fail(t, _AFTER_OPERAND)

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            p = self.unary()
            return -p if t.text == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        p = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.take()
            if e.kind != "int":
                self.fail(e, ("integer exponent",))
            p = p ** int(e.text)
        t = self.peek()
        if t.kind in ("int", "name") or (t.kind == "op" and t.text == "("):
            self.fail(t, _AFTER_OPERAND, "implicit multiplication is not allowed")
        return p

    def atom(self) -> Polynomial:
        t = self.take()
        if t.kind == "int":
            value = Fraction(int(t.text))
            nt = self.peek()
            if nt.kind == "op" and nt.text == "/":
                self.take()
                d = self.take()
                if d.kind != "int":
                    self.fail(d, ("integer denominator",))
                if int(d.text) == 0:
                    raise ParseError("zero denominator", self.line, d.col)
                value = Fraction(int(t.text), int(d.text))
            return Polynomial.constant(value, self.ring)
        if t.kind == "name":
            if t.text not in self.ring:
                raise ParseError(f"unknown variable {t.text!r}", self.line, t.col, self.ring)
            return Polynomial.var(t.text, self.ring)
        if t.kind == "op" and t.text == "(":
            p = self.expr()
            c = self.take()
            if not (c.kind == "op" and c.text == ")"):
                self.fail(c, ("')'", "'+'", "'-'", "'*'"))
            return p
        self.fail(t, _OPERAND_START)


def parse_polynomial(text: str, ring: Sequence[str], line: int = 1, col0: int = 1) -> Polynomial:
    return _ExprParser(text, tuple(ring), line, col0).parse()


def parse_polynomial_list(text: str, ring: Sequence[str], line: int = 1, col0: int = 1) -> list[Polynomial]:
    """Comma separated polynomials; an empty string gives an empty list."""
    if not text.strip():
        return []
    out = []
    start = 0
    for piece in text.split(","):
        lead = len(piece) - len(piece.lstrip())
        if not piece.strip():
            raise ParseError("empty polynomial in list", line, col0 + start + lead, _OPERAND_START)
        out.append(parse_polynomial(piece, ring, line, col0 + start))
        start += len(piece) + 1
    return out


def parse_rational(text: str) -> Fraction:
    m = re.fullmatch(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational number: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError("zero denominator")
    return Fraction(int(m.group(1)), den)


@dataclass
class ProblemFile:
    ring: tuple[str, ...]
    X: list[Polynomial] = field(default_factory=list)
    D: list[Polynomial] | None = None
    Y: list[tuple[Fraction, list[Polynomial]]] = field(default_factory=list)
    W: list[Polynomial] | None = None
    options: dict[str, object] = field(default_factory=dict)

    def render(self) -> str:
        lines = ["ring " + " ".join(self.ring)]
        lines.append("X: " + ", ".join(str(p) for p in self.X))
        if self.D is not None:
            lines.append("D: " + ", ".join(str(p) for p in self.D))
        for q, gens in self.Y:
            lines.append(f"Y[{format_coeff(norm_coeff(q))}]: " + ", ".join(str(p) for p in gens))
        if self.W is not None:
            lines.append("W: " + ", ".join(str(p) for p in self.W))
        if self.options:
            lines.append("options: " + ", ".join(f"{k}={_render_opt(v)}" for k, v in sorted(self.options.items())))
        return "\n".join(lines) + "\n"


def _render_opt(v) -> str:
    if isinstance(v, Fraction):
        return format_coeff(norm_coeff(v))
    return str(v)


def _parse_option_value(text: str):
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    try:
        return norm_coeff(parse_rational(text))
    except ValueError:
        return text


_BLOCK = re.compile(r"^\s*(X|D|W|options|Y\s*\[([^\]]*)\])\s*:")


def parse_problem(text: str) -> ProblemFile:
    ring = None
    prob = None
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ring is None:
            m = re.match(r"^\s*ring\b(.*)$", line)
            if not m:
                col = len(line) - len(line.lstrip()) + 1
                raise ParseError("first statement must declare the ring", lineno, col, ("'ring'",))
            names = m.group(1).split()
            bad = [v for v in names if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v)]
            if bad:
                raise ParseError(f"invalid variable name {bad[0]!r}", lineno, line.index(bad[0]) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable in ring", lineno, 1)
            if "t" in names:
                raise ParseError("'t' is reserved for the jet parameter", lineno, line.index("t", 4) + 1)
            ring = tuple(names)
            prob = ProblemFile(ring)
            continue
        m = _BLOCK.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected a block header", lineno, col, ("'X:'", "'D:'", "'W:'", "'Y[q]:'", "'options:'"))
        name = m.group(1)
        body = line[m.end():]
        col0 = m.end() + 1
        if name.startswith("Y"):
            try:
                q = parse_rational(m.group(2))
            except ValueError:
                raise ParseError(f"bad coefficient {m.group(2)!r}", lineno, line.index("[") + 2, ("rational number",))
            if q < 0:
                raise ParseError("coefficient must be nonnegative", lineno, line.index("[") + 2)
            prob.Y.append((q, parse_polynomial_list(body, ring, lineno, col0)))
            continue
        if name in seen:
            raise ParseError(f"duplicate block {name!r}", lineno, 1)
        seen.add(name)
        if name == "options":
            for item in body.split(","):
                if not item.strip():
                    continue
                if "=" not in item:
                    raise ParseError(f"option {item.strip()!r} lacks '='", lineno, col0 + body.index(item), ("'='",))
                k, v = item.split("=", 1)
                prob.options[k.strip()] = _parse_option_value(v)
        else:
            polys = parse_polynomial_list(body, ring, lineno, col0)
            setattr(prob, name, polys)
    if ring is None:
        raise ParseError("empty problem file", 1, 1, ("'ring'",))
    return prob
