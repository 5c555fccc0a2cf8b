"""Parser for weighted-homogeneous equations such as ``x0^2*x1 + 3/2*x1^3``.

Grammar (whitespace allowed between tokens)::

    equation = [sign] term { sign term }
    sign     = "+" | "-"
    term     = coeff [ ["*"] factors ] | factors
    factors  = factor { "*" factor }
    factor   = "x" index [ "^" exponent ]
    coeff    = integer [ "/" integer ]

Variables are ``x0`` ... ``x99``.  Repeated monomials are merged by adding
their coefficients; a term whose merged coefficient is zero is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .delsarte import DelsarteMatrix
from .wps import WeightSystem

MAX_VARIABLES = 100

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^]))")


class EquationSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


@dataclass(frozen=True)
class Equation:
    """Terms in first-appearance order; exponent vectors all have ``nvars`` entries."""

    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]
    nvars: int

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return [e for _, e in self.terms]

    @property
    def coefficients(self) -> list[Fraction]:
        return [c for c, _ in self.terms]

    def is_homogeneous(self, w: WeightSystem) -> bool:
        return len(w.weights) == self.nvars and all(
            w.weighted_degree(e) == w.degree for e in self.exponents)

    def delsarte_matrix(self, rows: int | None = None) -> DelsarteMatrix:
        """Exponent matrix of the first ``rows`` terms (default: all of them)."""
        rows = self.nvars if rows is None else rows
        if rows != self.nvars or len(self.terms) < rows:
            raise ValueError(f"need {self.nvars} terms for a square matrix, "
                             f"have {len(self.terms)}")
        picked = self.terms[:rows]
        return DelsarteMatrix(tuple(e for _, e in picked), tuple(c for c, _ in picked))

    def __str__(self):
        return format_equation(self)


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise EquationSyntaxError(f"unknown token {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_equation(text: str, nvars: int | None = None) -> Equation:
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None, what="token"):
        nonlocal i
        k, v, p = toks[i]
        if (kind is not None and k != kind) or (value is not None and v != value):
            raise EquationSyntaxError(f"expected {what}, found {v or 'end of input'!r}", p)
        i += 1
        return k, v, p

    def factor(exps):
        _, v, p = take("var", what="variable")
        idx = int(v[1:])
        if idx >= MAX_VARIABLES:
            raise EquationSyntaxError(f"variable {v} out of range x0..x{MAX_VARIABLES - 1}", p)
        e = 1
        if peek()[1] == "^":
            take()
            _, ev, _ = take("int", what="exponent")
            e = int(ev)
        exps[idx] = exps.get(idx, 0) + e

    def term(sign):
        coeff = Fraction(sign)
        exps = {}
        k, v, p = peek()
        if k == "int":
            take()
            num = int(v)
            den = 1
            if peek()[1] == "/":
                take()
                _, dv, dp = take("int", what="denominator")
                den = int(dv)
                if den == 0:
                    raise EquationSyntaxError("zero denominator", dp)
            coeff *= Fraction(num, den)
            if peek()[1] == "*":
                take()
                factor(exps)
            elif peek()[0] == "var":
                factor(exps)
            else:
                return coeff, exps
        else:
            factor(exps)
        while peek()[1] == "*":
            take()
            factor(exps)
        return coeff, exps

    raw = []
    sign = 1
    if peek()[1] in "+-" and peek()[0] == "op":
        sign = -1 if take()[1] == "-" else 1
    start = peek()[2]
    raw.append((term(sign), start))
    while peek()[0] != "end":
        k, v, p = peek()
        if v not in ("+", "-"):
            raise EquationSyntaxError(f"expected '+' or '-', found {v!r}", p)
        take()
        raw.append((term(-1 if v == "-" else 1), p))

    width = max((max(e, default=-1) for (_, e), _ in raw), default=-1) + 1
    if nvars is not None:
        if nvars < width:
            raise ValueError(f"equation uses {width} variables, more than {nvars}")
        width = nvars
    merged: dict[tuple[int, ...], Fraction] = {}
    where = {}
    for (c, e), p in raw:
        vec = tuple(e.get(j, 0) for j in range(width))
        merged[vec] = merged.get(vec, Fraction(0)) + c
        where.setdefault(vec, p)
    for vec, c in merged.items():
        if c == 0:
            raise EquationSyntaxError("coefficient is zero after merging terms", where[vec])
    return Equation(tuple((c, vec) for vec, c in merged.items()), width)


def _format_monomial(exps):
    parts = []
    for j, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{j}")
        elif e > 1:
            parts.append(f"x{j}^{e}")
    return "*".join(parts)


def format_equation(eq: Equation) -> str:
    pieces = []
    for n, (c, exps) in enumerate(eq.terms):
        mono = _format_monomial(exps)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if n == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)
