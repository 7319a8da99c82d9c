"""Mini-language for state specifications.

Grammar (whitespace insensitive)::

    expr := term ('+' term)*
    term := [number '*'] atom
    atom := 'vacuum' | 'fock(' nat ')' | 'coherent(' cnum ')'
          | 'thermal(' real ')' | 'cat(' cnum ',' ('+'|'-') ')' | '(' expr ')'
    cnum := real [('+'|'-') real 'i']

Hand-written recursive descent so error offsets are exact.  Mixture
weights are normalized to unit sum (with a warning when that changes
them).
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ParseError, StateSpecError
from .fock import (
    DensityMatrix,
    FockOperator,
    FockVector,
    coherent_vector,
    number_state,
    outer,
    thermal_density,
)

_MAX_DEPTH = 8


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Fock:
    n: int


@dataclass(frozen=True)
class Coherent:
    amplitude: complex


@dataclass(frozen=True)
class Thermal:
    nbar: float


@dataclass(frozen=True)
class Cat:
    amplitude: complex
    sign: int  # +1 or -1


@dataclass(frozen=True)
class Mix:
    parts: tuple[tuple[float, "StateExpr"], ...]


StateExpr = Vacuum | Fock | Coherent | Thermal | Cat | Mix


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str) -> ParseError:
        found = self.text[self.pos : self.pos + 12] or "<end of input>"
        return ParseError(self.pos, expected, found)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, lit: str):
        self.skip_ws()
        if not self.text.startswith(lit, self.pos):
            raise self.error(f"'{lit}'")
        self.pos += len(lit)

    def at_number(self) -> bool:
        self.skip_ws()
        c = self.peek()
        return c.isdigit() or c == "."

    def real(self, signed: bool = True) -> tuple[float, int]:
        self.skip_ws()
        start = self.pos
        if signed and self.peek() in "+-":
            self.pos += 1
        digits = False
        while self.peek().isdigit():
            self.pos += 1
            digits = True
        if self.peek() == ".":
            self.pos += 1
            while self.peek().isdigit():
                self.pos += 1
                digits = True
        if not digits:
            self.pos = start
            raise self.error("a number")
        if self.peek() in "eE":
            mark = self.pos
            self.pos += 1
            if self.peek() in "+-":
                self.pos += 1
            if not self.peek().isdigit():
                self.pos = mark  # not an exponent, back off
            else:
                while self.peek().isdigit():
                    self.pos += 1
        return float(self.text[start : self.pos]), start

    def nat(self) -> tuple[int, int]:
        self.skip_ws()
        start = self.pos
        if not self.peek().isdigit():
            raise self.error("a non-negative integer")
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start : self.pos]), start

    def cnum(self) -> complex:
        re, _ = self.real(signed=True)
        save = self.pos
        self.skip_ws()
        if self.peek() in "+-":
            sign = 1.0 if self.peek() == "+" else -1.0
            self.pos += 1
            try:
                im, _ = self.real(signed=False)
            except ParseError:
                self.pos = save
                return complex(re, 0.0)
            self.skip_ws()
            if self.peek() == "i":
                self.pos += 1
                return complex(re, sign * im)
            self.pos = save
            return complex(re, 0.0)
        return complex(re, 0.0)

    def ident(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        while self.peek().isalpha():
            self.pos += 1
        if start == self.pos:
            raise self.error("a state name")
        return self.text[start : self.pos], start

    def atom(self, depth: int) -> StateExpr:
        self.skip_ws()
        if self.peek() == "(":
            if depth + 1 > _MAX_DEPTH:
                raise StateSpecError(f"nesting deeper than {_MAX_DEPTH}", self.pos)
            self.pos += 1
            inner = self.expr(depth + 1)
            self.expect(")")
            return inner
        name, start = self.ident()
        if name == "vacuum":
            return Vacuum()
        if name == "fock":
            self.expect("(")
            n, _ = self.nat()
            self.expect(")")
            return Fock(n)
        if name == "coherent":
            self.expect("(")
            c = self.cnum()
            self.expect(")")
            return Coherent(c)
        if name == "thermal":
            self.expect("(")
            val, off = self.real(signed=True)
            self.expect(")")
            if val < 0:
                raise StateSpecError(f"thermal parameter must be >= 0, got {val}", off)
            return Thermal(val)
        if name == "cat":
            self.expect("(")
            c = self.cnum()
            self.expect(",")
            self.skip_ws()
            if self.peek() not in "+-":
                raise self.error("'+' or '-'")
            sign = 1 if self.peek() == "+" else -1
            self.pos += 1
            self.expect(")")
            return Cat(c, sign)
        self.pos = start
        raise self.error("one of vacuum/fock/coherent/thermal/cat/'('")

    def term(self, depth: int) -> tuple[float | None, StateExpr]:
        self.skip_ws()
        if self.at_number():
            w, off = self.real(signed=False)
            if w <= 0:
                raise StateSpecError(f"weight must be > 0, got {w}", off)
            self.expect("*")
            return w, self.atom(depth)
        return None, self.atom(depth)

    def expr(self, depth: int = 0) -> StateExpr:
        if depth > _MAX_DEPTH:
            raise StateSpecError(f"nesting deeper than {_MAX_DEPTH}", self.pos)
        terms = [self.term(depth)]
        while True:
            self.skip_ws()
            if self.peek() == "+":
                self.pos += 1
                terms.append(self.term(depth))
            else:
                break
        if len(terms) == 1 and terms[0][0] is None:
            return terms[0][1]
        weights = [1.0 if w is None else w for w, _ in terms]
        total = sum(weights)
        if abs(total - 1.0) > 1e-9:
            _warnings.warn(
                f"mixture weights sum to {total:.12g}; rescaling to 1", UserWarning
            )
        return Mix(tuple((w / total, e) for w, (_, e) in zip(weights, terms)))


def parse(text: str) -> StateExpr:
    """Parse a state specification; raises ParseError with exact offsets."""
    p = _Parser(text)
    out = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("end of input or '+'")
    return out


def _fmt_cnum(c: complex) -> str:
    if c.imag == 0.0:
        return repr(c.real)
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def render(expr: StateExpr) -> str:
    """Canonical text for an AST; parse(render(e)) is structurally e."""
    if isinstance(expr, Vacuum):
        return "vacuum"
    if isinstance(expr, Fock):
        return f"fock({expr.n})"
    if isinstance(expr, Coherent):
        return f"coherent({_fmt_cnum(expr.amplitude)})"
    if isinstance(expr, Thermal):
        return f"thermal({expr.nbar!r})"
    if isinstance(expr, Cat):
        return f"cat({_fmt_cnum(expr.amplitude)},{'+' if expr.sign > 0 else '-'})"
    if isinstance(expr, Mix):
        parts = []
        for w, e in expr.parts:
            body = render(e)
            if isinstance(e, Mix):
                body = f"({body})"
            parts.append(f"{w!r}*{body}")
        return " + ".join(parts)
    raise StateSpecError(f"unknown node {expr!r}")


def build_density(expr: StateExpr, dim: int) -> DensityMatrix:
    """Density matrix of a parsed state at the given truncation."""
    if isinstance(expr, Vacuum):
        return DensityMatrix(outer(number_state(0, dim)))
    if isinstance(expr, Fock):
        if expr.n >= dim:
            raise InvalidParameterError(f"fock({expr.n}) does not fit in dim {dim}")
        return DensityMatrix(outer(number_state(expr.n, dim)))
    if isinstance(expr, Coherent):
        v = coherent_vector(expr.amplitude, dim)
        return DensityMatrix(outer(v), tail_mass=v.tail_mass)
    if isinstance(expr, Thermal):
        return thermal_density(expr.nbar, dim)
    if isinstance(expr, Cat):
        c = expr.amplitude
        if c == 0:
            if expr.sign > 0:
                return DensityMatrix(outer(number_state(0, dim)))
            raise StateSpecError("cat(0,-) has zero norm")
        plus = coherent_vector(c, dim)
        minus = coherent_vector(-c, dim)
        psi = plus.amp + expr.sign * minus.amp
        norm_sq = 2.0 + 2.0 * expr.sign * math.exp(-2.0 * abs(c) ** 2)
        mat = np.outer(psi, psi.conj()) / norm_sq
        tail = max(0.0, 1.0 - float(np.trace(mat).real))
        return DensityMatrix(FockOperator(mat), tail_mass=tail)
    if isinstance(expr, Mix):
        mat = np.zeros((dim, dim), dtype=complex)
        tail = 0.0
        for w, e in expr.parts:
            part = build_density(e, dim)
            mat += w * part.mat
            tail += w * part.tail_mass
        return DensityMatrix(FockOperator(mat), tail_mass=tail)
    raise StateSpecError(f"unknown node {expr!r}")


def parse_cnum(text: str) -> complex:
    """Standalone complex-number parser (CLI flags reuse the grammar)."""
    p = _Parser(text)
    c = p.cnum()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("end of input")
    return c
