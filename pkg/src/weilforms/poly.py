"""Exact multivariate polynomials used as coefficient fields on the base.

These evaluate at rational points and at nilpotent-perturbed points alike,
so the same coefficient field serves both plain evaluation and the
infinitesimal expansions the operators need.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Sequence, Union

from .weil import WeilElement, WeilMatrix


class Polynomial:
    """Polynomial over the rationals in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero coefficients; the zero
    polynomial has no terms.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction]):
        self.nvars = nvars
        self.terms = terms

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        q = Fraction(value)
        return cls(nvars, {(0,) * nvars: q} if q else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        """The coordinate function with the given 0-based index."""
        if not 0 <= index < nvars:
            raise ValueError("variable index out of range")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            if acc is None:
                out[e] = c
            else:
                acc = acc + c
                if acc:
                    out[e] = acc
                else:
                    del out[e]
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: Union["Polynomial", int, Fraction]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return Polynomial(self.nvars, {})
            return Polynomial(self.nvars, {e: c * q for e, c in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(e)
                if acc is None:
                    out[e] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        out[e] = acc
                    else:
                        del out[e]
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def partial(self, index: int) -> "Polynomial":
        """Exact partial derivative in the 0-based variable ``index``."""
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1:]
                out[ne] = out.get(ne, Fraction(0)) + c * k
        return Polynomial(self.nvars, {e: c for e, c in out.items() if c})

    def __call__(self, point: Sequence):
        """Evaluate at a point of rationals or Weil elements."""
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        total = None
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * (x ** k if k > 1 else x)
            total = term if total is None else total + term
        if total is not None:
            return total
        if point and isinstance(point[0], WeilElement):
            return point[0].ctx.zero()
        return Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"

    def to_string(self) -> str:
        """Render in the same grammar `parse_polynomial` accepts."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[e]
            factors = [
                f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}"
                for i, k in enumerate(e)
                if k
            ]
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = "*".join([str(c)] + factors)
            parts.append(body)
        text = parts[0]
        for body in parts[1:]:
            text += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return text

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<op>[\^*+-]))")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse ``"1/2*x1^2*x2 - x3 + 4"`` style polynomial strings.

    Grammar: a signed sum of terms; each term is a '*'-separated product of
    rationals and powers ``xJ^K`` with 1-based variable numbers.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad polynomial syntax near {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("var"):
            index = int(m.group("var")[1:])
            if not 1 <= index <= nvars:
                raise ValueError(f"variable x{index} out of range (have {nvars})")
            tokens.append(("var", index - 1))
        else:
            tokens.append(("op", m.group("op")))

    total = Polynomial(nvars, {})
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ValueError("dangling sign in polynomial")
        term = Polynomial.constant(nvars, sign)
        expect_factor = True
        while i < len(tokens):
            kind, value = tokens[i]
            if kind == "op" and value == "*":
                i += 1
                expect_factor = True
                continue
            if kind == "op":
                break  # +/- starts the next term
            if not expect_factor:
                raise ValueError("missing operator between factors")
            if kind == "num":
                term = term * value
                i += 1
            else:
                exp = 1
                i += 1
                if i + 1 < len(tokens) and tokens[i] == ("op", "^"):
                    if tokens[i + 1][0] != "num" or tokens[i + 1][1].denominator != 1:
                        raise ValueError("exponent must be a nonnegative integer")
                    exp = int(tokens[i + 1][1])
                    i += 2
                base = Polynomial.variable(nvars, value)
                powered = Polynomial.constant(nvars, 1)
                for _ in range(exp):
                    powered = powered * base
                term = term * powered
            expect_factor = False
        if expect_factor:
            raise ValueError("empty term in polynomial")
        total = total + term
    return total


PolyMatrix = tuple[tuple[Polynomial, ...], ...]


def eval_poly_matrix(field: PolyMatrix, point: Sequence[WeilElement]) -> WeilMatrix:
    """Evaluate a matrix of polynomials at a (possibly infinitesimal) point."""
    ctx = point[0].ctx
    return WeilMatrix([[ctx.const(0) + p(point) for p in row] for row in field])


def poly_matrix_from_scalars(nvars: int, rows) -> PolyMatrix:
    return tuple(tuple(Polynomial.constant(nvars, v) for v in row) for row in rows)


def random_polynomial(
    rng: random.Random, nvars: int, max_degree: int, bound: int, max_terms: int = 3
) -> Polynomial:
    """Sparse random polynomial with integer coefficients within ``bound``."""
    out = Polynomial(nvars, {})
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(nvars)] += 1
        coeff = rng.randint(-bound, bound)
        out = out + Polynomial(nvars, {tuple(exps): Fraction(coeff)} if coeff else {})
    return out
