"""Functorial transports of groupoid arrows on the fiber Lie algebra.

A representation assigns to each arrow an invertible linear map on the
fiber of k x k matrices.  Maps are stored concretely as k^2 x k^2 matrices
acting on the row-major vectorization of a fiber matrix, so composition is
matrix multiplication and inversion is exact.

The shipped kinds:

  * ``trivial`` -- every arrow acts as the identity;
  * ``adjoint`` -- a bundle arrow (x, g) acts by X -> g X g^-1;
  * ``gauge``   -- a pair arrow x -> y acts by X -> T(y) T(x)^-1 X for a
    polynomial frame field T invertible at every base point.

All three are groupoid functors, so identity arrows act as the identity and
composites act as composites; the harness re-verifies both facts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .groupoid import (
    BUNDLE,
    PAIR,
    Arrow,
    GroupArrow,
    Microcube,
    PairArrow,
    Point,
    axis,
    star,
)
from .poly import Polynomial, PolyMatrix, eval_poly_matrix, random_polynomial
from .weil import GeneratorContext, WeilMatrix

KINDS = ("trivial", "adjoint", "gauge")


@dataclass(frozen=True)
class Representation:
    """A named transport rule plus the data it needs."""

    kind: str
    fiber_dim: int
    gauge_field: PolyMatrix | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown representation kind {self.kind!r}")
        if self.kind == "gauge" and self.gauge_field is None:
            raise ValueError("gauge representation needs a frame field")

    @property
    def groupoid(self) -> str | None:
        """The groupoid kind this transport is restricted to, if any."""
        if self.kind == "adjoint":
            return BUNDLE
        if self.kind == "gauge":
            return PAIR
        return None


def transport(rep: Representation, arrow: Arrow) -> WeilMatrix:
    """The fiber-linear map of an arrow, as a k^2 x k^2 matrix.

    The constant term is always invertible, so the inverse transports the
    operators need are defined.
    """
    k = rep.fiber_dim
    if rep.kind == "trivial":
        return WeilMatrix.identity(arrow.ctx, k * k)
    if rep.kind == "adjoint":
        if not isinstance(arrow, GroupArrow):
            raise ValueError("adjoint transport needs bundle arrows")
        g = arrow.element
        if g.size != k:
            raise ValueError("arrow fiber size does not match the representation")
        return _conjugation_operator(g, g.inverse())
    if not isinstance(arrow, PairArrow):
        raise ValueError("gauge transport needs pair-groupoid arrows")
    t_target = eval_poly_matrix(rep.gauge_field, arrow.target)
    t_source = eval_poly_matrix(rep.gauge_field, arrow.source)
    return _left_mult_operator(t_target @ t_source.inverse())


def _left_mult_operator(m: WeilMatrix) -> WeilMatrix:
    """Operator of X -> M X on row-major vectorized fiber matrices."""
    k = m.size
    ctx = m.ctx
    zero = ctx.zero()
    rows = []
    for a in range(k):
        for b in range(k):
            row = [zero] * (k * k)
            for c in range(k):
                row[c * k + b] = m[a, c]
            rows.append(row)
    return WeilMatrix(rows)


def _conjugation_operator(g: WeilMatrix, ginv: WeilMatrix) -> WeilMatrix:
    """Operator of X -> g X g^-1 on row-major vectorized fiber matrices."""
    k = g.size
    rows = []
    for a in range(k):
        for b in range(k):
            row = []
            for c in range(k):
                for d in range(k):
                    row.append(g[a, c] * ginv[d, b])
            rows.append(row)
    return WeilMatrix(rows)


def apply_fiber_map(op: WeilMatrix, value: WeilMatrix) -> WeilMatrix:
    """Apply a vectorized-fiber operator to a k x k fiber matrix."""
    k = value.size
    if op.size != k * k:
        raise ValueError("operator size does not match fiber size")
    return WeilMatrix.unvec(op.apply(value.vec()), k)


def transport_axis(rep: Representation, cube: Microcube, i: int, at) -> WeilMatrix:
    """Transport of the axis-``i`` arrow evaluated at ``at``."""
    return transport(rep, axis(cube, i).evaluate([at]))


def check_star_homomorphism(
    rep: Representation,
    zeta: Callable,
    t: Microcube,
) -> tuple[bool, dict | None]:
    """Exact check that transport turns star composites into star composites.

    Evaluates both sides at fresh generators: the transport of the composed
    square against the composite of the transports of its two factors.
    Returns (ok, witness); the witness renders both sides as strings.
    """
    ctx = t.ctx
    composed = star(zeta, t)
    d1, d2 = ctx.fresh(), ctx.fresh()
    lhs = transport(rep, composed.evaluate([d1, d2]))
    rhs = transport(rep, zeta(d1).evaluate([d2])) @ transport(rep, t.evaluate([d1]))
    if lhs == rhs:
        return True, None
    return False, {"lhs": repr(lhs), "rhs": repr(rhs)}


def random_representation(
    rng: random.Random,
    kind: str,
    fiber_dim: int,
    base_dim: int,
    bound: int = 2,
) -> Representation:
    """Random instance of a shipped kind; gauge frames are unipotent
    products, hence invertible at every rational point."""
    if kind != "gauge":
        return Representation(kind, fiber_dim)
    k = fiber_dim
    one = Polynomial.constant(base_dim, 1)
    zero = Polynomial.constant(base_dim, 0)
    lower = [[one if i == j else zero for j in range(k)] for i in range(k)]
    upper = [[one if i == j else zero for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            if i > j:
                lower[i][j] = random_polynomial(rng, base_dim, 2, bound)
            elif i < j:
                upper[i][j] = random_polynomial(rng, base_dim, 2, bound)
    field = []
    for i in range(k):
        row = []
        for j in range(k):
            entry = Polynomial.constant(base_dim, 0)
            for l in range(k):
                entry = entry + lower[i][l] * upper[l][j]
            row.append(entry)
        field.append(tuple(row))
    return Representation("gauge", fiber_dim, tuple(field))
