"""Microcubes over two concrete groupoids, tangent vectors, and the bracket.

Two groupoid models are provided over a rational affine base of dimension m:

  * ``pair``   -- one arrow per ordered pair of points; an n-cube is a
    target table over the slot monomials with constant source;
  * ``bundle`` -- a trivial bundle of matrix groups, seen as a groupoid
    whose source and target agree; an n-cube is a matrix table with
    identity block at the origin.

Global convention: juxtaposition ``g * h`` of arrows means "h first, then
g" (function-composition order).  This is the order that keeps the source
of shifted faces and star composites constant, and it is used consistently
by every operator downstream.

A cube of arity n is stored as exactly 2^n coefficient blocks indexed by
subsets of its slots (slot j corresponds to bit j-1), which makes equality
of cubes decidable as table equality.  Blocks may carry ambient generators
from the shared context; such cubes are called parametrized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .weil import (
    GeneratorContext,
    WeilElement,
    WeilMatrix,
    monomial,
)

PAIR = "pair"
BUNDLE = "bundle"
KINDS = (PAIR, BUNDLE)

Point = tuple[WeilElement, ...]


@dataclass(frozen=True)
class PairArrow:
    """Arrow of the pair groupoid: an ordered (source, target) of points."""

    source: Point
    target: Point

    @property
    def ctx(self) -> GeneratorContext:
        return self.source[0].ctx


@dataclass(frozen=True)
class GroupArrow:
    """Arrow of the group bundle: a base point plus a fiber group element."""

    base: Point
    element: WeilMatrix

    @property
    def ctx(self) -> GeneratorContext:
        return self.element.ctx


Arrow = Union[PairArrow, GroupArrow]


def compose(g: Arrow, h: Arrow) -> Arrow:
    """Composite arrow "h first, then g"."""
    if isinstance(g, PairArrow) and isinstance(h, PairArrow):
        if g.source != h.target:
            raise ValueError("arrows are not composable: source/target mismatch")
        return PairArrow(h.source, g.target)
    if isinstance(g, GroupArrow) and isinstance(h, GroupArrow):
        if g.base != h.base:
            raise ValueError("arrows are not composable: base mismatch")
        return GroupArrow(g.base, g.element @ h.element)
    raise TypeError("cannot compose arrows of different groupoids")


def invert_arrow(arrow: Arrow) -> Arrow:
    if isinstance(arrow, PairArrow):
        return PairArrow(arrow.target, arrow.source)
    return GroupArrow(arrow.base, arrow.element.inverse())


def identity_arrow(kind: str, base: Point, fiber_dim: int | None = None) -> Arrow:
    if kind == PAIR:
        return PairArrow(base, base)
    return GroupArrow(base, WeilMatrix.identity(base[0].ctx, fiber_dim))


def _point_add_scaled(p: Point, q: Point, s: WeilElement) -> Point:
    return tuple(a + b * s for a, b in zip(p, q))


def _insert_bit(mask: int, pos: int) -> int:
    low = mask & ((1 << pos) - 1)
    return low | ((mask >> pos) << (pos + 1))


def _drop_bit(mask: int, pos: int) -> int:
    low = mask & ((1 << pos) - 1)
    return low | ((mask >> (pos + 1)) << pos)


class Microcube:
    """Coefficient table of a map from an n-fold infinitesimal cube into a
    groupoid, with constant source and identity value at the origin."""

    __slots__ = ("ctx", "kind", "arity", "base_dim", "fiber_dim", "base", "table")

    def __init__(
        self,
        kind: str,
        arity: int,
        base: Point,
        table: dict,
        fiber_dim: int | None = None,
    ):
        if kind not in KINDS:
            raise ValueError(f"unknown groupoid kind {kind!r}")
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        if not base:
            raise ValueError("base point must have positive dimension")
        self.ctx = base[0].ctx
        self.kind = kind
        self.arity = arity
        self.base_dim = len(base)
        self.base = tuple(base)
        full = 1 << arity
        if set(table) != set(range(full)):
            raise ValueError("table must have one block per slot subset")
        self.table = dict(table)
        if kind == PAIR:
            self.fiber_dim = fiber_dim
            for mask, block in self.table.items():
                if len(block) != self.base_dim:
                    raise ValueError("pair block dimension mismatch")
            if self.table[0] != self.base:
                raise ValueError("cube must evaluate to the identity arrow at the origin")
        else:
            first = self.table[0]
            if not isinstance(first, WeilMatrix):
                raise TypeError("bundle blocks must be matrices")
            self.fiber_dim = first.size
            if fiber_dim is not None and fiber_dim != self.fiber_dim:
                raise ValueError("fiber dimension mismatch")
            for block in self.table.values():
                if block.size != self.fiber_dim:
                    raise ValueError("bundle block size mismatch")
            if first != WeilMatrix.identity(self.ctx, self.fiber_dim):
                raise ValueError("cube must evaluate to the identity arrow at the origin")

    # -- evaluation -------------------------------------------------------

    def evaluate(self, args: Sequence) -> Arrow:
        """Evaluate at square-zero elements, one per slot."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        coerced = []
        for a in args:
            if isinstance(a, (int, Fraction)):
                a = self.ctx.const(a)
            if a.ctx is not self.ctx:
                raise ValueError("argument from a different generator context")
            if not (a * a).is_zero:
                raise ValueError("arguments must square to zero")
            coerced.append(a)
        prods = {0: self.ctx.one()}
        for j, a in enumerate(coerced):
            bit = 1 << j
            for mask in list(prods):
                prods[mask | bit] = prods[mask] * a
        if self.kind == PAIR:
            target = tuple(self.ctx.zero() for _ in range(self.base_dim))
            for mask, block in self.table.items():
                s = prods[mask]
                if s:
                    target = _point_add_scaled(target, block, s)
            return PairArrow(self.base, target)
        element = WeilMatrix.zeros(self.ctx, self.fiber_dim)
        for mask, block in self.table.items():
            s = prods[mask]
            if s:
                element = element + block.scale(s)
        return GroupArrow(self.base, element)

    def __call__(self, *args) -> Arrow:
        return self.evaluate(list(args))

    # -- queries ---------------------------------------------------------

    @property
    def is_parametrized(self) -> bool:
        """True when any block or base entry carries an ambient generator."""
        if any(not e.is_constant for e in self.base):
            return True
        for block in self.table.values():
            if self.kind == PAIR:
                if any(not e.is_constant for e in block):
                    return True
            elif not block.is_constant:
                return True
        return False

    def direction(self, i: int) -> list[WeilElement]:
        """First-order coefficient data of slot ``i`` as a flat vector."""
        self._check_slot(i)
        block = self.table[1 << (i - 1)]
        if self.kind == PAIR:
            return list(block)
        return block.vec()

    def _check_slot(self, i: int, upper: int | None = None) -> None:
        if not 1 <= i <= (upper if upper is not None else self.arity):
            raise ValueError(f"slot {i} out of range")

    def __eq__(self, other):
        if not isinstance(other, Microcube):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.arity == other.arity
            and self.base == other.base
            and self.table == other.table
        )

    __hash__ = None

    def __repr__(self):
        return f"Microcube(kind={self.kind!r}, arity={self.arity}, base_dim={self.base_dim})"


def face(cube: Microcube, i: int) -> Microcube:
    """Zero out slot ``i``: the cube restricted to the opposite face."""
    cube._check_slot(i)
    pos = i - 1
    bit = 1 << pos
    table = {
        _drop_bit(mask, pos): block
        for mask, block in cube.table.items()
        if not mask & bit
    }
    return Microcube(cube.kind, cube.arity - 1, cube.base, table, cube.fiber_dim)


def degeneracy(cube: Microcube, i: int) -> Microcube:
    """Insert a slot at position ``i`` that the cube ignores."""
    cube._check_slot(i, cube.arity + 1)
    pos = i - 1
    zero_block = _zero_block(cube)
    table = {}
    for mask, block in cube.table.items():
        table[_insert_bit(mask, pos)] = block
    full = 1 << (cube.arity + 1)
    for mask in range(full):
        table.setdefault(mask, zero_block)
    return Microcube(cube.kind, cube.arity + 1, cube.base, table, cube.fiber_dim)


def axis(cube: Microcube, i: int) -> Microcube:
    """The one-dimensional cube along slot ``i`` through the origin."""
    cube._check_slot(i)
    bit = 1 << (i - 1)
    table = {0: cube.table[0], 1: cube.table[bit]}
    return Microcube(cube.kind, 1, cube.base, table, cube.fiber_dim)


def _zero_block(cube: Microcube):
    if cube.kind == PAIR:
        return tuple(cube.ctx.zero() for _ in range(cube.base_dim))
    return WeilMatrix.zeros(cube.ctx, cube.fiber_dim)


def shifted_face(cube: Microcube, i: int, shift) -> Microcube:
    """Face at slot ``i`` displaced to the square-zero element ``shift``.

    The result fixes slot ``i`` at ``shift`` and recenters by composing with
    the inverse of the axis arrow there, so it is again a cube: constant
    source, identity at the origin.  ``shift`` may carry ambient generators,
    in which case the result is a parametrized cube.
    """
    cube._check_slot(i)
    if isinstance(shift, (int, Fraction)):
        shift = cube.ctx.const(shift)
    if shift.ctx is not cube.ctx:
        raise ValueError("shift from a different generator context")
    if not (shift * shift).is_zero:
        raise ValueError("shift must square to zero")
    pos = i - 1
    bit = 1 << pos
    n = cube.arity - 1
    if cube.kind == PAIR:
        table = {}
        for sub in range(1 << n):
            lift = _insert_bit(sub, pos)
            table[sub] = _point_add_scaled(cube.table[lift], cube.table[lift | bit], shift)
        return Microcube(PAIR, n, table[0], table, cube.fiber_dim)
    axis_inv = (cube.table[0] + cube.table[bit].scale(shift)).inverse()
    table = {}
    for sub in range(1 << n):
        lift = _insert_bit(sub, pos)
        table[sub] = (cube.table[lift] + cube.table[lift | bit].scale(shift)) @ axis_inv
    return Microcube(BUNDLE, n, cube.base, table, cube.fiber_dim)


def scale_axis(cube: Microcube, i: int, a) -> Microcube:
    """Rescale slot ``i`` by a scalar: evaluation reads ``a * d_i`` there."""
    cube._check_slot(i)
    bit = 1 << (i - 1)
    table = {}
    for mask, block in cube.table.items():
        if mask & bit:
            if cube.kind == PAIR:
                table[mask] = tuple(e * a for e in block)
            else:
                table[mask] = block.scale(a)
        else:
            table[mask] = block
    return Microcube(cube.kind, cube.arity, cube.base, table, cube.fiber_dim)


def permute_slots(cube: Microcube, sigma: Sequence[int]) -> Microcube:
    """Precompose with the coordinate permutation: slot ``j`` reads the
    argument of slot ``sigma[j-1]``."""
    n = cube.arity
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("sigma must be a permutation of the slots")
    table = {}
    for mask, block in cube.table.items():
        m2 = 0
        for j in range(n):
            if mask & (1 << j):
                m2 |= 1 << (sigma[j] - 1)
        table[m2] = block
    return Microcube(cube.kind, n, cube.base, table, cube.fiber_dim)


def permutation_sign(sigma: Sequence[int]) -> int:
    sign = 1
    for a in range(len(sigma)):
        for b in range(a + 1, len(sigma)):
            if sigma[a] > sigma[b]:
                sign = -sign
    return sign


def microcube_from_generic(
    kind: str,
    gens: Sequence[WeilElement],
    arrow: Arrow,
    fiber_dim: int | None = None,
) -> Microcube:
    """Rebuild a cube's table from one evaluation at fresh generators.

    ``arrow`` must be the value of a would-be cube at ``gens``; the table is
    recovered by reading the coefficient of every sub-product of the
    generators.  Raises if the source moves or the origin value is not an
    identity arrow.
    """
    mask = monomial(gens)
    bit_of = {}
    for j, g in enumerate(gens):
        bit_of[1 << g.generator_index] = j
    n = len(gens)

    def slot_mask(sub: int) -> int:
        out = 0
        while sub:
            b = sub & -sub
            out |= 1 << bit_of[b]
            sub ^= b
        return out

    if kind == PAIR:
        if not isinstance(arrow, PairArrow):
            raise TypeError("pair cube from a non-pair arrow")
        for e in arrow.source:
            if e.support_mask() & mask:
                raise ValueError("source is not constant in the cube arguments")
        m = len(arrow.target)
        ctx = arrow.ctx
        columns = [e.decompose(mask) for e in arrow.target]
        table = {}
        for gsub in _submasks(mask):
            block = tuple(
                columns[c].get(gsub, ctx.zero()) for c in range(m)
            )
            table[slot_mask(gsub)] = block
        full = 1 << n
        zero = tuple(ctx.zero() for _ in range(m))
        for s in range(full):
            table.setdefault(s, zero)
        return Microcube(PAIR, n, table[0], table, fiber_dim)

    if not isinstance(arrow, GroupArrow):
        raise TypeError("bundle cube from a non-bundle arrow")
    for e in arrow.base:
        if e.support_mask() & mask:
            raise ValueError("base is not constant in the cube arguments")
    ctx = arrow.ctx
    k = arrow.element.size
    entry_parts = [[e.decompose(mask) for e in row] for row in arrow.element.rows]
    table = {}
    for gsub in _submasks(mask):
        rows = [
            [entry_parts[a][b].get(gsub, ctx.zero()) for b in range(k)]
            for a in range(k)
        ]
        table[slot_mask(gsub)] = WeilMatrix(rows)
    full = 1 << n
    for s in range(full):
        table.setdefault(s, WeilMatrix.zeros(ctx, k))
    return Microcube(BUNDLE, n, arrow.base, table, k)


def _submasks(mask: int):
    """All submasks of a bitmask, including 0 and the mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def star(zeta: Callable[[WeilElement], Microcube], t: Microcube) -> Microcube:
    """Compose a one-parameter family of 1-cubes with a 1-cube into a 2-cube.

    The family must sit over the target path of ``t``: the base of
    ``zeta(d)`` is where ``t`` arrives at ``d``.  The result evaluates at
    ``(d1, d2)`` to ``zeta(d1)(d2) * t(d1)`` (in the global composition
    order), and its target square is the target family of ``zeta``.
    """
    if t.arity != 1:
        raise ValueError("star expects an arity-1 cube")
    ctx = t.ctx
    d1 = ctx.fresh()
    d2 = ctx.fresh()
    z1 = zeta(d1)
    if not isinstance(z1, Microcube) or z1.arity != 1 or z1.kind != t.kind:
        raise ValueError("zeta must produce arity-1 cubes of the same kind")
    t_arrow = t.evaluate([d1])
    arrival = t_arrow.target if t.kind == PAIR else t_arrow.base
    if tuple(z1.base) != tuple(arrival):
        raise ValueError("family base does not follow the target path")
    arrow = compose(z1.evaluate([d2]), t_arrow)
    return microcube_from_generic(t.kind, [d1, d2], arrow, t.fiber_dim)


# -- tangent vectors ---------------------------------------------------------


@dataclass(frozen=True)
class TangentVector:
    """A fiber tangent: base point plus the first-order matrix coefficient.

    Evaluating at a square-zero ``w`` gives the group element ``I + w * X``
    at the base point.
    """

    base: Point
    matrix: WeilMatrix

    @property
    def ctx(self) -> GeneratorContext:
        return self.matrix.ctx

    @property
    def fiber_dim(self) -> int:
        return self.matrix.size

    def as_microcube(self) -> Microcube:
        identity = WeilMatrix.identity(self.ctx, self.fiber_dim)
        return Microcube(BUNDLE, 1, self.base, {0: identity, 1: self.matrix})


def tangent_of(cube: Microcube) -> TangentVector:
    """Normal form of an arity-1 bundle cube."""
    if cube.kind != BUNDLE or cube.arity != 1:
        raise ValueError("expected an arity-1 bundle cube")
    return TangentVector(cube.base, cube.table[1])


def tangent_eval(t: TangentVector, w) -> GroupArrow:
    """The group element ``I + w * X``; ``w`` must be square-zero."""
    if isinstance(w, (int, Fraction)):
        w = t.ctx.const(w)
    if w.constant_term:
        raise ValueError("evaluation argument must have zero constant term")
    if not (w * w).is_zero:
        raise ValueError("evaluation argument must square to zero")
    identity = WeilMatrix.identity(t.ctx, t.fiber_dim)
    return GroupArrow(t.base, identity + t.matrix.scale(w))


def tangent_add(t1: TangentVector, t2: TangentVector) -> TangentVector:
    if t1.base != t2.base:
        raise ValueError("tangent vectors at different base points")
    return TangentVector(t1.base, t1.matrix + t2.matrix)


def tangent_scale(t: TangentVector, a) -> TangentVector:
    return TangentVector(t.base, t.matrix.scale(a))


def bracket(t1: TangentVector, t2: TangentVector) -> TangentVector:
    """Lie bracket extracted from the group commutator word.

    Fresh generators d1, d2 are allocated; the four-fold product
    ``t2(-d2) t1(-d1) t2(d2) t1(d1)`` is an identity perturbation whose
    d1*d2 coefficient is the bracket's matrix.
    """
    if t1.base != t2.base:
        raise ValueError("tangent vectors at different base points")
    ctx = t1.ctx
    d1, d2 = ctx.fresh(), ctx.fresh()
    word = (
        tangent_eval(t2, -d2).element
        @ tangent_eval(t1, -d1).element
        @ tangent_eval(t2, d2).element
        @ tangent_eval(t1, d1).element
    )
    identity = WeilMatrix.identity(ctx, t1.fiber_dim)
    value = (word - identity).factor_top(monomial([d1, d2]))
    return TangentVector(t1.base, value)


# -- randomized instances ----------------------------------------------------


def random_fraction(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2)))


def random_point(rng: random.Random, ctx: GeneratorContext, dim: int, bound: int) -> Point:
    return tuple(ctx.const(random_fraction(rng, bound)) for _ in range(dim))


def random_matrix(
    rng: random.Random, ctx: GeneratorContext, size: int, bound: int
) -> WeilMatrix:
    return WeilMatrix.from_scalar_rows(
        ctx, [[random_fraction(rng, bound) for _ in range(size)] for _ in range(size)]
    )


def random_square_zero(
    rng: random.Random, ctx: GeneratorContext, bound: int, rich: bool = False
) -> WeilElement:
    """A random square-zero element on fresh generators.

    All monomials share the leading fresh generator, which forces the square
    to vanish.  With ``rich`` a second-order term rides along.
    """
    g = ctx.fresh()
    el = g * random_fraction(rng, bound)
    if rich:
        h = ctx.fresh()
        el = el + g * h * random_fraction(rng, bound)
    return el


def random_microcube(
    rng: random.Random,
    ctx: GeneratorContext,
    kind: str,
    arity: int,
    base_dim: int,
    fiber_dim: int | None = None,
    bound: int = 4,
) -> Microcube:
    """Deterministic-under-seed random cube satisfying all invariants."""
    base = random_point(rng, ctx, base_dim, bound)
    table = {}
    if kind == PAIR:
        table[0] = base
        for mask in range(1, 1 << arity):
            table[mask] = random_point(rng, ctx, base_dim, bound)
        return Microcube(PAIR, arity, base, table, fiber_dim)
    if fiber_dim is None:
        raise ValueError("bundle cubes need a fiber dimension")
    table[0] = WeilMatrix.identity(ctx, fiber_dim)
    for mask in range(1, 1 << arity):
        table[mask] = random_matrix(rng, ctx, fiber_dim, bound)
    return Microcube(BUNDLE, arity, base, table, fiber_dim)


def random_tangent(
    rng: random.Random,
    ctx: GeneratorContext,
    base_dim: int,
    fiber_dim: int,
    bound: int = 4,
    base: Point | None = None,
) -> TangentVector:
    if base is None:
        base = random_point(rng, ctx, base_dim, bound)
    return TangentVector(base, random_matrix(rng, ctx, fiber_dim, bound))
