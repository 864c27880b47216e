"""Differential forms on microcubes with fiber-matrix values.

A degree-n form eats arity-n cubes and returns a k x k matrix in the fiber
over the cube's source.  The shipped classical family reads the n
single-slot coefficient vectors of a cube (its first-order data) and
contracts them with polynomial coefficient fields through alternating
minors, exactly like coordinate forms:

  * on the pair groupoid the direction data is the first-order target
    vector (dimension m);
  * on the bundle groupoid the target map is constant, so the direction
    data is the vectorized first-order fiber block (dimension k^2).

Both families satisfy the two form axioms (per-slot homogeneity and
sign-alternation under slot permutations) by construction; the validator
re-checks them on random cubes, including parametrized ones, because
operator outputs arrive here as opaque evaluators.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .groupoid import (
    BUNDLE,
    KINDS,
    PAIR,
    Microcube,
    permutation_sign,
    permute_slots,
    random_fraction,
    random_microcube,
    random_square_zero,
    scale_axis,
    shifted_face,
    tangent_eval,
    TangentVector,
)
from .poly import (
    Polynomial,
    PolyMatrix,
    eval_poly_matrix,
    poly_matrix_from_scalars,
    random_polynomial,
)
from .weil import GeneratorContext, WeilElement, WeilMatrix, product

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class DifferentialForm:
    """A form given either by classical coefficient fields or an evaluator.

    ``coefficients`` maps strictly increasing multi-indices over the
    direction coordinates to k x k polynomial matrices; degree 0 uses the
    single empty index.  Operator outputs set ``evaluator`` instead.
    """

    degree: int
    fiber_dim: int
    groupoid: str
    base_dim: int
    coefficients: Mapping[MultiIndex, PolyMatrix] | None = None
    evaluator: Callable[[Microcube], WeilMatrix] | None = None
    label: str = "form"

    def __post_init__(self):
        if self.groupoid not in KINDS:
            raise ValueError(f"unknown groupoid kind {self.groupoid!r}")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if (self.coefficients is None) == (self.evaluator is None):
            raise ValueError("exactly one of coefficients/evaluator must be given")
        if self.coefficients is not None:
            p = self.direction_dim
            for index in self.coefficients:
                if len(index) != self.degree:
                    raise ValueError("multi-index length must equal the degree")
                if list(index) != sorted(set(index)) or any(
                    not 1 <= c <= p for c in index
                ):
                    raise ValueError(
                        "multi-index must be strictly increasing within the direction coordinates"
                    )

    @property
    def direction_dim(self) -> int:
        """Dimension of the direction data a cube provides per slot."""
        return self.base_dim if self.groupoid == PAIR else self.fiber_dim ** 2

    @property
    def is_classical(self) -> bool:
        return self.coefficients is not None


def eval_form(form: DifferentialForm, cube: Microcube) -> WeilMatrix:
    """Value of a form on a cube of matching degree and groupoid kind."""
    if cube.arity != form.degree:
        raise ValueError(
            f"degree mismatch: form of degree {form.degree} on an arity-{cube.arity} cube"
        )
    if cube.kind != form.groupoid:
        raise ValueError("groupoid kind mismatch")
    if cube.base_dim != form.base_dim:
        raise ValueError("base dimension mismatch")
    if cube.kind == BUNDLE and cube.fiber_dim != form.fiber_dim:
        raise ValueError("fiber dimension mismatch")
    if form.evaluator is not None:
        return form.evaluator(cube)
    ctx = cube.ctx
    n = form.degree
    dirs = [cube.direction(i) for i in range(1, n + 1)]
    total = WeilMatrix.zeros(ctx, form.fiber_dim)
    for index, field in form.coefficients.items():
        minor = _det(ctx, [[dirs[j][c - 1] for j in range(n)] for c in index])
        if not minor and n:
            continue
        coeff = eval_poly_matrix(field, cube.base)
        total = total + (coeff if n == 0 else coeff.scale(minor))
    return total


def _det(ctx: GeneratorContext, rows: list[list[WeilElement]]) -> WeilElement:
    n = len(rows)
    if n == 0:
        return ctx.one()
    if n == 1:
        return rows[0][0]
    total = ctx.zero()
    for j, head in enumerate(rows[0]):
        if not head:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = head * _det(ctx, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def form_value_tangent(form: DifferentialForm, cube: Microcube) -> TangentVector:
    """The form's value packaged as a fiber tangent at the cube's source."""
    return TangentVector(cube.base, eval_form(form, cube))


# -- validation ---------------------------------------------------------------


def validate_form(
    form: DifferentialForm,
    seed: int,
    trials: int,
    bound: int = 4,
) -> tuple[bool, list[dict]]:
    """Randomized exact check of the two form axioms.

    Each trial draws a cube (every other trial a parametrized one, produced
    as a shifted face of a higher cube), then checks per-slot homogeneity
    under a random rational and sign-alternation under a random slot
    permutation.  For degrees >= 2 the slot-transfer property of the
    group-valued reading is checked through tangent evaluation.  Returns
    ``(passed, witnesses)``; witnesses record the failing cube and sides.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    n = form.degree
    failures: list[dict] = []
    for trial in range(trials):
        ctx = GeneratorContext()
        if trial % 2 == 0 or n == 0:
            cube = random_microcube(
                rng, ctx, form.groupoid, n, form.base_dim, form.fiber_dim, bound
            )
        else:
            parent = random_microcube(
                rng, ctx, form.groupoid, n + 1, form.base_dim, form.fiber_dim, bound
            )
            slot = rng.randint(1, n + 1)
            cube = shifted_face(parent, slot, random_square_zero(rng, ctx, bound))
        base_value = eval_form(form, cube)
        if n:
            a = Fraction(rng.randint(-bound, bound), rng.choice((1, 2)))
            slot = rng.randint(1, n)
            scaled = eval_form(form, scale_axis(cube, slot, a))
            if scaled != base_value.scale(a):
                failures.append(
                    _witness(trial, "homogeneity", cube, scaled, base_value.scale(a))
                )
                continue
            sigma = list(range(1, n + 1))
            rng.shuffle(sigma)
            sign = permutation_sign(sigma)
            permuted = eval_form(form, permute_slots(cube, sigma))
            expected = base_value if sign > 0 else -base_value
            if permuted != expected:
                failures.append(
                    _witness(trial, "alternation", cube, permuted, expected)
                )
                continue
        if n >= 2:
            gens = ctx.fresh_many(n)
            a = Fraction(rng.randint(-bound, bound))
            i, j = sorted(rng.sample(range(n), 2))
            left = list(gens)
            left[i] = left[i] * a
            right = list(gens)
            right[j] = right[j] * a
            t = TangentVector(cube.base, base_value)
            lhs = tangent_eval(t, product(left, ctx)).element
            rhs = tangent_eval(t, product(right, ctx)).element
            if lhs != rhs:
                failures.append(_witness(trial, "slot-transfer", cube, lhs, rhs))
    return not failures, failures


def _witness(trial: int, law: str, cube: Microcube, lhs, rhs) -> dict:
    from .serialize import microcube_to_payload, matrix_to_payload

    return {
        "trial": trial,
        "law": law,
        "microcube": microcube_to_payload(cube),
        "lhs": matrix_to_payload(lhs),
        "rhs": matrix_to_payload(rhs),
    }


# -- constructors -------------------------------------------------------------


def classical_form(
    groupoid: str,
    base_dim: int,
    fiber_dim: int,
    degree: int,
    coefficients: Mapping[MultiIndex, PolyMatrix],
    label: str = "classical",
) -> DifferentialForm:
    return DifferentialForm(
        degree=degree,
        fiber_dim=fiber_dim,
        groupoid=groupoid,
        base_dim=base_dim,
        coefficients=dict(coefficients),
        label=label,
    )


def constant_form(
    groupoid: str,
    base_dim: int,
    fiber_dim: int,
    degree: int,
    matrices: Mapping[MultiIndex, list],
    label: str = "constant",
) -> DifferentialForm:
    """Classical form with constant rational coefficient matrices."""
    coeffs = {
        index: poly_matrix_from_scalars(base_dim, rows)
        for index, rows in matrices.items()
    }
    return classical_form(groupoid, base_dim, fiber_dim, degree, coeffs, label)


def zero_form(
    groupoid: str, base_dim: int, fiber_dim: int, section: PolyMatrix, label: str = "section"
) -> DifferentialForm:
    """Degree-0 form: a polynomial section of the fiber matrices."""
    return classical_form(groupoid, base_dim, fiber_dim, 0, {(): section}, label)


def random_form(
    rng: random.Random,
    degree: int,
    groupoid: str,
    base_dim: int,
    fiber_dim: int,
    bound: int = 3,
    poly_degree: int = 2,
) -> DifferentialForm:
    """Random classical form: all multi-indices, sparse polynomial entries."""
    p = base_dim if groupoid == PAIR else fiber_dim ** 2
    if degree > p:
        raise ValueError("degree exceeds the direction dimension")
    coeffs = {}
    for index in itertools.combinations(range(1, p + 1), degree):
        rows = tuple(
            tuple(
                random_polynomial(rng, base_dim, poly_degree, bound, max_terms=2)
                for _ in range(fiber_dim)
            )
            for _ in range(fiber_dim)
        )
        coeffs[index] = rows
    return classical_form(groupoid, base_dim, fiber_dim, degree, coeffs, "random")


# -- deliberately broken forms -------------------------------------------------


def broken_quadratic_form(
    rng: random.Random, groupoid: str, base_dim: int, fiber_dim: int, bound: int = 3
) -> DifferentialForm:
    """Degree-1 evaluator that reads first-order data quadratically.

    Violates per-slot homogeneity (a^2 against a), so validation must fail;
    it still cannot disturb coefficient extraction, which is what the
    residue trap below is for.
    """
    inner = random_form(rng, 1, groupoid, base_dim, fiber_dim, bound)
    spoiler = [
        [random_fraction(rng, bound) for _ in range(fiber_dim)] for _ in range(fiber_dim)
    ]

    def evaluate(cube: Microcube) -> WeilMatrix:
        good = eval_form(inner, cube)
        v = cube.direction(1)
        contamination = WeilMatrix.from_scalar_rows(cube.ctx, spoiler)
        return good + contamination.scale(v[0] * v[0])

    return DifferentialForm(
        degree=1,
        fiber_dim=fiber_dim,
        groupoid=groupoid,
        base_dim=base_dim,
        evaluator=evaluate,
        label="broken-quadratic",
    )


def residue_trap_form(
    rng: random.Random, groupoid: str, base_dim: int, fiber_dim: int, bound: int = 3
) -> DifferentialForm:
    """Degree-1 evaluator that is not a function of the cube's table algebra.

    It adds a constant offset exactly on parametrized cubes, so inside the
    coboundary assembly the shifted-face value no longer meets the face
    value at shift zero and extraction hits a stray monomial: the planted
    ResidueError witness.
    """
    inner = random_form(rng, 1, groupoid, base_dim, fiber_dim, bound)
    offset = [[Fraction(1 + a + b) for b in range(fiber_dim)] for a in range(fiber_dim)]

    def evaluate(cube: Microcube) -> WeilMatrix:
        good = eval_form(inner, cube)
        if cube.is_parametrized:
            return good + WeilMatrix.from_scalar_rows(cube.ctx, offset)
        return good

    return DifferentialForm(
        degree=1,
        fiber_dim=fiber_dim,
        groupoid=groupoid,
        base_dim=base_dim,
        evaluator=evaluate,
        label="residue-trap",
    )
