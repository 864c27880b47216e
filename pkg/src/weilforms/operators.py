"""The coboundary operators and the contour derivative.

All three operators are defined by evaluation at generic infinitesimals:
for a cube of arity n+1 they allocate fresh generators d_1..d_{n+1}, build
the defining word or sum, and extract the coefficient of d_1*...*d_{n+1}.
For well-formed inputs every stray coefficient cancels identically, so the
extraction is the unique answer; a leftover monomial raises ResidueError
and is the computational signature of an invalid form or transport.

Nesting works because each evaluation draws its own fresh generators while
the cube's ambient parameters ride along inside the coefficients; that is
exactly what makes the square of the additive operator vanish here by
computation rather than by symbol pushing.

Degree bookkeeping: the additive operator accepts any degree; the
multiplicative one needs degree >= 1 (its evaluation points are products
over the other slots, and an empty product is not infinitesimal), with the
additive operator serving the degree-0 case; the contour derivative is the
degree 1 -> 2 word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .forms import DifferentialForm, eval_form
from .groupoid import (
    Microcube,
    TangentVector,
    axis,
    bracket,
    face,
    shifted_face,
    tangent_eval,
)
from .representations import Representation, apply_fiber_map, transport
from .weil import WeilMatrix, monomial, product


@dataclass(frozen=True)
class OperatorOutputForm(DifferentialForm):
    """A form produced by an operator, evaluated through extraction.

    Keeps its provenance so reports can say which operator, input form and
    transport produced it.
    """

    operator: str = ""
    source: Optional[DifferentialForm] = None
    representation: Optional[Representation] = None


def _check_compat(form: DifferentialForm, rep: Representation) -> None:
    if rep.fiber_dim != form.fiber_dim:
        raise ValueError("representation and form fiber dimensions differ")
    if rep.groupoid is not None and rep.groupoid != form.groupoid:
        raise ValueError(
            f"{rep.kind} transport is not defined on the {form.groupoid} groupoid"
        )


def _transported_shift_value(
    form: DifferentialForm, rep: Representation, cube: Microcube, i: int, at
) -> WeilMatrix:
    """Inverse transport along axis i applied to the form on the shifted face."""
    op = transport(rep, axis(cube, i).evaluate([at]))
    return apply_fiber_map(op.inverse(), eval_form(form, shifted_face(cube, i, at)))


def d_plus(form: DifferentialForm, rep: Representation) -> OperatorOutputForm:
    """Additive coboundary of a form relative to a transport.

    The output of degree n+1 evaluates on a cube by assembling the
    alternating sum of face values minus inverse-transported shifted-face
    values, weighted by the products of the remaining generators, and
    factoring out the full generator product.
    """
    _check_compat(form, rep)
    n1 = form.degree + 1

    def evaluate(cube: Microcube) -> WeilMatrix:
        ctx = cube.ctx
        ds = ctx.fresh_many(n1)
        top = monomial(ds)
        total = WeilMatrix.zeros(ctx, form.fiber_dim)
        for i in range(1, n1 + 1):
            term = eval_form(form, face(cube, i)) - _transported_shift_value(
                form, rep, cube, i, ds[i - 1]
            )
            hat = product((d for j, d in enumerate(ds, start=1) if j != i), ctx)
            term = term.scale(hat)
            total = total + term if i % 2 == 0 else total - term
        return total.factor_top(top)

    return OperatorOutputForm(
        degree=n1,
        fiber_dim=form.fiber_dim,
        groupoid=form.groupoid,
        base_dim=form.base_dim,
        evaluator=evaluate,
        label=f"d_plus({form.label})",
        operator="dplus",
        source=form,
        representation=rep,
    )


def transport_derivative(
    form: DifferentialForm, rep: Representation, cube: Microcube, i: int
) -> WeilMatrix:
    """Derivative at zero of the transported shifted-face value along axis i.

    This is the single-slot derivative each operator term reduces to: the
    face value minus the inverse-transported value on the face shifted to e
    equals minus e times this matrix, exactly.
    """
    _check_compat(form, rep)
    e = cube.ctx.fresh()
    moved = _transported_shift_value(form, rep, cube, i, e)
    still = eval_form(form, face(cube, i))
    return (moved - still).factor_top(e)


def d_times(
    form: DifferentialForm, rep: Representation, reverse_order: bool = False
) -> OperatorOutputForm:
    """Multiplicative coboundary of a form of degree >= 1.

    Each slot contributes a group element: the form's face value evaluated
    at the product of the other generators times the inverse-transported
    shifted-face value evaluated at minus that product; odd slots enter
    inverted.  The factors are multiplied in slot order (or reversed, which
    must not change the result), the identity is subtracted and the full
    generator product factored out.
    """
    if form.degree < 1:
        raise ValueError(
            "multiplicative coboundary needs degree >= 1; use d_plus for degree 0"
        )
    _check_compat(form, rep)
    n1 = form.degree + 1

    def evaluate(cube: Microcube) -> WeilMatrix:
        ctx = cube.ctx
        ds = ctx.fresh_many(n1)
        top = monomial(ds)
        identity = WeilMatrix.identity(ctx, form.fiber_dim)
        word = identity
        order = range(n1, 0, -1) if reverse_order else range(1, n1 + 1)
        for i in order:
            hat = product((d for j, d in enumerate(ds, start=1) if j != i), ctx)
            still = TangentVector(cube.base, eval_form(form, face(cube, i)))
            moved = TangentVector(
                cube.base, _transported_shift_value(form, rep, cube, i, ds[i - 1])
            )
            factor = tangent_eval(still, hat).element @ tangent_eval(moved, -hat).element
            if i % 2 == 1:
                factor = factor.inverse()
            word = word @ factor
        return (word - identity).factor_top(top)

    return OperatorOutputForm(
        degree=n1,
        fiber_dim=form.fiber_dim,
        groupoid=form.groupoid,
        base_dim=form.base_dim,
        evaluator=evaluate,
        label=f"d_times({form.label})",
        operator="dtimes",
        source=form,
        representation=rep,
    )


def d_contour(form: DifferentialForm, rep: Representation) -> OperatorOutputForm:
    """Contour derivative of a degree-1 form: the boundary word of a square.

    Walks the four sides of a microsquare through tangent evaluation, with
    the two far sides transported back, subtracts the identity and extracts
    the top coefficient.  Differs from the multiplicative coboundary by
    exactly the bracket of the two face values.
    """
    if form.degree != 1:
        raise ValueError("the contour derivative is defined from degree 1 to degree 2")
    _check_compat(form, rep)

    def evaluate(cube: Microcube) -> WeilMatrix:
        ctx = cube.ctx
        d1, d2 = ctx.fresh_many(2)
        base = cube.base
        first_face = TangentVector(base, eval_form(form, face(cube, 1)))
        second_face = TangentVector(base, eval_form(form, face(cube, 2)))
        far_second = TangentVector(
            base, _transported_shift_value(form, rep, cube, 2, d2)
        )
        far_first = TangentVector(
            base, _transported_shift_value(form, rep, cube, 1, d1)
        )
        word = (
            tangent_eval(first_face, -d2).element
            @ tangent_eval(far_second, -d1).element
            @ tangent_eval(far_first, d2).element
            @ tangent_eval(second_face, d1).element
        )
        identity = WeilMatrix.identity(ctx, form.fiber_dim)
        return (word - identity).factor_top(monomial([d1, d2]))

    return OperatorOutputForm(
        degree=2,
        fiber_dim=form.fiber_dim,
        groupoid=form.groupoid,
        base_dim=form.base_dim,
        evaluator=evaluate,
        label=f"d_contour({form.label})",
        operator="dcontour",
        source=form,
        representation=rep,
    )


def mc_defect(
    form: DifferentialForm, rep: Representation, cube: Microcube
) -> WeilMatrix:
    """Contour derivative minus multiplicative coboundary on one square.

    Equals the bracket of the form's two face values, which is the exact
    discrepancy the Maurer-Cartan statement asserts.
    """
    contour = eval_form(d_contour(form, rep), cube)
    multiplicative = eval_form(d_times(form, rep), cube)
    return contour - multiplicative


def mc_bracket_side(form: DifferentialForm, cube: Microcube) -> WeilMatrix:
    """The bracket of the two face values, computed independently."""
    t_second = TangentVector(cube.base, eval_form(form, face(cube, 2)))
    t_first = TangentVector(cube.base, eval_form(form, face(cube, 1)))
    return bracket(t_second, t_first).matrix
