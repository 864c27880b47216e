import random
from fractions import Fraction

import pytest

from weilforms.forms import (
    classical_form,
    constant_form,
    eval_form,
    random_form,
    residue_trap_form,
    validate_form,
    zero_form,
)
from weilforms.groupoid import (
    BUNDLE,
    PAIR,
    Microcube,
    TangentVector,
    axis,
    bracket,
    degeneracy,
    face,
    random_microcube,
    shifted_face,
)
from weilforms.operators import (
    d_contour,
    d_plus,
    d_times,
    mc_bracket_side,
    mc_defect,
    transport_derivative,
)
from weilforms.poly import parse_polynomial
from weilforms.representations import Representation, apply_fiber_map, random_representation, transport
from weilforms.weil import GeneratorContext, ResidueError, WeilMatrix


@pytest.fixture
def ctx():
    return GeneratorContext()


def trivial(k=2):
    return Representation("trivial", k)


def unit_square(ctx, x=(0, 0)):
    base = (ctx.const(x[0]), ctx.const(x[1]))
    zero, one = ctx.zero(), ctx.one()
    table = {0: base, 1: (one, zero), 2: (zero, one), 3: (zero, zero)}
    return Microcube(PAIR, 2, base, table)


def combos():
    return ((PAIR, "trivial"), (PAIR, "gauge"), (BUNDLE, "trivial"), (BUNDLE, "adjoint"))


def test_dplus_degree0_directional_derivative(ctx):
    # f(x) = x^2 on the path with target 1 + d gives 2, the derivative at 1
    section = ((parse_polynomial("x1^2", 1),),)
    form = zero_form(PAIR, 1, 1, section)
    base = (ctx.const(1),)
    path = Microcube(PAIR, 1, base, {0: base, 1: (ctx.const(1),)})
    value = eval_form(d_plus(form, trivial(1)), path)
    assert value == WeilMatrix.from_scalar_rows(ctx, [[2]])


def test_dplus_constant_zero_form_vanishes(ctx):
    rng = random.Random(0)
    form = constant_form(PAIR, 2, 2, 0, {(): [[3, 1], [0, 2]]})
    out = d_plus(form, trivial())
    for _ in range(5):
        path = random_microcube(rng, ctx, PAIR, 1, 2, 2)
        assert eval_form(out, path).is_zero


def test_dplus_degree0_matches_gradient_oracle(ctx):
    rng = random.Random(1)
    form = random_form(rng, 0, PAIR, 2, 2)
    section = form.coefficients[()]
    gradient = classical_form(
        PAIR,
        2,
        2,
        1,
        {
            (j,): tuple(tuple(p.partial(j - 1) for p in row) for row in section)
            for j in (1, 2)
        },
    )
    out = d_plus(form, trivial())
    for _ in range(10):
        path = random_microcube(rng, ctx, PAIR, 1, 2, 2)
        assert eval_form(out, path) == eval_form(gradient, path)


def test_dplus_degree1_matches_curl_oracle(ctx):
    rng = random.Random(2)
    form = random_form(rng, 1, PAIR, 2, 2)
    a1 = form.coefficients[(1,)]
    a2 = form.coefficients[(2,)]
    curl_field = tuple(
        tuple(p2.partial(0) - p1.partial(1) for p1, p2 in zip(r1, r2))
        for r1, r2 in zip(a1, a2)
    )
    curl = classical_form(PAIR, 2, 2, 2, {(1, 2): curl_field})
    out = d_plus(form, trivial())
    for _ in range(10):
        square = random_microcube(rng, ctx, PAIR, 2, 2, 2)
        assert eval_form(out, square) == eval_form(curl, square)


def test_transport_derivative_is_the_slot_derivative(ctx):
    rng = random.Random(3)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        for i in (1, 2):
            df = transport_derivative(form, rep, cube, i)
            d = ctx.fresh()
            still = eval_form(form, face(cube, i))
            op = transport(rep, axis(cube, i)(d)).inverse()
            moved = apply_fiber_map(op, eval_form(form, shifted_face(cube, i, d)))
            assert still - moved == df.scale(d).scale(-1)


def test_transport_derivative_constant_form_trivial_rep(ctx):
    # a constant section has zero slot derivative on any cube
    section = constant_form(PAIR, 2, 2, 0, {(): [[3, 1], [0, 2]]})
    rng = random.Random(4)
    cube = random_microcube(rng, ctx, PAIR, 1, 2, 2)
    assert transport_derivative(section, trivial(), cube, 1).is_zero
    # a constant one-form has zero slot derivatives on twist-free squares
    form = constant_form(PAIR, 2, 2, 1, {(1,): [[1, 0], [0, 1]], (2,): [[0, 1], [1, 0]]})
    square = unit_square(ctx, x=(2, -1))
    for i in (1, 2):
        assert transport_derivative(form, trivial(), square, i).is_zero


def test_group_word_derivative_identity(ctx):
    # (value at face)^{-d} * transported(shift e)^{d} = identity + d*e*DF
    rng = random.Random(5)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        i = rng.choice((1, 2))
        df = transport_derivative(form, rep, cube, i)
        d, e = ctx.fresh_many(2)
        still = TangentVector(cube.base, eval_form(form, face(cube, i)))
        op = transport(rep, axis(cube, i)(e)).inverse()
        moved = TangentVector(
            cube.base, apply_fiber_map(op, eval_form(form, shifted_face(cube, i, e)))
        )
        from weilforms.groupoid import tangent_eval

        word = tangent_eval(still, -d).element @ tangent_eval(moved, d).element
        identity = WeilMatrix.identity(ctx, 2)
        assert word == identity + df.scale(d * e)


def test_coincidence_on_random_instances(ctx):
    rng = random.Random(6)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        for degree in (1, 2):
            form = random_form(rng, degree, kind, 2, 2)
            cube = random_microcube(rng, ctx, kind, degree + 1, 2, 2)
            lhs = eval_form(d_plus(form, rep), cube)
            rhs = eval_form(d_times(form, rep), cube)
            assert lhs == rhs


def test_dtimes_order_independence(ctx):
    rng = random.Random(7)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        assert eval_form(d_times(form, rep), cube) == eval_form(
            d_times(form, rep, reverse_order=True), cube
        )


def test_dtimes_abelian_constant_form_is_closed(ctx):
    rng = random.Random(8)
    form = constant_form(PAIR, 2, 1, 1, {(1,): [[2]], (2,): [[-3]]})
    cube = random_microcube(rng, ctx, PAIR, 2, 2, 1)
    assert eval_form(d_times(form, trivial(1)), cube).is_zero


def test_dtimes_rejects_degree_zero():
    rng = random.Random(9)
    form = random_form(rng, 0, PAIR, 2, 2)
    with pytest.raises(ValueError):
        d_times(form, trivial())


def test_dplus_squares_to_zero_spot(ctx):
    rng = random.Random(10)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        for degree in (0, 1):
            form = random_form(rng, degree, kind, 2, 2)
            second = d_plus(d_plus(form, rep), rep)
            cube = random_microcube(rng, ctx, kind, degree + 2, 2, 2)
            assert eval_form(second, cube).is_zero


def test_contour_equals_dtimes_plus_bracket(ctx):
    rng = random.Random(11)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        contour = eval_form(d_contour(form, rep), cube)
        multiplicative = eval_form(d_times(form, rep), cube)
        first = TangentVector(cube.base, eval_form(form, face(cube, 1)))
        second = TangentVector(cube.base, eval_form(form, face(cube, 2)))
        assert contour - multiplicative == bracket(second, first).matrix


def test_contour_closed_constant_form_gives_pure_bracket(ctx):
    form = constant_form(
        PAIR, 2, 2, 1, {(1,): [[0, 1], [0, 0]], (2,): [[0, 0], [1, 0]]}
    )
    rep = trivial()
    square = unit_square(ctx)
    assert eval_form(d_plus(form, rep), square).is_zero
    value = eval_form(d_contour(form, rep), square)
    assert value == WeilMatrix.from_scalar_rows(ctx, [[-1, 0], [0, 1]])


def test_contour_abelian_equals_dtimes(ctx):
    rng = random.Random(12)
    form = random_form(rng, 1, PAIR, 2, 1)
    cube = random_microcube(rng, ctx, PAIR, 2, 2, 1)
    assert eval_form(d_contour(form, trivial(1)), cube) == eval_form(
        d_times(form, trivial(1)), cube
    )


def test_mc_defect_equals_bracket_side(ctx):
    rng = random.Random(13)
    for kind, rep_kind in combos():
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        assert mc_defect(form, rep, cube) == mc_bracket_side(form, cube)


def test_mc_defect_abelian_vanishes(ctx):
    rng = random.Random(14)
    form = random_form(rng, 1, PAIR, 2, 1)
    cube = random_microcube(rng, ctx, PAIR, 2, 2, 1)
    assert mc_defect(form, trivial(1), cube).is_zero


def test_mc_defect_on_degenerate_square_vanishes(ctx):
    rng = random.Random(15)
    form = random_form(rng, 1, PAIR, 2, 2)
    line = random_microcube(rng, ctx, PAIR, 1, 2, 2)
    cube = degeneracy(line, 2)
    assert mc_defect(form, trivial(), cube).is_zero


def test_operator_outputs_pass_validation():
    rng = random.Random(16)
    for kind, rep_kind in ((PAIR, "gauge"), (BUNDLE, "adjoint")):
        rep = random_representation(rng, rep_kind, 2, 2)
        form = random_form(rng, 1, kind, 2, 2)
        out = d_plus(form, rep)
        ok, witnesses = validate_form(out, seed=77, trials=6)
        assert ok, witnesses
        contour_out = d_contour(form, rep)
        ok, witnesses = validate_form(contour_out, seed=78, trials=6)
        assert ok, witnesses


def test_residue_trap_raises_in_dplus_and_dtimes(ctx):
    rng = random.Random(17)
    for kind in (PAIR, BUNDLE):
        trap = residue_trap_form(rng, kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 2, 2, 2)
        with pytest.raises(ResidueError):
            eval_form(d_plus(trap, trivial()), cube)
        with pytest.raises(ResidueError):
            eval_form(d_times(trap, trivial()), cube)


def test_output_form_provenance():
    rng = random.Random(18)
    form = random_form(rng, 1, PAIR, 2, 2)
    rep = trivial()
    out = d_plus(form, rep)
    assert out.degree == 2
    assert out.operator == "dplus"
    assert out.source is form
    assert out.representation is rep


def test_compatibility_validation():
    rng = random.Random(19)
    gauge = random_representation(rng, "gauge", 2, 2)
    bundle_form = random_form(rng, 1, BUNDLE, 2, 2)
    with pytest.raises(ValueError):
        d_plus(bundle_form, gauge)
    wrong_k = Representation("trivial", 3)
    with pytest.raises(ValueError):
        d_plus(bundle_form, wrong_k)
