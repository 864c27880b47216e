import random
from fractions import Fraction

import pytest

from weilforms.forms import (
    DifferentialForm,
    broken_quadratic_form,
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
    degeneracy,
    random_microcube,
    random_square_zero,
    scale_axis,
    shifted_face,
)
from weilforms.poly import parse_polynomial, poly_matrix_from_scalars
from weilforms.weil import GeneratorContext, WeilMatrix


@pytest.fixture
def ctx():
    return GeneratorContext()


def unit_square(ctx, x=(0, 0)):
    base = (ctx.const(x[0]), ctx.const(x[1]))
    zero, one = ctx.zero(), ctx.one()
    table = {0: base, 1: (one, zero), 2: (zero, one), 3: (zero, zero)}
    return Microcube(PAIR, 2, base, table)


def test_area_form_on_unit_square(ctx):
    coeff = [[2, 1], [0, 5]]
    form = constant_form(PAIR, 2, 2, 2, {(1, 2): coeff})
    value = eval_form(form, unit_square(ctx))
    assert value == WeilMatrix.from_scalar_rows(ctx, coeff)


def test_area_form_evaluates_coefficients_at_base(ctx):
    field = ((parse_polynomial("x1", 2), parse_polynomial("0", 2)),
             (parse_polynomial("0", 2), parse_polynomial("x2^2", 2)))
    form = classical_form(PAIR, 2, 2, 2, {(1, 2): field})
    value = eval_form(form, unit_square(ctx, x=(3, 2)))
    assert value == WeilMatrix.from_scalar_rows(ctx, [[3, 0], [0, 4]])


def test_degenerate_cube_evaluates_to_zero(ctx):
    rng = random.Random(0)
    for kind in (PAIR, BUNDLE):
        form = random_form(rng, 2, kind, 2, 2)
        line = random_microcube(rng, ctx, kind, 1, 2, 2)
        for slot in (1, 2):
            cube = degeneracy(line, slot)
            assert eval_form(form, cube).is_zero


def test_homogeneity_example(ctx):
    rng = random.Random(1)
    form = random_form(rng, 2, PAIR, 2, 2)
    cube = random_microcube(rng, ctx, PAIR, 2, 2, 2)
    a = Fraction(-7, 2)
    for slot in (1, 2):
        assert eval_form(form, scale_axis(cube, slot, a)) == eval_form(form, cube).scale(a)


def test_zero_form_reads_section_at_base(ctx):
    section = ((parse_polynomial("x1^2", 1),),)
    form = zero_form(PAIR, 1, 1, section)
    base = (ctx.const(3),)
    cube = Microcube(PAIR, 0, base, {0: base})
    assert eval_form(form, cube)[0, 0] == ctx.const(9)


def test_zero_form_expands_at_infinitesimal_base(ctx):
    section = ((parse_polynomial("x1^2", 1),),)
    form = zero_form(PAIR, 1, 1, section)
    d = ctx.fresh()
    base = (ctx.const(1) + d,)
    cube = Microcube(PAIR, 0, base, {0: base})
    assert eval_form(form, cube)[0, 0] == 1 + 2 * d


def test_degree_mismatch_rejected(ctx):
    rng = random.Random(2)
    form = random_form(rng, 1, PAIR, 2, 2)
    cube = random_microcube(rng, ctx, PAIR, 2, 2, 2)
    with pytest.raises(ValueError):
        eval_form(form, cube)


def test_groupoid_mismatch_rejected(ctx):
    rng = random.Random(3)
    form = random_form(rng, 1, PAIR, 2, 2)
    cube = random_microcube(rng, ctx, BUNDLE, 1, 2, 2)
    with pytest.raises(ValueError):
        eval_form(form, cube)


def test_eval_commutes_with_ambient_substitution(ctx):
    rng = random.Random(4)
    for kind in (PAIR, BUNDLE):
        form = random_form(rng, 1, kind, 2, 2)
        parent = random_microcube(rng, ctx, kind, 2, 2, 2)
        e = ctx.fresh()
        shifted = shifted_face(parent, 2, e)
        value = eval_form(form, shifted)
        for image in (0, 3 * e):
            substituted = value.substitute({e: image})
            direct = eval_form(form, shifted_face(parent, 2, e.substitute({e: image})))
            assert substituted == direct


def test_bundle_form_reads_fiber_directions(ctx):
    rng = random.Random(5)
    # single multi-index (1,) picks the (0,0) entry of the first-order block
    form = constant_form(BUNDLE, 2, 2, 1, {(1,): [[1, 0], [0, 1]]})
    cube = random_microcube(rng, ctx, BUNDLE, 1, 2, 2)
    first_order = cube.table[1]
    assert eval_form(form, cube) == WeilMatrix.identity(ctx, 2).scale(first_order[0, 0])


def test_validate_form_passes_classical_bodies():
    rng = random.Random(6)
    for kind in (PAIR, BUNDLE):
        for degree in (0, 1, 2):
            form = random_form(rng, degree, kind, 2, 2)
            ok, witnesses = validate_form(form, seed=1234, trials=12)
            assert ok, witnesses


def test_validate_form_catches_quadratic_readout():
    rng = random.Random(7)
    for kind in (PAIR, BUNDLE):
        broken = broken_quadratic_form(rng, kind, 2, 2)
        ok, witnesses = validate_form(broken, seed=99, trials=20)
        assert not ok
        assert any(w["law"] == "homogeneity" for w in witnesses)


def test_validate_form_degree_zero_vacuous():
    rng = random.Random(8)
    form = random_form(rng, 0, PAIR, 2, 2)
    ok, witnesses = validate_form(form, seed=5, trials=4)
    assert ok and not witnesses


def test_residue_trap_offsets_only_parametrized(ctx):
    rng = random.Random(9)
    trap = residue_trap_form(rng, PAIR, 2, 2)
    clean = random_microcube(rng, ctx, PAIR, 1, 2, 2)
    parent = random_microcube(rng, ctx, PAIR, 2, 2, 2)
    e = ctx.fresh()
    parametrized = shifted_face(parent, 1, e)
    inner = trap  # evaluator wraps a classical inner form plus the offset
    clean_value = eval_form(inner, clean)
    assert clean_value == eval_form(inner, clean)  # deterministic
    offset_value = eval_form(inner, parametrized)
    zeroed = offset_value.substitute({e: 0})
    face_value = eval_form(inner, shifted_face(parent, 1, ctx.zero()))
    assert zeroed != face_value  # the planted discontinuity at shift zero


def test_form_constructor_validates_indices():
    with pytest.raises(ValueError):
        constant_form(PAIR, 2, 2, 2, {(2, 1): [[1, 0], [0, 1]]})
    with pytest.raises(ValueError):
        constant_form(PAIR, 2, 2, 2, {(1, 3): [[1, 0], [0, 1]]})
    with pytest.raises(ValueError):
        constant_form(PAIR, 2, 2, 1, {(1, 2): [[1, 0], [0, 1]]})
    with pytest.raises(ValueError):
        DifferentialForm(degree=1, fiber_dim=2, groupoid=PAIR, base_dim=2)
