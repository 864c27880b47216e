import random
from fractions import Fraction

import pytest

from weilforms.groupoid import (
    BUNDLE,
    PAIR,
    GroupArrow,
    PairArrow,
    axis,
    compose,
    identity_arrow,
    random_microcube,
    random_point,
    random_square_zero,
    shifted_face,
)
from weilforms.poly import parse_polynomial, poly_matrix_from_scalars
from weilforms.representations import (
    Representation,
    apply_fiber_map,
    check_star_homomorphism,
    random_representation,
    transport,
)
from weilforms.weil import GeneratorContext, WeilMatrix


@pytest.fixture
def ctx():
    return GeneratorContext()


def _gauge_with_field(strings, base_dim, k):
    field = tuple(
        tuple(parse_polynomial(s, base_dim) for s in row) for row in strings
    )
    return Representation("gauge", k, field)


def test_identity_arrow_transports_to_identity(ctx):
    rng = random.Random(0)
    point = random_point(rng, ctx, 2, 3)
    gauge = random_representation(rng, "gauge", 2, 2)
    adjoint = Representation("adjoint", 2)
    assert transport(gauge, identity_arrow(PAIR, point)) == WeilMatrix.identity(ctx, 4)
    assert transport(adjoint, identity_arrow(BUNDLE, point, 2)) == WeilMatrix.identity(
        ctx, 4
    )


def test_adjoint_fixes_central_elements(ctx):
    rng = random.Random(1)
    adjoint = Representation("adjoint", 2)
    cube = random_microcube(rng, ctx, BUNDLE, 1, 2, 2)
    d = ctx.fresh()
    op = transport(adjoint, cube(d))
    central = WeilMatrix.from_scalar_rows(ctx, [[3, 0], [0, 3]])
    assert apply_fiber_map(op, central) == central


def test_adjoint_is_conjugation(ctx):
    rng = random.Random(2)
    adjoint = Representation("adjoint", 2)
    cube = random_microcube(rng, ctx, BUNDLE, 1, 2, 2, bound=3)
    d = ctx.fresh()
    g = cube(d).element
    op = transport(adjoint, cube(d))
    value = WeilMatrix.from_scalar_rows(ctx, [[1, 2], [3, 4]])
    assert apply_fiber_map(op, value) == g @ value @ g.inverse()


def test_gauge_transport_matches_direct_computation(ctx):
    # frame I + x1*N with N nilpotent; arrow x -> x + v*d
    strings = [["1", "0"], ["x1", "1"]]
    rep = _gauge_with_field(strings, 2, 2)
    d = ctx.fresh()
    x = (ctx.const(Fraction(1, 2)), ctx.const(3))
    v = (ctx.const(2), ctx.const(-1))
    arrow = PairArrow(x, (x[0] + v[0] * d, x[1] + v[1] * d))
    op = transport(rep, arrow)
    t_target = WeilMatrix([[ctx.one(), ctx.zero()], [x[0] + v[0] * d, ctx.one()]])
    t_source = WeilMatrix([[ctx.one(), ctx.zero()], [x[0], ctx.one()]])
    expected_m = t_target @ t_source.inverse()
    value = WeilMatrix.from_scalar_rows(ctx, [[1, 2], [3, 4]])
    assert apply_fiber_map(op, value) == expected_m @ value


def test_transport_functoriality_random_arrows(ctx):
    rng = random.Random(3)
    # pair groupoid, gauge transport
    gauge = random_representation(rng, "gauge", 2, 2)
    pts = [random_point(rng, ctx, 2, 2) for _ in range(3)]
    nil = random_square_zero(rng, ctx, 2, rich=True)
    pts = [tuple(c + nil * rng.randint(-2, 2) for c in p) for p in pts]
    h = PairArrow(pts[0], pts[1])
    g = PairArrow(pts[1], pts[2])
    assert transport(gauge, compose(g, h)) == transport(gauge, g) @ transport(gauge, h)
    # bundle groupoid, adjoint transport
    adjoint = Representation("adjoint", 2)
    cube = random_microcube(rng, ctx, BUNDLE, 2, 2, 2)
    d1, d2 = ctx.fresh_many(2)
    a1 = cube(d1, 0)
    a2 = GroupArrow(cube.base, cube(0, d2).element)
    assert transport(adjoint, compose(a1, a2)) == transport(adjoint, a1) @ transport(
        adjoint, a2
    )


def test_transport_constant_term_invertible(ctx):
    rng = random.Random(4)
    for kind, rep_kind in ((PAIR, "gauge"), (BUNDLE, "adjoint"), (PAIR, "trivial")):
        rep = random_representation(rng, rep_kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 1, 2, 2)
        d = ctx.fresh()
        op = transport(rep, cube(d))
        op.inverse()  # must not raise


def test_transport_kind_mismatch_rejected(ctx):
    rng = random.Random(5)
    gauge = random_representation(rng, "gauge", 2, 2)
    adjoint = Representation("adjoint", 2)
    pair_cube = random_microcube(rng, ctx, PAIR, 1, 2, 2)
    bundle_cube = random_microcube(rng, ctx, BUNDLE, 1, 2, 2)
    d = ctx.fresh()
    with pytest.raises(ValueError):
        transport(gauge, bundle_cube(d))
    with pytest.raises(ValueError):
        transport(adjoint, pair_cube(d))


def test_gauge_needs_field():
    with pytest.raises(ValueError):
        Representation("gauge", 2)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        Representation("mystery", 2)


@pytest.mark.parametrize("kind,rep_kind", [
    (PAIR, "trivial"),
    (PAIR, "gauge"),
    (BUNDLE, "trivial"),
    (BUNDLE, "adjoint"),
])
def test_star_homomorphism_all_kinds(ctx, kind, rep_kind):
    rng = random.Random(6)
    rep = random_representation(rng, rep_kind, 2, 2)
    for _ in range(5):
        chi = random_microcube(rng, ctx, kind, 2, 2, 2)
        t = axis(chi, 1)
        ok, witness = check_star_homomorphism(
            rep, lambda d, _chi=chi: shifted_face(_chi, 1, d), t
        )
        assert ok, witness


def test_transport_exchange_parametrized(ctx):
    # the two ways of unthreading two slots agree, inverse-composed
    rng = random.Random(7)
    for kind, rep_kind in ((PAIR, "gauge"), (BUNDLE, "adjoint")):
        rep = random_representation(rng, rep_kind, 2, 2)
        cube = random_microcube(rng, ctx, kind, 3, 2, 2)
        di = random_square_zero(rng, ctx, 2)
        dj = random_square_zero(rng, ctx, 2)
        for j in (1, 2):
            for i in range(j + 1, 4):
                lhs = transport(rep, axis(cube, i)(di)).inverse() @ transport(
                    rep, axis(shifted_face(cube, i, di), j)(dj)
                ).inverse()
                rhs = transport(rep, axis(cube, j)(dj)).inverse() @ transport(
                    rep, axis(shifted_face(cube, j, dj), i - 1)(di)
                ).inverse()
                assert lhs == rhs
