"""Named identity suites: every structural law ships as a seeded exact check.

A check draws its instances deterministically from the configured seed,
verifies an identity with zero tolerance (any nonzero rational discrepancy
fails), and reports serialized witnesses on failure.  The suite passes only
if every check has an empty failure list.

Groupoid/representation combinations: the adjoint transport lives on the
bundle groupoid and the gauge transport on the pair groupoid, so "all
representations" means the four compatible pairings (pair x trivial,
pair x gauge, bundle x trivial, bundle x adjoint) unless the configuration
restricts them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import serialize
from .forms import (
    broken_quadratic_form,
    classical_form,
    constant_form,
    eval_form,
    random_form,
    residue_trap_form,
    validate_form,
)
from .groupoid import (
    BUNDLE,
    PAIR,
    Microcube,
    TangentVector,
    axis,
    bracket,
    compose,
    degeneracy,
    face,
    permutation_sign,
    permute_slots,
    random_fraction,
    random_microcube,
    random_point,
    random_square_zero,
    random_tangent,
    scale_axis,
    shifted_face,
    star,
    tangent_add,
    tangent_eval,
    tangent_scale,
)
from .operators import d_contour, d_plus, d_times, mc_bracket_side, mc_defect
from .representations import (
    Representation,
    check_star_homomorphism,
    random_representation,
    transport,
)
from .weil import GeneratorContext, ResidueError, WeilMatrix, product

COMBOS = ((PAIR, "trivial"), (PAIR, "gauge"), (BUNDLE, "trivial"), (BUNDLE, "adjoint"))


@dataclass
class CheckConfig:
    """Shared knobs for every check; deterministic under ``seed``."""

    seed: int = 42
    trials: int = 50
    base_dim: int = 2
    fiber_dim: int = 2
    degrees: tuple[int, ...] = (0, 1, 2)
    representation: str | None = None
    groupoid: str | None = None
    bound: int = 3

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.base_dim < 1 or self.fiber_dim < 1:
            raise ValueError("dimensions must be at least 1")
        if any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be nonnegative")
        if self.groupoid is not None and self.groupoid not in (PAIR, BUNDLE):
            raise ValueError(f"unknown groupoid {self.groupoid!r}")
        if self.representation is not None and self.representation not in (
            "trivial",
            "adjoint",
            "gauge",
        ):
            raise ValueError(f"unknown representation {self.representation!r}")

    def to_payload(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "base_dim": self.base_dim,
            "fiber_dim": self.fiber_dim,
            "degrees": list(self.degrees),
            "representation": self.representation,
            "groupoid": self.groupoid,
            "bound": self.bound,
        }


@dataclass
class CheckReport:
    """Outcome of one named check; passing means no failures."""

    name: str
    trials: int
    failures: list = field(default_factory=list)
    millis: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_payload(self) -> dict:
        return {
            "check": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "millis": self.millis,
        }


_CHECKS: dict = {}


def _register(name):
    def deco(fn):
        _CHECKS[name] = fn
        return fn

    return deco


def check_names() -> tuple[str, ...]:
    return tuple(_CHECKS)


def run_check(name: str, cfg: CheckConfig) -> CheckReport:
    """Run one named check; deterministic pass/fail under the seed."""
    cfg.validate()
    if name not in _CHECKS:
        raise ValueError(f"unknown check name {name!r}")
    start = time.perf_counter()
    trials, failures = _CHECKS[name](cfg)
    millis = int((time.perf_counter() - start) * 1000)
    return CheckReport(name, trials, failures, millis)


def run_suite(cfg: CheckConfig) -> list[CheckReport]:
    """Run every check; the aggregate passes iff each one does."""
    return [run_check(name, cfg) for name in _CHECKS]


# -- helpers -------------------------------------------------------------------


def _rng(cfg: CheckConfig, name: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{name}")


def _groupoids(cfg: CheckConfig) -> list[str]:
    kinds = [k for k in (PAIR, BUNDLE) if cfg.groupoid in (None, k)]
    if not kinds:
        raise ValueError("configuration excludes every groupoid")
    return kinds


def _combos(cfg: CheckConfig) -> list[tuple[str, str]]:
    out = [
        (gk, rk)
        for gk, rk in COMBOS
        if cfg.groupoid in (None, gk) and cfg.representation in (None, rk)
    ]
    if not out:
        raise ValueError("configuration excludes every groupoid/representation pairing")
    return out


def _rep(rng: random.Random, kind: str, cfg: CheckConfig) -> Representation:
    return random_representation(rng, kind, cfg.fiber_dim, cfg.base_dim, min(cfg.bound, 2))


def _degrees(cfg: CheckConfig, kind: str, low: int, high: int) -> list[int]:
    cap = cfg.base_dim if kind == PAIR else cfg.fiber_dim ** 2
    return [d for d in cfg.degrees if low <= d <= high and d <= cap]


def _cube(rng, ctx, kind, arity, cfg) -> Microcube:
    return random_microcube(
        rng, ctx, kind, arity, cfg.base_dim, cfg.fiber_dim, cfg.bound
    )


def _cube_witness(trial: int, law: str, cube: Microcube, lhs, rhs, **extra) -> dict:
    w = {
        "trial": trial,
        "law": law,
        "microcube": serialize.microcube_to_payload(cube),
        "lhs": _render(lhs),
        "rhs": _render(rhs),
    }
    w.update(extra)
    return w


def _render(value):
    if isinstance(value, WeilMatrix):
        return serialize.matrix_to_payload(value)
    if isinstance(value, Microcube):
        return serialize.microcube_to_payload(value)
    return repr(value)


def _is_zero_matrix(m: WeilMatrix) -> bool:
    return m.is_zero


# -- structure checks -----------------------------------------------------------


@_register("simplicial")
def _check_simplicial(cfg: CheckConfig):
    rng = _rng(cfg, "simplicial")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            if trial % 2:
                cube = degeneracy(_cube(rng, ctx, kind, 2, cfg), rng.randint(1, 3))
            else:
                cube = _cube(rng, ctx, kind, 3, cfg)
            checks = []
            for i in range(1, 5):
                checks.append(("face-of-degeneracy", face(degeneracy(cube, i), i), cube))
            for j in range(1, 3):
                for i in range(j, 3):
                    checks.append(
                        (
                            "face-face",
                            face(face(cube, j), i),
                            face(face(cube, i + 1), j),
                        )
                    )
            for j in range(1, 5):
                for i in range(1, j + 1):
                    checks.append(
                        (
                            "degeneracy-degeneracy",
                            degeneracy(degeneracy(cube, j), i),
                            degeneracy(degeneracy(cube, i), j + 1),
                        )
                    )
            for j in range(1, 5):
                for i in range(1, 5):
                    if i < j:
                        checks.append(
                            (
                                "face-degeneracy",
                                face(degeneracy(cube, j), i),
                                degeneracy(face(cube, i), j - 1),
                            )
                        )
                    elif i > j:
                        checks.append(
                            (
                                "face-degeneracy",
                                face(degeneracy(cube, j), i),
                                degeneracy(face(cube, i - 1), j),
                            )
                        )
            for law, lhs, rhs in checks:
                if lhs != rhs:
                    failures.append(_cube_witness(trial, law, cube, lhs, rhs))
                    break
    return trials, failures


@_register("lemma41")
def _check_axis_of_face(cfg: CheckConfig):
    rng = _rng(cfg, "lemma41")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            arity = 2 + trial % 2
            cube = _cube(rng, ctx, kind, arity, cfg)
            for j in range(1, arity + 1):
                shrunk = face(cube, j)
                for i in range(1, arity):
                    lhs = axis(shrunk, i)
                    rhs = axis(cube, i + 1) if j <= i else axis(cube, i)
                    if lhs != rhs:
                        failures.append(
                            _cube_witness(trial, f"axis-of-face i={i} j={j}", cube, lhs, rhs)
                        )
    return trials, failures


@_register("lemma42")
def _check_shift_exchange(cfg: CheckConfig):
    rng = _rng(cfg, "lemma42")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            cube = _cube(rng, ctx, kind, 3, cfg)
            e = random_square_zero(rng, ctx, cfg.bound, rich=True)
            e2 = random_square_zero(rng, ctx, cfg.bound, rich=True)
            for j in range(1, 4):
                for i in range(j + 1, 4):
                    lhs = shifted_face(shifted_face(cube, i, e), j, e2)
                    rhs = shifted_face(shifted_face(cube, j, e2), i - 1, e)
                    if lhs != rhs:
                        failures.append(
                            _cube_witness(
                                trial,
                                f"shift-exchange i={i} j={j}",
                                cube,
                                lhs,
                                rhs,
                                shifts=[str(e), str(e2)],
                            )
                        )
    return trials, failures


@_register("lemma43")
def _check_transport_exchange(cfg: CheckConfig):
    rng = _rng(cfg, "lemma43")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            rep = _rep(rng, rep_kind, cfg)
            arity = 2 + trial % 2
            cube = _cube(rng, ctx, kind, arity, cfg)
            di = ctx.fresh() * random_fraction(rng, cfg.bound)
            dj = ctx.fresh() * random_fraction(rng, cfg.bound)
            for j in range(1, arity + 1):
                for i in range(j + 1, arity + 1):
                    lhs = transport(rep, axis(cube, i).evaluate([di])).inverse() @ transport(
                        rep, axis(shifted_face(cube, i, di), j).evaluate([dj])
                    ).inverse()
                    rhs = transport(rep, axis(cube, j).evaluate([dj])).inverse() @ transport(
                        rep, axis(shifted_face(cube, j, dj), i - 1).evaluate([di])
                    ).inverse()
                    if lhs != rhs:
                        failures.append(
                            _cube_witness(
                                trial,
                                f"transport-exchange i={i} j={j} rep={rep_kind}",
                                cube,
                                lhs,
                                rhs,
                            )
                        )
    return trials, failures


@_register("star_compat")
def _check_star(cfg: CheckConfig):
    rng = _rng(cfg, "star_compat")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            chi = _cube(rng, ctx, kind, 2, cfg)
            first_axis = axis(chi, 1)

            def family(d, _chi=chi):
                return shifted_face(_chi, 1, d)

            rebuilt = star(family, first_axis)
            if rebuilt != chi:
                failures.append(
                    _cube_witness(trial, "star-reconstruction", chi, rebuilt, chi)
                )
                continue
            e1, e2 = ctx.fresh_many(2)
            direct = rebuilt.evaluate([e1, e2])
            composed = compose(family(e1).evaluate([e2]), first_axis.evaluate([e1]))
            if direct != composed:
                failures.append(
                    _cube_witness(trial, "star-evaluation", chi, repr(direct), repr(composed))
                )
                continue
            rep = _rep(rng, rep_kind, cfg)
            ok, witness = check_star_homomorphism(rep, family, first_axis)
            if not ok:
                witness = dict(witness)
                witness.update({"trial": trial, "law": f"star-transport rep={rep_kind}"})
                failures.append(witness)
    return trials, failures


# -- tangent and bracket checks ----------------------------------------------------


@_register("bracket_oracle")
def _check_bracket_oracle(cfg: CheckConfig):
    rng = _rng(cfg, "bracket_oracle")
    trials = 0
    failures = []
    for k in sorted({cfg.fiber_dim, 3}):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            base = random_point(rng, ctx, cfg.base_dim, cfg.bound)
            t1 = random_tangent(rng, ctx, cfg.base_dim, k, cfg.bound, base=base)
            t2 = random_tangent(rng, ctx, cfg.base_dim, k, cfg.bound, base=base)
            value = bracket(t1, t2).matrix
            oracle = t2.matrix @ t1.matrix - t1.matrix @ t2.matrix
            if value != oracle:
                failures.append(
                    {
                        "trial": trial,
                        "law": f"bracket-commutator k={k}",
                        "replay": _bracket_replay(t1, t2),
                        "lhs": _render(value),
                        "rhs": _render(oracle),
                    }
                )
                continue
            a = random_fraction(rng, cfg.bound)
            linear = bracket(tangent_scale(t1, a), t2).matrix
            if linear != value.scale(a):
                failures.append(
                    {
                        "trial": trial,
                        "law": f"bracket-bilinearity k={k}",
                        "replay": _bracket_replay(tangent_scale(t1, a), t2),
                        "lhs": _render(linear),
                        "rhs": _render(value.scale(a)),
                    }
                )
    return trials, failures


def _bracket_replay(t1: TangentVector, t2: TangentVector) -> dict:
    return {
        "op": "bracket",
        "input": {
            "base_dim": len(t1.base),
            "fiber_dim": t1.fiber_dim,
            "tangents": [
                serialize.tangent_to_payload(t1),
                serialize.tangent_to_payload(t2),
            ],
        },
    }


@_register("jacobi")
def _check_jacobi(cfg: CheckConfig):
    rng = _rng(cfg, "jacobi")
    trials = 0
    failures = []
    for trial in range(cfg.trials):
        trials += 1
        ctx = GeneratorContext()
        base = random_point(rng, ctx, cfg.base_dim, cfg.bound)
        ts = [
            random_tangent(rng, ctx, cfg.base_dim, cfg.fiber_dim, cfg.bound, base=base)
            for _ in range(3)
        ]
        t1, t2, t3 = ts
        if not bracket(t1, t1).matrix.is_zero:
            failures.append({"trial": trial, "law": "self-bracket"})
            continue
        anti = bracket(t1, t2).matrix + bracket(t2, t1).matrix
        if not anti.is_zero:
            failures.append({"trial": trial, "law": "antisymmetry", "lhs": _render(anti)})
            continue
        total = (
            bracket(bracket(t1, t2), t3).matrix
            + bracket(bracket(t2, t3), t1).matrix
            + bracket(bracket(t3, t1), t2).matrix
        )
        if not total.is_zero:
            failures.append({"trial": trial, "law": "jacobi", "lhs": _render(total)})
    return trials, failures


@_register("tangent_add")
def _check_tangent_add(cfg: CheckConfig):
    rng = _rng(cfg, "tangent_add")
    trials = 0
    failures = []
    for trial in range(cfg.trials):
        trials += 1
        ctx = GeneratorContext()
        base = random_point(rng, ctx, cfg.base_dim, cfg.bound)
        t1 = random_tangent(rng, ctx, cfg.base_dim, cfg.fiber_dim, cfg.bound, base=base)
        t2 = random_tangent(rng, ctx, cfg.base_dim, cfg.fiber_dim, cfg.bound, base=base)
        d = ctx.fresh()
        summed = tangent_eval(tangent_add(t1, t2), d).element
        order_a = tangent_eval(t2, d).element @ tangent_eval(t1, d).element
        order_b = tangent_eval(t1, d).element @ tangent_eval(t2, d).element
        if summed != order_a or summed != order_b:
            failures.append(
                {
                    "trial": trial,
                    "law": "tangent-addition",
                    "lhs": _render(summed),
                    "rhs": _render(order_a),
                }
            )
            continue
        zero = TangentVector(base, WeilMatrix.zeros(ctx, cfg.fiber_dim))
        if tangent_add(t1, zero) != t1:
            failures.append({"trial": trial, "law": "additive-identity"})
    return trials, failures


@_register("tangent_inverse")
def _check_tangent_inverse(cfg: CheckConfig):
    rng = _rng(cfg, "tangent_inverse")
    trials = 0
    failures = []
    for trial in range(cfg.trials):
        trials += 1
        ctx = GeneratorContext()
        t = random_tangent(rng, ctx, cfg.base_dim, cfg.fiber_dim, cfg.bound)
        d = ctx.fresh()
        identity = WeilMatrix.identity(ctx, cfg.fiber_dim)
        fwd = tangent_eval(t, d).element
        bwd = tangent_eval(t, -d).element
        if bwd @ fwd != identity or fwd @ bwd != identity:
            failures.append(
                {
                    "trial": trial,
                    "law": "negated-evaluation-inverts",
                    "lhs": _render(bwd @ fwd),
                }
            )
    return trials, failures


# -- form checks ---------------------------------------------------------------------


@_register("form_axioms")
def _check_form_axioms(cfg: CheckConfig):
    rng = _rng(cfg, "form_axioms")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        for degree in _degrees(cfg, kind, 0, 2):
            form = random_form(rng, degree, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
            ok, wits = validate_form(form, rng.randrange(2**32), cfg.trials, cfg.bound)
            trials += cfg.trials
            if not ok:
                for w in wits:
                    w.update({"kind": kind, "degree": degree})
                failures.extend(wits)
        broken = broken_quadratic_form(rng, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
        ok, _ = validate_form(broken, rng.randrange(2**32), max(cfg.trials, 8), cfg.bound)
        trials += max(cfg.trials, 8)
        if ok:
            failures.append(
                {
                    "law": "broken-form-passed-validation",
                    "kind": kind,
                    "detail": "quadratic readout should fail homogeneity",
                }
            )
    return trials, failures


@_register("phi_conditions")
def _check_phi_conditions(cfg: CheckConfig):
    rng = _rng(cfg, "phi_conditions")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        for degree in _degrees(cfg, kind, 1, 2):
            for trial in range(cfg.trials):
                trials += 1
                ctx = GeneratorContext()
                form = random_form(rng, degree, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
                cube = _cube(rng, ctx, kind, degree, cfg)
                gens = ctx.fresh_many(degree)
                whole = product(gens, ctx)
                value = TangentVector(cube.base, eval_form(form, cube))
                a = Fraction(rng.randint(-cfg.bound, cfg.bound))
                slot = rng.randint(1, degree)
                scaled_val = TangentVector(
                    cube.base, eval_form(form, scale_axis(cube, slot, a))
                )
                lhs = tangent_eval(scaled_val, whole).element
                rhs = tangent_eval(value, whole * a).element
                if lhs != rhs:
                    failures.append(
                        _cube_witness(trial, "group-homogeneity", cube, lhs, rhs)
                    )
                    continue
                if degree >= 2:
                    i, j = sorted(rng.sample(range(degree), 2))
                    left = list(gens)
                    left[i] = left[i] * a
                    right = list(gens)
                    right[j] = right[j] * a
                    lhs = tangent_eval(value, product(left, ctx)).element
                    rhs = tangent_eval(value, product(right, ctx)).element
                    if lhs != rhs:
                        failures.append(
                            _cube_witness(trial, "slot-transfer", cube, lhs, rhs)
                        )
                        continue
                sigma = list(range(1, degree + 1))
                rng.shuffle(sigma)
                sign = permutation_sign(sigma)
                permuted_val = TangentVector(
                    cube.base, eval_form(form, permute_slots(cube, sigma))
                )
                lhs = tangent_eval(permuted_val, whole).element
                rhs = tangent_eval(value, whole).element
                if sign < 0:
                    rhs = rhs.inverse()
                if lhs != rhs:
                    failures.append(
                        _cube_witness(trial, "group-alternation", cube, lhs, rhs)
                    )
    return trials, failures


@_register("residue_negative")
def _check_residue_negative(cfg: CheckConfig):
    rng = _rng(cfg, "residue_negative")
    trials = 0
    failures = []
    for kind in _groupoids(cfg):
        trap = residue_trap_form(rng, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
        rep = Representation("trivial", cfg.fiber_dim)
        for operator, output in (("dplus", d_plus(trap, rep)), ("dtimes", d_times(trap, rep))):
            for trial in range(max(1, cfg.trials // 4)):
                trials += 1
                ctx = GeneratorContext()
                cube = _cube(rng, ctx, kind, 2, cfg)
                try:
                    eval_form(output, cube)
                except ResidueError:
                    continue
                failures.append(
                    _cube_witness(
                        trial,
                        f"residue-trap-not-detected op={operator}",
                        cube,
                        "no ResidueError",
                        "ResidueError",
                    )
                )
    return trials, failures


# -- operator checks ------------------------------------------------------------------


@_register("dplus_sq_zero")
def _check_dplus_square(cfg: CheckConfig):
    rng = _rng(cfg, "dplus_sq_zero")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for degree in _degrees(cfg, kind, 0, 1):
            for trial in range(cfg.trials):
                trials += 1
                ctx = GeneratorContext()
                rep = _rep(rng, rep_kind, cfg)
                form = random_form(rng, degree, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
                second = d_plus(d_plus(form, rep), rep)
                cube = _cube(rng, ctx, kind, degree + 2, cfg)
                value = eval_form(second, cube)
                if not value.is_zero:
                    failures.append(
                        _cube_witness(
                            trial,
                            f"dplus-square degree={degree} rep={rep_kind}",
                            cube,
                            value,
                            WeilMatrix.zeros(ctx, cfg.fiber_dim),
                            form=serialize.form_to_payload(form),
                        )
                    )
    return trials, failures


@_register("coincidence")
def _check_coincidence(cfg: CheckConfig):
    rng = _rng(cfg, "coincidence")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for degree in _degrees(cfg, kind, 1, 2):
            for trial in range(cfg.trials):
                trials += 1
                ctx = GeneratorContext()
                rep = _rep(rng, rep_kind, cfg)
                form = random_form(rng, degree, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
                cube = _cube(rng, ctx, kind, degree + 1, cfg)
                additive = eval_form(d_plus(form, rep), cube)
                multiplicative = eval_form(d_times(form, rep), cube)
                if additive != multiplicative:
                    failures.append(
                        _cube_witness(
                            trial,
                            f"coincidence degree={degree} rep={rep_kind}",
                            cube,
                            additive,
                            multiplicative,
                            form=serialize.form_to_payload(form),
                        )
                    )
    return trials, failures


@_register("order_indep")
def _check_order_independence(cfg: CheckConfig):
    rng = _rng(cfg, "order_indep")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for degree in _degrees(cfg, kind, 1, 2):
            for trial in range(cfg.trials):
                trials += 1
                ctx = GeneratorContext()
                rep = _rep(rng, rep_kind, cfg)
                form = random_form(rng, degree, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
                cube = _cube(rng, ctx, kind, degree + 1, cfg)
                forward = eval_form(d_times(form, rep), cube)
                backward = eval_form(d_times(form, rep, reverse_order=True), cube)
                if forward != backward:
                    failures.append(
                        _cube_witness(
                            trial,
                            f"order-independence degree={degree} rep={rep_kind}",
                            cube,
                            forward,
                            backward,
                            form=serialize.form_to_payload(form),
                        )
                    )
    return trials, failures


@_register("mc_formula")
def _check_mc_formula(cfg: CheckConfig):
    rng = _rng(cfg, "mc_formula")
    trials = 0
    failures = []
    for kind, rep_kind in _combos(cfg):
        for trial in range(cfg.trials):
            trials += 1
            ctx = GeneratorContext()
            rep = _rep(rng, rep_kind, cfg)
            form = random_form(rng, 1, kind, cfg.base_dim, cfg.fiber_dim, cfg.bound)
            cube = _cube(rng, ctx, kind, 2, cfg)
            defect = mc_defect(form, rep, cube)
            side = mc_bracket_side(form, cube)
            if defect != side:
                failures.append(
                    _cube_witness(
                        trial,
                        f"maurer-cartan rep={rep_kind}",
                        cube,
                        defect,
                        side,
                        form=serialize.form_to_payload(form),
                        replay={
                            "op": "mcdefect",
                            "input": {
                                "form": serialize.form_to_payload(form),
                                "representation": serialize.representation_to_payload(rep),
                                "microcube": serialize.microcube_to_payload(cube),
                            },
                        },
                    )
                )
    return trials, failures


@_register("closed_corollary")
def _check_closed_corollary(cfg: CheckConfig):
    if cfg.groupoid == BUNDLE or cfg.representation in ("adjoint", "gauge"):
        return 0, []
    rng = _rng(cfg, "closed_corollary")
    trials = 0
    failures = []
    rep = Representation("trivial", cfg.fiber_dim)
    for trial in range(cfg.trials):
        trials += 1
        ctx = GeneratorContext()
        matrices = {
            (j,): [
                [random_fraction(rng, cfg.bound) for _ in range(cfg.fiber_dim)]
                for _ in range(cfg.fiber_dim)
            ]
            for j in range(1, cfg.base_dim + 1)
        }
        form = constant_form(PAIR, cfg.base_dim, cfg.fiber_dim, 1, matrices)
        cube = _cube(rng, ctx, PAIR, 2, cfg)
        closed = eval_form(d_plus(form, rep), cube)
        if not closed.is_zero:
            failures.append(
                _cube_witness(trial, "constant-form-not-closed", cube, closed, "0")
            )
            continue
        multiplicative = eval_form(d_times(form, rep), cube)
        if not multiplicative.is_zero:
            failures.append(
                _cube_witness(trial, "closed-form-dtimes-nonzero", cube, multiplicative, "0")
            )
            continue
        contour = eval_form(d_contour(form, rep), cube)
        side = mc_bracket_side(form, cube)
        if contour != side:
            failures.append(
                _cube_witness(
                    trial,
                    "closed-contour-vs-bracket",
                    cube,
                    contour,
                    side,
                    form=serialize.form_to_payload(form),
                )
            )
    return trials, failures


@_register("classical_cross")
def _check_classical_cross(cfg: CheckConfig):
    if cfg.groupoid == BUNDLE or cfg.representation in ("adjoint", "gauge"):
        return 0, []
    rng = _rng(cfg, "classical_cross")
    trials = 0
    failures = []
    rep = Representation("trivial", cfg.fiber_dim)
    m = cfg.base_dim
    k = cfg.fiber_dim
    for trial in range(cfg.trials):
        trials += 1
        ctx = GeneratorContext()
        section = random_form(rng, 0, PAIR, m, k, cfg.bound)
        gradient = classical_form(
            PAIR,
            m,
            k,
            1,
            {
                (j,): _field_partial(section.coefficients[()], j - 1)
                for j in range(1, m + 1)
            },
            label="gradient-oracle",
        )
        path = _cube(rng, ctx, PAIR, 1, cfg)
        lhs = eval_form(d_plus(section, rep), path)
        rhs = eval_form(gradient, path)
        if lhs != rhs:
            failures.append(
                _cube_witness(
                    trial,
                    "degree0-exterior-derivative",
                    path,
                    lhs,
                    rhs,
                    form=serialize.form_to_payload(section),
                    replay={
                        "op": "dplus",
                        "input": {
                            "form": serialize.form_to_payload(section),
                            "representation": serialize.representation_to_payload(rep),
                            "microcube": serialize.microcube_to_payload(path),
                        },
                    },
                )
            )
            continue
        if m < 2:
            continue
        one_form = random_form(rng, 1, PAIR, m, k, cfg.bound)
        curl_coeffs = {}
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                curl_coeffs[(i, j)] = _field_sub(
                    _field_partial(one_form.coefficients[(j,)], i - 1),
                    _field_partial(one_form.coefficients[(i,)], j - 1),
                )
        curl = classical_form(PAIR, m, k, 2, curl_coeffs, label="curl-oracle")
        square = _cube(rng, ctx, PAIR, 2, cfg)
        lhs = eval_form(d_plus(one_form, rep), square)
        rhs = eval_form(curl, square)
        if lhs != rhs:
            failures.append(
                _cube_witness(
                    trial,
                    "degree1-exterior-derivative",
                    square,
                    lhs,
                    rhs,
                    form=serialize.form_to_payload(one_form),
                )
            )
    return trials, failures


def _field_partial(field_rows, index: int):
    return tuple(tuple(p.partial(index) for p in row) for row in field_rows)


def _field_sub(a, b):
    return tuple(
        tuple(pa - pb for pa, pb in zip(ra, rb)) for ra, rb in zip(a, b)
    )
