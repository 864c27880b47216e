"""File formats: exact-rational JSON payloads and TOML documents.

Rationals travel as decimal-free strings ``"p/q"`` (or ``"p"``); elements
as sorted term lists ``[{"monomial": [generator indices], "coeff": "p/q"}]``;
microcubes as ``{"groupoid", "arity", "base", "table"}`` with one block per
slot subset.  Classical forms and representations round-trip through
polynomial strings; operator outputs are evaluators and do not serialize.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .forms import DifferentialForm, classical_form
from .groupoid import BUNDLE, PAIR, Microcube, TangentVector
from .poly import Polynomial, parse_polynomial
from .representations import Representation
from .weil import GeneratorContext, WeilElement, WeilMatrix, indices_mask, mask_indices


def fraction_to_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"expected an integer or 'p/q' string, got {value!r}")


# -- elements ------------------------------------------------------------


def weil_to_payload(el: WeilElement) -> list[dict]:
    return [
        {"monomial": mask_indices(mask), "coeff": fraction_to_str(el.coeffs[mask])}
        for mask in sorted(el.coeffs, key=lambda m: (bin(m).count("1"), m))
    ]


def weil_from_payload(data, ctx: GeneratorContext) -> WeilElement:
    coeffs: dict[int, Fraction] = {}
    for term in data:
        mask = indices_mask(term["monomial"])
        coeff = parse_fraction(term["coeff"])
        if mask in coeffs:
            raise ValueError("duplicate monomial in element payload")
        if coeff:
            coeffs[mask] = coeff
    if coeffs:
        top = max(coeffs)
        ctx.ensure(top.bit_length())
    return WeilElement(ctx, coeffs)


def entry_to_payload(el: WeilElement):
    """Constant entries compress to a rational string."""
    if el.is_constant:
        return fraction_to_str(el.constant_term)
    return {"terms": weil_to_payload(el)}


def entry_from_payload(value, ctx: GeneratorContext) -> WeilElement:
    if isinstance(value, dict):
        return weil_from_payload(value["terms"], ctx)
    return ctx.const(parse_fraction(value))


def point_to_payload(point) -> list:
    return [entry_to_payload(e) for e in point]


def point_from_payload(data, ctx: GeneratorContext):
    return tuple(entry_from_payload(v, ctx) for v in data)


def matrix_to_payload(matrix: WeilMatrix) -> list[list]:
    return [[entry_to_payload(e) for e in row] for row in matrix.rows]


def matrix_from_payload(rows, ctx: GeneratorContext) -> WeilMatrix:
    return WeilMatrix([[entry_from_payload(v, ctx) for v in row] for row in rows])


# -- microcubes -------------------------------------------------------------


def microcube_to_payload(cube: Microcube) -> dict:
    table = []
    for mask in sorted(cube.table, key=lambda m: (bin(m).count("1"), m)):
        block = cube.table[mask]
        slots = [i + 1 for i in mask_indices(mask)]
        if cube.kind == PAIR:
            payload_block = point_to_payload(block)
        else:
            payload_block = matrix_to_payload(block)
        table.append({"monomial": slots, "block": payload_block})
    return {
        "groupoid": cube.kind,
        "arity": cube.arity,
        "base": point_to_payload(cube.base),
        "table": table,
    }


def microcube_from_payload(data: dict, ctx: GeneratorContext) -> Microcube:
    kind = data["groupoid"]
    if kind not in (PAIR, BUNDLE):
        raise ValueError(f"unknown groupoid kind {kind!r}")
    arity = int(data["arity"])
    base = point_from_payload(data["base"], ctx)
    table = {}
    for item in data["table"]:
        slots = item["monomial"]
        if any(not 1 <= s <= arity for s in slots):
            raise ValueError("table monomial slot out of range")
        mask = indices_mask([s - 1 for s in slots])
        if mask in table:
            raise ValueError("duplicate table monomial")
        if kind == PAIR:
            table[mask] = point_from_payload(item["block"], ctx)
        else:
            table[mask] = matrix_from_payload(item["block"], ctx)
    return Microcube(kind, arity, base, table)


# -- forms and representations ------------------------------------------------


def poly_matrix_to_payload(field) -> list[list[str]]:
    return [[p.to_string() for p in row] for row in field]


def poly_matrix_from_payload(rows, nvars: int):
    return tuple(tuple(parse_polynomial(s, nvars) for s in row) for row in rows)


def form_to_payload(form: DifferentialForm) -> dict:
    if not form.is_classical:
        raise ValueError("only classical form bodies serialize")
    return {
        "degree": form.degree,
        "fiber_dim": form.fiber_dim,
        "groupoid": form.groupoid,
        "base_dim": form.base_dim,
        "coefficients": [
            {"index": list(index), "matrix": poly_matrix_to_payload(field)}
            for index, field in sorted(form.coefficients.items())
        ],
    }


def form_from_payload(data: dict) -> DifferentialForm:
    base_dim = int(data["base_dim"])
    coefficients = {}
    for item in data["coefficients"]:
        index = tuple(int(c) for c in item["index"])
        coefficients[index] = poly_matrix_from_payload(item["matrix"], base_dim)
    return classical_form(
        data["groupoid"],
        base_dim,
        int(data["fiber_dim"]),
        int(data["degree"]),
        coefficients,
        label=data.get("label", "loaded"),
    )


def representation_to_payload(rep: Representation) -> dict:
    payload = {"kind": rep.kind, "fiber_dim": rep.fiber_dim}
    if rep.gauge_field is not None:
        payload["gauge"] = poly_matrix_to_payload(rep.gauge_field)
    return payload


def representation_from_payload(data: dict, base_dim: int) -> Representation:
    kind = data["kind"]
    gauge = None
    if kind == "gauge":
        if "gauge" not in data:
            raise ValueError("gauge representation payload needs a 'gauge' matrix")
        gauge = poly_matrix_from_payload(data["gauge"], base_dim)
    return Representation(kind, int(data["fiber_dim"]), gauge)


def tangent_to_payload(t: TangentVector) -> dict:
    return {"base": point_to_payload(t.base), "matrix": matrix_to_payload(t.matrix)}


def tangent_from_payload(data: dict, ctx: GeneratorContext) -> TangentVector:
    return TangentVector(
        point_from_payload(data["base"], ctx),
        matrix_from_payload(data["matrix"], ctx),
    )


# -- documents -----------------------------------------------------------------


def load_document(path) -> dict:
    """Read a JSON or TOML document by file extension."""
    path = Path(path)
    if path.suffix.lower() == ".toml":
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["version", "config", "pass", "checks"],
    "properties": {
        "version": {"type": "string"},
        "pass": {"type": "boolean"},
        "config": {
            "type": "object",
            "required": ["seed", "trials", "base_dim", "fiber_dim"],
            "properties": {
                "seed": {"type": "integer"},
                "trials": {"type": "integer", "minimum": 1},
                "base_dim": {"type": "integer", "minimum": 1},
                "fiber_dim": {"type": "integer", "minimum": 1},
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check", "trials", "failures", "millis"],
                "properties": {
                    "check": {"type": "string"},
                    "trials": {"type": "integer", "minimum": 0},
                    "failures": {"type": "array"},
                    "millis": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


def report_to_document(version: str, config: dict, reports) -> dict:
    return {
        "version": version,
        "config": config,
        "pass": all(not r.failures for r in reports),
        "checks": [r.to_payload() for r in reports],
    }


def dump_json(document: dict) -> str:
    """Canonical rendering: sorted keys, stable separators, trailing newline."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"
