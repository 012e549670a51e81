"""JSON wire formats for fields, matrices, box specs, and QCSA parameters.

Every document the CLI emits can be loaded back through these functions;
box specs re-derive their extension on load and are fully revalidated.
"""

from __future__ import annotations

from typing import Any

from .errors import DimMismatchError, NsumboxError
from .gf import FieldParams
from .matfq import MatrixFq
from .qcsa import QcsaParams, make_qcsa_params
from .sumbox import SumBoxSpec, build_box


class FormatError(NsumboxError, ValueError):
    """Malformed JSON document."""


def _need(obj: dict, key: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing key {key!r}")
    return obj[key]


def field_to_json(field: FieldParams) -> dict:
    return field.to_json()


def field_from_json(obj: dict) -> FieldParams:
    try:
        return FieldParams(_need(obj, "p"), _need(obj, "r"), _need(obj, "modulus"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, NsumboxError):
            raise
        raise FormatError(f"bad field object: {exc}") from exc


def matrix_to_json(m: MatrixFq) -> dict:
    return {
        "field": field_to_json(m.field),
        "rows": m.rows,
        "cols": m.cols,
        "data": m.tolist(),
    }


def matrix_from_json(obj: dict, field: FieldParams | None = None) -> MatrixFq:
    if field is None:
        field = field_from_json(_need(obj, "field"))
    data = _need(obj, "data")
    try:
        m = MatrixFq(field, data)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix data: {exc}") from exc
    if m.shape != (_need(obj, "rows"), _need(obj, "cols")):
        raise FormatError("matrix data disagrees with declared shape")
    return m


def spec_to_json(spec: SumBoxSpec) -> dict:
    return {
        "field": field_to_json(spec.field),
        "n": spec.n,
        "kappa": spec.kappa,
        "g": matrix_to_json(spec.g),
        "h": matrix_to_json(spec.h),
        "m": matrix_to_json(spec.m),
    }


def spec_from_json(obj: dict) -> SumBoxSpec:
    field = field_from_json(_need(obj, "field"))
    g = matrix_from_json(_need(obj, "g"), field)
    h = matrix_from_json(_need(obj, "h"), field)
    spec = build_box(g, h)  # re-derives gperp and revalidates everything
    if spec.n != _need(obj, "n") or spec.kappa != _need(obj, "kappa"):
        raise FormatError("spec dimensions disagree with g/h")
    m = matrix_from_json(_need(obj, "m"), field)
    if spec.m != m:
        raise FormatError("stored transfer matrix disagrees with (g, h)")
    return spec


def qcsa_params_to_json(params: QcsaParams) -> dict:
    return {
        "field": field_to_json(params.field),
        "N": params.n,
        "L": params.l,
        "alpha": list(params.alpha),
        "u": list(params.beta),
        "f": list(params.f),
    }


def qcsa_params_from_json(obj: dict) -> QcsaParams:
    field = field_from_json(_need(obj, "field"))
    return make_qcsa_params(
        field,
        _need(obj, "N"),
        _need(obj, "L"),
        _need(obj, "alpha"),
        _need(obj, "u"),
        _need(obj, "f"),
    )
