"""Backend dispatch for the GF(q) matrix kernels.

The compiled core (``nsumbox._fastkernels``, Cython) is used when it was
built and the field is in its supported range: prime fields with p < 2^31,
or extension fields with full lookup tables (q <= 512).  Everything else,
or ``NSUMBOX_BACKEND=pure``, routes to the numpy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from ..gf import FieldParams
from . import pure

try:
    from .. import _fastkernels as _fast
except ImportError:  # extension not built
    _fast = None

_MODE = os.environ.get("NSUMBOX_BACKEND", "auto").lower()
if _MODE not in ("auto", "compiled", "pure"):
    raise RuntimeError(f"NSUMBOX_BACKEND must be auto|compiled|pure, got {_MODE!r}")
if _MODE == "compiled" and _fast is None:
    raise RuntimeError("NSUMBOX_BACKEND=compiled but nsumbox._fastkernels is not built")


def active_backend() -> str:
    """'compiled' if the extension is in use, else 'pure'."""
    if _MODE == "pure" or _fast is None:
        return "pure"
    return "compiled"


def _fast_usable(field: FieldParams) -> bool:
    if active_backend() != "compiled":
        return False
    if field.r == 1:
        return True
    if field.q <= 512:
        field.build_tables()
        return True
    return False


def _c(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def matmul(field: FieldParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if _fast_usable(field):
        if field.r == 1:
            return _fast.matmul_prime(_c(a), _c(b), field.p)
        return _fast.matmul_table(_c(a), _c(b), field._add_t, field._mul_t)
    return pure.matmul(field, a, b)


def rref(field: FieldParams, a: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    if _fast_usable(field):
        if field.r == 1:
            return _fast.rref_prime(_c(a), field.p)
        return _fast.rref_table(
            _c(a), field._add_t, field._mul_t, field._neg_t, field._inv_t
        )
    return pure.rref(field, a)
