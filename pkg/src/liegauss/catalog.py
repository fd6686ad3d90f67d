"""Builtin example algebras, metrics and subspaces."""

from __future__ import annotations

from .document import AnalysisDocument
from .errors import SchemaError, UnknownBuiltin

_SO3 = ((0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, 1.0))


def _parse_rows(text: str, n: int, key: str):
    rows = []
    for chunk in text.split(";"):
        try:
            row = tuple(float(x) for x in chunk.split(","))
        except ValueError as exc:
            raise SchemaError(f"bad number in {text!r}", key) from exc
        if len(row) != n:
            raise SchemaError(f"expected {n} comma-separated numbers per row", key)
        rows.append(row)
    return tuple(rows)


def _diag(values):
    n = len(values)
    return tuple(tuple(float(values[r]) if r == c else 0.0 for c in range(n)) for r in range(n))


def _so3():
    return dict(basis=("e1", "e2", "e3"), brackets=_SO3, metric="identity",
                tasks=("validate", "classify_structure"))


def _so3xso3(a: float = 2.0):
    shifted = tuple((i + 3, j + 3, k + 3, c) for i, j, k, c in _SO3)
    return dict(
        basis=("e1", "e2", "e3", "f1", "f2", "f3"),
        brackets=tuple(sorted(_SO3 + shifted)),
        metric=_diag([1.0, 1.0, 1.0, a * a, a * a, a * a]),
        # e1+f1, e2-f2, e3+f3
        subspace=((1.0, 0.0, 0.0, 1.0, 0.0, 0.0),
                  (0.0, 1.0, 0.0, 0.0, -1.0, 0.0),
                  (0.0, 0.0, 1.0, 0.0, 0.0, 1.0)),
        tasks=("validate", "theorem2"))


def _heisenberg3():
    return dict(basis=("X1", "X2", "Z"), brackets=((0, 1, 2, 1.0),), metric="identity",
                subspace=((1.0, 0.0, 1.0),), tasks=("validate", "nilpotent_geodesic"))


def _heisenberg5():
    return dict(basis=("X1", "X2", "X3", "X4", "Z"),
                brackets=((0, 1, 4, 1.0), (2, 3, 4, 1.0)), metric="identity",
                subspace=((1.0, 0.0, 0.0, 0.0, 1.0),), tasks=("validate", "nilpotent_geodesic"))


def _euclidean(n: int = 3):
    if n < 1:
        raise SchemaError("must be a positive integer", "n")
    return dict(basis=tuple(f"x{i + 1}" for i in range(n)), brackets=(), metric="identity",
                tasks=("validate", "classify_structure"))


def _so3_plus_r():
    return dict(basis=("e1", "e2", "e3", "t"), brackets=_SO3, metric="identity",
                tasks=("validate", "classify_structure"))


def _j_singular3():
    return dict(basis=("X1", "X2", "X3", "Z1", "Z2"),
                brackets=((0, 1, 3, 1.0), (0, 2, 4, 1.0)), metric="identity",
                subspace=((1.0, 0.0, 0.0, 1.0, 0.0),), tasks=("validate", "nilpotent_geodesic"))


BUILTINS = {
    "so3": (_so3, {}),
    "so3xso3": (_so3xso3, {"a": float}),
    "heisenberg3": (_heisenberg3, {}),
    "heisenberg5": (_heisenberg5, {}),
    "euclidean": (_euclidean, {"n": int}),
    "so3_plus_R": (_so3_plus_r, {}),
    "j_singular3": (_j_singular3, {}),
}


def builtin(name: str, params: dict | None = None) -> AnalysisDocument:
    """Catalog document by name.

    ``params`` holds builtin parameters (``a`` for so3xso3, ``n`` for
    euclidean) plus ``subspace`` (or ``v``), a ``;``-separated list of
    comma-separated rows replacing the preloaded subspace.
    """
    if name not in BUILTINS:
        raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
    factory, types = BUILTINS[name]
    params = dict(params or {})
    rows = params.pop("subspace", None)
    if "v" in params:
        rows = params.pop("v") if rows is None else rows
    kwargs = {}
    for key, value in params.items():
        if key not in types:
            raise SchemaError(f"unknown parameter for builtin {name!r}", key)
        try:
            kwargs[key] = types[key](value)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad value {value!r}", key) from exc
    fields = factory(**kwargs)
    if rows is not None:
        fields["subspace"] = (_parse_rows(rows, len(fields["basis"]), "subspace")
                              if isinstance(rows, str) else tuple(tuple(map(float, r)) for r in rows))
    return AnalysisDocument(**fields)
