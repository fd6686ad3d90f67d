"""Analysis input documents (JSON) and their conversion to numeric objects.

Schema::

    {
      "algebra":   {"basis": ["e1", ...],
                    "brackets": [{"i": 0, "j": 1, "k": 2, "c": 1.0}, ...]},
      "metric":    "identity" | "neg_killing" | {"matrix": [[...]]} | {"diagonal": [...]},
      "subspace":  [[...], ...],                        optional
      "immersion": {"tangent_frame": [[...]], "normal_frame": [[...]],
                    "b": [[[...]]], "dH": [[...]]},     optional, dH optional
      "tasks":     ["validate", ...],
      "tolerance": 1e-9, "seed": 42, "lambda": 1.0      optional
    }

Bracket indices are 0-based integers or basis labels, with i < j.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidStructureConstants, ParseError, SchemaError
from .harmonicity import ImmersionPointData
from .lie_core import LieAlgebra, Subspace, killing_form
from .metric import InnerProduct, MetricLieAlgebra

TASKS = ("validate", "classify_structure", "harmonicity_eq1", "harmonicity_tg",
         "harmonicity_biinv", "theorem2", "witness", "nilpotent_geodesic")
METRIC_KEYWORDS = ("identity", "neg_killing")

_TOP_KEYS = {"algebra", "metric", "subspace", "immersion", "tasks", "tolerance", "seed", "lambda"}
_ALGEBRA_KEYS = {"basis", "brackets"}
_BRACKET_KEYS = {"i", "j", "k", "c"}
_IMMERSION_KEYS = {"tangent_frame", "normal_frame", "b", "dH"}

Matrix = tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class ImmersionSpec:
    tangent_frame: Matrix
    normal_frame: Matrix
    b: tuple[Matrix, ...]
    dH: Matrix | None = None


@dataclass(frozen=True)
class AnalysisDocument:
    basis: tuple[str, ...]
    brackets: tuple[tuple[int, int, int, float], ...]
    metric: str | Matrix = "identity"
    subspace: Matrix | None = None
    immersion: ImmersionSpec | None = None
    tasks: tuple[str, ...] = ("validate",)
    tolerance: float | None = None
    seed: int | None = None
    lam: float | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def lie_algebra(self) -> LieAlgebra:
        if "alg" not in self._cache:
            try:
                self._cache["alg"] = LieAlgebra.from_brackets(self.basis, self.brackets)
            except InvalidStructureConstants as exc:
                raise SchemaError(str(exc), "algebra.brackets") from exc
        return self._cache["alg"]

    def inner_product(self) -> InnerProduct:
        if self.metric == "identity":
            return InnerProduct.identity(self.dim)
        if self.metric == "neg_killing":
            return InnerProduct(-killing_form(self.lie_algebra()))
        return InnerProduct(np.array(self.metric))

    def metric_algebra(self) -> MetricLieAlgebra:
        return MetricLieAlgebra(self.lie_algebra(), self.inner_product())

    def tangent(self) -> Subspace | None:
        if self.subspace is None:
            return None
        return Subspace(np.array(self.subspace), self.dim)

    def immersion_data(self) -> ImmersionPointData | None:
        im = self.immersion
        if im is None:
            return None
        dh = None if im.dH is None else np.array(im.dH, dtype=float)
        t = np.array(im.tangent_frame, dtype=float)
        nrm = np.array(im.normal_frame, dtype=float).reshape(-1, self.dim)
        b = np.array(im.b, dtype=float).reshape(t.shape[0], t.shape[0], nrm.shape[0])
        return ImmersionPointData(t, nrm, b, dh)


def _number(x, key) -> float:
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise SchemaError(f"expected a number, got {x!r}", key)
    return float(x)


def _vector(x, key, length=None) -> tuple[float, ...]:
    if not isinstance(x, list):
        raise SchemaError("expected a list of numbers", key)
    out = tuple(_number(v, key) for v in x)
    if length is not None and len(out) != length:
        raise DimensionError(f"{key}: expected {length} entries, got {len(out)}")
    return out


def _matrix(x, key, cols=None) -> Matrix:
    if not isinstance(x, list):
        raise SchemaError("expected a list of rows", key)
    return tuple(_vector(row, key, cols) for row in x)


def _check_keys(obj, allowed, key):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", key)
    for k in obj:
        if k not in allowed:
            raise SchemaError("unknown key", f"{key}.{k}" if key else k)


def _index(x, labels, key) -> int:
    if isinstance(x, str):
        if x not in labels:
            raise SchemaError(f"unknown basis label {x!r}", key)
        return labels.index(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"expected an index or basis label, got {x!r}", key)
    if not 0 <= x < len(labels):
        raise DimensionError(f"{key}: index {x} out of range for dimension {len(labels)}")
    return x


def document_from_dict(data: dict) -> AnalysisDocument:
    _check_keys(data, _TOP_KEYS, "")
    if "algebra" not in data:
        raise SchemaError("missing required key", "algebra")
    alg = data["algebra"]
    _check_keys(alg, _ALGEBRA_KEYS, "algebra")
    labels = alg.get("basis")
    if not isinstance(labels, list) or not labels or not all(isinstance(s, str) for s in labels):
        raise SchemaError("expected a non-empty list of strings", "algebra.basis")
    if len(set(labels)) != len(labels):
        raise SchemaError("basis labels must be distinct", "algebra.basis")
    n = len(labels)
    entries = []
    for pos, e in enumerate(alg.get("brackets", [])):
        key = f"algebra.brackets[{pos}]"
        _check_keys(e, _BRACKET_KEYS, key)
        missing = _BRACKET_KEYS - set(e)
        if missing:
            raise SchemaError(f"missing {sorted(missing)}", key)
        i, j, k = (_index(e[s], labels, f"{key}.{s}") for s in "ijk")
        if i >= j:
            raise SchemaError(f"bracket entries need i < j, got i={i}, j={j}", key)
        entries.append((i, j, k, _number(e["c"], f"{key}.c")))
    if len({e[:3] for e in entries}) != len(entries):
        raise SchemaError("duplicate bracket entry", "algebra.brackets")

    metric = data.get("metric", "identity")
    if isinstance(metric, str):
        if metric not in METRIC_KEYWORDS:
            raise SchemaError(f"unknown metric keyword {metric!r}", "metric")
    elif isinstance(metric, dict):
        _check_keys(metric, {"matrix", "diagonal"}, "metric")
        if len(metric) != 1:
            raise SchemaError("give exactly one of 'matrix' or 'diagonal'", "metric")
        if "matrix" in metric:
            metric = _matrix(metric["matrix"], "metric.matrix", n)
            if len(metric) != n:
                raise DimensionError(f"metric.matrix: expected {n} rows, got {len(metric)}")
        else:
            diag = _vector(metric["diagonal"], "metric.diagonal", n)
            metric = tuple(tuple(diag[r] if r == c else 0.0 for c in range(n)) for r in range(n))
    else:
        raise SchemaError("expected a keyword or an object", "metric")

    subspace = None
    if data.get("subspace") is not None:
        subspace = _matrix(data["subspace"], "subspace", n)

    immersion = None
    if data.get("immersion") is not None:
        im = data["immersion"]
        _check_keys(im, _IMMERSION_KEYS, "immersion")
        for req in ("tangent_frame", "normal_frame"):
            if req not in im:
                raise SchemaError("missing required key", f"immersion.{req}")
        t = _matrix(im["tangent_frame"], "immersion.tangent_frame", n)
        nf = _matrix(im["normal_frame"], "immersion.normal_frame", n)
        if len(t) + len(nf) != n:
            raise DimensionError(f"immersion: {len(t)} tangent + {len(nf)} normal vectors != {n}")
        b_raw = im.get("b")
        if b_raw is None:
            b = tuple(tuple(tuple(0.0 for _ in nf) for _ in t) for _ in t)
        else:
            if not isinstance(b_raw, list) or len(b_raw) != len(t):
                raise DimensionError(f"immersion.b: expected {len(t)} x {len(t)} x {len(nf)} array")
            b = tuple(_matrix(row, "immersion.b", len(nf)) for row in b_raw)
            if any(len(row) != len(t) for row in b):
                raise DimensionError(f"immersion.b: expected {len(t)} x {len(t)} x {len(nf)} array")
        dh = None
        if im.get("dH") is not None:
            dh = _matrix(im["dH"], "immersion.dH", len(nf))
            if len(dh) != len(t):
                raise DimensionError(f"immersion.dH: expected {len(t)} rows")
        immersion = ImmersionSpec(t, nf, b, dh)

    tasks = data.get("tasks", ["validate"])
    if not isinstance(tasks, list) or not all(isinstance(t, str) for t in tasks):
        raise SchemaError("expected a list of task names", "tasks")
    for t in tasks:
        if t not in TASKS:
            raise SchemaError(f"unknown task {t!r}", "tasks")

    tol = data.get("tolerance")
    if tol is not None:
        tol = _number(tol, "tolerance")
        if tol <= 0:
            raise SchemaError("must be positive", "tolerance")
    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise SchemaError("expected an integer", "seed")
    lam = data.get("lambda")
    if lam is not None:
        lam = _number(lam, "lambda")

    return AnalysisDocument(tuple(labels), tuple(sorted(entries)), metric, subspace,
                            immersion, tuple(tasks), tol, seed, lam)


def parse_document(text: str) -> AnalysisDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return document_from_dict(data)


def document_to_dict(doc: AnalysisDocument) -> dict:
    out: dict = {
        "algebra": {
            "basis": list(doc.basis),
            "brackets": [{"i": i, "j": j, "k": k, "c": c} for i, j, k, c in doc.brackets],
        },
        "metric": doc.metric if isinstance(doc.metric, str) else {"matrix": [list(r) for r in doc.metric]},
    }
    if doc.subspace is not None:
        out["subspace"] = [list(r) for r in doc.subspace]
    if doc.immersion is not None:
        im = doc.immersion
        out["immersion"] = {
            "tangent_frame": [list(r) for r in im.tangent_frame],
            "normal_frame": [list(r) for r in im.normal_frame],
            "b": [[list(r) for r in mat] for mat in im.b],
        }
        if im.dH is not None:
            out["immersion"]["dH"] = [list(r) for r in im.dH]
    out["tasks"] = list(doc.tasks)
    if doc.tolerance is not None:
        out["tolerance"] = doc.tolerance
    if doc.seed is not None:
        out["seed"] = doc.seed
    if doc.lam is not None:
        out["lambda"] = doc.lam
    return out


def emit_document(doc: AnalysisDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2) + "\n"
