"""Task dispatch and report rendering (text and JSON)."""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .document import AnalysisDocument
from .errors import (InputError, InvalidStructureConstants, LieGaussError, MissingInput,
                     PreconditionError)
from .harmonicity import (HarmonicityReport, ImmersionPointData, classify_theorem2,
                          find_witness, residual_eq1, residual_eq1_2, residual_eq2,
                          residual_pr2)
from .lie_core import Subspace, center, derived_subalgebra, jacobi_residual, killing_form
from .metric import DEFAULT_TOL, biinvariance_residual
from .nilpotent import build_nilpotent, geodesic_gauss_verdict, nonsingular_probe
from .structure import (compact_split, generated_subalgebra, lie_triple_residual,
                        simple_ideals)

DEFAULT_SEED = 42
DEFAULT_LAMBDA = 1.0

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 2, 3, 4


@dataclass
class TaskEntry:
    task: str
    verdict: str
    details: dict = field(default_factory=dict)
    residuals: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    error: dict | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.error is None else self.error["exit_code"]

    def to_dict(self) -> dict:
        out = {"task": self.task, "verdict": self.verdict, "details": self.details,
               "residuals": self.residuals, "warnings": self.warnings}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class ReportDocument:
    inputs: dict
    entries: list[TaskEntry]

    @property
    def exit_code(self) -> int:
        return max((e.exit_code for e in self.entries), default=EXIT_OK)

    def to_dict(self) -> dict:
        return {"inputs": self.inputs, "tasks": [e.to_dict() for e in self.entries]}


@dataclass
class _Settings:
    tol: float
    seed: int
    lam: float


def metric_fingerprint(g: np.ndarray) -> str:
    text = ",".join(f"{x:.17g}" for x in np.asarray(g, dtype=float).ravel())
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _residual_dict(name: str, rep: HarmonicityReport) -> dict:
    return {"name": name, "criterion": rep.criterion_id.value, "max_abs": rep.max_abs,
            "harmonic": rep.harmonic, "tol": rep.tol,
            "entries": [[j, a, v] for j, a, v in rep.entries()]}


def _verdict(harmonic: bool) -> str:
    return "HARMONIC" if harmonic else "NOT HARMONIC"


def _rows(mat) -> list:
    return np.asarray(mat, dtype=float).tolist()


def _metric(doc: AnalysisDocument, s: _Settings):
    m = doc.metric_algebra()
    jac = jacobi_residual(m.alg)
    if jac > s.tol:
        raise InvalidStructureConstants(f"Jacobi identity fails (residual {jac:.3g})")
    return m


def _task_validate(doc, s, entry):
    alg = doc.lie_algebra()
    jac = jacobi_residual(alg)
    m = doc.metric_algebra()
    entry.details.update(
        dim=alg.dim, jacobi_residual=jac,
        biinvariance_residual=biinvariance_residual(m),
        metric_min_eigenvalue=float(np.linalg.eigvalsh(m.g)[0]))
    if doc.subspace is not None:
        entry.details["subspace_rank"] = doc.tangent().rank
    entry.verdict = "VALID" if jac <= s.tol else "INVALID"


def _task_classify_structure(doc, s, entry):
    m = _metric(doc, s)
    alg = m.alg
    z, der = center(alg), derived_subalgebra(alg)
    kil = killing_form(alg)
    ev = np.linalg.eigvalsh(kil)
    scale = max(float(np.max(np.abs(ev))), 1.0)
    d = entry.details
    d.update(center_dim=z.rank, center_basis=_rows(z.canonical_basis()),
             derived_dim=der.rank, killing_form=_rows(kil),
             killing_signature={"negative": int(np.sum(ev < -s.tol * scale)),
                                "zero": int(np.sum(np.abs(ev) <= s.tol * scale)),
                                "positive": int(np.sum(ev > s.tol * scale))},
             two_step_nilpotent=bool(not der.is_zero and z.contains(der, s.tol)))
    biinv = biinvariance_residual(m) <= s.tol
    d["biinvariant"] = biinv
    if biinv:
        split = compact_split(m, Subspace.whole(alg.dim), s.tol)
        ideals = simple_ideals(m, split.semisimple_part, np.random.default_rng(s.seed), s.tol)
        d.update(abelian_dim=split.abelian_part.rank, semisimple_dim=split.semisimple_part.rank,
                 simple_ideal_dims=[i.rank for i in ideals.ideals],
                 killing_multipliers=ideals.killing_multipliers)
    w = doc.tangent()
    if w is not None:
        lts = lie_triple_residual(alg, w)
        d["lie_triple_residual"] = lts
        if lts <= s.tol:
            d["generated_subalgebra_dim"] = generated_subalgebra(alg, w, s.tol).rank
    entry.verdict = "OK"


def _immersion(doc, m, entry) -> ImmersionPointData:
    d = doc.immersion_data()
    if d is None:
        w = doc.tangent()
        if w is None:
            raise MissingInput("task needs 'immersion' or 'subspace'")
        d = ImmersionPointData.totally_geodesic(m, w)
        entry.warnings.append("no immersion data: using totally geodesic frames from subspace (b = 0)")
    if d.dH_defaulted:
        entry.warnings.append("dH defaulted to zero")
    return d


def _tangent(doc, entry):
    w = doc.tangent()
    if w is None:
        raise MissingInput("task needs 'subspace'")
    return w


def _task_harmonicity_eq1(doc, s, entry):
    m = _metric(doc, s)
    rep = residual_eq1(m, _immersion(doc, m, entry), s.tol)
    entry.residuals.append(_residual_dict("eq1", rep))
    entry.verdict = _verdict(rep.harmonic)


def _task_harmonicity_biinv(doc, s, entry):
    m = _metric(doc, s)
    rep = residual_eq2(m, _immersion(doc, m, entry), s.tol)
    entry.residuals.append(_residual_dict("eq2", rep))
    entry.verdict = _verdict(rep.harmonic)


def _task_harmonicity_tg(doc, s, entry):
    m = _metric(doc, s)
    rep = residual_eq1_2(m, _tangent(doc, entry), s.tol)
    entry.residuals.append(_residual_dict("eq1_2", rep))
    entry.verdict = _verdict(rep.harmonic)


def _classification_details(cls) -> dict:
    return {
        "n_bar_dim": cls.n_bar.rank,
        "z_bar_dim": cls.split.abelian_part.rank,
        "n_bar_prime_dim": cls.split.semisimple_part.rank,
        "w_script_dim": cls.w_script.rank,
        "w_bar_dim": cls.w_bar.rank,
        "v_dim": cls.v.rank,
        "w_tilde_dim": cls.w_tilde.rank,
        "ideal_dims": [i.rank for i in cls.ideals.ideals],
        "ideal_bases": [_rows(i.canonical_basis()) for i in cls.ideals.ideals],
        "killing_multipliers": cls.ideals.killing_multipliers,
        "projection_dims": [p.rank for p in cls.projections],
        "case1": cls.case1_applies,
        "case2": cls.case2_applies,
        "case3": cls.case3_applies,
        "witness_l0": None if cls.witness_index is None else cls.witness_index + 1,
    }


def _task_theorem2(doc, s, entry):
    m = _metric(doc, s)
    w = _tangent(doc, entry)
    cls = classify_theorem2(m, w, np.random.default_rng(s.seed), s.tol)
    normal, tang = residual_pr2(m, w, s.tol)
    entry.details.update(_classification_details(cls))
    entry.residuals.append(_residual_dict("pr2_normal_form", normal))
    entry.residuals.append(_residual_dict("pr2_tangent_form", tang))
    if cls.case3_applies:
        try:
            wit = find_witness(m, cls, s.lam, s.tol)
        except LieGaussError as exc:
            entry.warnings.append(f"witness construction failed: {type(exc).__name__}: {exc}")
        else:
            entry.details.update(witness_lambda=wit.lam, witness_metric=_rows(wit.metric.g))
            entry.residuals.append(_residual_dict("witness_tangent_form", wit.tangent_form))
    entry.verdict = _verdict(tang.harmonic)


def _task_witness(doc, s, entry):
    m = _metric(doc, s)
    w = _tangent(doc, entry)
    cls = classify_theorem2(m, w, np.random.default_rng(s.seed), s.tol)
    wit = find_witness(m, cls, s.lam, s.tol)
    entry.details.update(witness_l0=cls.witness_index + 1, witness_lambda=wit.lam,
                         witness_metric=_rows(wit.metric.g),
                         witness_fingerprint=metric_fingerprint(wit.metric.g))
    entry.residuals.append(_residual_dict("witness_tangent_form", wit.tangent_form))
    entry.verdict = "WITNESS FOUND"


def _task_nilpotent_geodesic(doc, s, entry):
    m = _metric(doc, s)
    w = _tangent(doc, entry)
    if w.generators.shape[0] != 1:
        raise MissingInput("nilpotent_geodesic needs a subspace with exactly one direction vector")
    ns = build_nilpotent(m, s.tol)
    verdict = geodesic_gauss_verdict(ns, w.generators[0], s.tol)
    cross = residual_eq1_2(m, w, s.tol)
    probe = nonsingular_probe(ns, seed=s.seed, tol=s.tol)
    entry.details.update(
        center_dim=ns.z.rank, v_dim=ns.v.rank,
        x_part=_rows(verdict.x_part), z_part=_rows(verdict.z_part),
        jzx_norm=verdict.jzx_norm, residual_norm=verdict.residual_norm,
        eq1_2_residual_norm=float(np.linalg.norm(cross.residual)),
        one_parameter=verdict.one_parameter,
        nonsingular=probe.nonsingular_witnessed,
        singular_z=None if probe.singular_z is None else _rows(probe.singular_z))
    if probe.probabilistic and probe.nonsingular_witnessed:
        entry.warnings.append(f"nonsingularity is probabilistic ({probe.samples} samples)")
    entry.residuals.append(_residual_dict("eq1_2", cross))
    entry.verdict = _verdict(verdict.harmonic)


_DISPATCH = {
    "validate": _task_validate,
    "classify_structure": _task_classify_structure,
    "harmonicity_eq1": _task_harmonicity_eq1,
    "harmonicity_tg": _task_harmonicity_tg,
    "harmonicity_biinv": _task_harmonicity_biinv,
    "theorem2": _task_theorem2,
    "witness": _task_witness,
    "nilpotent_geodesic": _task_nilpotent_geodesic,
}


def _run_one(task: str, doc: AnalysisDocument, s: _Settings) -> TaskEntry:
    entry = TaskEntry(task, "")
    try:
        _DISPATCH[task](doc, s, entry)
    except LieGaussError as exc:
        if isinstance(exc, InputError):
            code = EXIT_INPUT
        elif isinstance(exc, PreconditionError):
            code = EXIT_PRECONDITION
        else:
            code = EXIT_NUMERICAL
        entry.verdict = "ERROR"
        entry.error = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        entry.verdict = "ERROR"
        entry.error = {"type": type(exc).__name__, "message": str(exc),
                       "exit_code": EXIT_NUMERICAL}
    return entry


def run_tasks(doc: AnalysisDocument, tol: float | None = None, seed: int | None = None,
              lam: float | None = None, tasks=None, workers: int = 4) -> ReportDocument:
    """Run every task in the document; explicit arguments override document fields."""
    s = _Settings(
        tol=tol if tol is not None else (doc.tolerance if doc.tolerance is not None else DEFAULT_TOL),
        seed=seed if seed is not None else (doc.seed if doc.seed is not None else DEFAULT_SEED),
        lam=lam if lam is not None else (doc.lam if doc.lam is not None else DEFAULT_LAMBDA))
    tasks = tuple(tasks) if tasks else doc.tasks
    inputs = {"dim": doc.dim, "basis": list(doc.basis), "tolerance": s.tol, "seed": s.seed,
              "lambda": s.lam, "subspace_given": doc.subspace is not None,
              "immersion_given": doc.immersion is not None}
    try:
        inputs["metric_fingerprint"] = metric_fingerprint(doc.inner_product().g)
    except LieGaussError as exc:
        inputs["metric_fingerprint"] = None
        inputs["metric_error"] = str(exc)
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(tasks) or 1))) as pool:
        entries = list(pool.map(lambda t: _run_one(t, doc, s), tasks))
    return ReportDocument(inputs, entries)


def _emit(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number in report: {x}")
        text = f"{x:.17g}"
        return text if any(ch in text for ch in ".e") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_to_json(report: ReportDocument) -> str:
    """Machine-readable report; floats carry 17 significant digits."""
    return _emit(report.to_dict()) + "\n"


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.15g}"
    if isinstance(x, list):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def report_to_text(report: ReportDocument) -> str:
    lines = []
    for e in report.entries:
        lines.append(f"TASK {e.task}: {e.verdict}")
        if e.error is not None:
            lines.append(f"  error {e.error['type']}: {e.error['message']}")
        for key, val in e.details.items():
            lines.append(f"  {key} = {_fmt(val)}")
        for res in e.residuals:
            lines.append(f"  residual {res['name']} ({res['criterion']}): "
                         f"max_abs = {_fmt(res['max_abs'])}, {_verdict(res['harmonic']).lower()}")
            for j, a, v in res["entries"]:
                lines.append(f"    r[{j}][{a}] = {_fmt(v)}")
        for w in e.warnings:
            lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"
