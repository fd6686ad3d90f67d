"""Harmonicity of the Gauss map for submanifolds of Lie groups with left-invariant metrics."""

from .catalog import builtin
from .document import AnalysisDocument, emit_document, parse_document
from .harmonicity import (Criterion, HarmonicityReport, ImmersionPointData,
                          Theorem2Classification, classify_theorem2, find_witness,
                          residual_eq1, residual_eq1_2, residual_eq2, residual_pr2,
                          witness_metric)
from .lie_core import (LieAlgebra, Subspace, ad_matrix, bracket, center,
                       derived_subalgebra, jacobi_residual, killing_form)
from .metric import (InnerProduct, MetricLieAlgebra, biinvariance_residual, connection,
                     curvature, orthogonal_complement, orthonormalize)
from .nilpotent import (build_nilpotent, geodesic_gauss_verdict, j_operator,
                        nilpotent_connection, nonsingular_probe)
from .report import report_to_json, report_to_text, run_tasks
from .structure import (compact_split, generated_subalgebra, is_ideal, lie_triple_residual,
                        simple_ideals, subspace_intersect)

__version__ = "0.1.0"
