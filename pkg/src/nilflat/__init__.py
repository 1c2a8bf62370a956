"""Iterated circle bundles over nilmanifolds, exactly and numerically.

The exact layer (`algebra`, `bch`, `coords`, `tower`) models nilpotent
lattices over the rationals: validated structure constants, truncated
Baker–Campbell–Hausdorff products, Mal'cev coordinates, peeling a lattice
into a tower of central circle extensions, and deciding when two extension
cocycles give the same bundle.

The numerical layer (`metric`, `submersion`, `scan`, `certify`) puts
left-invariant metrics on the same data: sectional curvature, canonical
variations that shrink the circle fibers, O'Neill-tensor decompositions of
the varied curvature, seeded scans certifying the |K^t| <= |K_base| + C*sqrt(t)
bound, and a per-level collapse schedule driving sup|K| below a requested
epsilon with an explicit diameter bound.

`fileio` defines the JSON formats and `cli` the command-line front end.
"""

from .errors import (BasisNotAdapted, BoundViolated, BudgetNotMet,
                     ClassExceeded, DegeneratePlane, DimensionMismatch,
                     JacobiViolated, NilflatError, NotClosed, NotIntegral,
                     NotNilpotent, NotPositiveDefinite, NotSkew, SchemaError,
                     ValidationReport)
from .algebra import (NilAlgebra, algebra_center, basis_vec, check_adapted,
                      check_class, check_jacobi, lower_central_series,
                      validate_algebra, vec)
from .bch import BchTable, bch_inverse, bch_product, bch_table
from .coords import (MalcevWord, first_to_second, lattice_closed,
                     second_to_first, word_multiply)
from .tower import (BundleTower, CentralCocycle, CohomologyVerdict,
                    NilLattice, PeelChoice, TowerStep, check_closed,
                    check_integral, check_skew, cocycles_cohomologous,
                    extend_by_cocycle, extension_cocycle_value, group_center,
                    peel_step, peel_tower, pick_primitive_central)
from .metric import (LeftInvariantMetric, connection_coeffs,
                     curvature_tensor, sectional_curvature, structure_array)
from .submersion import (CanonicalVariation, OneillTensors, SubmersionSplit,
                         base_geometry, build_split, canonical_variation,
                         frame_metric, frame_structure, oneill_tensors)
from .scan import (DecayReport, PlaneSample, decomposition_check,
                   diameter_bound, lemma_scan, report_csv, report_summary,
                   sample_plane, sup_abs_sectional)
from .certify import (CertificateReport, assemble_metric,
                      certificate_summary, certify_almost_flat)
from . import catalog, fileio

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "NilflatError", "SchemaError", "DimensionMismatch", "NotNilpotent",
    "JacobiViolated", "ClassExceeded", "BasisNotAdapted", "NotSkew",
    "NotClosed", "NotIntegral", "NotPositiveDefinite", "DegeneratePlane",
    "BoundViolated", "BudgetNotMet", "ValidationReport",
    # exact layer
    "NilAlgebra", "vec", "basis_vec", "check_jacobi", "check_adapted",
    "check_class", "lower_central_series", "algebra_center",
    "validate_algebra", "BchTable", "bch_table", "bch_product", "bch_inverse",
    "MalcevWord", "first_to_second", "second_to_first", "word_multiply",
    "lattice_closed", "NilLattice", "PeelChoice", "CentralCocycle",
    "TowerStep", "BundleTower", "check_skew", "check_closed",
    "check_integral", "group_center", "pick_primitive_central", "peel_step",
    "peel_tower", "extend_by_cocycle", "CohomologyVerdict",
    "cocycles_cohomologous", "extension_cocycle_value",
    # numerical layer
    "LeftInvariantMetric", "structure_array", "connection_coeffs",
    "curvature_tensor", "sectional_curvature", "SubmersionSplit",
    "build_split", "CanonicalVariation", "canonical_variation",
    "frame_structure", "frame_metric", "OneillTensors", "oneill_tensors",
    "base_geometry", "PlaneSample", "sample_plane", "decomposition_check",
    "DecayReport", "lemma_scan", "diameter_bound", "report_csv",
    "report_summary", "sup_abs_sectional", "CertificateReport",
    "assemble_metric", "certify_almost_flat", "certificate_summary",
    # submodules
    "catalog", "fileio",
]
