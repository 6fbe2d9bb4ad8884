"""specrange: spectra, numerical ranges, and boundary-eigenvalue
certificates for truncated lattice operators with complex potentials.

The pipeline: describe a potential symbolically (model), assemble the
truncated operator (model.assemble), compute its spectrum (linalg) and
numerical range (numrange), classify and certify boundary eigenvalues
(classify), decide truncation-independent absence criteria (criteria),
run 1D transfer-recurrence diagnostics (onedim), or manufacture certified
counterexamples (construct).  The cli module exposes all of it behind
scenario files with deterministic reports.
"""

__version__ = "0.1.0"

from ._kernels import kernel_backend
from .classify import (EigenClassification, NormalityVerdict, SplitVerdict,
                       box_limited, classify, hildebrandt_certificate,
                       split_certificate, support_extent)
from .config import DEFAULT_TOLERANCES, Tolerances
from .construct import (CounterexampleBuild, DesignedEigenfunction,
                        build_counterexample, contractive_tail_ratio,
                        design_eigenfunction, imag_potential_from_support,
                        real_potential_from_eigenfunction)
from .criteria import (CriteriaParams, CriteriaReport, CriterionResult,
                       Target, check_alternating, check_direction_decay,
                       check_full_decay, check_halfspace_support,
                       check_level_set_empty, check_pair_condition,
                       check_real_window, check_summability, evaluate_all)
from .exceptions import (BandRegimeError, BlowupError, CertificationError,
                         DecayCertificateError, DesignError,
                         DimensionLimitError, EigenSolverError,
                         EmptySupportError, HullDomainError,
                         NotHermitianError, ProvenanceError, SchemaError,
                         SpecrangeError)
from .linalg import EigenPair, eig_general, eig_hermitian
from .model import (Alternating1DPotential, ConstantPotential, DecayBound,
                    GeometricDecayPotential, LatticeBox, OperatorMatrix,
                    PotentialSpec, PowerDecayPotential, Provenance,
                    SeededRandomPotential, SumPotential, TablePotential,
                    TailInfo, assemble, imag_part, potential_bounds,
                    real_part)
from .numrange import NumericalRangeHull, compute_hull, support_function
from .onedim import (ContinuationResult, ShootingResult, SolutionTrace,
                     propagate, shooting_l2_test, trace_from_vector,
                     unique_continuation_check)
from .scenario import (Scenario, dumps_canonical, encode_potential,
                       encode_scenario, load_scenario, loads_scenario,
                       parse_potential, parse_scenario)

__all__ = [
    "__version__",
    "kernel_backend",
    "EigenClassification", "NormalityVerdict", "SplitVerdict",
    "box_limited", "classify", "hildebrandt_certificate",
    "split_certificate", "support_extent",
    "DEFAULT_TOLERANCES", "Tolerances",
    "CounterexampleBuild", "DesignedEigenfunction", "build_counterexample",
    "contractive_tail_ratio", "design_eigenfunction",
    "imag_potential_from_support", "real_potential_from_eigenfunction",
    "CriteriaParams", "CriteriaReport", "CriterionResult", "Target",
    "check_alternating", "check_direction_decay", "check_full_decay",
    "check_halfspace_support", "check_level_set_empty",
    "check_pair_condition", "check_real_window", "check_summability",
    "evaluate_all",
    "BandRegimeError", "BlowupError", "CertificationError",
    "DecayCertificateError", "DesignError", "DimensionLimitError",
    "EigenSolverError", "EmptySupportError", "HullDomainError",
    "NotHermitianError", "ProvenanceError", "SchemaError", "SpecrangeError",
    "EigenPair", "eig_general", "eig_hermitian",
    "Alternating1DPotential", "ConstantPotential", "DecayBound",
    "GeometricDecayPotential", "LatticeBox", "OperatorMatrix",
    "PotentialSpec", "PowerDecayPotential", "Provenance",
    "SeededRandomPotential", "SumPotential", "TablePotential", "TailInfo",
    "assemble", "imag_part", "potential_bounds", "real_part",
    "NumericalRangeHull", "compute_hull", "support_function",
    "ContinuationResult", "ShootingResult", "SolutionTrace", "propagate",
    "shooting_l2_test", "trace_from_vector", "unique_continuation_check",
    "Scenario", "dumps_canonical", "encode_potential", "encode_scenario",
    "load_scenario", "loads_scenario", "parse_potential", "parse_scenario",
]
