"""monoxp: abductive and contrastive explanations for monotonic classifiers.

The library treats a classifier as a black box over a bounded ordinal
feature space with totally ordered classes. Given an instance it computes
one subset-minimal abductive explanation (a feature set whose instance
values force the prediction) or contrastive explanation (a feature set
whose freeing admits a different prediction) in at most 2N+2 oracle calls,
and enumerates the complete families of both with one satisfiability call
per explanation plus one to terminate.
"""

from .classifiers import (
    AppendixCnfClassifier,
    ClassifierOracle,
    CountingOracle,
    ExternalProcessOracle,
    GradeClassifier,
    LinearThresholdClassifier,
    MonotoneDnfClassifier,
    MonotonicityViolation,
    OracleError,
    probe_monotonicity,
    random_monotone_dnf,
)
from .domain import (
    ClassOrder,
    Explanation,
    ExplanationKind,
    FeatureDomain,
    FeatureSpace,
    Point,
    corner_points,
    make_point,
    point_leq,
    verify_axp,
    verify_cxp,
)
from .enumeration import (
    DualityCounterexample,
    EnumerationReport,
    InternalConsistencyError,
    brute_force_explanations,
    check_duality,
    enumerate_explanations,
)
from .explainer import (
    ExplainerState,
    NoCxpExists,
    SeedBreaksInvariant,
    find_axp,
    find_cxp,
    fix_attr,
    free_attr,
)
from .satcore import Clause, CnfFormula, solve, to_dimacs
from .specfile import SpecError, build_oracle, load_oracle

__version__ = "0.1.0"

__all__ = [
    "AppendixCnfClassifier",
    "ClassOrder",
    "ClassifierOracle",
    "Clause",
    "CnfFormula",
    "CountingOracle",
    "DualityCounterexample",
    "EnumerationReport",
    "Explanation",
    "ExplanationKind",
    "ExplainerState",
    "ExternalProcessOracle",
    "FeatureDomain",
    "FeatureSpace",
    "GradeClassifier",
    "InternalConsistencyError",
    "LinearThresholdClassifier",
    "MonotoneDnfClassifier",
    "MonotonicityViolation",
    "NoCxpExists",
    "OracleError",
    "Point",
    "SeedBreaksInvariant",
    "SpecError",
    "brute_force_explanations",
    "build_oracle",
    "check_duality",
    "corner_points",
    "enumerate_explanations",
    "find_axp",
    "find_cxp",
    "fix_attr",
    "free_attr",
    "load_oracle",
    "make_point",
    "point_leq",
    "probe_monotonicity",
    "random_monotone_dnf",
    "solve",
    "to_dimacs",
    "verify_axp",
    "verify_cxp",
]
