"""Dynamic fault tree synthesis, CTMC translation, and safety measures."""

from dftsafe._core import (
    ApproxIteration,
    BoundInterval,
    Ctmc,
    Dft,
    DftError,
    MeasureResult,
    ParseError,
    ScenarioError,
    UndefinedMeasureError,
    ValidationError,
    approximate_mttf,
    approximate_unreliability,
    build_ctmc,
    compute_measure,
    compute_measure_with_evidence,
    parse_dft,
    rewrite,
    synthesize_scenario,
)

__all__ = [
    "ApproxIteration",
    "BoundInterval",
    "Ctmc",
    "Dft",
    "DftError",
    "MeasureResult",
    "ParseError",
    "ScenarioError",
    "UndefinedMeasureError",
    "ValidationError",
    "approximate_mttf",
    "approximate_unreliability",
    "build_ctmc",
    "compute_measure",
    "compute_measure_with_evidence",
    "parse_dft",
    "rewrite",
    "synthesize_scenario",
]
