from .estimator import (
    DEFAULT_SCHEDULE,
    ComplexityVerdict,
    EstimatorConfig,
    InputCache,
    Relation,
    TimingCurve,
    estimate_class,
    fit_residuals,
    measure_curve,
)
from .judge import ComplexityJudge, EmpiricalJudge, ExternalJudge, judge_complexity
from ..lattice import FITTABLE, ComplexityClass, Order, compare_classes

__all__ = [
    "DEFAULT_SCHEDULE",
    "FITTABLE",
    "ComplexityClass",
    "ComplexityJudge",
    "ComplexityVerdict",
    "EmpiricalJudge",
    "EstimatorConfig",
    "ExternalJudge",
    "InputCache",
    "Order",
    "Relation",
    "TimingCurve",
    "compare_classes",
    "estimate_class",
    "fit_residuals",
    "judge_complexity",
    "measure_curve",
]
