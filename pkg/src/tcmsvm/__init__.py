"""Transductive confidence machine built on a squared-slack soft-margin SVM."""

from .base import NEGATIVE, POSITIVE, LabeledExample, check_labeled
from .data import Dataset, SynthConfig, generate_synthetic, load_examples, split_dataset, write_examples
from .evaluation import (
    CalibrationRow, EvaluationReport, calibration_experiment, evaluate_testset, export_scatter,
)
from .exceptions import (
    ConvergenceFailure, DataError, DimensionMismatch, DuplicateExamples, InternalError,
    InvalidDelta, LemmaTwoViolation, NumericalError, ParseError, SingleClassInput, SplitError,
    TCMError, TooLarge, TooManyNewPoints,
)
from .impossibility import (
    Hyperset, MeasureConfig, MultiExampleMeasure, SVCountMeasure, WeightFunction,
    WeightedAlphaMeasure, critical_region_measure, exchangeable_validity_oracle, make_measure,
    multi_example_measure, permutation_validity_oracle, sv_count_measure, weighted_alpha_measure,
)
from .kernels import KernelConfig
from .svm import (
    L2SoftMarginSVC, SolverConfig, SvmSolution, decision_value, is_essential_support_vector,
    solve_soft_margin, support_vector_set,
)
from .transduction import (
    UNDECIDED, JointPrediction, PictureDiagnostics, RegionLabel, TransductiveConfidenceClassifier,
    TransductiveResult, classify_region, confidence_for, possibility_of, transduce, transduce_joint,
)

__version__ = "0.1.0"
