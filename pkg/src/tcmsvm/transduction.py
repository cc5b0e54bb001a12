"""Two-picture transductive prediction with incertitude and possibility.

For a new point ``x`` the training set is completed twice, once with
``(x, -1)`` and once with ``(x, +1)``.  The measure of impossibility of each
completed sequence (the new example last) gives ``mu_y = 1 / p(picture_y)``.
The prediction is the label with the larger ``mu``; its incertitude is the
smaller ``mu`` and the possibility of the data is the larger one, reported
truncated at 1.
"""

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_is_fitted

from .base import NEGATIVE, POSITIVE, check_labeled, check_point, check_points, has_duplicates
from .exceptions import DataError, LemmaTwoViolation, SingleClassInput, TooManyNewPoints
from .impossibility import MeasureConfig, MultiExampleMeasure, SupportVectorMeasure, make_measure
from .kernels import KernelConfig
from .svm import SolverConfig, solve_soft_margin

UNDECIDED = 0
MAX_JOINT_POINTS = 8


class RegionLabel(enum.Enum):
    Y_POINT_POS = "y_point_pos"
    Y_POINT_NEG = "y_point_neg"
    BORDERLAND = "borderland"


@dataclass(frozen=True)
class PictureDiagnostics:
    """What happened in one picture (training set plus the labeled new point)."""

    label_tried: int
    sv_count: int
    new_point_is_sv: bool
    sv_fraction: float
    mu: float


@dataclass(frozen=True)
class TransductiveResult:
    """Prediction for one new point.

    ``prediction`` is -1, +1 or ``UNDECIDED`` (0).  Both ``mu`` values are
    kept so that the minimum and the maximum can be quoted together.
    """

    prediction: int
    incertitude: float
    confidence: float
    possibility: float
    mu_neg: float
    mu_pos: float
    pictures: tuple

    @property
    def negative_picture(self):
        return self.pictures[0]

    @property
    def positive_picture(self):
        return self.pictures[1]


def _as_measure(config):
    if isinstance(config, SupportVectorMeasure):
        return config
    return make_measure(config if config is not None else MeasureConfig())


def _picture(measure, X, y, x_new, label):
    Xp = np.vstack([X, x_new[None, :]])
    yp = np.append(y, label)
    solution = measure.solve(Xp, yp)
    support = measure.support_weights(solution) > 0
    n_sv = int(np.count_nonzero(support))
    mu = 0.0 if has_duplicates(Xp, yp) else measure.reciprocal_value(solution)
    return PictureDiagnostics(
        label_tried=label,
        sv_count=n_sv,
        new_point_is_sv=bool(support[-1]),
        sv_fraction=n_sv / len(yp),
        mu=mu,
    )


def predict_from_mus(mu_neg, mu_pos):
    """Label with the larger ``mu``; ``UNDECIDED`` on a finite tie."""
    if math.isinf(mu_neg) and math.isinf(mu_pos):
        raise LemmaTwoViolation("the new point is a support vector in neither picture")
    if mu_neg < mu_pos:
        return POSITIVE
    if mu_neg > mu_pos:
        return NEGATIVE
    return UNDECIDED


def transduce(X, y, x_new, config=None):
    """Predict the label of ``x_new`` with incertitude, confidence and possibility.

    Parameters
    ----------
    X, y : training examples, both labels present
    x_new : array-like of shape (n,)
    config : MeasureConfig or SupportVectorMeasure, default=SV count, linear kernel

    Returns
    -------
    TransductiveResult

    Raises
    ------
    SingleClassInput
    LemmaTwoViolation
        If the new point is a support vector in neither picture, which only
        happens when the solver tolerances are inadequate.
    """
    X, y = check_labeled(X, y)
    x_new = check_point(x_new, X.shape[1])
    measure = _as_measure(config)
    neg = _picture(measure, X, y, x_new, NEGATIVE)
    pos = _picture(measure, X, y, x_new, POSITIVE)
    prediction = predict_from_mus(neg.mu, pos.mu)
    incertitude = min(neg.mu, pos.mu)
    return TransductiveResult(
        prediction=prediction,
        incertitude=incertitude,
        confidence=1.0 - incertitude,
        possibility=min(1.0, max(neg.mu, pos.mu)),
        mu_neg=neg.mu,
        mu_pos=pos.mu,
        pictures=(neg, pos),
    )


def confidence_for(X, y, x_new, predicted_label, config=None):
    """Incertitude of an externally made prediction ``predicted_label``.

    This is ``mu`` of the opposite picture: ``#SV / (l + 1)`` there if the new
    point is a support vector in it, infinite otherwise.
    """
    if predicted_label not in (NEGATIVE, POSITIVE):
        raise DataError(f"predicted label must be -1 or +1, got {predicted_label!r}")
    X, y = check_labeled(X, y)
    x_new = check_point(x_new, X.shape[1])
    return _picture(_as_measure(config), X, y, x_new, -predicted_label).mu


def possibility_of(X, y, x_new, config=None):
    """``min(1, max(mu_neg, mu_pos))``, a property of the data alone."""
    return transduce(X, y, x_new, config).possibility


@dataclass(frozen=True)
class JointPrediction:
    """Joint labeling of several new points."""

    assignment: tuple
    incertitude: float
    # reciprocal measure (1/p) of every completion, keyed by the label tuple
    reciprocals: dict

    def incertitude_of(self, labels):
        """``1 / min p`` over the completions other than ``labels``."""
        labels = tuple(int(v) for v in labels)
        if labels not in self.reciprocals:
            raise KeyError(labels)
        return max(r for other, r in self.reciprocals.items() if other != labels)


def transduce_joint(X, y, new_points, config=None):
    """Jointly label ``k`` new points.

    Every completion ``(y_{l+1}, ..., y_{l+k})`` is scored by the multi-example
    measure.  The incertitude of an assignment is ``1 / min p`` over the other
    completions; the assignment with the smallest incertitude is returned,
    ties going to the earliest completion in the order of
    ``itertools.product((-1, 1), repeat=k)``.

    Raises
    ------
    TooManyNewPoints
        If ``k > 8``.
    """
    X, y = check_labeled(X, y)
    new_points = check_points(new_points, X.shape[1])
    k = new_points.shape[0]
    if k < 1:
        raise DataError("no new points given")
    if k > MAX_JOINT_POINTS:
        raise TooManyNewPoints(f"{k} new points need 2**{k} solves; the cap is {MAX_JOINT_POINTS}")
    config = config if config is not None else MeasureConfig(kind="multi_example")
    measure = MultiExampleMeasure(k, config.f, config.kernel, config.solver)
    Xc = np.vstack([X, new_points])
    recips = {}
    for labels in itertools.product((NEGATIVE, POSITIVE), repeat=k):
        yc = np.concatenate([y, labels])
        recips[labels] = measure.reciprocal(Xc, yc)
    joint = JointPrediction(None, math.inf, recips)
    best, best_inc = None, math.inf
    for labels in recips:
        inc = joint.incertitude_of(labels)
        if best is None or inc < best_inc:
            best, best_inc = labels, inc
    return JointPrediction(best, best_inc, recips)


def classify_region(solution, x):
    """Locate ``x`` relative to the margin of the training-set solution.

    ``Y_POINT_POS`` if the decision value exceeds ``1 + sv_tolerance``,
    ``Y_POINT_NEG`` if it is below ``-1 - sv_tolerance``, otherwise
    ``BORDERLAND`` (the boundary belongs to the borderland).
    """
    x = check_point(x, solution.n_features)
    f = float(solution.decision_function(x[None, :])[0])
    tol = solution.solver.sv_tolerance
    if f > 1.0 + tol:
        return RegionLabel.Y_POINT_POS
    if f < -1.0 - tol:
        return RegionLabel.Y_POINT_NEG
    return RegionLabel.BORDERLAND


class TransductiveConfidenceClassifier(ClassifierMixin, BaseEstimator):
    """Transductive SVM classifier reporting confidence and possibility.

    ``fit`` only stores the training set (and solves the inductive problem
    used for region classification and tie breaking); every prediction
    solves the two pictures of the query point.

    Parameters
    ----------
    C : float, default=1.0
    kernel : {'linear', 'poly', 'rbf'}, default='linear'
    degree : int, default=2
    coef0 : float, default=1.0
    gamma : float, default=1.0
    measure : {'sv_count', 'weighted_alpha'}, default='sv_count'
    weight : str, default='sign'
        Weight function of the ``'weighted_alpha'`` measure: ``'sign'``,
        ``'identity'`` or ``'power:q'``.
    kkt_tol : float, default=1e-8
    sv_tol : float, default=1e-6
    max_iter : int, default=100000
    """

    def __init__(self, C=1.0, kernel="linear", degree=2, coef0=1.0, gamma=1.0,
                 measure="sv_count", weight="sign", kkt_tol=1e-8, sv_tol=1e-6,
                 max_iter=100_000):
        self.C = C
        self.kernel = kernel
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.measure = measure
        self.weight = weight
        self.kkt_tol = kkt_tol
        self.sv_tol = sv_tol
        self.max_iter = max_iter

    def measure_config(self):
        return MeasureConfig(
            kind=self.measure,
            f=self.weight,
            kernel=KernelConfig(self.kernel, self.degree, self.coef0, self.gamma),
            solver=SolverConfig(self.C, self.kkt_tol, self.sv_tol, self.max_iter),
        )

    def fit(self, X, y):
        y = np.asarray(y)
        self.classes_ = unique_labels(y)
        if len(self.classes_) != 2:
            if len(self.classes_) < 2:
                raise SingleClassInput("both classes must be present")
            raise DataError(f"binary problems only, got {len(self.classes_)} classes")
        y_pm = np.where(y == self.classes_[1], POSITIVE, NEGATIVE)
        self.config_ = self.measure_config()
        self.X_train_, self.y_train_ = check_labeled(X, y_pm)
        self.n_features_in_ = self.X_train_.shape[1]
        self.solution_ = solve_soft_margin(self.X_train_, self.y_train_,
                                           self.config_.kernel, self.config_.solver)
        return self

    def _decode(self, labels):
        return self.classes_[(np.asarray(labels) > 0).astype(int)]

    def transduce(self, X):
        """One :class:`TransductiveResult` per row of ``X``."""
        check_is_fitted(self)
        X = check_points(X, self.n_features_in_)
        measure = make_measure(self.config_)
        return [transduce(self.X_train_, self.y_train_, x, measure) for x in X]

    def predict(self, X):
        """Transductive labels; undecided points take the inductive SVM's label."""
        check_is_fitted(self)
        X = check_points(X, self.n_features_in_)
        results = self.transduce(X)
        labels = np.array([r.prediction for r in results])
        tied = labels == UNDECIDED
        if np.any(tied):
            labels[tied] = np.where(self.solution_.decision_function(X[tied]) > 0,
                                    POSITIVE, NEGATIVE)
        return self._decode(labels)

    def predict_confidence(self, X):
        return np.array([r.confidence for r in self.transduce(X)])

    def predict_possibility(self, X):
        return np.array([r.possibility for r in self.transduce(X)])

    def decision_function(self, X):
        """Decision values of the inductive SVM solved on the training set."""
        check_is_fitted(self)
        return self.solution_.decision_function(X)

    def incertitude_of(self, X, y_pred):
        """Incertitude of arbitrary predictions ``y_pred`` (class labels)."""
        check_is_fitted(self)
        X = check_points(X, self.n_features_in_)
        y_pred = np.asarray(y_pred)
        if not np.all(np.isin(y_pred, self.classes_)):
            raise DataError("predictions must be among the fitted classes")
        measure = make_measure(self.config_)
        signs = np.where(y_pred == self.classes_[1], POSITIVE, NEGATIVE)
        return np.array([confidence_for(self.X_train_, self.y_train_, x, int(s), measure)
                         for x, s in zip(X, signs)])

    def predict_region(self, X):
        check_is_fitted(self)
        X = check_points(X, self.n_features_in_)
        return [classify_region(self.solution_, x) for x in X]
