"""Labeled examples and input validation helpers."""

from dataclasses import dataclass

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import DataError, DimensionMismatch, SingleClassInput

NEGATIVE, POSITIVE = -1, 1


@dataclass(frozen=True)
class LabeledExample:
    """A feature vector together with a label in {-1, +1}."""

    features: tuple
    label: int

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(float(v) for v in np.ravel(self.features)))
        if self.label not in (NEGATIVE, POSITIVE):
            raise DataError(f"label must be -1 or +1, got {self.label!r}")
        object.__setattr__(self, "label", int(self.label))


def to_examples(X, y):
    """Convert arrays ``X`` (m, n) and ``y`` (m,) to a list of :class:`LabeledExample`."""
    X, y = check_labeled(X, y, require_both=False)
    return [LabeledExample(tuple(row), int(lab)) for row, lab in zip(X, y)]


def _as_matrix(X):
    if isinstance(X, (list, tuple)) and X and all(np.ndim(r) == 1 for r in X):
        lengths = {len(r) for r in X}
        if len(lengths) > 1:
            raise DimensionMismatch(f"feature vectors have differing lengths {sorted(lengths)}")
    try:
        return check_array(X, dtype=float, ensure_2d=True)
    except ValueError as exc:
        if "inhomogeneous" in str(exc):
            raise DimensionMismatch(str(exc)) from exc
        raise DataError(str(exc)) from exc


def check_labeled(X, y=None, *, require_both=True):
    """Validate a labeled sample.

    ``X`` may be a 2-D array-like with ``y`` a matching label vector, or a
    sequence of :class:`LabeledExample` with ``y`` omitted.

    Returns
    -------
    X : ndarray of shape (m, n), float
    y : ndarray of shape (m,), int, entries in {-1, +1}
    """
    if y is None:
        examples = list(X)
        if not examples:
            raise DataError("no examples given")
        if not all(isinstance(e, LabeledExample) for e in examples):
            raise DataError("labels are required")
        lengths = {len(e.features) for e in examples}
        if len(lengths) > 1:
            raise DimensionMismatch(f"feature vectors have differing lengths {sorted(lengths)}")
        X = np.array([e.features for e in examples], dtype=float)
        y = np.array([e.label for e in examples], dtype=int)
    else:
        X = _as_matrix(X)
        y_arr = np.asarray(y)
        if y_arr.ndim != 1 or y_arr.shape[0] != X.shape[0]:
            raise DimensionMismatch(f"{X.shape[0]} feature rows but labels of shape {y_arr.shape}")
        if not np.all(np.isin(y_arr, (NEGATIVE, POSITIVE))):
            raise DataError("labels must be -1 or +1")
        y = y_arr.astype(int)
    if X.shape[0] == 0:
        raise DataError("no examples given")
    if require_both and not (np.any(y == POSITIVE) and np.any(y == NEGATIVE)):
        raise SingleClassInput("examples must contain both positive and negative labels")
    return X, y


def check_point(x, n_features):
    """Validate a single feature vector of length ``n_features``."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != n_features:
        raise DimensionMismatch(f"expected {n_features} features, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise DataError("feature vector contains non-finite values")
    return x


def check_points(X, n_features):
    """Validate a batch of feature vectors against ``n_features`` columns."""
    X = _as_matrix(X)
    if X.shape[1] != n_features:
        raise DimensionMismatch(f"expected {n_features} features, got {X.shape[1]}")
    return X


def has_duplicates(X, y):
    """True when two rows agree in every feature and in the label."""
    Z = np.column_stack([np.asarray(X, dtype=float), np.asarray(y, dtype=float)])
    return np.unique(Z, axis=0).shape[0] < Z.shape[0]
