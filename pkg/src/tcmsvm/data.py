"""Datasets: CSV input/output, synthetic Gaussian clouds, train/test splits."""

import csv
from dataclasses import dataclass

import numpy as np

from .base import NEGATIVE, POSITIVE, check_labeled, to_examples
from .exceptions import DataError, ParseError, SplitError


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labeled examples as arrays ``X`` (m, n) and ``y`` (m,) in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple = None
    source: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise DataError(f"incompatible shapes X{X.shape} y{y.shape}")
        if y.size and not np.all(np.isin(y, (NEGATIVE, POSITIVE))):
            raise DataError("labels must be -1 or +1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return len(self.y)

    @property
    def examples(self):
        return to_examples(self.X, self.y) if len(self) else []

    @property
    def n_features(self):
        return self.X.shape[1]

    def subset(self, idx, source=None):
        idx = np.asarray(idx, dtype=int)
        return Dataset(self.X[idx], self.y[idx], self.feature_names, source or self.source)


def _tokens(value):
    if isinstance(value, str):
        return {value.strip()}
    return {str(v).strip() for v in value}


def _is_float(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_examples(path, label_column=-1, positive_token=("1", "+1"), negative_token="-1",
                  header=None, labeled=True):
    """Read a comma-separated file of feature columns and one label column.

    Parameters
    ----------
    path : str or path-like
    label_column : int, default=-1
        Position of the label column; negative values count from the end.
    positive_token, negative_token : str or collection of str
        Label spellings mapped to +1 and -1.
    header : bool or None, default=None
        Whether the first row holds column names.  ``None`` detects a header
        from non-numeric feature fields in the first row.
    labeled : bool, default=True
        With ``False`` every column is a feature and the labels are zero.

    Raises
    ------
    ParseError
        Empty file, ragged rows, non-numeric features or unknown labels.
    """
    pos, neg = _tokens(positive_token), _tokens(negative_token)
    if pos & neg:
        raise ValueError(f"tokens {sorted(pos & neg)} are both positive and negative")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [[c.strip() for c in row] for row in csv.reader(fh) if any(c.strip() for c in row)]
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: empty file")
    width = len(rows[0])
    if labeled and width < 2:
        raise ParseError(f"{path}: need at least one feature column and a label column")
    label_col = (label_column % width) if labeled else None

    def feature_fields(row):
        return [c for j, c in enumerate(row) if j != label_col]

    if header is None:
        header = not all(_is_float(c) for c in feature_fields(rows[0]))
    names = tuple(feature_fields(rows[0])) if header else None
    body = rows[1:] if header else rows
    if not body:
        raise ParseError(f"{path}: no data rows")

    X, y = [], []
    for lineno, row in enumerate(body, start=2 if header else 1):
        if len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        try:
            X.append([float(c) for c in feature_fields(row)])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-numeric feature ({exc})") from exc
        if not labeled:
            y.append(0)
            continue
        token = row[label_col]
        if token in pos:
            y.append(POSITIVE)
        elif token in neg:
            y.append(NEGATIVE)
        else:
            raise ParseError(f"{path}:{lineno}: unknown label token {token!r}")
    X = np.array(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ParseError(f"{path}: non-finite feature values")
    if not labeled:
        return X
    return Dataset(X, np.array(y, dtype=int), names, str(path))


def write_examples(dataset, path, header=True):
    """Write features then the label; reals use ``repr`` so reloading is exact."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            names = dataset.feature_names or tuple(f"x{j}" for j in range(dataset.n_features))
            writer.writerow(list(names) + ["label"])
        for row, label in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in row] + [str(int(label))])


@dataclass(frozen=True)
class SynthConfig:
    """Two isotropic Gaussian clouds.

    Class -1 is centred at ``-separation / 2`` and class +1 at
    ``+separation / 2`` on the first axis; every coordinate has standard
    deviation ``noise``.
    """

    n_per_class: int = 50
    dimension: int = 2
    separation: float = 2.0
    noise: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if int(self.n_per_class) < 1 or int(self.dimension) < 1:
            raise ValueError("n_per_class and dimension must be positive integers")
        if not self.noise > 0:
            raise ValueError("noise must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def generate_synthetic(config):
    """Draw a dataset from :class:`SynthConfig`.

    The stream is ``numpy.random.Generator(PCG64(seed)).standard_normal``
    consumed in one call of shape ``(2 * n_per_class, dimension)``, row
    major.  The first ``n_per_class`` rows are class -1, the rest class +1;
    each row is ``mean + noise * z``.
    """
    n, d = int(config.n_per_class), int(config.dimension)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    Z = rng.standard_normal((2 * n, d))
    y = np.repeat([NEGATIVE, POSITIVE], n)
    X = config.noise * Z
    X[:, 0] += y * (config.separation / 2.0)
    return Dataset(X, y, None, f"synthetic(seed={config.seed})")


def split_dataset(dataset, train_fraction=0.8, seed=0):
    """Shuffle and split into train and test parts.

    ``round(train_fraction * m)`` examples go to the training part, drawn by
    ``numpy.random.Generator(PCG64(seed)).permutation(m)``.

    Raises
    ------
    SplitError
        If the training part does not contain both labels.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    m = len(dataset)
    if m == 0:
        raise SplitError("cannot split an empty dataset")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(m)
    n_train = int(round(train_fraction * m))
    train_idx, test_idx = np.sort(perm[:n_train]), np.sort(perm[n_train:])
    if len(np.unique(dataset.y[train_idx])) < 2:
        raise SplitError("training part contains a single class")
    return dataset.subset(train_idx, f"{dataset.source}[train]"), dataset.subset(test_idx, f"{dataset.source}[test]")


def as_dataset(X, y):
    X, y = check_labeled(X, y, require_both=False)
    return Dataset(X, y)
