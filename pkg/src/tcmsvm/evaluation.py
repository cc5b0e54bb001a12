"""Test-set evaluation, calibration experiments and scatter export."""

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

from .base import NEGATIVE, POSITIVE
from .data import generate_synthetic
from .exceptions import ParseError
from .impossibility import MeasureConfig, make_measure
from .svm import solve_soft_margin
from .transduction import UNDECIDED, transduce

PREDICTORS = ("transductive", "svm")
POINT_COLUMNS = (
    "id", "true_label", "prediction", "incertitude", "confidence", "possibility",
    "sv_count_neg_picture", "sv_count_pos_picture", "new_is_sv_neg", "new_is_sv_pos",
)


def fmt(value):
    """Reals with 6 significant digits; the format of every CSV we emit."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6g}"


def label_str(label):
    return "undecided" if label == UNDECIDED else str(int(label))


@dataclass(frozen=True)
class PointRecord:
    """Per-point outcome of an evaluation run."""

    id: int
    true_label: object
    prediction: int
    incertitude: float
    confidence: float
    possibility: float
    sv_count_neg_picture: int
    sv_count_pos_picture: int
    new_is_sv_neg: bool
    new_is_sv_pos: bool

    @property
    def outcome(self):
        """``'O'`` correct, ``'X'`` wrong, ``'U'`` undecided, ``''`` unlabeled."""
        if self.prediction == UNDECIDED:
            return "U"
        if self.true_label is None:
            return ""
        return "O" if self.prediction == self.true_label else "X"

    def row(self):
        return [
            str(self.id),
            "" if self.true_label is None else str(int(self.true_label)),
            label_str(self.prediction),
            fmt(self.incertitude),
            fmt(self.confidence),
            fmt(self.possibility),
            fmt(self.sv_count_neg_picture),
            fmt(self.sv_count_pos_picture),
            fmt(self.new_is_sv_neg),
            fmt(self.new_is_sv_pos),
        ]


@dataclass(frozen=True)
class ClusterStats:
    name: str
    n_points: int
    n_correct: int
    n_incorrect: int
    n_undecided: int
    min_confidence: float
    max_confidence: float
    mean_confidence: float
    mean_possibility: float


@dataclass(frozen=True)
class EvaluationReport:
    """Error and undecided counts plus per-possibility-cluster statistics.

    ``clusters`` maps ``'possibility=1'`` and ``'possibility<1'`` to
    :class:`ClusterStats`.
    """

    n_test: int
    n_errors: int
    n_undecided: int
    clusters: dict
    points: tuple = ()
    predictor: str = "transductive"

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["metric", "value"])
        w.writerow(["predictor", self.predictor])
        w.writerow(["n_test", self.n_test])
        w.writerow(["n_errors", self.n_errors])
        w.writerow(["n_undecided", self.n_undecided])
        w.writerow([])
        w.writerow(["cluster", "n_points", "n_correct", "n_incorrect", "n_undecided",
                    "min_confidence", "max_confidence", "mean_confidence", "mean_possibility"])
        for c in self.clusters.values():
            w.writerow([c.name, c.n_points, c.n_correct, c.n_incorrect, c.n_undecided,
                        fmt(c.min_confidence), fmt(c.max_confidence),
                        fmt(c.mean_confidence), fmt(c.mean_possibility)])
        return out.getvalue()

    def to_text(self):
        lines = [
            f"predictor:   {self.predictor}",
            f"test points: {self.n_test}",
            f"errors:      {self.n_errors}",
            f"undecided:   {self.n_undecided}",
            "",
            f"{'cluster':<15}{'points':>7}{'O':>5}{'X':>5}{'U':>5}"
            f"{'min conf':>10}{'max conf':>10}{'avg conf':>10}{'avg poss':>10}",
        ]
        for c in self.clusters.values():
            lines.append(
                f"{c.name:<15}{c.n_points:>7}{c.n_correct:>5}{c.n_incorrect:>5}{c.n_undecided:>5}"
                f"{fmt(c.min_confidence):>10}{fmt(c.max_confidence):>10}"
                f"{fmt(c.mean_confidence):>10}{fmt(c.mean_possibility):>10}"
            )
        return "\n".join(lines) + "\n"


def _cluster(name, records):
    conf = np.array([r.confidence for r in records], dtype=float)
    poss = np.array([r.possibility for r in records], dtype=float)
    outcomes = [r.outcome for r in records]
    empty = not records
    return ClusterStats(
        name=name,
        n_points=len(records),
        n_correct=outcomes.count("O"),
        n_incorrect=outcomes.count("X"),
        n_undecided=outcomes.count("U"),
        min_confidence=math.nan if empty else float(conf.min()),
        max_confidence=math.nan if empty else float(conf.max()),
        mean_confidence=math.nan if empty else float(conf.mean()),
        mean_possibility=math.nan if empty else float(poss.mean()),
    )


def evaluate_points(train, X_test, y_test=None, config=None, predictor="transductive"):
    """Per-point records for every test row.

    With ``predictor='svm'`` the label is the sign of the inductive SVM
    solved on the training set and its incertitude is ``mu`` of the opposite
    picture; possibility does not depend on the predictor.
    """
    if predictor not in PREDICTORS:
        raise ValueError(f"predictor must be one of {PREDICTORS}")
    config = config if config is not None else MeasureConfig()
    measure = make_measure(config)
    inductive = None
    if predictor == "svm":
        inductive = solve_soft_margin(train.X, train.y, config.kernel, config.solver)
    records = []
    for i, x in enumerate(np.asarray(X_test, dtype=float)):
        res = transduce(train.X, train.y, x, measure)
        neg, pos = res.pictures
        if inductive is None:
            prediction, incertitude = res.prediction, res.incertitude
        else:
            prediction = POSITIVE if inductive.decision_function(x[None, :])[0] > 0 else NEGATIVE
            incertitude = neg.mu if prediction == POSITIVE else pos.mu
        records.append(PointRecord(
            id=i,
            true_label=None if y_test is None else int(y_test[i]),
            prediction=prediction,
            incertitude=incertitude,
            confidence=1.0 - incertitude,
            possibility=res.possibility,
            sv_count_neg_picture=neg.sv_count,
            sv_count_pos_picture=pos.sv_count,
            new_is_sv_neg=neg.new_point_is_sv,
            new_is_sv_pos=pos.new_point_is_sv,
        ))
    return records


def summarize(records, predictor="transductive"):
    """Assemble an :class:`EvaluationReport` from per-point records."""
    records = sorted(records, key=lambda r: r.id)
    outcomes = [r.outcome for r in records]
    full = [r for r in records if r.possibility == 1.0]
    low = [r for r in records if r.possibility < 1.0]
    return EvaluationReport(
        n_test=len(records),
        n_errors=outcomes.count("X"),
        n_undecided=outcomes.count("U"),
        clusters={"possibility=1": _cluster("possibility=1", full),
                  "possibility<1": _cluster("possibility<1", low)},
        points=tuple(records),
        predictor=predictor,
    )


def evaluate_testset(train, test, config=None, predictor="transductive"):
    """Transduce every test point and report errors, undecided points and clusters."""
    if len(test) == 0:
        return summarize([], predictor)
    return summarize(evaluate_points(train, test.X, test.y, config, predictor), predictor)


def write_points(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(POINT_COLUMNS)
        for r in records:
            w.writerow(r.row())


def export_scatter(records, path):
    """Write ``confidence, possibility, outcome`` rows for external plotting.

    ``records`` are :class:`PointRecord` objects or any objects with
    ``confidence``, ``possibility`` and ``outcome`` attributes.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["confidence", "possibility", "outcome"])
        for r in records:
            w.writerow([fmt(r.confidence), fmt(r.possibility), r.outcome])


@dataclass(frozen=True)
class ScatterPoint:
    confidence: float
    possibility: float
    outcome: str


def read_points(path):
    """Read a per-point CSV written by :func:`write_points` as scatter points."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"prediction", "confidence", "possibility", "true_label"} - set(reader.fieldnames or ())
        if missing:
            raise ParseError(f"{path}: missing columns {sorted(missing)}")
        points = []
        for row in reader:
            pred, truth = row["prediction"], row["true_label"]
            if pred == "undecided":
                outcome = "U"
            elif truth == "":
                outcome = ""
            else:
                outcome = "O" if int(pred) == int(truth) else "X"
            points.append(ScatterPoint(float(row["confidence"]), float(row["possibility"]), outcome))
    return points


@dataclass(frozen=True)
class CalibrationRow:
    epsilon: float
    n_trials: int
    n_wrong_and_confident: int
    empirical_rate: float

    @property
    def bound(self):
        """``epsilon`` plus three binomial standard deviations."""
        e = self.epsilon
        return e + 3.0 * math.sqrt(e * (1.0 - e) / self.n_trials)


def calibration_experiment(synth, epsilons, trials, seed=0, config=None):
    """Monte Carlo check of ``P{mu <= eps and prediction wrong} <= eps``.

    Trial ``t`` draws a data seed and a held-out index from
    ``numpy.random.Generator(PCG64(seed))`` (in that order), generates the
    synthetic dataset, transduces the held-out point from the others and
    records, for every ``eps``, whether the prediction was wrong with
    incertitude at most ``eps``.  Undecided predictions count as wrong.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if synth.n_per_class < 2:
        raise ValueError("n_per_class must be at least 2 to hold a point out")
    epsilons = [float(e) for e in epsilons]
    config = config if config is not None else MeasureConfig()
    measure = make_measure(config)
    rng = np.random.Generator(np.random.PCG64(seed))
    m = 2 * synth.n_per_class
    counts = np.zeros(len(epsilons), dtype=int)
    for _ in range(trials):
        data_seed = int(rng.integers(2**32))
        held = int(rng.integers(m))
        data = generate_synthetic(replace(synth, seed=data_seed))
        keep = np.arange(m) != held
        res = transduce(data.X[keep], data.y[keep], data.X[held], measure)
        if res.prediction != data.y[held]:
            counts += np.array([res.incertitude <= e for e in epsilons])
    return [CalibrationRow(e, trials, int(c), c / trials) for e, c in zip(epsilons, counts)]


def calibration_csv(rows):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["epsilon", "n_trials", "n_wrong_and_confident", "empirical_rate", "bound"])
    for r in rows:
        w.writerow([fmt(r.epsilon), r.n_trials, r.n_wrong_and_confident,
                    fmt(r.empirical_rate), fmt(r.bound)])
    return out.getvalue()

