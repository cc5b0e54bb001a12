"""Permutation measures of impossibility and their validity oracles.

A measure maps a sequence of labeled examples to a value in ``[0, inf]``.
Permutation measures average to exactly one over all orderings of any
sample of distinct examples and are infinite on samples with repeats.

Every measure object here is a callable ``p(X, y)`` and additionally
exposes ``reciprocal(X, y)`` which computes ``1 / p`` directly from the
same ratio, so that reciprocals of rational values (``#SV / m``) come out
exactly as the quotient of the two integers.
"""

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .base import LabeledExample, check_labeled, has_duplicates
from .exceptions import DataError, DuplicateExamples, InternalError, InvalidDelta, TooLarge
from .kernels import KernelConfig
from .svm import SolverConfig, solve_soft_margin

MAX_ENUMERATION_SIZE = 7
MEASURE_KINDS = ("sv_count", "weighted_alpha", "multi_example")


@dataclass(frozen=True)
class WeightFunction:
    """Non-decreasing map ``f`` of the Lagrange multipliers with ``f(0) = 0``.

    ``name`` is one of ``'sign'``, ``'identity'`` or ``'power'`` (``alpha ** q``
    with ``q > 0``).
    """

    name: str = "sign"
    q: float = 1.0

    def __post_init__(self):
        if self.name not in ("sign", "identity", "power"):
            raise ValueError(f"unknown weight function {self.name!r}")
        if self.name == "power" and not self.q > 0:
            raise ValueError("power weight needs q > 0")

    @classmethod
    def parse(cls, text):
        """Parse ``'sign'``, ``'identity'`` or ``'power:q'``."""
        name, _, arg = str(text).partition(":")
        if name == "power":
            return cls("power", float(arg or 2.0))
        if arg:
            raise ValueError(f"weight function {name!r} takes no parameter")
        return cls(name)

    def __call__(self, alphas):
        a = np.asarray(alphas, dtype=float)
        if self.name == "sign":
            return (a > 0).astype(float)
        if self.name == "identity":
            return a.copy()
        return a ** self.q

    def __str__(self):
        return f"power:{self.q:g}" if self.name == "power" else self.name


@dataclass(frozen=True)
class MeasureConfig:
    """Which SV-based measure to use and how to solve its QP."""

    kind: str = "sv_count"
    f: WeightFunction = field(default_factory=WeightFunction)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    k: int = 1

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if isinstance(self.f, str):
            object.__setattr__(self, "f", WeightFunction.parse(self.f))
        if int(self.k) < 1:
            raise ValueError("k must be a positive integer")


def _divide(num, den):
    if den == 0:
        if num == 0:
            return 0.0
        raise InternalError(f"measure ratio {num}/0")
    return num / den


def _reciprocal(num, den):
    if num == 0:
        return math.inf
    return den / num


class SupportVectorMeasure:
    """Base class of measures computed from one QP solve on the whole sequence.

    Subclasses implement :meth:`ratio`, returning ``(numerator, denominator)``
    with ``p = numerator / denominator``.
    """

    def __init__(self, kernel=None, solver=None):
        self.kernel = kernel if kernel is not None else KernelConfig()
        self.solver = solver if solver is not None else SolverConfig()

    def solve(self, X, y=None):
        return solve_soft_margin(X, y, self.kernel, self.solver)

    def support_weights(self, solution):
        """Multipliers with sub-tolerance values zeroed (the ``alpha > 0`` SV test)."""
        a = np.asarray(solution.alphas)
        return np.where(a > self.solver.sv_tolerance, a, 0.0)

    def ratio(self, solution):
        raise NotImplementedError

    def value(self, solution):
        return _divide(*self.ratio(solution))

    def reciprocal_value(self, solution):
        return _reciprocal(*self.ratio(solution))

    def __call__(self, X, y=None):
        X, y = check_labeled(X, y)
        if has_duplicates(X, y):
            return math.inf
        return self.value(self.solve(X, y))

    def reciprocal(self, X, y=None):
        X, y = check_labeled(X, y)
        if has_duplicates(X, y):
            return 0.0
        return self.reciprocal_value(self.solve(X, y))

    def __repr__(self):
        return f"{type(self).__name__}(kernel={self.kernel!r}, solver={self.solver!r})"


class SVCountMeasure(SupportVectorMeasure):
    """``m / #SV`` if the last example is a support vector, else 0."""

    def ratio(self, solution):
        sv = self.support_weights(solution) > 0
        n_sv = int(np.count_nonzero(sv))
        if n_sv == 0:
            raise InternalError("solution without support vectors")
        m = len(sv)
        return (float(m) if sv[-1] else 0.0), float(n_sv)


class WeightedAlphaMeasure(SupportVectorMeasure):
    """``m f(alpha_m) / sum_i f(alpha_i)`` for a monotone weight ``f``."""

    def __init__(self, f=None, kernel=None, solver=None):
        super().__init__(kernel, solver)
        self.f = WeightFunction() if f is None else (
            WeightFunction.parse(f) if isinstance(f, str) else f)

    def ratio(self, solution):
        fa = self.f(self.support_weights(solution))
        return fa[-1] * len(fa), float(np.sum(fa))


class MultiExampleMeasure(WeightedAlphaMeasure):
    """Share of the weight carried by the last ``k`` examples, times ``m / k``."""

    def __init__(self, k=1, f=None, kernel=None, solver=None):
        super().__init__(f, kernel, solver)
        if int(k) < 1:
            raise ValueError("k must be a positive integer")
        self.k = int(k)

    def ratio(self, solution):
        fa = self.f(self.support_weights(solution))
        if self.k >= len(fa):
            raise DataError(f"k={self.k} leaves no training examples in a sequence of {len(fa)}")
        return float(np.sum(fa[-self.k:])) * len(fa), float(np.sum(fa)) * self.k


def make_measure(config=None):
    """Instantiate the measure described by a :class:`MeasureConfig`."""
    config = config if config is not None else MeasureConfig()
    if config.kind == "sv_count":
        return SVCountMeasure(config.kernel, config.solver)
    if config.kind == "weighted_alpha":
        return WeightedAlphaMeasure(config.f, config.kernel, config.solver)
    return MultiExampleMeasure(config.k, config.f, config.kernel, config.solver)


def sv_count_measure(X, y=None, config=None):
    """Support-vector count measure of a sequence (last example is the new one)."""
    config = config if config is not None else MeasureConfig()
    return SVCountMeasure(config.kernel, config.solver)(X, y)


def weighted_alpha_measure(X, y=None, config=None):
    config = config if config is not None else MeasureConfig(kind="weighted_alpha")
    return WeightedAlphaMeasure(config.f, config.kernel, config.solver)(X, y)


def multi_example_measure(X, y=None, config=None):
    """Measure of a sequence whose last ``config.k`` examples are the new ones."""
    config = config if config is not None else MeasureConfig(kind="multi_example")
    return MultiExampleMeasure(config.k, config.f, config.kernel, config.solver)(X, y)


class CriticalRegionMeasure:
    """``1 / delta`` on a region of probability ``delta``, 0 elsewhere."""

    def __init__(self, region, delta):
        if not 0 < delta < 1:
            raise InvalidDelta(f"delta must lie in (0, 1), got {delta}")
        self.region = region
        self.delta = float(delta)

    def __call__(self, X, y=None):
        return 1.0 / self.delta if self.region(X, y) else 0.0

    def reciprocal(self, X, y=None):
        return self.delta if self.region(X, y) else math.inf


def critical_region_measure(region, delta):
    """Turn a critical region (a predicate on sequences) into a measure."""
    return CriticalRegionMeasure(region, delta)


def reciprocal_of(measure, X, y=None):
    """``1 / p(X, y)`` in the extended reals, exact when the measure supports it."""
    recip = getattr(measure, "reciprocal", None)
    if recip is not None:
        return recip(X, y)
    p = measure(X, y)
    if p == 0:
        return math.inf
    return 0.0 if math.isinf(p) else 1.0 / p


def _sequence_arrays(X, y):
    if y is None:
        X, y = check_labeled(X, None, require_both=False)
    return np.asarray(X, dtype=float), np.asarray(y)


def permutation_validity_oracle(measure, X, y=None):
    """Average of ``measure`` over all ``m!`` orderings of a sample.

    A permutation measure returns exactly 1 (up to rounding) on every
    sample of distinct examples.

    Raises
    ------
    TooLarge
        If ``m > 7``.
    DuplicateExamples
    """
    X, y = _sequence_arrays(X, y)
    m = len(y)
    if m > MAX_ENUMERATION_SIZE:
        raise TooLarge(f"{m}! orderings exceed the enumeration cap of {MAX_ENUMERATION_SIZE}!")
    if has_duplicates(X, y):
        raise DuplicateExamples("the permutation oracle needs distinct examples")
    total = math.fsum(measure(X[list(p)], y[list(p)]) for p in itertools.permutations(range(m)))
    return total / math.factorial(m)


@dataclass(frozen=True)
class Hyperset:
    """Distinct examples with positive integer multiplicities (arities)."""

    elements: tuple
    arities: tuple

    def __post_init__(self):
        elements = tuple(e if isinstance(e, LabeledExample) else LabeledExample(*e)
                         for e in self.elements)
        arities = tuple(int(a) for a in self.arities)
        if len(elements) != len(arities):
            raise DataError("one arity per element is required")
        if any(a < 1 for a in arities):
            raise DataError("arities must be positive integers")
        if len(set(elements)) != len(elements):
            raise DataError("hyperset elements must be distinct")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "arities", arities)

    @classmethod
    def signature(cls, X, y=None):
        """The hyperset of a sequence: its elements counted with multiplicity."""
        X, y = check_labeled(X, y, require_both=False)
        counts = Counter(LabeledExample(tuple(row), int(lab)) for row, lab in zip(X, y))
        return cls(tuple(counts), tuple(counts.values()))

    @property
    def cardinality(self):
        return sum(self.arities)

    @property
    def n_sequences(self):
        """``(b_1 + ... + b_j)! / (b_1! ... b_j!)``."""
        n = math.factorial(self.cardinality)
        for a in self.arities:
            n //= math.factorial(a)
        return n

    def sequences(self):
        """Yield every distinct sequence of this signature as index tuples."""
        remaining = list(self.arities)
        prefix = []

        def rec():
            if len(prefix) == self.cardinality:
                yield tuple(prefix)
                return
            for i, left in enumerate(remaining):
                if left:
                    remaining[i] -= 1
                    prefix.append(i)
                    yield from rec()
                    prefix.pop()
                    remaining[i] += 1

        yield from rec()

    def arrays(self, order):
        """Feature matrix and labels of the sequence given by element indices."""
        X = np.array([self.elements[i].features for i in order], dtype=float)
        y = np.array([self.elements[i].label for i in order], dtype=int)
        return X, y


def exchangeable_validity_oracle(measure, hyperset):
    """Average of ``measure`` over all distinct sequences of a signature.

    Equals 1 for an exchangeable measure of impossibility.
    """
    if hyperset.cardinality > MAX_ENUMERATION_SIZE:
        raise TooLarge(f"hyperset cardinality {hyperset.cardinality} exceeds {MAX_ENUMERATION_SIZE}")
    values = [measure(*hyperset.arrays(seq)) for seq in hyperset.sequences()]
    return math.fsum(values) / hyperset.n_sequences
