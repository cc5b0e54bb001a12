"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

import argparse
import logging
import math
import sys

import numpy as np

from .base import LabeledExample
from .data import SynthConfig, generate_synthetic, load_examples, split_dataset, write_examples
from .evaluation import (
    PREDICTORS, calibration_csv, calibration_experiment, evaluate_points, export_scatter,
    fmt, read_points, summarize, write_points,
)
from .exceptions import DataError, NumericalError
from .impossibility import (
    Hyperset, MeasureConfig, WeightFunction, exchangeable_validity_oracle,
    make_measure, permutation_validity_oracle,
)
from .kernels import KernelConfig
from .svm import SolverConfig

log = logging.getLogger("tcmsvm")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 1, 2, 3
VALIDITY_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def parse_measure(text, kernel, solver):
    """``sv-count``, ``weighted:F`` or ``multi:K[:F]`` with F in sign, identity, power:q."""
    head, _, rest = text.partition(":")
    if head == "sv-count" and not rest:
        return MeasureConfig("sv_count", kernel=kernel, solver=solver)
    if head == "weighted" and rest:
        return MeasureConfig("weighted_alpha", WeightFunction.parse(rest), kernel, solver)
    if head == "multi" and rest:
        k, _, f = rest.partition(":")
        return MeasureConfig("multi_example", WeightFunction.parse(f or "sign"), kernel, solver, int(k))
    raise ValueError(f"unknown measure {text!r}")


def _add_model_flags(p):
    p.add_argument("--kernel", choices=("linear", "poly", "rbf"), default="linear")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--coef0", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--sv-tol", type=float, default=1e-6)
    p.add_argument("--kkt-tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--measure", default="sv-count",
                   help="sv-count | weighted:F | multi:K[:F], F in sign, identity, power:q")


def _add_data_flags(p):
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--label-col", type=int, default=-1)
    p.add_argument("--pos-label", default="1,+1", help="comma-separated tokens mapped to +1")
    p.add_argument("--neg-label", default="-1", help="comma-separated tokens mapped to -1")


def _model_config(args):
    kernel = KernelConfig(args.kernel, args.degree, args.coef0, args.gamma)
    solver = SolverConfig(args.C, args.kkt_tol, args.sv_tol, args.max_iter)
    return parse_measure(args.measure, kernel, solver)


def _load(args, path, labeled=True):
    return load_examples(path, args.label_col, args.pos_label.split(","),
                         args.neg_label.split(","), labeled=labeled)


def cmd_transduce(args):
    config = _model_config(args)
    train = _load(args, args.train)
    if args.test_unlabeled:
        X_test, y_test = _load(args, args.test, labeled=False), None
    else:
        test = _load(args, args.test)
        X_test, y_test = test.X, test.y
    records = evaluate_points(train, X_test, y_test, config, args.predictor)
    write_points(records, args.out)
    return 0


def cmd_evaluate(args):
    config = _model_config(args)
    train, test = _load(args, args.train), _load(args, args.test)
    records = evaluate_points(train, test.X, test.y, config, args.predictor) if len(test) else []
    report = summarize(records, args.predictor)
    text = report.to_text() if args.format == "text" else report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.points_out:
        write_points(records, args.points_out)
    return 0


def cmd_calibrate(args):
    config = _model_config(args)
    synth = SynthConfig(args.n_per_class, args.dim, args.separation, args.noise, args.seed)
    rows = calibration_experiment(synth, args.epsilons, args.trials, args.seed, config)
    text = calibration_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _random_sample(rng, size, dim):
    X = rng.standard_normal((size, dim))
    y = rng.choice([-1, 1], size=size)
    y[0], y[1] = -1, 1
    return X, y


def cmd_validate(args):
    if not 2 <= args.size <= 7:
        raise DataError("--size must lie between 2 and 7")
    config = _model_config(args)
    measure = make_measure(config)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    print("sample,oracle,average,deviation")
    worst = 0.0
    for s in range(args.samples):
        if args.arities:
            if sum(args.arities) != args.size:
                raise DataError("--arities must sum to --size")
            X, y = _random_sample(rng, len(args.arities), args.dim)
            hyperset = Hyperset(tuple(LabeledExample(tuple(r), int(l)) for r, l in zip(X, y)),
                                tuple(args.arities))
            avg, oracle = exchangeable_validity_oracle(measure, hyperset), "exchangeable"
        else:
            X, y = _random_sample(rng, args.size, args.dim)
            avg, oracle = permutation_validity_oracle(measure, X, y), "permutation"
        dev = abs(avg - 1.0) if math.isfinite(avg) else math.inf
        worst = max(worst, dev)
        print(f"{s},{oracle},{fmt(avg)},{fmt(dev)}")
    verdict = "PASS" if worst <= VALIDITY_TOL else "FAIL"
    print(f"# {verdict}: max deviation {fmt(worst)} (tolerance {VALIDITY_TOL:g})")
    return 0 if verdict == "PASS" else EXIT_NUMERICAL


def cmd_scatter(args):
    export_scatter(read_points(args.input), args.out)
    return 0


def cmd_generate(args):
    data = generate_synthetic(SynthConfig(args.n_per_class, args.dim, args.separation,
                                          args.noise, args.seed))
    if args.train_fraction is None:
        write_examples(data, args.out)
        return 0
    if not args.test_out:
        raise DataError("--test-out is required with --train-fraction")
    train, test = split_dataset(data, args.train_fraction, args.seed)
    write_examples(train, args.out)
    write_examples(test, args.test_out)
    return 0


def build_parser():
    parser = _Parser(prog="tcmsvm", description="Transductive SVM with confidence and possibility.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transduce", help="per-point predictions for a test file")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--test-unlabeled", action="store_true", help="test file has no label column")
    p.add_argument("--predictor", choices=PREDICTORS, default="transductive")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transduce)

    p = sub.add_parser("evaluate", help="error, undecided and possibility-cluster report")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--predictor", choices=PREDICTORS, default="transductive")
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    p.add_argument("--out")
    p.add_argument("--points-out", help="also write the per-point records here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("calibrate", help="Monte Carlo calibration on synthetic clouds")
    _add_model_flags(p)
    p.add_argument("--epsilons", type=_float_list, default=[0.05, 0.1, 0.2])
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--separation", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--n-per-class", type=int, default=15)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("validate", help="exhaustive validity check of a measure")
    _add_model_flags(p)
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--arities", type=_int_list,
                   help="run the exchangeable oracle on hypersets with these arities")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("scatter", help="confidence/possibility scatter rows from transduce output")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("generate", help="write a synthetic two-cloud dataset")
    p.add_argument("--n-per-class", type=int, default=50)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--separation", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--out", required=True)
    p.add_argument("--test-out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        if isinstance(exc, DataError):
            log.error("%s", exc)
            return EXIT_DATA
        log.error("%s", exc)
        return EXIT_USAGE
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except NumericalError as exc:
        log.error("%s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
