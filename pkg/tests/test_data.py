import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tcmsvm import (
    Dataset, ParseError, SplitError, SynthConfig, generate_synthetic, load_examples,
    split_dataset, write_examples,
)

# PCG64(42).standard_normal(8), frozen when the generator layout was fixed
GOLDEN_SEED_42 = [0.30471707975443135, -1.0399841062404955, 0.7504511958064572,
                  0.9405647163912139, -1.9510351886538364, -1.302179506862318,
                  0.12784040316728537, -0.3162425923435822]


def write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoad:
    def test_custom_tokens(self, tmp_path):
        path = write(tmp_path, "0.1,0.2,2\n0.3,0.4,7\n0.5,0.6,2\n")
        d = load_examples(path, positive_token="7", negative_token="2")
        assert len(d) == 3
        np.testing.assert_array_equal(d.y, [-1, 1, -1])
        np.testing.assert_allclose(d.X[1], [0.3, 0.4])

    def test_header_detected(self, tmp_path):
        path = write(tmp_path, "a,b,label\n1,2,1\n3,4,-1\n")
        d = load_examples(path)
        assert d.feature_names == ("a", "b")
        assert len(d) == 2

    def test_label_column_first(self, tmp_path):
        path = write(tmp_path, "1,0.5\n-1,0.7\n")
        d = load_examples(path, label_column=0)
        np.testing.assert_array_equal(d.y, [1, -1])
        np.testing.assert_allclose(d.X[:, 0], [0.5, 0.7])

    def test_ragged_row(self, tmp_path):
        row16 = ",".join(["0"] * 16) + ",1\n"
        row15 = ",".join(["0"] * 15) + ",1\n"
        with pytest.raises(ParseError):
            load_examples(write(tmp_path, row16 + row15))

    @pytest.mark.parametrize("text", ["", "\n\n", "x,label\n"])
    def test_empty(self, tmp_path, text):
        with pytest.raises(ParseError):
            load_examples(write(tmp_path, text))

    def test_unknown_label(self, tmp_path):
        with pytest.raises(ParseError, match="unknown label"):
            load_examples(write(tmp_path, "1,2,3\n"))

    def test_non_numeric_feature(self, tmp_path):
        with pytest.raises(ParseError):
            load_examples(write(tmp_path, "1,2,1\n1,abc,-1\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_examples(tmp_path / "nope.csv")

    def test_unlabeled(self, tmp_path):
        X = load_examples(write(tmp_path, "1,2\n3,4\n"), labeled=False)
        np.testing.assert_array_equal(X, [[1, 2], [3, 4]])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=3),
                          st.sampled_from([-1, 1])), min_size=1, max_size=20))
def test_round_trip(tmp_path_factory, rows):
    d = Dataset(np.array([r[0] for r in rows]), np.array([r[1] for r in rows]))
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_examples(d, path)
    back = load_examples(path)
    np.testing.assert_array_equal(back.X, d.X)
    np.testing.assert_array_equal(back.y, d.y)


class TestSynthetic:
    def test_golden_stream(self):
        d = generate_synthetic(SynthConfig(n_per_class=2, dimension=2, separation=0.0, noise=1.0, seed=42))
        np.testing.assert_array_equal(d.X.ravel(), GOLDEN_SEED_42)

    def test_layout(self):
        d = generate_synthetic(SynthConfig(n_per_class=2, dimension=2, separation=2.0, noise=1.0, seed=42))
        z = np.array(GOLDEN_SEED_42).reshape(4, 2)
        np.testing.assert_array_equal(d.y, [-1, -1, 1, 1])
        np.testing.assert_allclose(d.X[:, 0], z[:, 0] + [-1, -1, 1, 1])
        np.testing.assert_array_equal(d.X[:, 1], z[:, 1])

    def test_deterministic(self):
        a = generate_synthetic(SynthConfig(seed=3))
        b = generate_synthetic(SynthConfig(seed=3))
        np.testing.assert_array_equal(a.X, b.X)
        assert len(a) == 100 and np.sum(a.y == 1) == 50

    def test_zero_separation_same_cloud(self):
        d = generate_synthetic(SynthConfig(n_per_class=2000, separation=0.0, seed=1))
        means = [d.X[d.y == lab].mean(axis=0) for lab in (-1, 1)]
        np.testing.assert_allclose(means[0], means[1], atol=0.1)

    @pytest.mark.parametrize("kwargs", [{"n_per_class": 0}, {"noise": 0.0}, {"dimension": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SynthConfig(**kwargs)


class TestSplit:
    def test_sizes_and_partition(self):
        d = generate_synthetic(SynthConfig(n_per_class=5, seed=0))
        train, test = split_dataset(d, 0.8, seed=1)
        assert (len(train), len(test)) == (8, 2)
        rows = {tuple(r) for r in train.X} | {tuple(r) for r in test.X}
        assert rows == {tuple(r) for r in d.X}
        assert not {tuple(r) for r in train.X} & {tuple(r) for r in test.X}

    def test_deterministic(self):
        d = generate_synthetic(SynthConfig(n_per_class=20, seed=0))
        a, _ = split_dataset(d, 0.5, seed=9)
        b, _ = split_dataset(d, 0.5, seed=9)
        np.testing.assert_array_equal(a.X, b.X)

    def test_single_class_train(self):
        d = Dataset(np.arange(10.0)[:, None], np.array([1] * 9 + [-1]))
        with pytest.raises(SplitError):
            split_dataset(d, 0.1, seed=0)
