import math

import numpy as np
import pytest

from hsiband.classifiers import (
    BinarySvm,
    RbfSvmClassifier,
    grid_search_svm,
    knn_classify,
    rbf_gram,
    train_binary_smo,
)


def make_blobs(rng, centers, n_per, spread=0.3):
    xs = np.vstack([c + rng.normal(0, spread, (n_per, len(c))) for c in centers])
    ys = np.repeat(np.arange(1, len(centers) + 1), n_per)
    return xs, ys


class TestBinarySmo:
    def test_two_point_boundary_at_midpoint(self):
        m = train_binary_smo([[0.0], [1.0]], [-1.0, 1.0], c=1e6, gamma=1.0)
        assert m.converged
        assert m.support_vectors.shape[0] == 2  # both points support the margin
        f = m.decision_function([[0.45], [0.55]])
        assert f[0] < 0 < f[1]
        assert abs(m.decision_function([[0.5]])[0]) < 1e-9

    def test_separable_blobs_reach_full_training_accuracy(self):
        rng = np.random.default_rng(0)
        x, y = make_blobs(rng, [(-2.0, 0.0), (2.0, 0.0)], 100)
        ypm = np.where(y == 1, -1.0, 1.0)
        m = train_binary_smo(x, ypm, c=100.0, gamma=1.0)
        assert m.converged
        pred = np.sign(m.decision_function(x))
        assert np.array_equal(pred, ypm)

    def test_xor_pattern_separated_by_rbf(self):
        rng = np.random.default_rng(3)
        centers = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], float)
        x = np.vstack([c + rng.normal(0, 0.1, (50, 2)) for c in centers])
        y = np.array([1.0] * 100 + [-1.0] * 100)
        m = train_binary_smo(x, y, c=100.0, gamma=1.0)
        acc = np.mean(np.sign(m.decision_function(x)) == y)
        assert acc >= 0.99

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="single class"):
            train_binary_smo([[0.0], [1.0]], [1.0, 1.0])

    def test_dual_constraints_hold(self):
        rng = np.random.default_rng(1)
        x, y = make_blobs(rng, [(0.0, 0.0), (1.5, 1.5)], 80, spread=0.8)
        ypm = np.where(y == 1, -1.0, 1.0)
        m = train_binary_smo(x, ypm, c=10.0, gamma=0.5)
        assert m.alpha.min() >= 0.0
        assert m.alpha.max() <= 10.0
        assert abs(np.sum(m.alpha * m.train_labels)) <= 1e-3 * len(ypm)

    def test_fixed_seed_is_bit_deterministic(self):
        rng = np.random.default_rng(2)
        x, y = make_blobs(rng, [(0.0, 0.0), (1.0, 1.0)], 60, spread=0.5)
        ypm = np.where(y == 1, -1.0, 1.0)
        a = train_binary_smo(x, ypm, c=5.0, gamma=1.0, seed=7)
        b = train_binary_smo(x, ypm, c=5.0, gamma=1.0, seed=7)
        assert np.array_equal(a.alpha, b.alpha)
        assert a.bias == b.bias

    def test_sweep_cap_sets_convergence_flag(self):
        rng = np.random.default_rng(4)
        x = np.vstack([rng.normal(0, 1, (60, 2)), rng.normal(0.3, 1, (60, 2))])
        y = np.array([1.0] * 60 + [-1.0] * 60)
        m = train_binary_smo(x, y, c=100.0, gamma=1.0, max_sweeps=2)
        assert not m.converged


class TestRbfSvmClassifier:
    def test_two_classes_build_one_machine(self):
        rng = np.random.default_rng(5)
        x, y = make_blobs(rng, [(0.0,), (3.0,)], 20)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        assert len(clf.machines_) == 1

    def test_sixteen_classes_build_120_machines(self):
        rng = np.random.default_rng(6)
        centers = [(2.0 * i, 2.0 * (i % 4)) for i in range(16)]
        x, y = make_blobs(rng, centers, 8, spread=0.1)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        assert len(clf.machines_) == 16 * 15 // 2

    def test_three_blob_holdout_accuracy(self):
        rng = np.random.default_rng(7)
        x, y = make_blobs(rng, [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)], 50, spread=0.5)
        perm = rng.permutation(y.size)
        train, test = perm[: y.size // 2], perm[y.size // 2 :]
        clf = RbfSvmClassifier(random_state=1).fit(x[train], y[train])
        oa = np.mean(clf.predict(x[test]) == y[test])
        assert oa >= 0.95

    def test_predict_matches_training_labels_on_separable_data(self):
        rng = np.random.default_rng(8)
        x, y = make_blobs(rng, [(0.0, 0.0), (5.0, 0.0)], 40, spread=0.3)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        assert np.array_equal(clf.predict(x), y)

    def test_vote_tie_breaks_to_smallest_class(self):
        clf = RbfSvmClassifier()
        clf.classes_ = np.array([1, 2, 3])
        clf.mean_ = np.zeros(1)
        clf.scale_ = np.ones(1)
        empty = np.empty((0, 1))
        none = np.empty(0)
        # cyclic outcomes: one vote per class
        clf.machines_ = [
            (1, 2, BinarySvm(empty, none, bias=-1.0, gamma=1.0)),  # votes 1
            (1, 3, BinarySvm(empty, none, bias=1.0, gamma=1.0)),  # votes 3
            (2, 3, BinarySvm(empty, none, bias=-1.0, gamma=1.0)),  # votes 2
        ]
        assert clf.predict(np.zeros((2, 1))).tolist() == [1, 1]

    def test_decision_consistent_with_explicit_kernel_sum(self):
        rng = np.random.default_rng(9)
        x, y = make_blobs(rng, [(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)], 30, spread=0.4)
        clf = RbfSvmClassifier(random_state=2).fit(x, y)
        probe = rng.normal(1.0, 2.0, (100, 2))
        scaled = (probe - clf.mean_) / clf.scale_

        votes = np.zeros((100, 3), dtype=int)
        lookup = {int(c): k for k, c in enumerate(clf.classes_)}
        for ca, cb, m in clf.machines_:
            for r, p in enumerate(scaled):
                f = m.bias
                for sv, coef in zip(m.support_vectors, m.dual_coef):
                    d = p - sv
                    f += coef * math.exp(-m.gamma * float(d @ d))
                votes[r, lookup[cb if f > 0 else ca]] += 1
        expected = clf.classes_[votes.argmax(axis=1)]
        assert np.array_equal(clf.predict(probe), expected)

    def test_standardization_roundtrip(self):
        rng = np.random.default_rng(10)
        x = rng.normal(50.0, 10.0, (200, 4))
        x[:, 2] = 3.14  # zero-variance feature must use divisor 1
        y = np.repeat([1, 2], 100)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        assert clf.scale_[2] == 1.0
        back = ((x - clf.mean_) / clf.scale_) * clf.scale_ + clf.mean_
        assert np.allclose(back, x, rtol=0, atol=1e-12 * np.abs(x).max())

    def test_feature_count_mismatch_rejected(self):
        rng = np.random.default_rng(11)
        x, y = make_blobs(rng, [(0.0, 0.0), (3.0, 3.0)], 20)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        with pytest.raises(ValueError, match="features"):
            clf.predict(np.zeros((2, 3)))

    def test_single_class_fit_rejected(self):
        with pytest.raises(ValueError, match="2 classes"):
            RbfSvmClassifier().fit(np.zeros((3, 1)), [1, 1, 1])

    def test_models_are_bit_deterministic(self):
        rng = np.random.default_rng(12)
        x, y = make_blobs(rng, [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)], 30, spread=0.6)
        a = RbfSvmClassifier(random_state=3).fit(x, y)
        b = RbfSvmClassifier(random_state=3).fit(x, y)
        for (_, _, ma), (_, _, mb) in zip(a.machines_, b.machines_):
            assert np.array_equal(ma.alpha, mb.alpha)
            assert ma.bias == mb.bias

    def test_auto_gamma_is_reciprocal_feature_count(self):
        rng = np.random.default_rng(13)
        x, y = make_blobs(rng, [(0.0,) * 5, (3.0,) * 5], 15)
        clf = RbfSvmClassifier(random_state=0).fit(x, y)
        assert clf.gamma_ == 0.2


class TestKnn:
    def test_k1_returns_exact_match_label(self):
        x = np.array([[0.0], [1.0], [2.0]])
        y = np.array([1, 2, 3])
        assert knn_classify(x, y, [[1.0]], k=1).tolist() == [2]

    def test_k_equals_n_returns_majority(self):
        x = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([1, 1, 1, 2])
        assert knn_classify(x, y, [[10.0]], k=4).tolist() == [1]

    def test_two_blob_holdout(self):
        rng = np.random.default_rng(14)
        x, y = make_blobs(rng, [(0.0, 0.0), (4.0, 0.0)], 60, spread=0.5)
        perm = rng.permutation(y.size)
        train, test = perm[: y.size // 2], perm[y.size // 2 :]
        pred = knn_classify(x[train], y[train], x[test], k=5)
        assert np.mean(pred == y[test]) >= 0.95

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            knn_classify(np.empty((0, 2)), np.empty(0), [[0.0, 0.0]], k=1)

    def test_k_above_rows_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            knn_classify([[0.0]], [1], [[0.0]], k=2)

    def test_vote_tie_breaks_to_smallest_class(self):
        x = np.array([[0.0], [2.0]])
        y = np.array([2, 1])
        # both neighbors tie at distance 1
        assert knn_classify(x, y, [[1.0]], k=2).tolist() == [1]


class TestGridSearch:
    def test_picks_sane_cell_on_easy_data(self):
        rng = np.random.default_rng(15)
        x, y = make_blobs(rng, [(0.0, 0.0), (3.0, 0.0)], 30, spread=0.4)
        c, gamma, acc = grid_search_svm(
            x, y, cs=(1.0, 100.0), gammas=(0.1, 1.0), folds=3
        )
        assert c in (1.0, 100.0)
        assert gamma in (0.1, 1.0)
        assert acc >= 0.9


class TestRbfGram:
    def test_diagonal_is_one(self):
        x = np.random.default_rng(16).normal(0, 1, (10, 3))
        k = rbf_gram(x, x, 0.7)
        assert np.allclose(np.diag(k), 1.0)

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(17)
        a = rng.normal(0, 1, (5, 2))
        b = rng.normal(0, 1, (4, 2))
        k = rbf_gram(a, b, 0.3)
        for i in range(5):
            for j in range(4):
                d = a[i] - b[j]
                assert k[i, j] == pytest.approx(math.exp(-0.3 * float(d @ d)), rel=1e-12)
