"""Induction algorithms: soft-margin RBF SVM trained by SMO, plus k-NN.

The SVM dual is solved with a simplified sequential-minimal-optimization
loop (random second index under a fixed seed), extended to multiclass by
one-vs-one voting. A fitted model is immutable and safe for concurrent
prediction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array

# Pair updates smaller than this are treated as no progress.
_MIN_ALPHA_STEP = 1e-12


def rbf_gram(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Kernel matrix K[i, j] = exp(-gamma * ||a_i - b_j||^2)."""
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass
class BinarySvm:
    """One trained binary machine: sign(sum coef_k K(sv_k, x) + bias)."""

    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_k * y_k per support vector
    bias: float
    gamma: float
    converged: bool = True
    # retained for dual-feasibility checks
    alpha: np.ndarray = field(default=None, repr=False)
    train_labels: np.ndarray = field(default=None, repr=False)

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.support_vectors.shape[0] == 0:
            return np.full(x.shape[0], self.bias)
        k = rbf_gram(x, self.support_vectors, self.gamma)
        return k @ self.dual_coef + self.bias


def train_binary_smo(
    x,
    y,
    c: float = 100.0,
    gamma: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 5,
    max_sweeps: int = 500,
    seed: int = 0,
) -> BinarySvm:
    """Solve the soft-margin RBF dual for labels in {-1, +1}.

    Sweeps all samples looking for KKT violations; a violating index is
    paired with random partners (seeded, so training is deterministic)
    until one admits an analytic pair update. Training stops after
    ``max_passes`` consecutive sweeps without an update, or after
    ``max_sweeps`` sweeps total. If KKT conditions still fail within
    ``tol`` at that point the best-so-far machine is returned with its
    ``converged`` flag cleared.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.ndim != 2:
        raise ValueError("x must be a (samples, features) matrix")
    if x.shape[0] != y.size:
        raise ValueError("x and y disagree on sample count")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("binary labels must be -1 or +1")
    if not ((y > 0).any() and (y < 0).any()):
        raise ValueError("training data contains a single class")
    if c <= 0 or gamma <= 0 or tol <= 0 or max_passes < 1:
        raise ValueError("invalid SMO configuration")

    n = x.shape[0]
    gram = rbf_gram(x, x, gamma)
    alpha = np.zeros(n)
    b = 0.0
    fx = np.zeros(n)  # running decision values gram @ (alpha*y) + b
    rng = np.random.default_rng(seed)
    # rounding can leave alphas epsilon outside [0, c]; snap to the bounds
    snap = 1e-10 * max(1.0, c)

    def _snapped(a: float) -> float:
        if a < snap:
            return 0.0
        if a > c - snap:
            return c
        return a

    passes = 0
    sweeps = 0
    while passes < max_passes and sweeps < max_sweeps:
        changed = 0
        for i in range(n):
            e_i = fx[i] - y[i]
            if not (
                (y[i] * e_i < -tol and alpha[i] < c)
                or (y[i] * e_i > tol and alpha[i] > 0)
            ):
                continue
            for j in rng.permutation(n):
                if j == i:
                    continue
                e_j = fx[j] - y[j]
                ai_old, aj_old = alpha[i], alpha[j]
                if y[i] != y[j]:
                    lo = max(0.0, aj_old - ai_old)
                    hi = min(c, c + aj_old - ai_old)
                else:
                    lo = max(0.0, ai_old + aj_old - c)
                    hi = min(c, ai_old + aj_old)
                if lo >= hi:
                    continue
                eta = 2.0 * gram[i, j] - gram[i, i] - gram[j, j]
                if eta >= 0:
                    continue
                aj = aj_old - y[j] * (e_i - e_j) / eta
                aj = _snapped(min(hi, max(lo, aj)))
                if abs(aj - aj_old) < _MIN_ALPHA_STEP:
                    continue
                ai = _snapped(ai_old + y[i] * y[j] * (aj_old - aj))
                d_i = (ai - ai_old) * y[i]
                d_j = (aj - aj_old) * y[j]
                b1 = b - e_i - d_i * gram[i, i] - d_j * gram[i, j]
                b2 = b - e_j - d_i * gram[i, j] - d_j * gram[j, j]
                if 0.0 < ai < c:
                    b_new = b1
                elif 0.0 < aj < c:
                    b_new = b2
                else:
                    b_new = 0.5 * (b1 + b2)
                fx += d_i * gram[i] + d_j * gram[j] + (b_new - b)
                alpha[i], alpha[j] = ai, aj
                b = b_new
                changed += 1
                break
        passes = passes + 1 if changed == 0 else 0
        sweeps += 1

    fx = gram @ (alpha * y) + b
    err = fx - y
    violation = ((y * err < -tol) & (alpha < c)) | ((y * err > tol) & (alpha > 0))
    converged = not bool(violation.any())

    keep = alpha > 0
    return BinarySvm(
        support_vectors=x[keep].copy(),
        dual_coef=(alpha * y)[keep],
        bias=float(b),
        gamma=float(gamma),
        converged=converged,
        alpha=alpha,
        train_labels=y,
    )


class RbfSvmClassifier(BaseEstimator, ClassifierMixin):
    """Multiclass RBF-kernel SVM: one-vs-one SMO machines, majority vote.

    Features are standardized with training mean/std before any kernel
    evaluation (zero-variance features use divisor 1). Vote ties break to
    the smallest class index.

    Parameters
    ----------
    c : float
        Soft-margin penalty.
    gamma : float or "auto"
        RBF width; "auto" means 1 / n_features.
    tol : float
        KKT violation tolerance for the SMO loop.
    max_passes : int
        Consecutive update-free sweeps before the SMO loop stops.
    max_sweeps : int
        Hard cap on total sweeps per binary machine.
    random_state : int
        Seed for SMO working-pair selection; fixed seeds give
        bit-identical models.

    Attributes
    ----------
    classes_ : ndarray
        Sorted class labels seen in fit.
    machines_ : list of (class_a, class_b, BinarySvm)
        One machine per unordered class pair, class_a < class_b.
    mean_, scale_ : ndarray
        Per-feature standardization statistics.
    converged_ : bool
        False if any binary machine hit its sweep cap unconverged.
    """

    def __init__(
        self,
        c: float = 100.0,
        gamma="auto",
        tol: float = 1e-3,
        max_passes: int = 5,
        max_sweeps: int = 500,
        random_state: int = 0,
    ):
        self.c = c
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.max_sweeps = max_sweeps
        self.random_state = random_state

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64).ravel()
        if y.size != X.shape[0]:
            raise ValueError("X and y disagree on sample count")
        self.classes_ = np.unique(y)
        if self.classes_.size < 2:
            raise ValueError("need at least 2 classes to fit")

        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        # constant features: exact zeros and rounding residue alike
        constant = scale <= 1e-12 * np.maximum(1.0, np.abs(self.mean_))
        scale[constant] = 1.0
        self.scale_ = scale
        xs = (X - self.mean_) / self.scale_

        gamma = self._resolve_gamma(X.shape[1])
        rng = np.random.default_rng(self.random_state)
        self.machines_ = []
        for ia in range(self.classes_.size):
            for ib in range(ia + 1, self.classes_.size):
                ca, cb = int(self.classes_[ia]), int(self.classes_[ib])
                mask = (y == ca) | (y == cb)
                sub_y = np.where(y[mask] == cb, 1.0, -1.0)
                machine = train_binary_smo(
                    xs[mask],
                    sub_y,
                    c=self.c,
                    gamma=gamma,
                    tol=self.tol,
                    max_passes=self.max_passes,
                    max_sweeps=self.max_sweeps,
                    seed=int(rng.integers(2**63)),
                )
                self.machines_.append((ca, cb, machine))
        self.gamma_ = gamma
        self.converged_ = all(m.converged for _, _, m in self.machines_)
        return self

    def predict(self, X):
        if not hasattr(self, "machines_"):
            raise ValueError("classifier is not fitted")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.mean_.size:
            raise ValueError(
                f"expected {self.mean_.size} features, got {X.shape[1]}"
            )
        xs = (X - self.mean_) / self.scale_
        class_index = {int(cls): k for k, cls in enumerate(self.classes_)}
        votes = np.zeros((X.shape[0], self.classes_.size), dtype=np.int64)
        for ca, cb, machine in self.machines_:
            f = machine.decision_function(xs)
            positive = f > 0
            votes[positive, class_index[cb]] += 1
            votes[~positive, class_index[ca]] += 1
        # argmax returns the first maximum, so ties go to the smallest class
        return self.classes_[votes.argmax(axis=1)]

    def _resolve_gamma(self, n_features: int) -> float:
        if self.gamma == "auto":
            return 1.0 / n_features
        gamma = float(self.gamma)
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        return gamma


class KnnClassifier(BaseEstimator, ClassifierMixin):
    """k-nearest-neighbor majority vote.

    Fast induction stand-in for wrapper loops and test suites. Distances
    are ranked in single precision; neighbor selection at the k-th
    boundary and vote ties are deterministic, with vote ties resolving to
    the smallest class.

    ``metric`` is "euclidean" (default) or "chebyshev". The max metric
    ignores duplicated feature columns entirely, which makes an exact
    duplicate of a feature already in the set a strict no-op; that is
    the right induction behavior inside redundancy-controlled wrapper
    loops.
    """

    def __init__(self, k: int = 5, metric: str = "euclidean"):
        self.k = k
        self.metric = metric

    def fit(self, X, y):
        if np.asarray(X).shape[0] == 0:
            raise ValueError("training set is empty")
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64).ravel()
        if y.size != X.shape[0]:
            raise ValueError("X and y disagree on sample count")
        if not 1 <= self.k <= X.shape[0]:
            raise ValueError(f"k={self.k} exceeds {X.shape[0]} training rows")
        if self.metric not in ("euclidean", "chebyshev"):
            raise ValueError(f"unknown metric {self.metric!r}")
        self.train_x_ = X.astype(np.float32)
        self.train_y_ = y
        self.classes_ = np.unique(y)
        return self

    def predict(self, X):
        if not hasattr(self, "train_x_"):
            raise ValueError("classifier is not fitted")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.train_x_.shape[1]:
            raise ValueError(
                f"expected {self.train_x_.shape[1]} features, got {X.shape[1]}"
            )
        n_train = self.train_x_.shape[0]
        n_labels = int(self.train_y_.max()) + 1
        out = np.empty(X.shape[0], dtype=np.int64)
        x32 = X.astype(np.float32)
        train_sq = np.sum(self.train_x_ * self.train_x_, axis=1)
        for start in range(0, X.shape[0], 2048):
            chunk = x32[start : start + 2048]
            if self.metric == "chebyshev":
                sq = np.abs(chunk[:, None, 0] - self.train_x_[None, :, 0])
                for f in range(1, chunk.shape[1]):
                    np.maximum(
                        sq,
                        np.abs(chunk[:, None, f] - self.train_x_[None, :, f]),
                        out=sq,
                    )
            else:
                sq = (
                    np.sum(chunk * chunk, axis=1)[:, None]
                    + train_sq[None, :]
                    - 2.0 * (chunk @ self.train_x_.T)
                )
            if self.k < n_train:
                nearest = np.argpartition(sq, self.k - 1, axis=1)[:, : self.k]
            else:
                nearest = np.broadcast_to(
                    np.arange(n_train), (chunk.shape[0], n_train)
                )
            labels = self.train_y_[nearest]
            flat = np.arange(chunk.shape[0])[:, None] * n_labels + labels
            counts = np.bincount(
                flat.ravel(), minlength=chunk.shape[0] * n_labels
            ).reshape(chunk.shape[0], n_labels)
            # argmax keeps the first maximum: vote ties go to the smallest class
            out[start : start + 2048] = counts.argmax(axis=1)
        return out


def knn_classify(train_x, train_y, test_x, k: int = 5) -> np.ndarray:
    """Label ``test_x`` by majority vote of the k nearest training rows."""
    return KnnClassifier(k=k).fit(train_x, train_y).predict(test_x)


def grid_search_svm(
    X,
    y,
    cs=(1.0, 10.0, 100.0, 1000.0),
    gammas=(0.01, 0.1, 1.0, 10.0),
    folds: int = 5,
    random_state: int = 0,
):
    """Coarse (c, gamma) search by stratified k-fold accuracy.

    Returns (best_c, best_gamma, best_accuracy). Ties keep the earliest
    grid entry, so the search is deterministic.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).ravel()
    rng = np.random.default_rng(random_state)
    fold_of = np.zeros(y.size, dtype=np.int64)
    for cls in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == cls))
        fold_of[idx] = np.arange(idx.size) % folds
    best = (None, None, -1.0)
    for c in cs:
        for gamma in gammas:
            hits = 0
            for fold in range(folds):
                test = fold_of == fold
                if not test.any() or np.unique(y[~test]).size < 2:
                    continue
                clf = RbfSvmClassifier(c=c, gamma=gamma, random_state=random_state)
                clf.fit(X[~test], y[~test])
                hits += int(np.sum(clf.predict(X[test]) == y[test]))
            acc = hits / y.size
            if acc > best[2]:
                best = (float(c), float(gamma), acc)
    return best
