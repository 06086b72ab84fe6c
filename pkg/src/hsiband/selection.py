"""Band selection: relevance-ranked wrapper with an error-probability
accept gate (WNMIPE and its MI-ranked variant WMIF), plus the MRMR filter.

The wrapper ranks bands by normalized mutual information with the ground
truth, seeds the subset with the top band, then walks the remaining bands
in descending relevance. Each candidate is kept only if retraining the
induction classifier on the enlarged subset lowers the Fano
error-probability proxy by more than the threshold; rejected candidates
are discarded permanently, which is the only reading of the procedure
that terminates. Selectors follow the scikit-learn fit/transform
protocol over (n_labeled_pixels, n_bands) matrices; cube-level helper
functions wrap them for raster inputs.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_array

from .classifiers import RbfSvmClassifier
from .dataset import GroundTruth, HyperCube, labeled_pixels, stratified_train_mask
from .info_theory import (
    DEFAULT_LEVELS,
    LabelVector,
    fano_pe_lower,
    mutual_information,
    normalized_mi,
    quantize_band,
)

RELEVANCE_SCORES = {"nmi": normalized_mi, "mi": mutual_information}
PE_MODES = ("fano-prediction", "fano-band", "error-rate")


class SelectionAbortedError(RuntimeError):
    """Classifier failure inside the wrapper loop; carries the partial trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class TraceStep:
    step: int
    band: int
    relevance: float
    pe: float
    accepted: bool
    pe_star: float  # running best PE after this step


@dataclass
class SelectionTrace:
    """Ordered record of every candidate the wrapper evaluated."""

    threshold: float
    steps: list[TraceStep] = field(default_factory=list)

    def accepted_bands(self) -> list[int]:
        return [s.band for s in self.steps if s.accepted]

    def validate(self):
        """Assert internal consistency of the accept rule.

        Accepted PE values must improve on the running best by more than
        the threshold, the best-PE sequence must match, and no band may
        be visited twice (rejection is permanent).
        """
        bands = [s.band for s in self.steps]
        if len(bands) != len(set(bands)):
            raise AssertionError("a band appears twice in the trace")
        pe_star = None
        for s in self.steps:
            if s.accepted:
                if pe_star is not None and not s.pe <= pe_star - self.threshold:
                    raise AssertionError(
                        f"band {s.band} accepted with pe={s.pe} against "
                        f"pe*={pe_star} and threshold={self.threshold}"
                    )
                pe_star = s.pe
            if s.pe_star != pe_star:
                raise AssertionError("recorded pe* does not match replay")

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step", "band", "relevance", "pe", "decision", "pe_star"])
            for s in self.steps:
                writer.writerow(
                    [
                        s.step,
                        s.band,
                        repr(s.relevance),
                        repr(s.pe),
                        "accepted" if s.accepted else "rejected",
                        repr(s.pe_star),
                    ]
                )


def _relevance_scores(quantized, g: LabelVector, relevance: str) -> np.ndarray:
    try:
        score = RELEVANCE_SCORES[relevance]
    except KeyError:
        raise ValueError(f"unknown relevance criterion {relevance!r}") from None
    return np.array([score(g, q) for q in quantized])


def _descending_order(scores: np.ndarray) -> np.ndarray:
    # stable on ties: equal scores keep ascending band order
    return np.lexsort((np.arange(scores.size), -scores))


class WrapperBandSelector(BaseEstimator):
    """Incremental wrapper band selector gated by the Fano PE proxy.

    Parameters
    ----------
    n_bands : int
        Maximum number of bands to keep.
    threshold : float
        Required PE improvement margin; a candidate is accepted iff
        ``pe <= pe_star - threshold``.
    relevance : {"nmi", "mi"}
        Ranking criterion ("nmi" is the proposed selector, "mi" the
        wrapper baseline variant).
    levels : int
        Histogram bins for band quantization.
    estimator : classifier or None
        Unfitted induction classifier; cloned for every evaluation.
        Defaults to RbfSvmClassifier().
    train_fraction, split_seed :
        Stratified split used to train the classifier inside the loop;
        predictions cover all labeled pixels.
    pe_mode : {"fano-prediction", "fano-band", "error-rate"}
        What PE is computed from: the Fano proxy on the classifier's
        predicted map (default), the Fano proxy on the candidate band
        alone (no classifier), or the plain misclassification rate.

    Attributes
    ----------
    selected_bands_ : ndarray of band indices in acceptance order.
    trace_ : SelectionTrace over every evaluated candidate.
    scores_ : relevance score per band.
    """

    def __init__(
        self,
        n_bands: int = 10,
        threshold: float = 0.0,
        relevance: str = "nmi",
        levels: int = DEFAULT_LEVELS,
        estimator=None,
        train_fraction: float = 0.5,
        split_seed: int = 0,
        pe_mode: str = "fano-prediction",
    ):
        self.n_bands = n_bands
        self.threshold = threshold
        self.relevance = relevance
        self.levels = levels
        self.estimator = estimator
        self.train_fraction = train_fraction
        self.split_seed = split_seed
        self.pe_mode = pe_mode

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64).ravel()
        n_total = X.shape[1]
        if not 1 <= self.n_bands <= n_total:
            raise ValueError(
                f"n_bands={self.n_bands} must lie in 1..{n_total}"
            )
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.pe_mode not in PE_MODES:
            raise ValueError(f"unknown pe_mode {self.pe_mode!r}")

        g = LabelVector(y)
        quantized = [quantize_band(X[:, i], self.levels) for i in range(n_total)]
        scores = _relevance_scores(quantized, g, self.relevance)
        order = _descending_order(scores)

        train = stratified_train_mask(y, self.train_fraction, self.split_seed)
        base = self.estimator if self.estimator is not None else RbfSvmClassifier()
        trace = SelectionTrace(threshold=self.threshold)

        def evaluate(bands, candidate):
            if self.pe_mode == "fano-band":
                return float(fano_pe_lower(g, quantized[candidate]))
            cols = np.asarray(bands)
            est = clone(base)
            try:
                est.fit(X[train][:, cols], y[train])
                predicted = est.predict(X[:, cols])
            except Exception as exc:
                raise SelectionAbortedError(
                    f"classifier failed on bands {list(bands)}: {exc}", trace
                ) from exc
            if self.pe_mode == "error-rate":
                return float(np.mean(predicted != y))
            g_est = LabelVector(predicted, num_classes=g.num_classes)
            return float(fano_pe_lower(g, g_est))

        seed_band = int(order[0])
        selected = [seed_band]
        pe_star = evaluate(selected, seed_band)
        trace.steps.append(
            TraceStep(0, seed_band, float(scores[seed_band]), pe_star, True, pe_star)
        )

        for band in (int(i) for i in order[1:]):
            if len(selected) >= self.n_bands:
                break
            pe = evaluate(selected + [band], band)
            accepted = pe <= pe_star - self.threshold
            if accepted:
                selected.append(band)
                pe_star = pe
            trace.steps.append(
                TraceStep(
                    len(trace.steps), band, float(scores[band]), pe, accepted, pe_star
                )
            )

        if len(selected) < self.n_bands:
            warnings.warn(
                f"candidates exhausted after {len(selected)} of "
                f"{self.n_bands} requested bands"
            )
        trace.validate()
        self.selected_bands_ = np.array(selected, dtype=np.int64)
        self.trace_ = trace
        self.scores_ = scores
        self.n_features_in_ = n_total
        return self

    def transform(self, X):
        X = check_array(X, dtype=np.float64)
        return X[:, self.selected_bands_]

    def fit_transform(self, X, y):
        return self.fit(X, y).transform(X)

    def get_support(self) -> np.ndarray:
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.selected_bands_] = True
        return mask


class MrmrSelector(BaseEstimator):
    """Greedy max-relevance / min-redundancy filter over quantized bands.

    Each round keeps the band maximizing
    ``I(G, b) - mean_{s in S} I(b, s)``; no classifier is involved and
    exactly ``n_bands`` bands are returned. Ties go to the smaller band
    index.
    """

    def __init__(self, n_bands: int = 10, levels: int = DEFAULT_LEVELS):
        self.n_bands = n_bands
        self.levels = levels

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64).ravel()
        n_total = X.shape[1]
        if not 1 <= self.n_bands <= n_total:
            raise ValueError(f"n_bands={self.n_bands} must lie in 1..{n_total}")
        g = LabelVector(y)
        quantized = [quantize_band(X[:, i], self.levels) for i in range(n_total)]
        relevance = np.array([mutual_information(g, q) for q in quantized])

        selected = [int(relevance.argmax())]
        remaining = [i for i in range(n_total) if i != selected[0]]
        redundancy = np.zeros(n_total)
        while len(selected) < self.n_bands and remaining:
            last = quantized[selected[-1]]
            for cand in remaining:
                redundancy[cand] += mutual_information(quantized[cand], last)
            crit = np.array(
                [relevance[c] - redundancy[c] / len(selected) for c in remaining]
            )
            best = remaining.pop(int(crit.argmax()))
            selected.append(best)

        self.selected_bands_ = np.array(selected, dtype=np.int64)
        self.relevance_ = relevance
        self.n_features_in_ = n_total
        return self

    def transform(self, X):
        X = check_array(X, dtype=np.float64)
        return X[:, self.selected_bands_]

    def fit_transform(self, X, y):
        return self.fit(X, y).transform(X)

    def get_support(self) -> np.ndarray:
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.selected_bands_] = True
        return mask


def rank_bands_by_relevance(
    cube: HyperCube,
    gt: GroundTruth,
    relevance: str = "nmi",
    levels: int = DEFAULT_LEVELS,
) -> list[tuple[int, float]]:
    """Score all bands against the ground truth over labeled pixels.

    Returns (band, score) pairs sorted by descending score; equal scores
    keep ascending band order.
    """
    x, y = labeled_pixels(cube, gt)
    g = LabelVector(y)
    quantized = [quantize_band(x[:, i], levels) for i in range(cube.bands)]
    scores = _relevance_scores(quantized, g, relevance)
    order = _descending_order(scores)
    return [(int(i), float(scores[i])) for i in order]


def wnmipe_select(
    cube: HyperCube,
    gt: GroundTruth,
    n_bands: int,
    threshold: float = 0.0,
    levels: int = DEFAULT_LEVELS,
    estimator=None,
    train_fraction: float = 0.5,
    split_seed: int = 0,
    pe_mode: str = "fano-prediction",
):
    """NMI-ranked wrapper selection. Returns (bands, trace)."""
    x, y = labeled_pixels(cube, gt)
    sel = WrapperBandSelector(
        n_bands=n_bands,
        threshold=threshold,
        relevance="nmi",
        levels=levels,
        estimator=estimator,
        train_fraction=train_fraction,
        split_seed=split_seed,
        pe_mode=pe_mode,
    ).fit(x, y)
    return sel.selected_bands_, sel.trace_


def wmif_select(
    cube: HyperCube,
    gt: GroundTruth,
    n_bands: int,
    threshold: float = 0.0,
    levels: int = DEFAULT_LEVELS,
    estimator=None,
    train_fraction: float = 0.5,
    split_seed: int = 0,
    pe_mode: str = "fano-prediction",
):
    """MI-ranked wrapper variant; control flow identical to wnmipe_select."""
    x, y = labeled_pixels(cube, gt)
    sel = WrapperBandSelector(
        n_bands=n_bands,
        threshold=threshold,
        relevance="mi",
        levels=levels,
        estimator=estimator,
        train_fraction=train_fraction,
        split_seed=split_seed,
        pe_mode=pe_mode,
    ).fit(x, y)
    return sel.selected_bands_, sel.trace_


def mrmr_select(
    cube: HyperCube,
    gt: GroundTruth,
    n_bands: int,
    levels: int = DEFAULT_LEVELS,
) -> np.ndarray:
    """MRMR filter selection; returns exactly ``n_bands`` band indices."""
    x, y = labeled_pixels(cube, gt)
    return MrmrSelector(n_bands=n_bands, levels=levels).fit(x, y).selected_bands_


def estimate_ground_truth(
    cube: HyperCube,
    gt: GroundTruth,
    bands,
    estimator=None,
    train_fraction: float = 0.5,
    split_seed: int = 0,
    train_mask=None,
) -> np.ndarray:
    """Predict every labeled pixel from a band subset.

    Trains the classifier on a stratified split (or a caller-provided
    train mask over labeled pixels) restricted to ``bands``, then
    predicts all labeled pixels, train and test alike.
    """
    bands = np.asarray(bands, dtype=np.int64)
    if bands.size == 0:
        raise ValueError("band list is empty")
    x, y = labeled_pixels(cube, gt)
    if train_mask is None:
        train_mask = stratified_train_mask(y, train_fraction, split_seed)
    else:
        train_mask = np.asarray(train_mask, dtype=bool)
    for cls in np.unique(y):
        if not (y[train_mask] == cls).any():
            raise ValueError(f"class {int(cls)} has no training samples")
    est = clone(estimator) if estimator is not None else RbfSvmClassifier()
    est.fit(x[train_mask][:, bands], y[train_mask])
    return est.predict(x[:, bands])
