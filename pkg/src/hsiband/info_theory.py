"""Histogram-based information estimators for band/label dependence.

All quantities are computed in bits (log base 2) from discrete joint
histograms over labeled pixels. Every function here is pure and safe to
call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Floating-point cancellation in H(G)+H(B)-H(G,B) can push results a hair
# below zero; anything within this tolerance is clamped to 0.
NEG_TOL = 1e-9

DEFAULT_LEVELS = 256


@dataclass
class QuantizedBand:
    """One spectral band discretized to ``levels`` histogram bins.

    ``values`` holds one bin index per labeled pixel, each in
    ``[0, levels)``.
    """

    values: np.ndarray
    levels: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim != 1:
            raise ValueError("QuantizedBand values must be 1-D")
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if self.values.size and (
            self.values.min() < 0 or self.values.max() >= self.levels
        ):
            raise ValueError("quantized values must lie in [0, levels)")

    def __len__(self):
        return self.values.size

    @property
    def codes(self) -> np.ndarray:
        return self.values

    @property
    def alphabet_size(self) -> int:
        return self.levels


@dataclass
class LabelVector:
    """Class labels for labeled pixels, values in ``1..=num_classes``.

    Unlabeled pixels (label 0) must be filtered out before construction.
    """

    labels: np.ndarray
    num_classes: int | None = None

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 1:
            raise ValueError("labels must be 1-D")
        if self.labels.size == 0:
            raise ValueError("label vector is empty")
        if self.labels.min() < 1:
            raise ValueError("labels must be >= 1 (0 marks unlabeled pixels)")
        if self.num_classes is None:
            self.num_classes = int(self.labels.max())
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")
        if self.labels.max() > self.num_classes:
            raise ValueError("label exceeds num_classes")

    def __len__(self):
        return self.labels.size

    @property
    def codes(self) -> np.ndarray:
        return self.labels - 1

    @property
    def alphabet_size(self) -> int:
        return self.num_classes


@dataclass
class JointHistogram:
    """2-D co-occurrence counts between two discrete vectors."""

    counts: np.ndarray
    total: int

    def marginal_a(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def quantize_band(values, levels: int = DEFAULT_LEVELS) -> QuantizedBand:
    """Discretize one band's (labeled-pixel) values into ``levels`` bins.

    Bin index is ``floor((v - min) / (max - min) * levels)`` clamped to
    ``levels - 1``; a constant band maps every pixel to bin 0. The min/max
    range must come from labeled pixels only, so pass the band already
    restricted to them.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("cannot quantize an empty band")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    finite = np.isfinite(v)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise ValueError(f"non-finite band value at pixel {bad}")
    lo = v.min()
    hi = v.max()
    if hi == lo:
        idx = np.zeros(v.size, dtype=np.int64)
    else:
        idx = np.floor((v - lo) / (hi - lo) * levels).astype(np.int64)
        np.clip(idx, 0, levels - 1, out=idx)
    return QuantizedBand(idx, levels)


def joint_histogram(a, b) -> JointHistogram:
    """Co-occurrence counts of two discrete vectors of equal length."""
    ca, na = a.codes, a.alphabet_size
    cb, nb = b.codes, b.alphabet_size
    if ca.size != cb.size:
        raise ValueError(
            f"length mismatch: {ca.size} vs {cb.size} labeled pixels"
        )
    if ca.size == 0:
        raise ValueError("cannot build a joint histogram from empty inputs")
    flat = np.bincount(ca * nb + cb, minlength=na * nb)
    return JointHistogram(flat.reshape(na, nb), int(ca.size))


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    c = counts[counts > 0]
    if c.size == 0:
        return 0.0
    p = c / total
    return float(-np.sum(p * np.log2(p)))


def entropy(x) -> float:
    """Shannon entropy H(X) = -sum p log2 p, in bits."""
    codes = x.codes
    if codes.size == 0:
        raise ValueError("cannot compute entropy of an empty vector")
    counts = np.bincount(codes, minlength=x.alphabet_size)
    return _entropy_from_counts(counts, codes.size)


def _joint_entropies(a, b) -> tuple[float, float, float]:
    jh = joint_histogram(a, b)
    h_a = _entropy_from_counts(jh.marginal_a(), jh.total)
    h_b = _entropy_from_counts(jh.marginal_b(), jh.total)
    h_ab = _entropy_from_counts(jh.counts.ravel(), jh.total)
    return h_a, h_b, h_ab


def mutual_information(a, b) -> float:
    """I(A,B) = H(A) + H(B) - H(A,B) in bits, from one joint histogram.

    Clamped to 0 when cancellation leaves a value within ``NEG_TOL``
    below zero.
    """
    h_a, h_b, h_ab = _joint_entropies(a, b)
    mi = h_a + h_b - h_ab
    if -NEG_TOL < mi < 0.0:
        return 0.0
    return mi


def normalized_mi(a, b) -> float:
    """Normalized mutual information (H(A) + H(B)) / H(A,B).

    The ratio is 2 for identical variables and 1 for independent ones; it
    lies in [1, 2] for all non-degenerate inputs. When both inputs are
    constant (H(A,B) = 0) the value is 1.0 by convention.
    """
    h_a, h_b, h_ab = _joint_entropies(a, b)
    if h_ab == 0.0:
        return 1.0
    return (h_a + h_b) / h_ab


def conditional_entropy(g, b) -> float:
    """H(G|B) = H(G,B) - H(B) in bits, clamped at 0."""
    _, h_b, h_gb = _joint_entropies(g, b)
    ce = h_gb - h_b
    return ce if ce > 0.0 else 0.0


def fano_pe_lower(g: LabelVector, b_est) -> float:
    """Error-probability proxy (H(G) - I(G,B) - 1) / log2(num_classes).

    ``b_est`` may be a quantized band or a predicted label vector. The
    value is a bound proxy used only for comparisons between candidate
    subsets; it can be negative and is never interpreted as an actual
    probability.
    """
    nc = getattr(g, "num_classes", 0) or 0
    if nc < 2:
        raise ValueError("fano proxy requires num_classes >= 2")
    h_g, h_b, h_gb = _joint_entropies(g, b_est)
    i_gb = h_g + h_b - h_gb
    if -NEG_TOL < i_gb < 0.0:
        i_gb = 0.0
    return (h_g - i_gb - 1.0) / np.log2(nc)


def fano_pe_upper(g: LabelVector, b_est) -> float:
    """Companion upper proxy H(G|B) / 2 (Hellman-Raviv form).

    Reporting-only interpretation; selection never uses it.
    """
    return conditional_entropy(g, b_est) / 2.0
