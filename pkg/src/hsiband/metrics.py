"""Confusion matrix and agreement metrics (per-class / average / overall
accuracy and Cohen's kappa).

Metrics are kept as ratios in [0, 1]; presentation formatting (percent,
decimal places) belongs to the CLI layer. Undefined quantities (a class
with no evaluated pixels, kappa with chance agreement 1) are reported as
NaN and excluded from averages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ConfusionMatrix:
    """Counts[t, p]: pixels of true class t+1 predicted as class p+1."""

    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (self.counts < 0).any():
            raise ValueError("confusion counts must be non-negative")

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(true_labels, predicted_labels, num_classes: int | None = None) -> ConfusionMatrix:
    """Tally a confusion matrix from two label vectors in 1..=num_classes."""
    t = np.asarray(true_labels, dtype=np.int64).ravel()
    p = np.asarray(predicted_labels, dtype=np.int64).ravel()
    if t.size != p.size:
        raise ValueError(f"length mismatch: {t.size} true vs {p.size} predicted")
    if t.size == 0:
        raise ValueError("cannot build a confusion matrix from empty inputs")
    if num_classes is None:
        num_classes = int(max(t.max(), p.max()))
    for name, v in (("true", t), ("predicted", p)):
        if v.min() < 1 or v.max() > num_classes:
            raise ValueError(f"{name} labels must lie in 1..={num_classes}")
    flat = np.bincount((t - 1) * num_classes + (p - 1), minlength=num_classes**2)
    return ConfusionMatrix(flat.reshape(num_classes, num_classes))


@dataclass
class MetricsReport:
    """Evaluation summary; NaN marks not-applicable entries."""

    ica: np.ndarray  # per-class accuracy, NaN for classes with no pixels
    aa: float
    oa: float
    kappa: float
    class_totals: np.ndarray  # evaluated pixels per true class


def metrics_report(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class accuracy, average accuracy, overall accuracy, kappa.

    Classes with zero evaluated pixels get NaN per-class accuracy and are
    excluded from the average. Kappa is (p_o - p_e) / (1 - p_e) with
    p_e the marginal chance agreement; it is NaN when p_e = 1.
    """
    total = cm.total
    if total == 0:
        raise ValueError("confusion matrix has no evaluated pixels")
    counts = cm.counts
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    diag = np.diag(counts)

    ica = np.full(cm.num_classes, np.nan)
    defined = row > 0
    ica[defined] = diag[defined] / row[defined]
    aa = float(ica[defined].mean()) if defined.any() else float("nan")

    oa = float(diag.sum() / total)
    p_e = float((row.astype(np.float64) @ col.astype(np.float64)) / total**2)
    kappa = (oa - p_e) / (1.0 - p_e) if p_e != 1.0 else float("nan")
    return MetricsReport(ica=ica, aa=aa, oa=oa, kappa=kappa, class_totals=row)
