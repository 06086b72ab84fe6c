"""Band selection and classification toolkit for hyperspectral cubes."""

from .classifiers import (
    BinarySvm,
    KnnClassifier,
    RbfSvmClassifier,
    grid_search_svm,
    knn_classify,
    train_binary_smo,
)
from .dataset import (
    GroundTruth,
    HyperCube,
    TrainTestSplit,
    generate_synthetic,
    labeled_pixels,
    load_cube,
    load_ground_truth,
    save_cube,
    save_ground_truth,
    stratified_split,
)
from .info_theory import (
    JointHistogram,
    LabelVector,
    QuantizedBand,
    conditional_entropy,
    entropy,
    fano_pe_lower,
    fano_pe_upper,
    joint_histogram,
    mutual_information,
    normalized_mi,
    quantize_band,
)
from .metrics import ConfusionMatrix, MetricsReport, confusion, metrics_report
from .selection import (
    MrmrSelector,
    SelectionAbortedError,
    SelectionTrace,
    WrapperBandSelector,
    estimate_ground_truth,
    mrmr_select,
    rank_bands_by_relevance,
    wmif_select,
    wnmipe_select,
)

__version__ = "0.1.0"

__all__ = [
    "BinarySvm",
    "ConfusionMatrix",
    "GroundTruth",
    "HyperCube",
    "JointHistogram",
    "KnnClassifier",
    "LabelVector",
    "MetricsReport",
    "MrmrSelector",
    "QuantizedBand",
    "RbfSvmClassifier",
    "SelectionAbortedError",
    "SelectionTrace",
    "TrainTestSplit",
    "WrapperBandSelector",
    "conditional_entropy",
    "confusion",
    "entropy",
    "estimate_ground_truth",
    "fano_pe_lower",
    "fano_pe_upper",
    "generate_synthetic",
    "grid_search_svm",
    "joint_histogram",
    "knn_classify",
    "labeled_pixels",
    "load_cube",
    "load_ground_truth",
    "metrics_report",
    "mrmr_select",
    "mutual_information",
    "normalized_mi",
    "quantize_band",
    "rank_bands_by_relevance",
    "save_cube",
    "save_ground_truth",
    "stratified_split",
    "train_binary_smo",
    "wmif_select",
    "wnmipe_select",
]
