"""Hyperspectral cube / ground-truth containers, splits, synthetic data.

Binary container layouts (all integers little-endian):

* cube: magic ``HSC1`` + u32 height, width, bands + ``h*w*b`` float32
  values, band-sequential (band-major, row-major within a band).
* ground truth: magic ``HSG1`` + u32 height, width + ``h*w`` u16 labels,
  row-major; label 0 marks unlabeled pixels.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np

CUBE_MAGIC = b"HSC1"
GT_MAGIC = b"HSG1"


class ContainerError(ValueError):
    """Base class for malformed container files."""


class BadMagicError(ContainerError):
    """File does not start with a known container magic."""


class WrongContainerTypeError(ContainerError):
    """File is a valid container of the other kind."""


class TruncatedContainerError(ContainerError):
    """Payload is shorter than the header promises."""


class NonFiniteDataError(ContainerError):
    """Cube payload contains NaN or infinite values."""


@dataclass
class HyperCube:
    """Reflectance raster, stored band-major as a (bands, height, width) array."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        if self.data.ndim != 3:
            raise ValueError("cube data must have shape (bands, height, width)")
        if min(self.data.shape) < 1:
            raise ValueError("cube dimensions must all be >= 1")
        if not np.isfinite(self.data).all():
            raise NonFiniteDataError("cube contains non-finite values")

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def band(self, index: int) -> np.ndarray:
        return self.data[index]

    def select_bands(self, indices) -> "HyperCube":
        return HyperCube(self.data[np.asarray(indices, dtype=np.int64)])


@dataclass
class GroundTruth:
    """Per-pixel class raster; 0 = unlabeled, classes run 1..=num_classes."""

    labels: np.ndarray

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 2:
            raise ValueError("ground truth must be a 2-D raster")
        if min(self.labels.shape) < 1:
            raise ValueError("ground-truth dimensions must be >= 1")
        if self.labels.size and self.labels.min() < 0:
            raise ValueError("labels must be non-negative")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def num_classes(self) -> int:
        return int(self.labels.max())

    @property
    def labeled_mask(self) -> np.ndarray:
        return self.labels > 0

    @property
    def labeled_count(self) -> int:
        return int(np.count_nonzero(self.labels))


def labeled_pixels(cube: HyperCube, gt: GroundTruth):
    """Extract (X, y) over labeled pixels in row-major raster order.

    X has shape (n_labeled, bands); y holds the matching class labels.
    """
    if (cube.height, cube.width) != (gt.height, gt.width):
        raise ValueError(
            f"cube is {cube.height}x{cube.width} but ground truth is "
            f"{gt.height}x{gt.width}"
        )
    mask = gt.labeled_mask.ravel()
    if not mask.any():
        raise ValueError("ground truth has no labeled pixels")
    flat = cube.data.reshape(cube.bands, -1)
    x = flat[:, mask].T.astype(np.float64)
    y = gt.labels.ravel()[mask]
    return x, y


def save_cube(cube: HyperCube, path):
    with open(path, "wb") as fh:
        fh.write(CUBE_MAGIC)
        fh.write(struct.pack("<III", cube.height, cube.width, cube.bands))
        fh.write(np.ascontiguousarray(cube.data, dtype="<f4").tobytes())


def load_cube(path) -> HyperCube:
    with open(path, "rb") as fh:
        raw = fh.read()
    _check_magic(raw, CUBE_MAGIC, GT_MAGIC, "cube", "ground-truth")
    if len(raw) < 16:
        raise TruncatedContainerError(
            f"cube header needs 16 bytes, file has {len(raw)}"
        )
    height, width, bands = struct.unpack("<III", raw[4:16])
    if min(height, width, bands) < 1:
        raise ContainerError("cube dimensions must all be >= 1")
    expect = height * width * bands * 4
    payload = raw[16:]
    if len(payload) != expect:
        raise TruncatedContainerError(
            f"cube payload: expected {expect} bytes, found {len(payload)}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(bands, height, width)
    if not np.isfinite(data).all():
        raise NonFiniteDataError("cube payload contains non-finite values")
    return HyperCube(data.copy())


def save_ground_truth(gt: GroundTruth, path):
    if gt.labels.max() > 65535:
        raise ValueError("label values above 65535 cannot be stored")
    with open(path, "wb") as fh:
        fh.write(GT_MAGIC)
        fh.write(struct.pack("<II", gt.height, gt.width))
        fh.write(np.ascontiguousarray(gt.labels, dtype="<u2").tobytes())


def load_ground_truth(path) -> GroundTruth:
    with open(path, "rb") as fh:
        raw = fh.read()
    _check_magic(raw, GT_MAGIC, CUBE_MAGIC, "ground-truth", "cube")
    if len(raw) < 12:
        raise TruncatedContainerError(
            f"ground-truth header needs 12 bytes, file has {len(raw)}"
        )
    height, width = struct.unpack("<II", raw[4:12])
    if min(height, width) < 1:
        raise ContainerError("ground-truth dimensions must be >= 1")
    expect = height * width * 2
    payload = raw[12:]
    if len(payload) != expect:
        raise TruncatedContainerError(
            f"ground-truth payload: expected {expect} bytes, found {len(payload)}"
        )
    labels = np.frombuffer(payload, dtype="<u2").reshape(height, width)
    return GroundTruth(labels.astype(np.int64))


def _check_magic(raw: bytes, want: bytes, other: bytes, kind: str, other_kind: str):
    head = raw[:4]
    if head == want:
        return
    if head == other:
        raise WrongContainerTypeError(
            f"wrong container type: file is a {other_kind} container "
            f"({other.decode()}), expected a {kind} container ({want.decode()})"
        )
    raise BadMagicError(f"unrecognized container magic {head!r}")


@dataclass
class TrainTestSplit:
    """Train/test assignment over labeled pixels (row-major order)."""

    fraction: float
    seed: int
    train_mask: np.ndarray

    @property
    def train_indices(self) -> np.ndarray:
        return np.flatnonzero(self.train_mask)

    @property
    def test_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.train_mask)


def stratified_train_mask(y, fraction: float, seed: int) -> np.ndarray:
    """Boolean train mask over a label vector, sampled per class.

    Train counts are round-half-up(fraction * class size), clamped to
    [1, size - 1]. A single-pixel class goes entirely to train with a
    warning instead of failing.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("train fraction must lie strictly between 0 and 1")
    y = np.asarray(y, dtype=np.int64).ravel()
    if y.size == 0:
        raise ValueError("no labeled pixels to split")
    rng = np.random.default_rng(seed)
    train_mask = np.zeros(y.size, dtype=bool)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        size = idx.size
        if size == 1:
            warnings.warn(
                f"class {int(cls)} has a single labeled pixel; assigning it "
                "to the training set"
            )
            train_mask[idx] = True
            continue
        n_train = int(np.floor(fraction * size + 0.5))
        n_train = min(max(n_train, 1), size - 1)
        chosen = rng.permutation(idx)[:n_train]
        train_mask[chosen] = True
    return train_mask


def stratified_split(gt: GroundTruth, fraction: float, seed: int) -> TrainTestSplit:
    """Per-class random split of labeled pixels at ``fraction`` for training."""
    y = gt.labels.ravel()
    y = y[y > 0]
    if y.size == 0:
        raise ValueError("ground truth has no labeled pixels")
    return TrainTestSplit(fraction, seed, stratified_train_mask(y, fraction, seed))


def generate_synthetic(
    classes: int = 6,
    height: int = 64,
    width: int = 64,
    informative: int = 5,
    duplicates=(),
    noise_bands: int = 20,
    noise_level: float = 0.5,
    seed: int = 0,
):
    """Build a labeled synthetic cube with known band families.

    Labels tile the raster as contiguous row-major blocks, balanced to
    within one pixel. Band layout: ``informative`` class-driven bands
    first (per-band shuffled class means plus Gaussian noise), then one
    exact copy per entry of ``duplicates`` (each an informative band
    index), then ``noise_bands`` label-independent Gaussian bands.

    Returns (HyperCube, GroundTruth).
    """
    if classes < 2:
        raise ValueError("need at least 2 classes")
    if informative < 0 or noise_bands < 0:
        raise ValueError("band counts must be non-negative")
    duplicates = tuple(int(d) for d in duplicates)
    for d in duplicates:
        if not 0 <= d < informative:
            raise ValueError(f"duplicate source {d} is not an informative band")
    total_bands = informative + len(duplicates) + noise_bands
    if total_bands < 1:
        raise ValueError("cube must have at least one band")

    n = height * width
    # Contiguous, balanced class blocks in row-major order.
    bounds = np.linspace(0, n, classes + 1).round().astype(np.int64)
    labels = np.zeros(n, dtype=np.int64)
    for c in range(classes):
        labels[bounds[c] : bounds[c + 1]] = c + 1
    gt = GroundTruth(labels.reshape(height, width))

    rng = np.random.default_rng(seed)
    data = np.empty((total_bands, n), dtype=np.float64)
    for i in range(informative):
        means = rng.permutation(classes).astype(np.float64)
        data[i] = means[labels - 1]
        if noise_level > 0:
            data[i] += rng.normal(0.0, noise_level, n)
    for j, src in enumerate(duplicates):
        data[informative + j] = data[src]
    # spread comparable to the class-mean range, so noise bands disrupt
    # distance metrics instead of hiding next to the informative signal
    noise_scale = max(1.0, classes / 2.0)
    for k in range(noise_bands):
        data[informative + len(duplicates) + k] = rng.normal(0.0, noise_scale, n)

    cube = HyperCube(data.reshape(total_bands, height, width).astype(np.float32))
    return cube, gt
