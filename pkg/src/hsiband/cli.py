"""Command-line entry point for reproducible band-selection experiments.

Subcommands: gen-synthetic, select, classify, render-map, report.
Every run takes flat key=value config files plus flag overrides, writes
its artifacts into an output directory guarded by a lockfile, and
appends one manifest line per output file to ``run-log.txt`` there.
Outputs are byte-deterministic for fixed seeds.

Exit codes: 0 success, 2 validation failure, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import colorsys
import csv
import hashlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from .classifiers import KnnClassifier, RbfSvmClassifier, grid_search_svm
from .dataset import (
    GroundTruth,
    generate_synthetic,
    load_cube,
    load_ground_truth,
    save_cube,
    save_ground_truth,
    stratified_split,
)
from .info_theory import DEFAULT_LEVELS
from .metrics import confusion, metrics_report
from .selection import MrmrSelector, WrapperBandSelector
from .dataset import labeled_pixels

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_VALIDATION = 2

LOCK_NAME = ".hsiband.lock"
RUN_LOG = "run-log.txt"


class UsageError(Exception):
    """Invalid configuration or arguments; maps to exit code 2."""


# ---------------------------------------------------------------------------
# config handling


def _parse_config_file(path) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_MISSING = object()


def _resolve(args, config, key, default, cast=str):
    """Flag > config file > default."""
    raw = config.pop(key, _MISSING)
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if raw is not _MISSING:
        try:
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        except ValueError as exc:
            raise UsageError(f"config key {key}: {exc}") from exc
    return default


def _parse_band_list(text) -> list[int]:
    if not text:
        return []
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad band list {text!r}: {exc}") from exc


def _require_file(path, what) -> Path:
    if path is None:
        raise UsageError(f"{what} path is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file {p} does not exist")
    return p


_PATH_KEYS = frozenset(("cube", "gt", "bands_file", "predictions", "palette"))


def _config_hash(resolved: dict) -> str:
    # path-valued entries reduce to basenames so reruns in different
    # directories stay byte-identical
    parts = []
    for key in sorted(resolved):
        value = resolved[key]
        if key in _PATH_KEYS and value is not None:
            value = os.path.basename(str(value))
        parts.append(f"{key}={value}")
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:12]


class OutputDir:
    """Locked output directory with a manifest log."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self._lock = self.path / LOCK_NAME
        try:
            fd = os.open(self._lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            os.close(fd)
        except FileExistsError:
            raise RuntimeError(
                f"output directory {self.path} is locked by another run "
                f"(remove {self._lock} if stale)"
            ) from None

    def release(self):
        self._lock.unlink(missing_ok=True)

    def manifest(self, command: str, cfg_hash: str, seeds: str, filename: str):
        with open(self.path / RUN_LOG, "a") as fh:
            fh.write(
                f"command={command} config={cfg_hash} seeds={seeds} "
                f"output={filename}\n"
            )

    def file(self, name) -> Path:
        return self.path / name


def _format_ratio(value: float) -> str:
    return "NA" if math.isnan(value) else f"{100.0 * value:.2f}"


def _format_kappa(value: float) -> str:
    return "NA" if math.isnan(value) else f"{value:.4f}"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen_synthetic(args) -> int:
    config = _parse_config_file(args.config) if args.config else {}
    classes = _resolve(args, config, "classes", 6, int)
    height = _resolve(args, config, "height", 64, int)
    width = _resolve(args, config, "width", 64, int)
    informative = _resolve(args, config, "informative", 5, int)
    duplicates = _resolve(args, config, "duplicates", 0, int)
    noise_bands = _resolve(args, config, "noise_bands", 20, int)
    noise_level = _resolve(args, config, "noise_level", 0.5, float)
    seed = _resolve(args, config, "seed", 0, int)
    out_dir = _resolve(args, config, "out_dir", None)
    cube_name = _resolve(args, config, "cube_name", "synthetic.hsc")
    gt_name = _resolve(args, config, "gt_name", "synthetic.hsg")
    if config:
        raise UsageError(f"unknown config keys: {sorted(config)}")
    if out_dir is None:
        raise UsageError("an output directory is required (--out-dir)")
    if classes < 2:
        raise UsageError("classes must be >= 2")
    if min(height, width) < 1 or informative < 0 or noise_bands < 0:
        raise UsageError("invalid synthetic dimensions")
    if duplicates < 0 or duplicates > informative:
        raise UsageError("duplicates must lie in 0..informative")
    if informative + duplicates + noise_bands < 1:
        raise UsageError("the cube needs at least one band")
    if noise_level < 0:
        raise UsageError("noise level must be non-negative")

    resolved = dict(
        classes=classes, height=height, width=width, informative=informative,
        duplicates=duplicates, noise_bands=noise_bands, noise_level=noise_level,
        seed=seed, cube_name=cube_name, gt_name=gt_name,
    )
    out = OutputDir(out_dir)
    try:
        cube, gt = generate_synthetic(
            classes=classes,
            height=height,
            width=width,
            informative=informative,
            duplicates=tuple(range(duplicates)),
            noise_bands=noise_bands,
            noise_level=noise_level,
            seed=seed,
        )
        save_cube(cube, out.file(cube_name))
        save_ground_truth(gt, out.file(gt_name))
        cfg_hash = _config_hash(resolved)
        out.manifest("gen-synthetic", cfg_hash, f"seed:{seed}", cube_name)
        out.manifest("gen-synthetic", cfg_hash, f"seed:{seed}", gt_name)
        print(
            f"wrote {cube_name} ({cube.bands} bands, {cube.height}x{cube.width}) "
            f"and {gt_name} ({classes} classes)"
        )
    finally:
        out.release()
    return EXIT_OK


def _build_classifier(
    kind, svm_c, svm_gamma, svm_tol, svm_max_passes, knn_k, knn_metric, seed
):
    if kind == "svm":
        gamma = svm_gamma
        if isinstance(gamma, str) and gamma != "auto":
            gamma = float(gamma)
        return RbfSvmClassifier(
            c=svm_c, gamma=gamma, tol=svm_tol, max_passes=svm_max_passes,
            random_state=seed,
        )
    if kind == "knn":
        return KnnClassifier(k=knn_k, metric=knn_metric)
    raise UsageError(f"unknown classifier {kind!r}")


def _load_inputs(cube_path, gt_path):
    cube = load_cube(_require_file(cube_path, "cube"))
    gt = load_ground_truth(_require_file(gt_path, "ground truth"))
    if (cube.height, cube.width) != (gt.height, gt.width):
        raise UsageError(
            f"cube is {cube.height}x{cube.width} but ground truth is "
            f"{gt.height}x{gt.width}"
        )
    return cube, gt


def _cmd_select(args) -> int:
    config = _parse_config_file(args.config) if args.config else {}
    cube_path = _resolve(args, config, "cube", None)
    gt_path = _resolve(args, config, "gt", None)
    selector = _resolve(args, config, "selector", "wnmipe")
    n_bands = _resolve(args, config, "n_bands", 10, int)
    threshold = _resolve(args, config, "threshold", 0.0, float)
    levels = _resolve(args, config, "levels", DEFAULT_LEVELS, int)
    classifier = _resolve(args, config, "classifier", "svm")
    svm_c = _resolve(args, config, "svm_c", 100.0, float)
    svm_gamma = _resolve(args, config, "svm_gamma", "auto")
    svm_tol = _resolve(args, config, "svm_tol", 1e-3, float)
    svm_max_passes = _resolve(args, config, "svm_max_passes", 5, int)
    knn_k = _resolve(args, config, "knn_k", 5, int)
    knn_metric = _resolve(args, config, "knn_metric", "euclidean")
    train_fraction = _resolve(args, config, "train_fraction", 0.5, float)
    seed_selection = _resolve(args, config, "seed_selection", 1, int)
    seed_classifier = _resolve(args, config, "seed_classifier", 2, int)
    pe_mode = _resolve(args, config, "pe_mode", "fano-prediction")
    exclude = _parse_band_list(_resolve(args, config, "exclude_bands", ""))
    out_dir = _resolve(args, config, "out_dir", None)
    if config:
        raise UsageError(f"unknown config keys: {sorted(config)}")
    if out_dir is None:
        raise UsageError("an output directory is required (--out-dir)")
    if selector == "none":
        raise UsageError("no selector requested")
    if selector not in ("wnmipe", "wmif", "mrmr"):
        raise UsageError(f"unknown selector {selector!r}")
    if not 0.0 < train_fraction < 1.0:
        raise UsageError("train fraction must lie strictly between 0 and 1")

    cube, gt = _load_inputs(cube_path, gt_path)
    keep = [b for b in range(cube.bands) if b not in set(exclude)]
    if not keep:
        raise UsageError("band exclusion list removes every band")
    if not 1 <= n_bands <= len(keep):
        raise UsageError(
            f"n_bands={n_bands} must lie in 1..{len(keep)} (after exclusions)"
        )

    resolved = dict(
        cube=cube_path, gt=gt_path, selector=selector, n_bands=n_bands,
        threshold=threshold, levels=levels, classifier=classifier, svm_c=svm_c,
        svm_gamma=svm_gamma, svm_tol=svm_tol, svm_max_passes=svm_max_passes,
        knn_k=knn_k, knn_metric=knn_metric, train_fraction=train_fraction,
        seed_selection=seed_selection, seed_classifier=seed_classifier,
        pe_mode=pe_mode, exclude_bands=",".join(map(str, exclude)),
    )
    cfg_hash = _config_hash(resolved)
    seeds = f"selection:{seed_selection},classifier:{seed_classifier}"

    out = OutputDir(out_dir)
    try:
        sub = cube.select_bands(keep)
        x, y = labeled_pixels(sub, gt)
        trace = None
        if selector == "mrmr":
            sel = MrmrSelector(n_bands=n_bands, levels=levels).fit(x, y)
        else:
            est = _build_classifier(
                classifier, svm_c, svm_gamma, svm_tol, svm_max_passes, knn_k,
                knn_metric, seed_classifier,
            )
            sel = WrapperBandSelector(
                n_bands=n_bands,
                threshold=threshold,
                relevance="nmi" if selector == "wnmipe" else "mi",
                levels=levels,
                estimator=est,
                train_fraction=train_fraction,
                split_seed=seed_selection,
                pe_mode=pe_mode,
            ).fit(x, y)
            trace = sel.trace_
        original = [keep[int(j)] for j in sel.selected_bands_]

        bands_file = out.file("selected_bands.txt")
        bands_file.write_text("".join(f"{b}\n" for b in original))
        out.manifest("select", cfg_hash, seeds, "selected_bands.txt")
        if trace is not None:
            trace.write_csv(out.file("trace.csv"))
            out.manifest("select", cfg_hash, seeds, "trace.csv")
        print(f"selected {len(original)} bands: {' '.join(map(str, original))}")
    finally:
        out.release()
    return EXIT_OK


def _cmd_classify(args) -> int:
    config = _parse_config_file(args.config) if args.config else {}
    cube_path = _resolve(args, config, "cube", None)
    gt_path = _resolve(args, config, "gt", None)
    bands_path = _resolve(args, config, "bands_file", None)
    classifier = _resolve(args, config, "classifier", "svm")
    svm_c = _resolve(args, config, "svm_c", 100.0, float)
    svm_gamma = _resolve(args, config, "svm_gamma", "auto")
    svm_tol = _resolve(args, config, "svm_tol", 1e-3, float)
    svm_max_passes = _resolve(args, config, "svm_max_passes", 5, int)
    knn_k = _resolve(args, config, "knn_k", 5, int)
    knn_metric = _resolve(args, config, "knn_metric", "euclidean")
    train_fraction = _resolve(args, config, "train_fraction", 0.5, float)
    seed_split = _resolve(args, config, "seed_split", 0, int)
    seed_classifier = _resolve(args, config, "seed_classifier", 2, int)
    grid = _resolve(args, config, "grid_search", False, bool)
    out_dir = _resolve(args, config, "out_dir", None)
    if config:
        raise UsageError(f"unknown config keys: {sorted(config)}")
    if out_dir is None:
        raise UsageError("an output directory is required (--out-dir)")
    if not 0.0 < train_fraction < 1.0:
        raise UsageError("train fraction must lie strictly between 0 and 1")

    bands_file = _require_file(bands_path, "bands")
    bands = _parse_band_list(",".join(bands_file.read_text().split()))
    if not bands:
        raise UsageError(f"bands file {bands_file} is empty")
    cube, gt = _load_inputs(cube_path, gt_path)
    if max(bands) >= cube.bands or min(bands) < 0:
        raise UsageError(f"bands file references bands outside 0..{cube.bands - 1}")

    resolved = dict(
        cube=cube_path, gt=gt_path, bands_file=str(bands_path),
        classifier=classifier, svm_c=svm_c, svm_gamma=svm_gamma, svm_tol=svm_tol,
        svm_max_passes=svm_max_passes, knn_k=knn_k, knn_metric=knn_metric,
        train_fraction=train_fraction, seed_split=seed_split,
        seed_classifier=seed_classifier, grid_search=grid,
    )
    cfg_hash = _config_hash(resolved)
    seeds = f"split:{seed_split},classifier:{seed_classifier}"

    out = OutputDir(out_dir)
    try:
        x, y = labeled_pixels(cube, gt)
        x = x[:, bands]
        split = stratified_split(gt, train_fraction, seed_split)
        train_idx, test_idx = split.train_indices, split.test_indices

        if classifier == "svm" and grid:
            best_c, best_gamma, _ = grid_search_svm(
                x[train_idx], y[train_idx], random_state=seed_classifier
            )
            svm_c, svm_gamma = best_c, best_gamma
            print(f"grid search picked c={best_c} gamma={best_gamma}")
        est = _build_classifier(
            classifier, svm_c, svm_gamma, svm_tol, svm_max_passes, knn_k,
            knn_metric, seed_classifier,
        )
        est.fit(x[train_idx], y[train_idx])
        predicted = est.predict(x[test_idx])

        # prediction raster: 0 where unlabeled or used for training
        raster = np.zeros(gt.height * gt.width, dtype=np.int64)
        labeled_flat = np.flatnonzero(gt.labels.ravel() > 0)
        raster[labeled_flat[test_idx]] = predicted
        pred_gt = GroundTruth(raster.reshape(gt.height, gt.width))
        save_ground_truth(pred_gt, out.file("predictions.hsg"))
        out.manifest("classify", cfg_hash, seeds, "predictions.hsg")

        cm = confusion(y[test_idx], predicted, num_classes=gt.num_classes)
        report = metrics_report(cm)
        _write_metrics_csv(out.file("metrics.csv"), report)
        out.manifest("classify", cfg_hash, seeds, "metrics.csv")
        _write_metrics_text(out.file("metrics.txt"), report)
        out.manifest("classify", cfg_hash, seeds, "metrics.txt")
        print(
            f"OA={_format_ratio(report.oa)} AA={_format_ratio(report.aa)} "
            f"kappa={_format_kappa(report.kappa)} "
            f"({test_idx.size} test pixels, {len(bands)} bands)"
        )
    finally:
        out.release()
    return EXIT_OK


def _write_metrics_csv(path, report):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for cls, (acc, n) in enumerate(zip(report.ica, report.class_totals), 1):
            writer.writerow(["ica", cls, int(n), _format_ratio(acc)])
        writer.writerow(["aa", "", "", _format_ratio(report.aa)])
        writer.writerow(["oa", "", "", _format_ratio(report.oa)])
        writer.writerow(["kappa", "", "", _format_kappa(report.kappa)])


def _write_metrics_text(path, report):
    lines = [f"{'class':>8}  {'pixels':>8}  {'accuracy':>9}"]
    for cls, (acc, n) in enumerate(zip(report.ica, report.class_totals), 1):
        lines.append(f"{cls:>8}  {int(n):>8}  {_format_ratio(acc):>9}")
    lines.append(f"{'AA':>8}  {'':>8}  {_format_ratio(report.aa):>9}")
    lines.append(f"{'OA':>8}  {'':>8}  {_format_ratio(report.oa):>9}")
    lines.append(f"{'kappa':>8}  {'':>8}  {_format_kappa(report.kappa):>9}")
    Path(path).write_text("".join(line + "\n" for line in lines))


def default_palette_color(cls: int) -> tuple[int, int, int]:
    """Deterministic per-class color: golden-ratio hue steps on the HSV wheel."""
    hue = (cls * 0.618033988749895) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.75, 0.95)
    return round(r * 255), round(g * 255), round(b * 255)


def _read_palette_file(path) -> dict[int, tuple[int, int, int]]:
    palette = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            if len(row) != 4:
                raise UsageError(f"palette rows must be class,r,g,b: {row}")
            cls, r, g, b = (int(v) for v in row)
            palette[cls] = (r, g, b)
    return palette


def _cmd_render_map(args) -> int:
    pred_path = _require_file(args.predictions, "predictions raster")
    if args.out is None:
        raise UsageError("an output image path is required (--out)")
    gt = load_ground_truth(pred_path)
    present = sorted(int(c) for c in np.unique(gt.labels) if c > 0)
    if args.palette:
        palette = _read_palette_file(_require_file(args.palette, "palette"))
        missing = [c for c in present if c not in palette]
        if missing:
            raise UsageError(f"palette is missing classes: {missing}")
    else:
        palette = {c: default_palette_color(c) for c in present}

    img = np.zeros((gt.height, gt.width, 3), dtype=np.uint8)
    for cls in present:
        img[gt.labels == cls] = palette[cls]
    out_path = Path(args.out)
    out = OutputDir(out_path.parent if str(out_path.parent) else ".")
    try:
        with open(out_path, "wb") as fh:
            fh.write(f"P6\n{gt.width} {gt.height}\n255\n".encode())
            fh.write(img.tobytes())
        cfg_hash = _config_hash(
            dict(predictions=str(pred_path), palette=str(args.palette))
        )
        out.manifest("render-map", cfg_hash, "none", out_path.name)
        print(f"wrote {out_path} ({gt.width}x{gt.height})")
    finally:
        out.release()
    return EXIT_OK


def _read_metrics_csv(path):
    rows = {"ica": {}}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if row[0] == "ica":
                rows["ica"][int(row[1])] = (int(row[2]), row[3])
            else:
                rows[row[0]] = row[3]
    return rows


def _cmd_report(args) -> int:
    if not args.metrics:
        raise UsageError("at least one metrics CSV is required")
    if args.out is None:
        raise UsageError("an output path is required (--out)")
    parsed = [(_require_file(p, "metrics"), _read_metrics_csv(p)) for p in args.metrics]
    labels = (
        args.labels.split(",") if args.labels else [p.stem for p, _ in parsed]
    )
    if len(labels) != len(parsed):
        raise UsageError("--labels count must match the number of CSV files")
    classes = sorted(parsed[0][1]["ica"])
    for _, data in parsed[1:]:
        if sorted(data["ica"]) != classes:
            raise UsageError("metrics files disagree on the class set")

    width = max(12, *(len(lbl) + 2 for lbl in labels))
    head = f"{'class':>8} {'pixels':>8}" + "".join(f"{lbl:>{width}}" for lbl in labels)
    lines = [head]
    for cls in classes:
        pixels = parsed[0][1]["ica"][cls][0]
        cells = "".join(f"{d['ica'][cls][1]:>{width}}" for _, d in parsed)
        lines.append(f"{cls:>8} {pixels:>8}" + cells)
    for key, label in (("aa", "AA"), ("oa", "OA"), ("kappa", "kappa")):
        cells = "".join(f"{d[key]:>{width}}" for _, d in parsed)
        lines.append(f"{label:>8} {'':>8}" + cells)
    text = "".join(line + "\n" for line in lines)
    Path(args.out).write_text(text)
    print(text, end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_config_flags(sub):
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out-dir", dest="out_dir", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsiband",
        description="Band selection and classification for hyperspectral cubes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("gen-synthetic", help="write a synthetic cube + ground truth")
    _add_config_flags(g)
    g.add_argument("--classes", type=int)
    g.add_argument("--height", type=int)
    g.add_argument("--width", type=int)
    g.add_argument("--informative", type=int)
    g.add_argument("--duplicates", type=int,
                   help="copy each of the first N informative bands once")
    g.add_argument("--noise-bands", dest="noise_bands", type=int)
    g.add_argument("--noise-level", dest="noise_level", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--cube-name", dest="cube_name")
    g.add_argument("--gt-name", dest="gt_name")
    g.set_defaults(func=_cmd_gen_synthetic)

    s = subs.add_parser("select", help="run a band selector")
    _add_config_flags(s)
    s.add_argument("--cube")
    s.add_argument("--gt")
    s.add_argument("--selector", choices=["wnmipe", "wmif", "mrmr", "none"])
    s.add_argument("--n-bands", dest="n_bands", type=int)
    s.add_argument("--threshold", type=float)
    s.add_argument("--levels", type=int)
    s.add_argument("--classifier", choices=["svm", "knn"])
    s.add_argument("--svm-c", dest="svm_c", type=float)
    s.add_argument("--svm-gamma", dest="svm_gamma")
    s.add_argument("--svm-tol", dest="svm_tol", type=float)
    s.add_argument("--svm-max-passes", dest="svm_max_passes", type=int)
    s.add_argument("--knn-k", dest="knn_k", type=int)
    s.add_argument("--knn-metric", dest="knn_metric",
                   choices=["euclidean", "chebyshev"])
    s.add_argument("--train-fraction", dest="train_fraction", type=float)
    s.add_argument("--seed-selection", dest="seed_selection", type=int)
    s.add_argument("--seed-classifier", dest="seed_classifier", type=int)
    s.add_argument("--pe-mode", dest="pe_mode",
                   choices=["fano-prediction", "fano-band", "error-rate"])
    s.add_argument("--exclude-bands", dest="exclude_bands",
                   help="comma-separated band indices to drop before selection")
    s.set_defaults(func=_cmd_select)

    c = subs.add_parser("classify", help="train on a split and evaluate")
    _add_config_flags(c)
    c.add_argument("--cube")
    c.add_argument("--gt")
    c.add_argument("--bands-file", dest="bands_file")
    c.add_argument("--classifier", choices=["svm", "knn"])
    c.add_argument("--svm-c", dest="svm_c", type=float)
    c.add_argument("--svm-gamma", dest="svm_gamma")
    c.add_argument("--svm-tol", dest="svm_tol", type=float)
    c.add_argument("--svm-max-passes", dest="svm_max_passes", type=int)
    c.add_argument("--knn-k", dest="knn_k", type=int)
    c.add_argument("--knn-metric", dest="knn_metric",
                   choices=["euclidean", "chebyshev"])
    c.add_argument("--train-fraction", dest="train_fraction", type=float)
    c.add_argument("--seed-split", dest="seed_split", type=int)
    c.add_argument("--seed-classifier", dest="seed_classifier", type=int)
    c.add_argument("--grid-search", dest="grid_search", action="store_const",
                   const=True, help="coarse (c, gamma) search on the train split")
    c.set_defaults(func=_cmd_classify)

    r = subs.add_parser("render-map", help="render a label raster as a P6 pixmap")
    r.add_argument("predictions", help="HSG1 raster to render")
    r.add_argument("--out", help="output .ppm path")
    r.add_argument("--palette", help="CSV palette: class,r,g,b")
    r.set_defaults(func=_cmd_render_map)

    p = subs.add_parser("report", help="tabulate one or more metrics CSVs")
    p.add_argument("metrics", nargs="*", help="metrics.csv files to combine")
    p.add_argument("--out", help="output text file")
    p.add_argument("--labels", help="comma-separated column labels")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
