"""Repeated random-subsampling evaluation of projection x classifier pipelines,
parameter sweeps, report rendering, and sphere-plot exports.

A single experiment draws ``trials`` disjoint train/test splits, fits the
projection on each trial's training pixels only, classifies that trial's test
pixels, and aggregates confusion matrices. Split seeds derive from the config
seed and the trial index alone, so sweeping any post-split parameter keeps the
splits paired across sweep points.
"""

import itertools
import json
import time
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .classify import nn_cosine_classify, sbomp_classify
from .data import (
    SampleSet,
    extract_neighborhood,
    l2_normalize_pixels,
    pixels_to_sample_set,
    split_train_test,
)
from .errors import ReducedDimTooSmallError, SpecAngleError, ZeroVectorError
from .projections import (
    DEFAULT_RIDGE,
    fit_ada,
    fit_lada,
    fit_lpp,
    fit_lspp,
    fit_slspp,
)
from .pursuit import BlockDictionary

__all__ = [
    "ExperimentConfig",
    "AccuracyReport",
    "run_experiment",
    "sweep",
    "fit_projection",
    "projected_block",
    "export_sphere_coords",
    "sphere_coords_csv",
    "accuracy_table",
    "accuracy_curve_csv",
]

PROJECTION_METHODS = ("lspp", "slspp", "ada", "lada", "lpp")
# "oracle" returns the true label and exists to check harness plumbing.
CLASSIFIERS = ("sbomp", "somp", "nn-cos", "oracle")

SWEEP_AXES = ("r", "sigma", "window", "sparsity")


@dataclass(frozen=True)
class ExperimentConfig:
    """One pipeline plus the subsampling protocol parameters.

    sigma=None means the median heuristic, resolved per trial from that
    trial's training samples. ``window`` drives both the spatial fit and the
    classifier neighborhoods; ``dict_window`` overrides the latter when the
    two must differ. ``normalize`` rescales every pixel spectrum to unit l2
    norm before fitting and classification.
    """

    method: str = "lspp"
    classifier: str = "nn-cos"
    r: int = 3
    sigma: Optional[float] = None
    window: int = 5
    sparsity: int = 1
    ridge: float = DEFAULT_RIDGE
    n_train: int = 10
    n_test: int = 100
    trials: int = 10
    seed: int = 0
    normalize: bool = False
    dict_window: Optional[int] = None

    def __post_init__(self):
        if self.method not in PROJECTION_METHODS:
            raise ValueError(f"method must be one of {PROJECTION_METHODS}")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"classifier must be one of {CLASSIFIERS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_train < 1 or self.n_test < 1:
            raise ValueError("n_train and n_test must be >= 1")

    def params(self):
        """Config as a plain dict, for reports."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class AccuracyReport:
    """Aggregated outcome of one experiment.

    ``confusions`` stacks one (c, c) matrix per trial, rows true class,
    columns predicted; every row sums to that class's test count. Wall-clock
    runtimes are kept for inspection but excluded from the canonical JSON so
    identical runs serialize byte-identically.
    """

    params: dict
    confusions: np.ndarray
    runtimes: tuple = ()

    @property
    def n_classes(self):
        return self.confusions.shape[1]

    @property
    def per_trial_accuracy(self):
        correct = np.trace(self.confusions, axis1=1, axis2=2)
        total = self.confusions.sum(axis=(1, 2))
        return correct / total

    @property
    def overall_accuracy(self):
        return float(self.per_trial_accuracy.mean())

    @property
    def per_class_accuracy(self):
        diag = np.diagonal(self.confusions, axis1=1, axis2=2)
        per_trial = diag / self.confusions.sum(axis=2)
        return per_trial.mean(axis=0)

    def pipeline_label(self):
        return f"{self.params['method'].upper()}--{self.params['classifier'].upper()}"

    def to_json(self):
        """Canonical JSON: sorted keys, floats rounded to 12 decimals."""
        payload = {
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "confusion_matrices": self.confusions.tolist(),
            "per_class_accuracy": [round(float(a), 12) for a in self.per_class_accuracy],
            "per_trial_accuracy": [round(float(a), 12) for a in self.per_trial_accuracy],
            "overall_accuracy": round(self.overall_accuracy, 12),
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return round(float(v), 12)
    return v


def fit_projection(work_cube, train, config):
    m = config.method
    if m == "lspp":
        return fit_lspp(train, config.r, sigma=config.sigma, ridge=config.ridge)
    if m == "lpp":
        return fit_lpp(train, config.r, sigma=config.sigma, ridge=config.ridge)
    if m == "ada":
        return fit_ada(train, r=config.r, ridge=config.ridge)
    if m == "lada":
        return fit_lada(train, r=config.r, sigma=config.sigma, ridge=config.ridge)
    return fit_slspp(
        work_cube, train.coords, config.r, window=config.window, sigma=config.sigma
    )


def projected_block(proj, cube, coord, window):
    if window == 1:
        return proj.matrix.T @ cube.values[coord[0], coord[1]][:, None]
    block = extract_neighborhood(cube, coord, window)
    return proj.matrix.T @ block.spectra


def _split_seed(seed, trial):
    # Depends on the config seed and trial index only, never on swept
    # parameters, so sweeps stay paired.
    return seed * 1_000_003 + trial


def run_experiment(cube, gt, config):
    """Run the repeated random-subsampling protocol for one pipeline.

    Returns an AccuracyReport with one confusion matrix per trial. Any error
    inside a trial aborts the experiment, annotated with the trial index.
    """
    c = gt.n_classes
    work_cube = l2_normalize_pixels(cube) if config.normalize else cube
    confusions = np.zeros((config.trials, c, c), dtype=np.int64)
    runtimes = []
    for trial in range(config.trials):
        t0 = time.perf_counter()
        try:
            confusions[trial] = _run_trial(work_cube, gt, config, trial)
        except SpecAngleError as exc:
            exc.args = (f"trial {trial}: {exc}",)
            raise
        runtimes.append(time.perf_counter() - t0)
    return AccuracyReport(
        params=config.params(), confusions=confusions, runtimes=tuple(runtimes)
    )


def _run_trial(work_cube, gt, config, trial):
    c = gt.n_classes
    train_coords, test_coords = split_train_test(
        gt, config.n_train, config.n_test, _split_seed(config.seed, trial)
    )
    train = pixels_to_sample_set(work_cube, train_coords, gt)
    test_labels = gt.labels[test_coords[:, 0], test_coords[:, 1]]
    confusion = np.zeros((c, c), dtype=np.int64)

    if config.classifier == "oracle":
        for lab in test_labels:
            confusion[lab - 1, lab - 1] += 1
        return confusion

    proj = fit_projection(work_cube, train, config)

    if config.classifier == "nn-cos":
        train_proj = SampleSet(
            features=proj.matrix.T @ train.features, labels=train.labels
        )
        for coord, true in zip(test_coords, test_labels):
            x = proj.matrix.T @ work_cube.values[coord[0], coord[1]]
            pred = nn_cosine_classify(train_proj, x).label
            confusion[true - 1, pred - 1] += 1
        return confusion

    # Sparse-representation classifiers: block dictionary from the training
    # pixels' neighborhoods (width 1 for the simultaneous variant), test side
    # always the projected test neighborhood.
    cls_window = config.window if config.dict_window is None else config.dict_window
    block_window = 1 if config.classifier == "somp" else cls_window
    blocks = [
        projected_block(proj, work_cube, coord, block_window)
        for coord in train_coords
    ]
    dictionary = BlockDictionary(blocks=tuple(blocks), classes=train.labels)
    for coord, true in zip(test_coords, test_labels):
        S = projected_block(proj, work_cube, coord, cls_window)
        pred = sbomp_classify(dictionary, S, config.sparsity).label
        confusion[true - 1, pred - 1] += 1
    return confusion


def sweep(cube, gt, config, axes):
    """Cartesian-product sweep over parameter axes.

    axes maps axis names from {"r", "sigma", "window", "sparsity"} to value
    sequences. Returns one AccuracyReport per combination, in the product
    order of the axes dict; per-trial splits are identical across
    combinations so parameter effects are paired.
    """
    for name in axes:
        if name not in SWEEP_AXES:
            raise ValueError(f"unknown sweep axis '{name}', expected {SWEEP_AXES}")
        if not axes[name]:
            raise ValueError(f"sweep axis '{name}' has no values")
    names = list(axes)
    reports = []
    for combo in itertools.product(*(axes[n] for n in names)):
        cfg = replace(config, **dict(zip(names, combo)))
        reports.append(run_experiment(cube, gt, cfg))
    return reports


# ---------------------------------------------------------------------------
# Exports and rendering


def export_sphere_coords(train, projections):
    """l2-normalized 3-D coordinates of the samples, raw and projected.

    For the original data the first three features are taken; for each
    projection the first three projected components (the ones with the
    largest eigenvalues). Every 3-vector is rescaled to unit norm. Returns a
    list of (source, label, u1, u2, u3) tuples with one row per sample per
    source.
    """
    for i, p in enumerate(projections):
        if p.r < 3:
            raise ReducedDimTooSmallError(
                f"projection {i} has r={p.r}, sphere export needs r >= 3"
            )
    labels = train.labels if train.labels is not None else np.zeros(train.n_samples, dtype=int)

    sources = [("original", train.features[:3])]
    seen = {}
    for p in projections:
        seen[p.method] = seen.get(p.method, 0) + 1
        tag = p.method if seen[p.method] == 1 else f"{p.method}-{seen[p.method]}"
        sources.append((tag, (p.matrix.T @ train.features)[:3]))

    rows = []
    for tag, coords in sources:
        norms = np.linalg.norm(coords, axis=0)
        if np.any(norms == 0.0):
            raise ZeroVectorError(
                f"{tag}: a sample has zero norm in its first three components"
            )
        unit = coords / norms
        for j in range(unit.shape[1]):
            rows.append((tag, int(labels[j]), unit[0, j], unit[1, j], unit[2, j]))
    return rows


def sphere_coords_csv(rows):
    """Render export_sphere_coords rows as CSV text."""
    out = ["source,label,u1,u2,u3"]
    out.extend(
        f"{tag},{label},{u1:.17g},{u2:.17g},{u3:.17g}"
        for tag, label, u1, u2, u3 in rows
    )
    return "\n".join(out) + "\n"


def accuracy_table(reports, class_names=None):
    """Aligned text table of class-specific and overall accuracies (percent).

    One column per report, mirroring the class-specific accuracy tables of
    the evaluation protocol.
    """
    if not reports:
        raise ValueError("need at least one report")
    c = reports[0].n_classes
    if class_names is None:
        class_names = [f"Class {i}" for i in range(1, c + 1)]
    headers = ["Class / Pipeline"] + [r.pipeline_label() for r in reports]
    body = []
    for i in range(c):
        body.append(
            [class_names[i]] + [f"{100 * r.per_class_accuracy[i]:.1f}" for r in reports]
        )
    body.append(
        ["Overall Accuracy"] + [f"{100 * r.overall_accuracy:.1f}" for r in reports]
    )
    widths = [
        max(len(row[j]) for row in [headers] + body) for j in range(len(headers))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def accuracy_curve_csv(reports, axis):
    """CSV of overall and per-class accuracy along one swept parameter."""
    c = reports[0].n_classes
    header = [axis, "overall_accuracy"] + [f"class_{i}" for i in range(1, c + 1)]
    lines = [",".join(header)]
    for r in reports:
        vals = [r.params[axis], round(r.overall_accuracy, 12)] + [
            round(float(a), 12) for a in r.per_class_accuracy
        ]
        lines.append(",".join(str(v) for v in vals))
    return "\n".join(lines) + "\n"
