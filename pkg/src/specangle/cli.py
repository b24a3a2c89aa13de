"""Command-line interface.

Subcommands: synth, fit, classify, eval, sweep, export-sphere. Every command
exits 0 on success and 1 with a structured message on stderr otherwise.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import evaluate
from .classify import nn_cosine_classify, sbomp_classify
from .data import (
    SampleSet,
    l2_normalize_pixels,
    load_cube,
    load_ground_truth,
    pixels_to_sample_set,
    save_cube,
    save_ground_truth,
    split_train_test,
    synth_scene,
)
from .errors import SpecAngleError
from .evaluate import (
    ExperimentConfig,
    accuracy_curve_csv,
    accuracy_table,
    export_sphere_coords,
    run_experiment,
    sphere_coords_csv,
    sweep,
)
from .projections import DEFAULT_RIDGE
from .pursuit import BlockDictionary

_CUBE_EXT = {"csv_bands": "csv", "envi_bsq": "bsq", "envi_bil": "bil"}


def _sigma(text):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sigma must be a float or 'auto', got '{text}'")
    return value


def _int_list(text):
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got '{text}'")


def _sigma_list(text):
    return [_sigma(tok) for tok in text.split(",")]


def _add_data_args(p):
    p.add_argument("--cube", required=True, help="cube file")
    p.add_argument("--gt", required=True, help="ground-truth file")
    p.add_argument(
        "--format", default="csv_bands", choices=["csv_bands", "envi_bsq", "envi_bil"],
        help="cube file format",
    )
    p.add_argument(
        "--gt-format", default="csv", choices=["csv", "envi"], help="ground-truth format"
    )


def _add_pipeline_args(p, lists=False):
    int_t = _int_list if lists else int
    p.add_argument(
        "--method", default="lspp",
        choices=["lspp", "slspp", "ada", "lada", "lpp"],
    )
    p.add_argument("--r", type=int_t, default=[3] if lists else 3, help="reduced dimensionality")
    p.add_argument(
        "--sigma", type=_sigma_list if lists else _sigma, default=[None] if lists else None,
        help="heat-kernel bandwidth, or 'auto' for the median heuristic",
    )
    p.add_argument("--window", type=int_t, default=[5] if lists else 5, help="spatial window side")
    p.add_argument("--ridge", type=float, default=DEFAULT_RIDGE)
    p.add_argument("--normalize", action="store_true", help="l2-normalize spectra first")


def _add_protocol_args(p, lists=False):
    int_t = _int_list if lists else int
    p.add_argument(
        "--classifier", default="nn-cos", choices=["sbomp", "somp", "nn-cos"]
    )
    p.add_argument("--sparsity", type=int_t, default=[1] if lists else 1, help="pursuit sparsity K")
    p.add_argument("--n-train", type=int, default=10, help="training samples per class")
    p.add_argument("--n-test", type=int, default=100, help="test samples per class")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--dict-window", type=int, default=None,
                   help="classifier neighborhood window, defaults to --window")


def build_parser():
    top = argparse.ArgumentParser(
        prog="specangle",
        description="Angle-preserving subspaces and block-sparse classification "
        "for hyperspectral pixels.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled scene")
    p.add_argument("--rows", type=int, default=24)
    p.add_argument("--cols", type=int, default=24)
    p.add_argument("--bands", type=int, default=20)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--noise-sd", type=float, default=0.05)
    p.add_argument("--patch-size", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--format", default="csv_bands", choices=["csv_bands", "envi_bsq", "envi_bil"]
    )
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("fit", help="fit a projection on labeled pixels")
    _add_data_args(p)
    _add_pipeline_args(p)
    p.add_argument("--n-train", type=int, default=None,
                   help="training samples per class; all labeled pixels if omitted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="projection file")

    p = sub.add_parser("classify", help="fit, then label every held-out labeled pixel")
    _add_data_args(p)
    _add_pipeline_args(p)
    p.add_argument("--classifier", default="nn-cos", choices=["sbomp", "somp", "nn-cos"])
    p.add_argument("--sparsity", type=int, default=1)
    p.add_argument("--n-train", type=int, default=10)
    p.add_argument("--dict-window", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="predictions CSV")

    p = sub.add_parser("eval", help="repeated random-subsampling evaluation")
    _add_data_args(p)
    _add_pipeline_args(p)
    _add_protocol_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="JSON report")

    p = sub.add_parser("sweep", help="eval over a parameter grid "
                       "(give --r/--sigma/--window/--sparsity comma-separated)")
    _add_data_args(p)
    _add_pipeline_args(p, lists=True)
    _add_protocol_args(p, lists=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="JSON report list")

    p = sub.add_parser("export-sphere", help="export l2-normalized 3-D coordinates")
    _add_data_args(p)
    _add_pipeline_args(p)
    p.add_argument("--methods", default="slspp,lpp",
                   help="comma-separated projection methods to fit and export")
    p.add_argument("--n-train", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="coordinates CSV")

    return top


def _load_data(args):
    cube = load_cube(args.cube, args.format)
    gt = load_ground_truth(args.gt, args.gt_format)
    if gt.labels.shape != (cube.rows, cube.cols):
        raise SpecAngleError(
            f"ground truth shape {gt.labels.shape} does not match cube "
            f"{(cube.rows, cube.cols)}"
        )
    return cube, gt


def _train_pixels(cube, gt, n_train, seed, normalize):
    work = l2_normalize_pixels(cube) if normalize else cube
    if n_train is None:
        coords = np.argwhere(gt.labels > 0)
    else:
        coords, _ = split_train_test(gt, n_train, 0, seed)
    return work, pixels_to_sample_set(work, coords, gt)


def _fit_from_args(args, work, train):
    cfg = ExperimentConfig(
        method=args.method, r=args.r, sigma=args.sigma, window=args.window,
        ridge=args.ridge,
    )
    return evaluate.fit_projection(work, train, cfg)


def _cmd_synth(args):
    cube, gt = synth_scene(
        rows=args.rows, cols=args.cols, bands=args.bands, classes=args.classes,
        noise_sd=args.noise_sd, patch_size=args.patch_size, seed=args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cube_path = out / f"cube.{_CUBE_EXT[args.format]}"
    save_cube(cube_path, cube, args.format)
    save_ground_truth(out / "gt.csv", gt)
    print(f"wrote {cube_path} and {out / 'gt.csv'}")
    return 0


def _cmd_fit(args):
    cube, gt = _load_data(args)
    work, train = _train_pixels(cube, gt, args.n_train, args.seed, args.normalize)
    proj = _fit_from_args(args, work, train)
    proj.save(args.out)
    print(f"wrote {args.out} ({proj.method}, d={proj.dim}, r={proj.r})")
    return 0


def _cmd_classify(args):
    cube, gt = _load_data(args)
    work, train = _train_pixels(cube, gt, args.n_train, args.seed, args.normalize)
    proj = _fit_from_args(args, work, train)

    train_set = set(map(tuple, train.coords))
    held_out = [
        tuple(rc) for rc in np.argwhere(gt.labels > 0) if tuple(rc) not in train_set
    ]
    cls_window = args.window if args.dict_window is None else args.dict_window
    if args.classifier == "nn-cos":
        train_proj = SampleSet(
            features=proj.matrix.T @ train.features, labels=train.labels
        )
        predict = lambda rc: nn_cosine_classify(
            train_proj, proj.matrix.T @ work.values[rc[0], rc[1]]
        ).label
    else:
        block_window = 1 if args.classifier == "somp" else cls_window
        dictionary = BlockDictionary(
            blocks=tuple(
                evaluate.projected_block(proj, work, rc, block_window)
                for rc in train.coords
            ),
            classes=train.labels,
        )
        predict = lambda rc: sbomp_classify(
            dictionary,
            evaluate.projected_block(proj, work, rc, cls_window),
            args.sparsity,
        ).label

    lines = ["row,col,true,predicted"]
    correct = 0
    for rc in held_out:
        pred = predict(rc)
        true = int(gt.labels[rc[0], rc[1]])
        correct += pred == true
        lines.append(f"{rc[0]},{rc[1]},{true},{pred}")
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    acc = 100.0 * correct / max(len(held_out), 1)
    print(f"wrote {args.out}; held-out accuracy {acc:.1f}% over {len(held_out)} pixels")
    return 0


def _config_from_args(args, **overrides):
    base = dict(
        method=args.method, classifier=args.classifier, r=args.r,
        sigma=args.sigma, window=args.window, sparsity=args.sparsity,
        ridge=args.ridge, n_train=args.n_train, n_test=args.n_test,
        trials=args.trials, seed=args.seed, normalize=args.normalize,
        dict_window=args.dict_window,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def _cmd_eval(args):
    cube, gt = _load_data(args)
    config = _config_from_args(args)
    report = run_experiment(cube, gt, config)
    Path(args.out).write_text(report.to_json(), encoding="utf-8")
    print(accuracy_table([report]), end="")
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args):
    cube, gt = _load_data(args)
    axes = {}
    for name, values in (
        ("r", args.r), ("sigma", args.sigma),
        ("window", args.window), ("sparsity", args.sparsity),
    ):
        if len(values) > 1:
            axes[name] = values
    config = _config_from_args(
        args, r=args.r[0], sigma=args.sigma[0], window=args.window[0],
        sparsity=args.sparsity[0],
    )
    reports = sweep(cube, gt, config, axes) if axes else [run_experiment(cube, gt, config)]
    payload = "[\n" + ",\n".join(r.to_json().rstrip("\n") for r in reports) + "\n]\n"
    Path(args.out).write_text(payload, encoding="utf-8")
    print(accuracy_table(reports), end="")
    if len(axes) == 1:
        axis = next(iter(axes))
        curve_path = Path(args.out).with_suffix(".curve.csv")
        curve_path.write_text(accuracy_curve_csv(reports, axis), encoding="utf-8")
        print(f"wrote {curve_path}")
    print(f"wrote {args.out}")
    return 0


def _cmd_export_sphere(args):
    cube, gt = _load_data(args)
    work, train = _train_pixels(cube, gt, args.n_train, args.seed, args.normalize)
    projections = []
    for method in args.methods.split(","):
        cfg = ExperimentConfig(
            method=method.strip(), r=args.r, sigma=args.sigma,
            window=args.window, ridge=args.ridge,
        )
        projections.append(evaluate.fit_projection(work, train, cfg))
    rows = export_sphere_coords(train, projections)
    Path(args.out).write_text(sphere_coords_csv(rows), encoding="utf-8")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "fit": _cmd_fit,
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "export-sphere": _cmd_export_sphere,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SpecAngleError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
