"""Hyperspectral cubes, ground truth, sample sets, neighborhoods, splits, and
synthetic scenes.

File formats
------------
ENVI rasters (``envi_bsq``, ``envi_bil``): payload file plus a ``<path>.hdr``
text header. Supported header fields are samples, lines, bands, interleave
(bsq/bil/bip), data type (1=uint8, 12=uint16, 4=float32, 5=float64) and byte
order (0=little-endian, default; 1=big-endian). Unknown fields are ignored
with a warning. BIP is read but never written.

``csv_bands``: comma-separated text, one band vector per line, pixels in
row-major order. The first line may be a shape comment ``# rows,cols,bands``;
without it the file is read as a single-column image. Floats are written with
17 significant digits so that float64 values round-trip exactly.

Ground truth: a CSV grid of integer class ids (0 = unlabeled) or a
single-band 8/16-bit ENVI raster.
"""

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    BadSpecError,
    EvenWindowError,
    InsufficientSamplesError,
    MalformedHeaderError,
    NonFiniteError,
    OutOfBoundsError,
    SizeMismatchError,
    UnsupportedDataTypeError,
)

__all__ = [
    "HyperCube",
    "GroundTruth",
    "SampleSet",
    "NeighborhoodBlock",
    "load_cube",
    "save_cube",
    "load_ground_truth",
    "save_ground_truth",
    "extract_neighborhood",
    "pixels_to_sample_set",
    "l2_normalize_pixels",
    "split_train_test",
    "synth_scene",
]

CUBE_FORMATS = ("envi_bsq", "envi_bil", "csv_bands")

# ENVI data type code <-> numpy dtype, little-endian baseline.
_ENVI_DTYPES = {1: "u1", 12: "u2", 4: "f4", 5: "f8"}
_ENVI_CODES = {np.dtype(v).str[1:]: k for k, v in _ENVI_DTYPES.items()}


@dataclass(frozen=True)
class HyperCube:
    """Reflectance raster indexed (row, col, band)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 3 or min(v.shape) < 1:
            raise ValueError(f"cube must be (rows, cols, bands), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("cube contains NaN or Inf")
        object.__setattr__(self, "values", v)

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def bands(self):
        return self.values.shape[2]

    def spectrum(self, row, col):
        """Band vector of one pixel."""
        return self.values[row, col]


@dataclass(frozen=True)
class GroundTruth:
    """Per-pixel class ids, 0 meaning unlabeled. Ids are contiguous 1..c."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 2:
            raise ValueError(f"labels must be 2-D, got shape {lab.shape}")
        if not np.issubdtype(lab.dtype, np.integer):
            lab = lab.astype(np.int64)
        if lab.min(initial=0) < 0:
            raise ValueError("labels must be nonnegative")
        c = int(lab.max(initial=0))
        present = np.unique(lab[lab > 0])
        if len(present) != c:
            missing = sorted(set(range(1, c + 1)) - set(present.tolist()))
            raise ValueError(f"class ids must be contiguous 1..{c}; missing {missing}")
        object.__setattr__(self, "labels", lab)

    @property
    def n_classes(self):
        return int(self.labels.max(initial=0))


@dataclass(frozen=True)
class SampleSet:
    """Spectra as matrix columns, with optional labels and pixel coordinates."""

    features: np.ndarray
    labels: Optional[np.ndarray] = None
    coords: Optional[np.ndarray] = None

    def __post_init__(self):
        F = np.asarray(self.features, dtype=float)
        if F.ndim != 2:
            raise ValueError(f"features must be (d, n), got shape {F.shape}")
        if not np.all(np.isfinite(F)):
            raise NonFiniteError("features contain NaN or Inf")
        object.__setattr__(self, "features", F)
        n = F.shape[1]
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (n,):
                raise ValueError(f"labels must have shape ({n},), got {lab.shape}")
            object.__setattr__(self, "labels", lab)
        if self.coords is not None:
            xy = np.asarray(self.coords, dtype=np.int64)
            if xy.shape != (n, 2):
                raise ValueError(f"coords must have shape ({n}, 2), got {xy.shape}")
            object.__setattr__(self, "coords", xy)

    @property
    def dim(self):
        return self.features.shape[0]

    @property
    def n_samples(self):
        return self.features.shape[1]


@dataclass(frozen=True)
class NeighborhoodBlock:
    """Spectra of the in-bounds window around one pixel, center first."""

    center: tuple
    spectra: np.ndarray
    member_coords: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# ENVI raster reading/writing


def _parse_envi_header(path):
    text = Path(path).read_text(encoding="utf-8", errors="ignore")
    fields = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.upper() == "ENVI" or "=" not in line:
            continue
        key, _, value = line.partition("=")
        key = " ".join(key.lower().split())
        fields[key] = value.strip()
    known = {"samples", "lines", "bands", "interleave", "data type", "byte order"}
    for key in sorted(set(fields) - known):
        warnings.warn(f"ignoring unsupported ENVI header field '{key}'", stacklevel=3)
    required = ("samples", "lines", "bands", "interleave", "data type")
    missing = [k for k in required if k not in fields]
    if missing:
        raise MalformedHeaderError(f"ENVI header missing fields: {missing}")
    try:
        samples = int(fields["samples"])
        lines = int(fields["lines"])
        bands = int(fields["bands"])
        dtype_code = int(fields["data type"])
        byte_order = int(fields.get("byte order", "0"))
    except ValueError as exc:
        raise MalformedHeaderError(f"unparsable ENVI header value: {exc}") from exc
    interleave = fields["interleave"].lower()
    if interleave not in ("bsq", "bil", "bip"):
        raise MalformedHeaderError(f"unknown interleave '{interleave}'")
    if dtype_code not in _ENVI_DTYPES:
        raise UnsupportedDataTypeError(f"ENVI data type {dtype_code} not supported")
    if byte_order not in (0, 1):
        raise MalformedHeaderError(f"byte order must be 0 or 1, got {byte_order}")
    return lines, samples, bands, interleave, dtype_code, byte_order


def _find_header(path):
    path = Path(path)
    for cand in (path.with_name(path.name + ".hdr"), path.with_suffix(".hdr")):
        if cand.exists():
            return cand
    raise MalformedHeaderError(f"no ENVI header found for {path}")


def _load_envi(path):
    path = Path(path)
    rows, cols, bands, interleave, code, byte_order = _parse_envi_header(
        _find_header(path)
    )
    dtype = np.dtype(("<" if byte_order == 0 else ">") + _ENVI_DTYPES[code])
    payload = path.read_bytes()
    expected = rows * cols * bands * dtype.itemsize
    if len(payload) != expected:
        raise SizeMismatchError(
            f"payload is {len(payload)} bytes, header implies {expected}"
        )
    flat = np.frombuffer(payload, dtype=dtype)
    if interleave == "bsq":
        arr = flat.reshape(bands, rows, cols).transpose(1, 2, 0)
    elif interleave == "bil":
        arr = flat.reshape(rows, bands, cols).transpose(0, 2, 1)
    else:  # bip
        arr = flat.reshape(rows, cols, bands)
    return HyperCube(values=arr.astype(float))


def _save_envi(path, values, interleave, dtype, byte_order):
    path = Path(path)
    key = np.dtype(dtype).str[1:]
    if key not in _ENVI_CODES:
        raise UnsupportedDataTypeError(
            f"dtype '{dtype}' not writable; use one of {sorted(_ENVI_CODES)}"
        )
    code = _ENVI_CODES[key]
    np_dtype = np.dtype(("<" if byte_order == 0 else ">") + _ENVI_DTYPES[code])
    rows, cols, bands = values.shape
    if interleave == "bsq":
        arr = values.transpose(2, 0, 1)
    else:  # bil
        arr = values.transpose(0, 2, 1)
    path.write_bytes(np.ascontiguousarray(arr, dtype=np_dtype).tobytes())
    header = (
        "ENVI\n"
        f"samples = {cols}\n"
        f"lines = {rows}\n"
        f"bands = {bands}\n"
        f"data type = {code}\n"
        f"interleave = {interleave}\n"
        f"byte order = {byte_order}\n"
    )
    path.with_name(path.name + ".hdr").write_text(header, encoding="utf-8")


# ---------------------------------------------------------------------------
# CSV cube reading/writing


def _load_csv_cube(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    shape = None
    if lines and lines[0].lstrip().startswith("#"):
        head = lines.pop(0).lstrip("# \t")
        try:
            rows, cols, bands = (int(tok) for tok in head.split(","))
            shape = (rows, cols, bands)
        except ValueError as exc:
            raise MalformedHeaderError(f"bad shape comment '{head}'") from exc
    data_lines = [ln for ln in lines if ln.strip()]
    if not data_lines:
        raise SizeMismatchError("csv cube has no data lines")
    try:
        rows_of_floats = [
            [float(tok) for tok in ln.split(",")] for ln in data_lines
        ]
    except ValueError as exc:
        raise MalformedHeaderError(f"unparsable csv value: {exc}") from exc
    widths = {len(r) for r in rows_of_floats}
    if len(widths) != 1:
        raise SizeMismatchError("csv lines have inconsistent band counts")
    arr = np.asarray(rows_of_floats, dtype=float)
    if shape is None:
        shape = (arr.shape[0], 1, arr.shape[1])
    rows, cols, bands = shape
    if arr.shape != (rows * cols, bands):
        raise SizeMismatchError(
            f"csv payload {arr.shape} does not match shape {shape}"
        )
    return HyperCube(values=arr.reshape(rows, cols, bands))


def _save_csv_cube(path, values):
    rows, cols, bands = values.shape
    flat = values.reshape(rows * cols, bands)
    out = [f"# {rows},{cols},{bands}"]
    out.extend(",".join(f"{v:.17g}" for v in px) for px in flat)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def load_cube(path, fmt):
    """Load a hyperspectral cube in one of the supported formats.

    For the ENVI formats the header's interleave field is authoritative, so a
    BIP file is read correctly whichever ENVI format name was passed.
    """
    if fmt not in CUBE_FORMATS:
        raise ValueError(f"format must be one of {CUBE_FORMATS}, got '{fmt}'")
    if fmt == "csv_bands":
        return _load_csv_cube(path)
    return _load_envi(path)


def save_cube(path, cube, fmt, dtype="f8", byte_order=0):
    """Write a cube. ENVI writes honor dtype (u1/u2/f4/f8) and byte order."""
    if fmt not in CUBE_FORMATS:
        raise ValueError(f"format must be one of {CUBE_FORMATS}, got '{fmt}'")
    if fmt == "csv_bands":
        _save_csv_cube(path, cube.values)
    else:
        _save_envi(path, cube.values, fmt[len("envi_"):], dtype, byte_order)


def load_ground_truth(path, fmt="csv"):
    """Load ground truth from a CSV grid or a single-band ENVI raster."""
    if fmt == "csv":
        lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
        try:
            grid = [[int(tok) for tok in ln.split(",")] for ln in lines]
        except ValueError as exc:
            raise MalformedHeaderError(f"unparsable ground-truth value: {exc}") from exc
        widths = {len(r) for r in grid}
        if len(widths) != 1:
            raise SizeMismatchError("ground-truth rows have inconsistent widths")
        return GroundTruth(labels=np.asarray(grid, dtype=np.int64))
    if fmt == "envi":
        cube = _load_envi(path)
        if cube.bands != 1:
            raise SizeMismatchError(f"ground-truth raster must be single-band, has {cube.bands}")
        return GroundTruth(labels=cube.values[:, :, 0].astype(np.int64))
    raise ValueError(f"ground-truth format must be 'csv' or 'envi', got '{fmt}'")


def save_ground_truth(path, gt):
    """Write ground truth as a CSV grid of class ids."""
    rows = [",".join(str(int(v)) for v in row) for row in gt.labels]
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Neighborhoods and sample sets


def extract_neighborhood(cube, center, window):
    """In-bounds pixels of the window x window box around center.

    The center pixel's spectrum is column 0; the remaining in-bounds pixels
    follow in row-major order. Windows are truncated at image edges.
    """
    if window < 1 or window % 2 == 0:
        raise EvenWindowError(f"window must be odd and >= 1, got {window}")
    r, c = int(center[0]), int(center[1])
    if not (0 <= r < cube.rows and 0 <= c < cube.cols):
        raise OutOfBoundsError(f"center {center} outside {cube.rows}x{cube.cols} image")
    half = window // 2
    coords = [(r, c)]
    for i in range(max(0, r - half), min(cube.rows, r + half + 1)):
        for j in range(max(0, c - half), min(cube.cols, c + half + 1)):
            if (i, j) != (r, c):
                coords.append((i, j))
    idx = np.asarray(coords)
    spectra = cube.values[idx[:, 0], idx[:, 1]].T
    return NeighborhoodBlock(center=(r, c), spectra=spectra, member_coords=coords)


def pixels_to_sample_set(cube, coords, gt=None):
    """Gather the spectra at coords into a SampleSet, with labels if gt given."""
    idx = np.asarray(coords, dtype=np.int64).reshape(-1, 2)
    feats = cube.values[idx[:, 0], idx[:, 1]].T
    labels = gt.labels[idx[:, 0], idx[:, 1]] if gt is not None else None
    return SampleSet(features=feats, labels=labels, coords=idx)


def l2_normalize_pixels(cube):
    """Scale every pixel spectrum to unit l2 norm; zero spectra stay zero."""
    norms = np.linalg.norm(cube.values, axis=2, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return HyperCube(values=cube.values / safe)


# ---------------------------------------------------------------------------
# Splits and synthetic scenes


def _philox(seed):
    # Philox is a counter-based 64-bit generator with a fully specified
    # algorithm, so streams are identical across platforms.
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def split_train_test(gt, n_train, n_test, seed):
    """Disjoint per-class random subsamples of the labeled pixels.

    For each class id in ascending order, labeled pixel coordinates are
    enumerated in row-major order and permuted with a Philox stream keyed by
    seed; the first n_train become training pixels and the next n_test test
    pixels. Returns (train_coords, test_coords) as (k, 2) int arrays.
    """
    rng = _philox(seed)
    train, test = [], []
    for cls in range(1, gt.n_classes + 1):
        coords = np.argwhere(gt.labels == cls)
        if len(coords) < n_train + n_test:
            raise InsufficientSamplesError(
                f"class {cls} has {len(coords)} labeled pixels, "
                f"needs {n_train + n_test}"
            )
        perm = rng.permutation(len(coords))
        train.append(coords[perm[:n_train]])
        test.append(coords[perm[n_train:n_train + n_test]])
    return np.concatenate(train), np.concatenate(test)


def class_signatures(bands, classes):
    """Deterministic unit-norm class spectra: Gaussian bumps shifted along the
    band axis, centered at (l - 1/2) * bands/classes with width bands/(4c)."""
    b = np.arange(bands, dtype=float)
    width = bands / (4.0 * classes)
    sigs = np.empty((classes, bands))
    for l in range(1, classes + 1):
        center = (l - 0.5) * bands / classes
        g = np.exp(-((b - center) ** 2) / (2.0 * width**2))
        sigs[l - 1] = g / np.linalg.norm(g)
    return sigs


def synth_scene(rows, cols, bands, classes, noise_sd=0.05, patch_size=6, seed=0):
    """Deterministic synthetic scene of single-class square patches.

    The image is tiled into patch_size x patch_size patches (truncated at the
    edges); the patch at patch-grid position (pr, pc) gets class
    ((pr + pc) mod classes) + 1, so horizontally and vertically adjacent
    patches always differ. Each pixel is its class signature scaled by
    1 + jitter with jitter ~ U(-0.25, 0.25), plus iid N(0, noise_sd^2) noise
    per band. All randomness comes from one Philox stream keyed by seed
    (jitter drawn first, then noise), so scenes are bit-identical per seed.
    """
    if classes < 2:
        raise BadSpecError(f"need at least 2 classes, got {classes}")
    if bands < classes:
        raise BadSpecError(f"need bands >= classes, got {bands} < {classes}")
    if rows < 1 or cols < 1 or patch_size < 1:
        raise BadSpecError("rows, cols and patch_size must be positive")
    if noise_sd < 0:
        raise BadSpecError(f"noise_sd must be nonnegative, got {noise_sd}")

    pr = np.arange(rows) // patch_size
    pc = np.arange(cols) // patch_size
    labels = ((pr[:, None] + pc[None, :]) % classes + 1).astype(np.int64)
    present = np.unique(labels)
    if len(present) != classes:
        raise BadSpecError(
            f"scene too small to place all {classes} classes; got {len(present)}"
        )

    sigs = class_signatures(bands, classes)
    rng = _philox(seed)
    jitter = rng.uniform(-0.25, 0.25, size=(rows, cols))
    values = sigs[labels - 1] * (1.0 + jitter)[:, :, None]
    if noise_sd > 0:
        values = values + rng.normal(0.0, noise_sd, size=(rows, cols, bands))
    return HyperCube(values=values), GroundTruth(labels=labels)
