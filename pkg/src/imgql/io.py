"""Volume loading and saving, model construction and label overlays."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import LoadError
from .model import RESERVED, Model
from .nifti import VolumeFile, read_nifti, write_nifti
from .space import Adjacency, GridSpace, PointSet
from .syntax import ModelDecl

MODEL_KINDS = ("med",)

DEFAULT_PALETTE = {
    1: (0, 0, 255),
    2: (255, 255, 0),
    3: (0, 255, 255),
    4: (255, 0, 255),
    5: (255, 128, 0),
    6: (128, 0, 255),
    7: (0, 255, 0),
    8: (255, 0, 0),
    9: (255, 255, 255),
}


def _is_nifti(path: Path) -> bool:
    name = path.name.lower()
    return name.endswith(".nii") or name.endswith(".nii.gz")


def _is_png(path: Path) -> bool:
    return path.suffix.lower() == ".png"


def load_volume(path) -> VolumeFile:
    """Read a NIfTI-1 volume or a grayscale PNG.

    PNG images become 2D volumes indexed ``(x, y)`` with unit spacing, so
    that both formats share one axis convention.
    """
    path = Path(path)
    if not path.is_file():
        raise LoadError(f"no such file: {path}")
    if _is_nifti(path):
        return read_nifti(path)
    if _is_png(path):
        return _read_png(path)
    raise LoadError(f"{path}: unsupported image format (expected .nii, .nii.gz or .png)")


def _read_png(path: Path) -> VolumeFile:
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            arr = np.asarray(img)
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from None
    if mode == "L":
        data = arr.astype(np.uint8)
    elif mode in ("I;16", "I;16B", "I;16L"):
        data = arr.astype(np.uint16)
    elif mode == "I":
        if arr.min() < 0 or arr.max() > 65535:
            raise LoadError(f"{path}: 32-bit PNG values do not fit 16 bits")
        data = arr.astype(np.uint16)
    else:
        raise LoadError(f"{path}: PNG mode {mode!r} is not grayscale")
    return VolumeFile(np.ascontiguousarray(data.T), (1.0, 1.0), path.name)


def save_volume(path, volume: VolumeFile):
    path = Path(path)
    if _is_nifti(path):
        write_nifti(path, volume)
    elif _is_png(path):
        if volume.data.ndim != 2 or volume.data.dtype not in (np.uint8, np.uint16):
            raise LoadError(f"{path}: PNG output needs a 2D 8- or 16-bit volume")
        try:
            Image.fromarray(np.ascontiguousarray(volume.data.T)).save(path)
        except OSError as exc:
            raise LoadError(f"cannot write {path}: {exc}") from None
    else:
        raise LoadError(f"{path}: unsupported image format (expected .nii, .nii.gz or .png)")


def load_model(decl: ModelDecl | str, base_dir=".", adjacency: Adjacency = Adjacency.ORTHODIAGONAL) -> Model:
    """Load every bound image of a model declaration into one model.

    All images must share dimensions and spacing; nothing is resampled.
    """
    if isinstance(decl, str):
        from .parser import parse_model_spec

        kind, bindings = parse_model_spec(decl)
    else:
        kind, bindings = decl.kind, decl.bindings
    if kind not in MODEL_KINDS:
        raise LoadError(f"unsupported model kind {kind!r} (expected one of: {', '.join(MODEL_KINDS)})")
    base = Path(base_dir)
    volumes = {}
    for name, rel in bindings:
        if name in RESERVED:
            raise LoadError(f"attribute name {name!r} is reserved")
        path = Path(rel)
        volumes[name] = (path, load_volume(path if path.is_absolute() else base / path))
    first_name, (first_path, first) = next(iter(volumes.items()))
    offenders = [
        f"{name} ({path}: dims {v.dims}, spacing {v.spacing})"
        for name, (path, v) in volumes.items()
        if v.dims != first.dims or not np.allclose(v.spacing, first.spacing, rtol=1e-6, atol=0)
    ]
    if offenders:
        raise LoadError(
            f"images must share dims and spacing with {first_name} "
            f"(dims {first.dims}, spacing {first.spacing}); mismatched: {'; '.join(offenders)}"
        )
    space = GridSpace(first.dims, first.spacing, adjacency)
    return Model(space, {name: v.values() for name, (_, v) in volumes.items()})


def label_volume(space: GridSpace, labels: np.ndarray) -> VolumeFile:
    labels = np.asarray(labels)
    dtype = np.uint8 if labels.max(initial=0) <= 255 else np.uint16
    return VolumeFile(labels.astype(dtype), space.spacing)


def paint_labels(space: GridSpace, layers) -> np.ndarray:
    """Label array from ``(label_id, PointSet)`` pairs; later layers win."""
    labels = np.zeros(space.dims, dtype=np.int64)
    for label, points in layers:
        labels[points.mask] = label
    return labels


def load_palette(path) -> dict[int, tuple[int, int, int]]:
    """Read a JSON object mapping label ids to ``[r, g, b]`` triples."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise LoadError(f"cannot read palette {path}: {exc}") from None
    palette = {}
    try:
        for key, rgb in raw.items():
            r, g, b = (int(c) for c in rgb)
            if not all(0 <= c <= 255 for c in (r, g, b)):
                raise ValueError(f"colour {rgb} out of range")
            palette[int(key)] = (r, g, b)
    except (AttributeError, TypeError, ValueError) as exc:
        raise LoadError(f"bad palette {path}: {exc}") from None
    return palette


def palette_color(palette: dict, label: int) -> tuple[int, int, int]:
    if label in palette:
        return palette[label]
    rng = np.random.default_rng(label)
    return tuple(int(c) for c in rng.integers(64, 256, size=3))


def overlay(base: np.ndarray, labels: np.ndarray, palette: dict | None = None, alpha: float = 0.5) -> np.ndarray:
    """RGB image of ``labels`` blended over a grayscale rendering of ``base``.

    Returns an ``(x, y, 3)`` uint8 array; unlabeled points keep the gray value.
    """
    palette = DEFAULT_PALETTE if palette is None else palette
    base = np.asarray(base, dtype=np.float64)
    lo, hi = float(base.min()), float(base.max())
    gray = np.zeros_like(base) if hi <= lo else (base - lo) / (hi - lo) * 255.0
    rgb = np.repeat(gray[..., None], 3, axis=-1)
    for label in np.unique(labels):
        if label == 0:
            continue
        mask = labels == label
        color = np.array(palette_color(palette, int(label)), dtype=np.float64)
        rgb[mask] = (1 - alpha) * rgb[mask] + alpha * color
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def save_overlay(path, rgb: np.ndarray):
    try:
        Image.fromarray(np.ascontiguousarray(rgb.transpose(1, 0, 2))).save(path)
    except OSError as exc:
        raise LoadError(f"cannot write {path}: {exc}") from None


def pointset_from_labels(space: GridSpace, labels: np.ndarray, label: int | None = None) -> PointSet:
    mask = labels != 0 if label is None else labels == label
    return PointSet(space, mask)
