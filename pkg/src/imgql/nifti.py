"""Minimal NIfTI-1 single-file (``.nii``, ``.nii.gz``) reader and writer.

Only the fields needed for grid analysis are interpreted: ``dim``,
``pixdim``, ``datatype`` and the ``scl_slope``/``scl_inter`` scaling.
Arrays are indexed ``(x, y[, z])`` as stored on disk (x fastest).
"""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import LoadError

HEADER_SIZE = 348
VOX_OFFSET = 352

DATATYPES = {
    2: np.dtype(np.uint8),
    4: np.dtype(np.int16),
    16: np.dtype(np.float32),
    512: np.dtype(np.uint16),
}
DATATYPE_CODES = {dt: code for code, dt in DATATYPES.items()}


@dataclass(frozen=True, eq=False)
class VolumeFile:
    """A 2D or 3D scalar image with per-axis spacing.

    ``data`` keeps the stored dtype; ``values()`` applies intensity scaling.
    """

    data: np.ndarray = field(repr=False)
    spacing: tuple[float, ...]
    name: str | None = None
    scl_slope: float = 0.0
    scl_inter: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim not in (2, 3):
            raise LoadError(f"volumes must be 2D or 3D, got {data.ndim} axes")
        if data.dtype not in DATATYPE_CODES:
            raise LoadError(f"unsupported payload type {data.dtype}")
        spacing = tuple(float(s) for s in self.spacing)
        if len(spacing) != data.ndim:
            raise LoadError(f"{len(spacing)} spacing values for a {data.ndim}D volume")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "spacing", spacing)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(n) for n in self.data.shape)

    def values(self) -> np.ndarray:
        out = self.data.astype(np.float64)
        if self.scl_slope != 0.0:
            out = out * self.scl_slope + self.scl_inter
        return out


def _open(path: Path, mode: str):
    if path.suffix == ".gz":
        return gzip.open(path, mode)
    return open(path, mode)


def read_nifti(path) -> VolumeFile:
    path = Path(path)
    try:
        with _open(path, "rb") as fh:
            raw = fh.read()
    except (OSError, EOFError) as exc:
        raise LoadError(f"cannot read {path}: {exc}") from None
    if len(raw) < HEADER_SIZE:
        raise LoadError(f"{path}: file too short for a NIfTI-1 header")
    for endian in "<>":
        if struct.unpack_from(endian + "i", raw, 0)[0] == HEADER_SIZE:
            break
    else:
        raise LoadError(f"{path}: not a NIfTI-1 file (bad header size)")
    magic = raw[344:348]
    if magic not in (b"n+1\0", b"ni1\0"):
        raise LoadError(f"{path}: bad NIfTI-1 magic {magic!r}")
    if magic == b"ni1\0":
        raise LoadError(f"{path}: two-file NIfTI (.hdr/.img) is not supported")
    dim = struct.unpack_from(endian + "8h", raw, 40)
    datatype = struct.unpack_from(endian + "h", raw, 70)[0]
    pixdim = struct.unpack_from(endian + "8f", raw, 76)
    vox_offset = int(struct.unpack_from(endian + "f", raw, 108)[0])
    slope, inter = struct.unpack_from(endian + "2f", raw, 112)
    if datatype not in DATATYPES:
        raise LoadError(f"{path}: unsupported NIfTI datatype code {datatype}")
    ndim = dim[0]
    if not 1 <= ndim <= 7:
        raise LoadError(f"{path}: invalid dim[0] = {ndim}")
    shape = list(dim[1:ndim + 1])
    while len(shape) > 2 and shape[-1] == 1:
        shape.pop()
    if len(shape) not in (2, 3) or min(shape) < 1:
        raise LoadError(f"{path}: only 2D and 3D volumes are supported, got dims {tuple(dim[1:ndim + 1])}")
    dtype = DATATYPES[datatype].newbyteorder(endian)
    count = int(np.prod(shape))
    end = vox_offset + count * dtype.itemsize
    if len(raw) < end:
        raise LoadError(f"{path}: payload truncated ({len(raw) - vox_offset} of {count * dtype.itemsize} bytes)")
    flat = np.frombuffer(raw, dtype=dtype, count=count, offset=vox_offset)
    data = flat.reshape(shape, order="F").astype(DATATYPES[datatype])
    spacing = tuple(abs(p) if p != 0 else 1.0 for p in pixdim[1:len(shape) + 1])
    return VolumeFile(data, spacing, path.name, float(slope), float(inter))


def write_nifti(path, volume: VolumeFile):
    path = Path(path)
    data = volume.data
    header = bytearray(VOX_OFFSET)
    struct.pack_into("<i", header, 0, HEADER_SIZE)
    dim = [data.ndim] + list(data.shape) + [1] * (7 - data.ndim)
    struct.pack_into("<8h", header, 40, *dim)
    code = DATATYPE_CODES[data.dtype]
    struct.pack_into("<hh", header, 70, code, data.dtype.itemsize * 8)
    pixdim = [1.0] + list(volume.spacing) + [1.0] * (7 - data.ndim)
    struct.pack_into("<8f", header, 76, *pixdim)
    struct.pack_into("<f", header, 108, float(VOX_OFFSET))
    struct.pack_into("<2f", header, 112, volume.scl_slope, volume.scl_inter)
    struct.pack_into("<b", header, 123, 2)  # xyzt_units: millimetres
    header[344:348] = b"n+1\0"
    payload = np.asarray(data, dtype=data.dtype.newbyteorder("<")).tobytes(order="F")
    try:
        with _open(path, "wb") as fh:
            fh.write(bytes(header))
            fh.write(payload)
    except OSError as exc:
        raise LoadError(f"cannot write {path}: {exc}") from None
