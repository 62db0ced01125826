"""Tensor and pyramid container files.

A tensor file is one line of JSON ``{"magic":"SWT1","dtype":...,"shape":[...]}``
followed by the row-major little-endian payload: 8-byte floats for ``f64``,
interleaved re/im 8-byte pairs for ``c128``.

A pyramid is a directory holding ``manifest.json``, ``lowpass.swt``, one
``band_j{j}_n{n}.swt`` per scale/channel and, for zonal banks, the design
points in ``design.swt``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .frame import Pyramid

__all__ = ["TensorFormatError", "write_tensor", "read_tensor", "write_pyramid", "read_pyramid"]

MAGIC = "SWT1"
_DTYPES = {"f64": np.dtype("<f8"), "c128": np.dtype("<c16")}


class TensorFormatError(ValueError):
    pass


def encode_tensor(array) -> bytes:
    arr = np.asarray(array)
    dtype = "c128" if np.iscomplexobj(arr) else "f64"
    header = json.dumps({"magic": MAGIC, "dtype": dtype, "shape": list(arr.shape)}, separators=(",", ":"))
    return header.encode() + b"\n" + np.ascontiguousarray(arr, dtype=_DTYPES[dtype]).tobytes()


def decode_tensor(blob: bytes) -> np.ndarray:
    head, sep, payload = blob.partition(b"\n")
    if not sep:
        raise TensorFormatError("missing header line")
    try:
        header = json.loads(head)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"bad header: {exc}") from exc
    if header.get("magic") != MAGIC or header.get("dtype") not in _DTYPES:
        raise TensorFormatError(f"unsupported header {header!r}")
    shape = tuple(int(s) for s in header["shape"])
    dtype = _DTYPES[header["dtype"]]
    expected = dtype.itemsize * int(np.prod(shape, dtype=np.int64))
    if len(payload) != expected:
        raise TensorFormatError(f"payload has {len(payload)} bytes, expected {expected}")
    return np.frombuffer(payload, dtype=dtype).reshape(shape).astype(dtype.newbyteorder("="))


def write_tensor(path, array) -> None:
    Path(path).write_bytes(encode_tensor(array))


def read_tensor(path) -> np.ndarray:
    return decode_tensor(Path(path).read_bytes())


def _band_name(j: int, n: int) -> str:
    return f"band_j{j}_n{n}.swt"


def write_pyramid(path, pyramid: Pyramid, design_points=None) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest = dict(pyramid.manifest)
    manifest["format"] = "SWT-PYRAMID1"
    manifest["energy"] = pyramid.energy()
    manifest["files"] = {
        "lowpass": "lowpass.swt",
        "bands": [[_band_name(j, n) for n in range(pyramid.n_channels)] for j in range(pyramid.J)],
    }
    write_tensor(root / "lowpass.swt", pyramid.lowpass.astype(np.complex128))
    for j in range(pyramid.J):
        for n in range(pyramid.n_channels):
            write_tensor(root / _band_name(j, n), pyramid.bands[j, n].astype(np.complex128))
    if design_points is not None:
        write_tensor(root / "design.swt", np.asarray(design_points, dtype=np.float64))
        manifest["files"]["design"] = "design.swt"
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", newline="\n")


def read_pyramid(path, energy_rtol: float = 1e-9) -> tuple[Pyramid, np.ndarray | None]:
    """Load a pyramid directory; returns the pyramid and the design points, if stored."""
    root = Path(path)
    manifest = json.loads((root / "manifest.json").read_text())
    files = manifest["files"]
    names = files["bands"]
    if len(names) != manifest["J"] or any(len(row) != manifest["n_max"] for row in names):
        raise TensorFormatError("manifest channel count does not match its file list")
    shape = tuple(manifest["shape"])
    lowpass = read_tensor(root / files["lowpass"])
    bands = np.empty((manifest["J"], manifest["n_max"]) + shape, dtype=np.complex128)
    for j, row in enumerate(names):
        for n, name in enumerate(row):
            bands[j, n] = read_tensor(root / name)
    pyr = Pyramid(bands, lowpass, manifest)
    energy = pyr.energy()
    if abs(energy - manifest["energy"]) > energy_rtol * max(abs(manifest["energy"]), 1e-300):
        raise TensorFormatError(f"stored energy {manifest['energy']!r} != recomputed {energy!r}")
    design = read_tensor(root / files["design"]) if "design" in files else None
    return pyr, design
