"""Binary field snapshots.

Layout (little-endian)::

    0   8s   magic "QPRINT01"
    8   u32  field kind (0 complex-scalar, 1 real-vector2, 2 real-vector3, 3 real-scalar)
    12  u32  nx
    16  u32  ny
    20  u32  reserved, 0
    24  f64  dx
    32  f64  t
    40  payload: nx*ny*components float64, index order [ix, iy, component]

A complex scalar is stored as two interleaved components (re, im).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

MAGIC = b"QPRINT01"
KINDS = ("complex-scalar", "real-vector2", "real-vector3", "real-scalar")
COMPONENTS = {"complex-scalar": 2, "real-vector2": 2, "real-vector3": 3, "real-scalar": 1}
_HEAD = struct.Struct("<8sIIIIdd")
HEADER_SIZE = _HEAD.size


@dataclass
class Snapshot:
    kind: str
    data: np.ndarray  # (nx, ny) complex, or (nx, ny[, c]) real
    dx: float
    t: float

    @property
    def nx(self) -> int:
        return self.data.shape[0]

    @property
    def ny(self) -> int:
        return self.data.shape[1]


def infer_kind(data: np.ndarray) -> str:
    if np.iscomplexobj(data):
        if data.ndim != 2:
            raise FormatError("complex snapshots must be 2D scalars")
        return "complex-scalar"
    if data.ndim == 2:
        return "real-scalar"
    if data.ndim == 3 and data.shape[2] in (2, 3):
        return "real-vector2" if data.shape[2] == 2 else "real-vector3"
    raise FormatError(f"cannot store an array of shape {data.shape}")


def encode(data: np.ndarray, dx: float, t: float, kind: str | None = None) -> bytes:
    data = np.asarray(data)
    kind = kind or infer_kind(data)
    if kind not in KINDS:
        raise FormatError(f"unknown field kind {kind!r}")
    if kind == "complex-scalar":
        payload = np.stack([data.real, data.imag], axis=-1)
    else:
        payload = data
    nx, ny = data.shape[:2]
    payload = np.ascontiguousarray(payload, dtype="<f8")
    if payload.size != nx * ny * COMPONENTS[kind]:
        raise FormatError(f"array shape {data.shape} does not match kind {kind}")
    return _HEAD.pack(MAGIC, KINDS.index(kind), nx, ny, 0, float(dx), float(t)) + payload.tobytes()


def decode(buf: bytes) -> Snapshot:
    if len(buf) < HEADER_SIZE:
        raise FormatError("file shorter than the snapshot header")
    magic, code, nx, ny, reserved, dx, t = _HEAD.unpack_from(buf)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if code >= len(KINDS):
        raise FormatError(f"unknown field kind code {code}")
    if reserved != 0:
        raise FormatError("reserved header word is not zero")
    kind = KINDS[code]
    c = COMPONENTS[kind]
    want = HEADER_SIZE + nx * ny * c * 8
    if len(buf) != want:
        raise FormatError(f"payload size {len(buf) - HEADER_SIZE} does not match {nx}x{ny}x{c} doubles")
    arr = np.frombuffer(buf, dtype="<f8", offset=HEADER_SIZE).reshape(nx, ny, c).astype(float)
    if kind == "complex-scalar":
        data = arr[..., 0] + 1j * arr[..., 1]
    elif kind == "real-scalar":
        data = arr[..., 0]
    else:
        data = arr
    return Snapshot(kind, data, dx, t)


def write_snapshot(path, data, dx: float, t: float, kind: str | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(encode(data, dx, t, kind))


def read_snapshot(path) -> Snapshot:
    with open(path, "rb") as fh:
        return decode(fh.read())
