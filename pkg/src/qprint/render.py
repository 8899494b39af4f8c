"""Portable-pixmap renderings of snapshots.

Pixel (row, col) shows cell (ix = col, iy = ny - 1 - row), so +y points
up.  Styles:

    phase      complex scalar: hue = phase, lightness = |psi| / max|psi|
    direction  vector field: hue = in-plane direction, density = in-plane magnitude
    mz         real-vector3: diverging map of the z component on [-1, 1]
    diverging  real scalar: blue-white-red, symmetric about zero
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .snapshot import Snapshot, read_snapshot

STYLES = ("auto", "phase", "direction", "mz", "diverging")
_DEFAULT = {"complex-scalar": "phase", "real-vector2": "direction", "real-vector3": "mz", "real-scalar": "diverging"}


def hsv_to_rgb(h, s, v):
    """Vectorised HSV to RGB, all channels in [0, 1]."""
    h = np.mod(h, 1.0) * 6.0
    i = np.floor(h).astype(int) % 6
    f = h - np.floor(h)
    p = v * (1 - s)
    q = v * (1 - s * f)
    t = v * (1 - s * (1 - f))
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def _norm(a):
    m = float(np.max(a)) if a.size else 0.0
    return a / m if m > 0 else np.zeros_like(a)


def _diverging(v):
    v = np.clip(v, -1.0, 1.0)
    pos = np.clip(v, 0, 1)
    neg = np.clip(-v, 0, 1)
    return np.stack([1 - neg, 1 - pos - neg, 1 - pos], axis=-1)


def colorize(snap: Snapshot, style: str = "auto") -> np.ndarray:
    """RGB floats of shape (nx, ny, 3)."""
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}")
    if style == "auto":
        style = _DEFAULT[snap.kind]
    d = snap.data
    if style == "phase":
        if snap.kind != "complex-scalar":
            raise FormatError("phase style needs a complex scalar field")
        hue = (np.angle(d) + np.pi) / (2 * np.pi)
        return hsv_to_rgb(hue, np.ones_like(hue), _norm(np.abs(d)))
    if style == "direction":
        if snap.kind not in ("real-vector2", "real-vector3"):
            raise FormatError("direction style needs a vector field")
        hue = (np.arctan2(d[..., 1], d[..., 0]) + np.pi) / (2 * np.pi)
        mag = _norm(np.hypot(d[..., 0], d[..., 1]))
        return hsv_to_rgb(hue, mag, np.ones_like(hue))
    if style == "mz":
        if snap.kind != "real-vector3":
            raise FormatError("mz style needs a real-vector3 field")
        return _diverging(d[..., 2])
    if snap.kind != "real-scalar":
        raise FormatError("diverging style needs a real scalar field")
    m = float(np.max(np.abs(d))) if d.size else 0.0
    return _diverging(d / m if m > 0 else d)


def to_ppm(rgb: np.ndarray, scale: int = 1) -> bytes:
    """Binary P6 image; cell (ix, iy) lands at column ix, row ny-1-iy."""
    img = np.transpose(rgb, (1, 0, 2))[::-1]
    if scale > 1:
        img = np.repeat(np.repeat(img, scale, axis=0), scale, axis=1)
    px = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    h, w = px.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + px.tobytes()


def read_ppm(buf: bytes) -> np.ndarray:
    """Pixels (rows, cols, 3) of a P6 file written by ``to_ppm``."""
    parts = buf.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6":
        raise FormatError("not a binary PPM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


def render_file(src, dst, style: str = "auto", scale: int = 1) -> None:
    snap = read_snapshot(src)
    with open(dst, "wb") as fh:
        fh.write(to_ppm(colorize(snap, style), scale))
