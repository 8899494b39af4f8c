"""Laguerre-Gaussian drive fields in the focal plane.

All fields are phasors with an ``exp(+i omega t)`` carrier; the physical
field is the real part.  The vector potential uses the temporal gauge
(zero scalar potential), so ``E = -dA/dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ZeroOnContour
from .grid import GridSpec

EPS_CONTOUR = 1e-12

# trapezoid step for pulsed envelopes is 2*pi/(omega * _PULSE_STEPS_PER_PERIOD)
_PULSE_STEPS_PER_PERIOD = 2048


@dataclass(frozen=True)
class Envelope:
    """Temporal envelope: continuous wave or a Gaussian pulse."""

    kind: str = "cw"
    t0: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if self.kind not in ("cw", "gaussian"):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind == "gaussian" and not self.tau > 0:
            raise ValueError("pulse duration tau must be positive")

    def __call__(self, t):
        if self.kind == "cw":
            return np.ones_like(np.asarray(t, dtype=float))
        return np.exp(-((np.asarray(t, dtype=float) - self.t0) ** 2) / (2 * self.tau**2))


@dataclass(frozen=True)
class BeamSpec:
    p: int = 0
    l: int = 0
    sigma: int = 0
    theta_pol: float = 0.0
    E0: float = 1.0
    w0: float = 1.0
    omega: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)
    envelope: Envelope = field(default_factory=Envelope)

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("radial order p must be >= 0")
        if self.sigma not in (-1, 0, 1):
            raise ValueError("sigma must be -1, 0 or +1")
        if not self.w0 > 0:
            raise ValueError("waist w0 must be positive")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.E0 < 0:
            raise ValueError("E0 must be non-negative")

    @property
    def polarization(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta_pol), np.exp(0.5j * math.pi * self.sigma) * math.sin(self.theta_pol)]
        )


def assoc_laguerre(n: int, alpha: float, x):
    """Associated Laguerre polynomial L_n^alpha(x) by three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def lg_norm(p: int, l: int, w0: float) -> float:
    return math.sqrt(2.0 * math.factorial(p) / (math.pi * math.factorial(p + abs(l)))) / w0


def lg_mode(spec: BeamSpec, r, phi_az):
    """Unit-power LG transverse mode u_{p,l}(r, phi) in the focal plane."""
    r = np.asarray(r, dtype=float)
    al = abs(spec.l)
    s = 2.0 * r**2 / spec.w0**2
    radial = (math.sqrt(2.0) * r / spec.w0) ** al * assoc_laguerre(spec.p, al, s) * np.exp(-(r**2) / spec.w0**2)
    return lg_norm(spec.p, spec.l, spec.w0) * radial * np.exp(-1j * spec.l * np.asarray(phi_az))


def _polar(spec: BeamSpec, x, y):
    X = np.asarray(x, dtype=float) - spec.center[0]
    Y = np.asarray(y, dtype=float) - spec.center[1]
    return np.hypot(X, Y), np.arctan2(Y, X)


def spatial_phasor(spec: BeamSpec, x, y) -> np.ndarray:
    """E0 * u(r, phi) * polarization, shape ``broadcast(x, y) + (2,)``."""
    r, phi = _polar(spec, x, y)
    u = spec.E0 * lg_mode(spec, r, phi)
    return u[..., None] * spec.polarization


def beam_E(spec: BeamSpec, x, y, t) -> np.ndarray:
    """Complex transverse field phasor at (x, y, t); Re[...] is the physical field."""
    carrier = spec.envelope(t) * np.exp(1j * spec.omega * np.asarray(t, dtype=float))
    return spatial_phasor(spec, x, y) * np.asarray(carrier)[..., None]


@lru_cache(maxsize=16)
def _pulse_table(omega: float, t0: float, tau: float, t_end: float):
    h = 2 * math.pi / (omega * _PULSE_STEPS_PER_PERIOD)
    n = int(math.ceil(t_end / h)) + 2
    ts = h * np.arange(n)
    f = np.exp(-((ts - t0) ** 2) / (2 * tau**2)) * np.exp(1j * omega * ts)
    cum = np.zeros(n, dtype=complex)
    cum[1:] = np.cumsum(0.5 * h * (f[1:] + f[:-1]))
    return h, f, cum


def carrier_integral(spec: BeamSpec, t):
    """Complex scalar I(t) with dI/dt = envelope(t) exp(i omega t).

    Continuous wave: the periodic antiderivative exp(i omega t)/(i omega).
    Gaussian pulse: trapezoid integral from 0 on a fixed global step grid,
    plus a trapezoid over the last partial step (so I is continuous in t).
    """
    t = np.asarray(t, dtype=float)
    env = spec.envelope
    w = spec.omega
    if env.kind == "cw":
        return np.exp(1j * w * t) / (1j * w)
    if np.any(t < 0):
        raise ValueError("pulsed vector potential is defined for t >= 0")
    t_max = float(np.max(t)) if t.size else 0.0
    # grow the table geometrically so the cache stays small
    t_end = max(4 * math.pi / w, 2.0 ** math.ceil(math.log2(max(t_max, 1.0))))
    h, f, cum = _pulse_table(w, env.t0, env.tau, t_end)
    k = np.floor(t / h).astype(int)
    tk = k * h
    ft = env(t) * np.exp(1j * w * t)
    return cum[k] + 0.5 * (t - tk) * (f[k] + ft)


def vector_potential(spec: BeamSpec, x, y, t) -> np.ndarray:
    """Real temporal-gauge vector potential, shape ``broadcast(x, y) + (2,)``."""
    I = np.asarray(carrier_integral(spec, t))
    return -np.real(spatial_phasor(spec, x, y) * I[..., None])


def curl_z(ax: np.ndarray, ay: np.ndarray, dx: float) -> np.ndarray:
    """d(ay)/dx - d(ax)/dy, central in the interior, second-order one-sided at edges."""
    return np.gradient(ay, dx, axis=0, edge_order=2) - np.gradient(ax, dx, axis=1, edge_order=2)


def longitudinal_B(spec: BeamSpec, grid: GridSpec, t: float) -> np.ndarray:
    """B_z = curl(A)_z sampled on the grid nodes."""
    X, Y = grid.mesh()
    A = vector_potential(spec, X, Y, t)
    return curl_z(A[..., 0], A[..., 1], grid.dx)


def magnetic_field(spec: BeamSpec, grid: GridSpec, t: float) -> np.ndarray:
    """Drive magnetic field on the grid, shape (nx, ny, 3).

    In-plane part from the plane-wave relation B = z x E (c = 1),
    out-of-plane part from curl(A).
    """
    X, Y = grid.mesh()
    E = np.real(beam_E(spec, X, Y, t))
    B = np.empty(grid.shape + (3,))
    B[..., 0] = -E[..., 1]
    B[..., 1] = E[..., 0]
    B[..., 2] = longitudinal_B(spec, grid, t)
    return B


class BeamBField:
    """Fast evaluator of ``magnetic_field`` for repeated times on one grid.

    Both parts are linear in the spatial phasor, so the spatial factors
    (z x S and curl S) are computed once and each call only scales them
    by the carrier and its integral.
    """

    def __init__(self, spec: BeamSpec, grid: GridSpec):
        self.spec = spec
        self.grid = grid
        X, Y = grid.mesh()
        S = spatial_phasor(spec, X, Y)
        self._perp = np.stack([-S[..., 1], S[..., 0]], axis=-1)
        self._curl = curl_z(S[..., 0], S[..., 1], grid.dx)

    def __call__(self, t: float) -> np.ndarray:
        carrier = complex(self.spec.envelope(t) * np.exp(1j * self.spec.omega * t))
        integral = complex(carrier_integral(self.spec, t))
        B = np.empty(self.grid.shape + (3,))
        B[..., :2] = np.real(self._perp * carrier)
        B[..., 2] = -np.real(self._curl * integral)
        return B


def sample_mode(spec: BeamSpec, grid: GridSpec) -> np.ndarray:
    """Complex scalar mode E0 * u_{p,l} on the grid nodes."""
    X, Y = grid.mesh()
    r, phi = _polar(spec, X, Y)
    return spec.E0 * lg_mode(spec, r, phi)


def wrap_phase(d):
    """Map angles to the principal branch [-pi, pi)."""
    return (np.asarray(d) + np.pi) % (2 * np.pi) - np.pi


def phase_winding(field: np.ndarray, loop) -> int:
    """Winding number of ``field`` along a closed loop of (ix, iy) indices.

    The loop is closed implicitly (last point connects to the first).
    """
    loop = np.asarray(loop, dtype=int)
    vals = field[loop[:, 0], loop[:, 1]]
    if np.any(np.abs(vals) < EPS_CONTOUR):
        raise ZeroOnContour("field vanishes on the contour")
    theta = np.angle(vals)
    d = wrap_phase(np.roll(theta, -1) - theta)
    return int(round(float(np.sum(d)) / (2 * math.pi)))


def circle_contour(grid: GridSpec, center, radius: float, n: int | None = None) -> np.ndarray:
    """Counter-clockwise loop of grid indices approximating a circle."""
    if n is None:
        n = max(16, int(8 * math.ceil(2 * math.pi * radius / grid.dx)))
    ang = 2 * math.pi * np.arange(n) / n
    ix = np.rint((center[0] + radius * np.cos(ang) - grid.origin[0]) / grid.dx).astype(int)
    iy = np.rint((center[1] + radius * np.sin(ang) - grid.origin[1]) / grid.dx).astype(int)
    if ix.min() < 0 or iy.min() < 0 or ix.max() >= grid.nx or iy.max() >= grid.ny:
        raise ValueError("contour leaves the grid")
    pts = np.stack([ix, iy], axis=1)
    keep = np.any(pts != np.roll(pts, 1, axis=0), axis=1)
    return pts[keep]


def rectangle_contour(i0: int, i1: int, j0: int, j1: int) -> np.ndarray:
    """Counter-clockwise boundary of the index box [i0, i1] x [j0, j1]."""
    bottom = [(i, j0) for i in range(i0, i1)]
    right = [(i1, j) for j in range(j0, j1)]
    top = [(i, j1) for i in range(i1, i0, -1)]
    left = [(i0, j) for j in range(j1, j0, -1)]
    return np.array(bottom + right + top + left, dtype=int)
