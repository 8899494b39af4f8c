"""Landau-Lifshitz-Gilbert dynamics of a 2D ferromagnet under a beam's field.

Unit spins on an open square lattice with nearest-neighbour exchange,
easy-axis anisotropy and Zeeman coupling to the drive.  No
Dzyaloshinskii-Moriya term exists here on purpose.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .beam import BeamBField, BeamSpec
from .errors import AccuracyGuard, SolidAngleDegenerate
from .grid import GridSpec

ACCURACY_BOUND = 0.1
NORM_TOL = 1e-9
# a triangle is degenerate when both terms of the solid-angle arctangent vanish
DEGENERATE_TOL = 1e-12


@dataclass
class SpinLattice:
    M: np.ndarray
    a0: float = 1.0

    def __post_init__(self):
        self.M = np.ascontiguousarray(self.M, dtype=float)
        if self.M.ndim != 3 or self.M.shape[2] != 3:
            raise ValueError("M must have shape (nx, ny, 3)")
        if not self.a0 > 0:
            raise ValueError("lattice constant must be positive")
        dev = np.max(np.abs(np.linalg.norm(self.M, axis=-1) - 1.0))
        if not dev < NORM_TOL:
            raise ValueError(f"spins are not unit vectors (max deviation {dev:.3g})")

    @property
    def nx(self) -> int:
        return self.M.shape[0]

    @property
    def ny(self) -> int:
        return self.M.shape[1]

    def grid(self) -> GridSpec:
        return GridSpec.centered(self.nx, self.ny, self.a0)

    def copy(self) -> "SpinLattice":
        return SpinLattice(self.M.copy(), self.a0)

    @classmethod
    def uniform(cls, nx: int, ny: int, direction=(0.0, 0.0, 1.0), a0: float = 1.0) -> "SpinLattice":
        d = np.asarray(direction, dtype=float)
        M = np.broadcast_to(d / np.linalg.norm(d), (nx, ny, 3)).copy()
        return cls(M, a0)


@dataclass
class LLGParams:
    J_ex: float = 1.0
    K_z: float = 0.1
    gamma: float = 1.0
    alpha: float = 0.1
    dt: float = 0.01
    steps: int = 1000
    zeeman_scale: float = 1.0
    seed: int = 0
    noise_amp: float = 0.0

    def check(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        if self.K_z < 0:
            raise ValueError("K_z must be non-negative")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def prefactor(self) -> float:
        return self.gamma / (1.0 + self.alpha**2)


def effective_field(lattice: SpinLattice, params: LLGParams, B=None) -> np.ndarray:
    """J sum_nn M_j + K M_z z + zeeman_scale B with free edges."""
    M = lattice.M
    H = np.zeros_like(M)
    H[:-1] += M[1:]
    H[1:] += M[:-1]
    H[:, :-1] += M[:, 1:]
    H[:, 1:] += M[:, :-1]
    H *= params.J_ex
    H[..., 2] += params.K_z * M[..., 2]
    if B is not None:
        H += params.zeeman_scale * np.asarray(B)
    return H


def energy(lattice: SpinLattice, params: LLGParams, B=None) -> float:
    """E = -J sum_pairs M_i.M_j - (K/2) sum M_z^2 - zeeman_scale sum B.M.

    The K/2 makes H_eff = -dE/dM exactly.
    """
    M = lattice.M
    ex = np.sum(M[:-1] * M[1:]) + np.sum(M[:, :-1] * M[:, 1:])
    e = -params.J_ex * ex - 0.5 * params.K_z * np.sum(M[..., 2] ** 2)
    if B is not None:
        e -= params.zeeman_scale * np.sum(np.asarray(B) * M)
    return float(e)


def _zero_field(M):
    return np.zeros_like(M)


def llg_rhs(M: np.ndarray, B, params: LLGParams, threads: int = 1):
    """dM/dt in Landau-Lifshitz form and max |H_eff| (fixed-order reduction)."""
    M = np.ascontiguousarray(M)
    B = _zero_field(M) if B is None else np.ascontiguousarray(B, dtype=float)
    out = np.empty_like(M)
    hmax = kernels.run_rows(
        kernels.get_backend().llg_stage,
        M.shape[0],
        threads,
        M,
        B,
        params.J_ex,
        params.K_z,
        params.zeeman_scale,
        params.prefactor,
        params.alpha,
        out,
    )
    return out, max(hmax)


def _guard(params: LLGParams, hmax: float):
    r = params.dt * params.gamma * hmax
    if not r < ACCURACY_BOUND:
        raise AccuracyGuard(f"dt*gamma*max|H| = {r:.4g} exceeds {ACCURACY_BOUND}")


def _normalize(M):
    return M / np.sqrt(M[..., 0] ** 2 + M[..., 1] ** 2 + M[..., 2] ** 2)[..., None]


def step_llg(lattice: SpinLattice, params: LLGParams, B0=None, B1=None, threads: int = 1) -> SpinLattice:
    """One Heun step from t (field B0) to t + dt (field B1), then renormalise."""
    dt = params.dt
    f0, h0 = llg_rhs(lattice.M, B0, params, threads)
    _guard(params, h0)
    Mp = _normalize(lattice.M + dt * f0)
    f1, h1 = llg_rhs(Mp, B1, params, threads)
    _guard(params, h1)
    Mn = _normalize(lattice.M + 0.5 * dt * (f0 + f1))
    return SpinLattice(Mn, lattice.a0)


@dataclass
class TopologicalChargeMap:
    q: np.ndarray  # density per plaquette, units 1/a0^2
    Q_total: float
    Q_lattice: float
    skipped: int = 0


def _triangle_solid_angle(m1, m2, m3):
    """Signed solid angle of geodesic triangles on the unit sphere."""
    num = np.einsum("...i,...i", m1, np.cross(m2, m3))
    den = 1.0 + np.einsum("...i,...i", m1, m2) + np.einsum("...i,...i", m2, m3) + np.einsum("...i,...i", m3, m1)
    bad = (np.abs(num) < DEGENERATE_TOL) & (den < DEGENERATE_TOL)
    return 2.0 * np.arctan2(num, den), bad


def topological_charge(lattice: SpinLattice, strict: bool = False) -> TopologicalChargeMap:
    """Charge density by central differences and total charge by solid angles.

    The density is (1/4 pi) M.(dM/dx x dM/dy) at plaquette centres with the
    centre spin the average of the four corners.  The lattice total splits
    each plaquette into two counter-clockwise triangles and sums their
    signed solid angles over 4 pi.  Degenerate triangles (antipodal or
    colinear spins) are skipped and counted; ``strict`` raises instead.
    """
    M = lattice.M
    a = lattice.a0
    m00, m10, m01, m11 = M[:-1, :-1], M[1:, :-1], M[:-1, 1:], M[1:, 1:]
    mc = 0.25 * (m00 + m10 + m01 + m11)
    dmx = 0.5 * ((m10 + m11) - (m00 + m01)) / a
    dmy = 0.5 * ((m01 + m11) - (m00 + m10)) / a
    q = np.einsum("...i,...i", mc, np.cross(dmx, dmy)) / (4 * math.pi)
    w1, b1 = _triangle_solid_angle(m00, m10, m11)
    w2, b2 = _triangle_solid_angle(m00, m11, m01)
    bad = b1 | b2
    skipped = int(bad.sum())
    if skipped:
        if strict:
            raise SolidAngleDegenerate(f"{skipped} degenerate plaquettes")
        warnings.warn(f"skipped {skipped} degenerate plaquettes in the solid-angle charge", RuntimeWarning, stacklevel=2)
    omega = np.where(bad, 0.0, w1 + w2)
    return TopologicalChargeMap(q, float(np.sum(q) * a * a), float(np.sum(omega) / (4 * math.pi)), skipped)


def neel_skyrmion(
    nx: int,
    ny: int,
    radius: float,
    width: float = 2.0,
    center=None,
    core: int = -1,
    vorticity: int = 1,
    helicity: float = 0.0,
    a0: float = 1.0,
) -> SpinLattice:
    """Skyrmion with a 360-degree domain-wall profile.

    theta(r) = 2 atan(sinh(R/w) / sinh(r/w)) measured from the core
    direction, so the tail decays exponentially.  ``vorticity`` = -1 gives
    the antiskyrmion; ``helicity`` = 0 is Neel type, pi/2 Bloch type.
    """
    g = GridSpec.centered(nx, ny, a0)
    X, Y = g.mesh()
    if center is not None:
        X = X - center[0]
        Y = Y - center[1]
    r = np.hypot(X, Y)
    with np.errstate(divide="ignore"):
        theta = 2.0 * np.arctan2(math.sinh(radius / width), np.sinh(r / width))
    phi = vorticity * np.arctan2(Y, X) + helicity
    # theta(0) = pi and theta(inf) = 0, so the core points along core*z
    M = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), -core * np.cos(theta)], axis=-1)
    return SpinLattice(_normalize(M), a0)


def perturbed(lattice: SpinLattice, amp: float, seed: int) -> SpinLattice:
    """Small random tilt of every spin, deterministic in the seed."""
    if amp == 0:
        return lattice.copy()
    rng = np.random.default_rng(seed)
    return SpinLattice(_normalize(lattice.M + amp * rng.normal(size=lattice.M.shape)), lattice.a0)


@dataclass
class MagnetRun:
    snapshots: list = field(default_factory=list)  # (t, M)
    charge: list = field(default_factory=list)  # (step, t, Q_total, Q_lattice)
    qmaps: list = field(default_factory=list)  # (t, q)
    final: SpinLattice | None = None
    max_norm_drift: float = 0.0


def run_magnet(
    beam: BeamSpec | None,
    lattice0: SpinLattice,
    params: LLGParams,
    snapshot_every: int = 0,
    charge_every: int = 0,
    qmap_every: int = 0,
    threads: int = 1,
) -> MagnetRun:
    """Integrate the lattice under the beam's magnetic field.

    ``beam`` None means no drive.  The field is evaluated on the lattice
    grid centred on the origin.
    """
    params.check()
    lat = perturbed(lattice0, params.noise_amp, params.seed)
    field_at = BeamBField(beam, lat.grid()) if beam is not None else (lambda t: None)
    res = MagnetRun()
    t = 0.0
    B0 = field_at(t)
    for k in range(params.steps + 1):
        if snapshot_every and k % snapshot_every == 0:
            res.snapshots.append((t, lat.M.copy()))
        if (charge_every and k % charge_every == 0) or (qmap_every and k % qmap_every == 0):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                tc = topological_charge(lat)
            if charge_every and k % charge_every == 0:
                res.charge.append((k, t, tc.Q_total, tc.Q_lattice))
            if qmap_every and k % qmap_every == 0:
                res.qmaps.append((t, tc.q))
        if k == params.steps:
            break
        t1 = (k + 1) * params.dt
        B1 = field_at(t1)
        lat = step_llg(lat, params, B0, B1, threads)
        res.max_norm_drift = max(res.max_norm_drift, float(np.max(np.abs(np.linalg.norm(lat.M, axis=-1) - 1))))
        B0, t = B1, t1
    res.final = lat
    return res
