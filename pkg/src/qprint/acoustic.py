"""Strain pseudo-gauge fields and the acoustic IFE of a 2D Dirac insulator.

A displacement field u(x, y, t) sampled on a grid defines the strain
u_ij = (d_i u_j + d_j u_i)/2 and the valley gauge field

    a = g (u_yy - u_xx, 2 u_xy)

with pseudo fields E_s = -da/dt and B_s = (curl a)_z.  The cross
Chern-Simons response of one valley is

    rho = -G sgn(m) B_s
    J   =  G sgn(m) z x E_s

where G is the conductance quantum scale 2e^2/h.  Varying
S = (sgn m / 2 pi) int eps^{mu nu lam} A_mu d_nu a_lam with respect to A_mu
gives j^mu = (sgn m / 2 pi) eps^{mu nu lam} d_nu a_lam, i.e.
j^0 = (sgn m / 2 pi) B_s and (j^x, j^y) = (sgn m / 2 pi)(E_s,y, -E_s,x)
= -(sgn m / 2 pi) z x E_s, with E_s = -d_t a in the a_t = 0 gauge.  Fixing
the overall sign and scale by the quoted rho = -G sgn(m) B_s turns the
current into +G sgn(m) z x E_s.  Continuity then reduces to Faraday's law
for the pseudo fields, d_t B_s + (curl E_s)_z = 0.

The magnetization convention (a reconstruction, see ``PROVENANCE``) is
M_z = < (1/2) rho (u x du/dt)_z >, averaged over space and one period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as C

from .errors import PeriodMismatch
from .grid import GridSpec

PROVENANCE = {
    "current": "derived from the cross Chern-Simons action (z x E_s form)",
    "magnetization": "reconstructed convention M_z = <rho (u x du/dt)_z / 2>",
}


@dataclass
class StrainField:
    """Displacement samples ``u[t, ix, iy, 0:2]`` at spacing ``dt_s``."""

    u: np.ndarray
    grid: GridSpec
    dt_s: float
    g: float = 1.0
    omega: float | None = None
    periodic_space: bool = False  # the grid holds whole spatial periods

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim != 4 or self.u.shape[3] != 2 or self.u.shape[1:3] != self.grid.shape:
            raise ValueError("u must have shape (nt, nx, ny, 2) matching the grid")
        if self.u.shape[0] < 3:
            raise ValueError("need at least 3 time samples")
        if not np.all(np.isfinite(self.u)):
            raise ValueError("displacement field is not finite")
        if not self.dt_s > 0:
            raise ValueError("dt_s must be positive")
        if self.omega is not None:
            if not self.omega > 0:
                raise ValueError("omega must be positive")
            if 2 * math.pi / self.omega / self.dt_s < 8:
                raise ValueError("need at least 8 samples per drive period")

    @property
    def nt(self) -> int:
        return self.u.shape[0]

    def periods(self) -> float | None:
        if self.omega is None:
            return None
        return self.nt * self.dt_s * self.omega / (2 * math.pi)

    def is_periodic(self, tol: float = 1e-6) -> bool:
        p = self.periods()
        return p is not None and p >= 1 - tol and abs(p - round(p)) < tol


@dataclass(frozen=True)
class DiracParams:
    mass_sign: int = 1
    conductance_quantum_scale: float = 1.0
    valleys: int = 1  # 2 applies the documented valley-sum factor

    def __post_init__(self):
        if self.mass_sign not in (-1, 1):
            raise ValueError("mass_sign must be +1 or -1")
        if self.valleys not in (1, 2):
            raise ValueError("valleys must be 1 or 2")

    @property
    def G(self) -> float:
        return self.conductance_quantum_scale * self.valleys

    @classmethod
    def si(cls, mass_sign: int = 1, valleys: int = 1) -> "DiracParams":
        return cls(mass_sign, 2 * C.e**2 / C.h, valleys)


def _dt(f, dt, periodic):
    if periodic:
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2 * dt)
    return np.gradient(f, dt, axis=0, edge_order=2)


def _dx(f, dx, axis, periodic=False):
    if periodic:
        return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2 * dx)
    return np.gradient(f, dx, axis=axis, edge_order=2)


def strain_tensor(sf: StrainField):
    """(u_xx, u_yy, u_xy) by second-order central differences."""
    dx, p = sf.grid.dx, sf.periodic_space
    ux, uy = sf.u[..., 0], sf.u[..., 1]
    uxx = _dx(ux, dx, 1, p)
    uyy = _dx(uy, dx, 2, p)
    uxy = 0.5 * (_dx(uy, dx, 1, p) + _dx(ux, dx, 2, p))
    return uxx, uyy, uxy


def strain_gauge_field(sf: StrainField) -> np.ndarray:
    """a[t, ix, iy, 0:2] = g (u_yy - u_xx, 2 u_xy)."""
    uxx, uyy, uxy = strain_tensor(sf)
    return sf.g * np.stack([uyy - uxx, 2 * uxy], axis=-1)


def pseudo_fields(a: np.ndarray, dx: float, dt: float, periodic: bool = False, periodic_space: bool = False):
    """E_s = -da/dt and B_s = d_x a_y - d_y a_x; the flags wrap time and space."""
    a = np.asarray(a, dtype=float)
    if a.shape[0] < 3:
        raise ValueError("need at least 3 time samples")
    E = -_dt(a, dt, periodic)
    B = _dx(a[..., 1], dx, 1, periodic_space) - _dx(a[..., 0], dx, 2, periodic_space)
    return E, B


def cs_response(E_s: np.ndarray, B_s: np.ndarray, dp: DiracParams):
    """Charge density and current of the cross Chern-Simons response."""
    k = dp.G * dp.mass_sign
    rho = -k * B_s
    J = k * np.stack([-E_s[..., 1], E_s[..., 0]], axis=-1)
    return rho, J


def response(sf: StrainField, dp: DiracParams):
    """rho and J for every sample of ``sf``."""
    a = strain_gauge_field(sf)
    E, B = pseudo_fields(a, sf.grid.dx, sf.dt_s, sf.is_periodic(), sf.periodic_space)
    return cs_response(E, B, dp)


def continuity_residual(rho, J, dx: float, dt: float, periodic: bool = True, order: int = 4) -> np.ndarray:
    """d_t rho + div J on interior points.

    ``order`` 2 uses the same central stencils as the pipeline, for which
    the residual vanishes identically (differences along different axes
    commute); ``order`` 4 probes the continuum equation and converges at
    the pipeline's second order.  Space is treated as open here.
    """
    if order == 2:
        dtr = _dt(rho, dt, periodic)
        div = _dx(J[..., 0], dx, 1) + _dx(J[..., 1], dx, 2)
        return dtr[:, 2:-2, 2:-2] + div[:, 2:-2, 2:-2]
    if order != 4:
        raise ValueError("order must be 2 or 4")
    if not periodic:
        raise ValueError("the fourth-order probe needs periodic time samples")

    def d4t(f):
        return (8 * (np.roll(f, -1, 0) - np.roll(f, 1, 0)) - (np.roll(f, -2, 0) - np.roll(f, 2, 0))) / (12 * dt)

    def d4(f, axis):
        s = [slice(None)] * f.ndim

        def sh(k):
            s2 = list(s)
            n = f.shape[axis]
            s2[axis] = slice(2 + k, n - 2 + k)
            return f[tuple(s2)]

        return (8 * (sh(1) - sh(-1)) - (sh(2) - sh(-2))) / (12 * dx)

    div = d4(J[..., 0][:, :, 2:-2], 1) + d4(J[..., 1][:, 2:-2, :], 2)
    return d4t(rho)[:, 2:-2, 2:-2] + div


def acoustic_ife(sf: StrainField, dp: DiracParams, tol: float = 1e-6) -> float:
    """Time- and space-averaged M_z = (1/2) rho (u x du/dt)_z.

    The samples must cover an integer number of periods of ``sf.omega``.
    """
    if sf.omega is None:
        raise PeriodMismatch("strain field carries no drive frequency")
    p = sf.periods()
    if p < 1 - tol or abs(p - round(p)) > tol:
        raise PeriodMismatch(f"samples cover {p:.9g} periods, not an integer")
    rho, _ = response(sf, dp)
    udot = _dt(sf.u, sf.dt_s, True)
    orbit = sf.u[..., 0] * udot[..., 1] - sf.u[..., 1] * udot[..., 0]
    return float(np.mean(0.5 * rho * orbit))


# drive constructors


def rippled_drive(
    grid: GridSpec,
    omega: float,
    amplitude: float,
    helicity: int = 1,
    ripple: float = 1.0,
    k: float | None = None,
    modulation: float = 0.5,
    samples_per_period: int = 32,
    periods: int = 1,
    g: float = 1.0,
    scale: float = 1.0,
) -> StrainField:
    """Static ripple displacement plus a circular wave modulated by the ripple.

    ripple:  u_r = ripple (cos k y, cos k x)
    wave:    u_w = amplitude (1 + modulation cos k x)(cos wt, helicity sin wt)

    The ripple gives a static pseudo flux (and charge) density; the wave
    gives the orbit.  Without the modulation the product averages to zero
    over whole ripple periods.  ``scale`` multiplies the whole displacement.
    ``helicity`` 0 makes the wave linear along x.  When the grid holds a
    whole number of ripple periods the spatial stencils wrap around.
    """
    if helicity not in (-1, 0, 1):
        raise ValueError("helicity must be -1, 0 or +1")
    if k is None:
        k = 2 * math.pi / (grid.nx * grid.dx)
    X, Y = grid.mesh()
    dt = 2 * math.pi / omega / samples_per_period
    t = dt * np.arange(samples_per_period * periods)
    wt = omega * t[:, None, None]
    env = amplitude * (1 + modulation * np.cos(k * X))
    u = np.empty((t.size, grid.nx, grid.ny, 2))
    u[..., 0] = ripple * np.cos(k * Y) + env * np.cos(wt)
    u[..., 1] = ripple * np.cos(k * X) + helicity * env * np.sin(wt)
    whole = all(abs(m - round(m)) < 1e-9 for m in (k * grid.nx * grid.dx / (2 * math.pi), k * grid.ny * grid.dx / (2 * math.pi)))
    return StrainField(scale * u, grid, dt, g, omega, whole)


def triaxial_drive(
    grid: GridSpec,
    omega: float,
    amplitude: float,
    helicity: int = 1,
    c: float = 0.01,
    samples_per_period: int = 32,
    periods: int = 1,
    g: float = 1.0,
) -> StrainField:
    """Triaxial stretch u = c(2xy, x^2 - y^2) (uniform B_s = 8 g c) plus a uniform circular wave."""
    X, Y = grid.mesh()
    dt = 2 * math.pi / omega / samples_per_period
    t = dt * np.arange(samples_per_period * periods)
    wt = omega * t[:, None, None]
    u = np.empty((t.size, grid.nx, grid.ny, 2))
    u[..., 0] = c * 2 * X * Y + amplitude * np.cos(wt)
    u[..., 1] = c * (X**2 - Y**2) + helicity * amplitude * np.sin(wt)
    return StrainField(u, grid, dt, g, omega)


def si_gauge_coupling(beta: float = 3.0, bond: float = 1.42e-10) -> float:
    """g = hbar beta / (2 e a) in T m, so that g times strain is a vector potential in T m."""
    return C.hbar * beta / (2 * C.e * bond)
