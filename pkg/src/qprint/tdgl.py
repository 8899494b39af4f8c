"""Dimensionless time-dependent Ginzburg-Landau film driven by a beam.

Lengths are in coherence lengths, time in GL relaxation times and the
flux quantum is 2*pi.  The order parameter lives on grid nodes; the drive
enters through link phases ``a = integral of A.dl`` along each grid edge,
with link factors ``U = exp(-i a)``.  Edges are insulating (zero covariant
normal derivative).  The film's own screening field is neglected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .beam import BeamSpec, carrier_integral, longitudinal_B, spatial_phasor, wrap_phase
from .errors import Instability
from .grid import GridSpec

EPS_CORE = 0.3
MAX_PSI = 10.0


@dataclass
class TDGLParams:
    dt: float = 0.01
    steps: int = 1000
    eta: float = 1.0
    noise_amp: float = 1e-3
    seed: int = 0
    bc: str = "insulating"

    def check(self, grid: GridSpec):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        bound = grid.dx**2 / 4
        if self.dt > bound:
            raise ValueError(f"dt={self.dt} exceeds the explicit stability bound dx^2/4={bound}")
        if self.eta != 1.0:
            raise ValueError("eta is fixed to 1 in the dimensionless form")
        if self.bc != "insulating":
            raise ValueError("only insulating boundaries are supported")


@dataclass
class ComplexGridField:
    psi: np.ndarray
    grid: GridSpec
    t: float = 0.0

    def copy(self) -> "ComplexGridField":
        return ComplexGridField(self.psi.copy(), self.grid, self.t)


@dataclass(frozen=True)
class VortexRecord:
    t: float
    x: float
    y: float
    charge: int


class BeamLinks:
    """Link phases of a beam's vector potential on a grid.

    The spatial factor is evaluated once at link midpoints; each time only
    needs the scalar carrier integral.
    """

    def __init__(self, beam: BeamSpec, grid: GridSpec):
        self.beam = beam
        self.grid = grid
        x, y = grid.axes()
        h = grid.dx
        xm = x[:-1] + h / 2
        ym = y[:-1] + h / 2
        X, Y = np.meshgrid(xm, y, indexing="ij")
        self._sx = spatial_phasor(beam, X, Y)[..., 0] * h
        X, Y = np.meshgrid(x, ym, indexing="ij")
        self._sy = spatial_phasor(beam, X, Y)[..., 1] * h

    def __call__(self, t: float):
        I = complex(carrier_integral(self.beam, t))
        return -np.real(self._sx * I), -np.real(self._sy * I)


def zero_links(grid: GridSpec):
    return np.zeros((grid.nx - 1, grid.ny)), np.zeros((grid.nx, grid.ny - 1))


def gauge_shift(links, chi: np.ndarray):
    """Links after the gauge transformation psi -> psi * exp(i chi)."""
    ax, ay = links
    return ax + np.diff(chi, axis=0), ay + np.diff(chi, axis=1)


def initial_state(grid: GridSpec, params: TDGLParams) -> ComplexGridField:
    rng = np.random.default_rng(params.seed)
    noise = np.exp(2j * np.pi * rng.random(grid.shape))
    return ComplexGridField(1.0 + params.noise_amp * noise, grid, 0.0)


def step_tdgl(state: ComplexGridField, links, params: TDGLParams, threads: int = 1) -> ComplexGridField:
    """One forward-Euler step of dpsi/dt = (grad - iA)^2 psi + psi - |psi|^2 psi."""
    ax, ay = links
    ux = np.exp(-1j * ax)
    uy = np.exp(-1j * ay)
    psi = np.ascontiguousarray(state.psi)
    out = np.empty_like(psi)
    impl = kernels.get_backend()
    kernels.run_rows(impl.tdgl_step, psi.shape[0], threads, psi, ux, uy, params.dt, state.grid.dx, out)
    amax2 = np.max(out.real * out.real + out.imag * out.imag)
    if not amax2 <= MAX_PSI**2:
        raise Instability(f"max|psi| = {math.sqrt(amax2) if np.isfinite(amax2) else amax2} > {MAX_PSI} at t={state.t}")
    return ComplexGridField(out, state.grid, state.t + params.dt)


def link_currents(psi: np.ndarray, links, dx: float):
    """Supercurrent Im[psi_i^* U_ij psi_j]/dx on x-links and y-links."""
    ax, ay = links
    jx = np.imag(np.conj(psi[:-1]) * np.exp(-1j * ax) * psi[1:]) / dx
    jy = np.imag(np.conj(psi[:, :-1]) * np.exp(-1j * ay) * psi[:, 1:]) / dx
    return jx, jy


def supercurrent(state: ComplexGridField, links=None) -> np.ndarray:
    """Cell-centred supercurrent, shape (nx-1, ny-1, 2)."""
    if links is None:
        links = zero_links(state.grid)
    jx, jy = link_currents(state.psi, links, state.grid.dx)
    J = np.empty((state.grid.nx - 1, state.grid.ny - 1, 2))
    J[..., 0] = 0.5 * (jx[:, :-1] + jx[:, 1:])
    J[..., 1] = 0.5 * (jy[:-1, :] + jy[1:, :])
    return J


def current_curl(state: ComplexGridField, links=None) -> np.ndarray:
    """Plaquette circulation of the link currents divided by the plaquette area."""
    if links is None:
        links = zero_links(state.grid)
    jx, jy = link_currents(state.psi, links, state.grid.dx)
    h = state.grid.dx
    return ((jy[1:, :] - jy[:-1, :]) - (jx[:, 1:] - jx[:, :-1])) / h


def _gauge_invariant_differences(psi, links):
    ax, ay = links
    theta = np.angle(psi)
    fx = wrap_phase(np.diff(theta, axis=0) - ax)
    fy = wrap_phase(np.diff(theta, axis=1) - ay)
    return fx, fy


def plaquette_charges(psi: np.ndarray, links=None) -> np.ndarray:
    """Integer fluxoid winding of each plaquette, shape (nx-1, ny-1).

    Counter-clockwise sum of gauge-invariant phase differences plus the
    enclosed link flux, over 2*pi.  Reduces to the plain phase winding
    when A = 0.
    """
    if links is None:
        links = zero_links(GridSpec(*psi.shape, 1.0))
    ax, ay = links
    fx, fy = _gauge_invariant_differences(psi, links)
    circ = fx[:, :-1] + fy[1:, :] - fx[:, 1:] - fy[:-1, :]
    flux = ax[:, :-1] + ay[1:, :] - ax[:, 1:] - ay[:-1, :]
    return np.rint((circ + flux) / (2 * np.pi)).astype(np.int64)


def boundary_winding(psi: np.ndarray, links=None) -> int:
    """Fluxoid winding around the outer edge of the film."""
    if links is None:
        links = zero_links(GridSpec(*psi.shape, 1.0))
    ax, ay = links
    fx, fy = _gauge_invariant_differences(psi, links)
    circ = fx[:, 0].sum() + fy[-1, :].sum() - fx[:, -1].sum() - fy[0, :].sum()
    flux = ax[:, 0].sum() + ay[-1, :].sum() - ax[:, -1].sum() - ay[0, :].sum()
    return int(np.rint((circ + flux) / (2 * np.pi)))


def detect_vortices(state: ComplexGridField, links=None) -> list[VortexRecord]:
    """Vortices as non-zero plaquette windings, positioned by a core-weighted centroid."""
    q = plaquette_charges(state.psi, links)
    amp = np.abs(state.psi)
    x, y = state.grid.axes()
    h = state.grid.dx
    out = []
    for i, j in zip(*np.nonzero(q)):
        corners = amp[i : i + 2, j : j + 2]
        w = np.maximum(EPS_CORE - corners, 0.0)
        if w.sum() == 0:
            w = np.ones((2, 2))
        w = w / w.sum()
        cx = x[i] + h * w[1, :].sum()
        cy = y[j] + h * w[:, 1].sum()
        out.append(VortexRecord(state.t, float(cx), float(cy), int(q[i, j])))
    return out


def jj_correlation(J: np.ndarray, dx: float, nbins: int | None = None):
    """Isotropic two-point correlation of a vector field, normalised to C(0) = 1.

    Direct summation over all unordered cell pairs; bins have width dx and
    are centred on integer multiples of dx.  Returns (r, C, pair_counts).
    """
    jx = np.ascontiguousarray(J[..., 0], dtype=float)
    jy = np.ascontiguousarray(J[..., 1], dtype=float)
    nx, ny = jx.shape
    if nbins is None:
        nbins = int(math.ceil(math.hypot(nx - 1, ny - 1))) + 1
    sums, counts = kernels.get_backend().jj_pair_sums(jx, jy, nbins)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    C = mean / mean[0] if mean[0] != 0 else np.full(nbins, np.nan)
    return dx * np.arange(nbins), C, counts


def power_law_exponent(r, C, r_min):
    """Slope of log|C| vs log r over one decade [r_min, 10 r_min]; NaN if unusable."""
    sel = (r >= r_min) & (r <= 10 * r_min) & np.isfinite(C) & (C > 0)
    if sel.sum() < 3:
        return float("nan")
    return float(np.polyfit(np.log(r[sel]), np.log(C[sel]), 1)[0])


@dataclass
class SCRun:
    """Everything a superconducting run produces, kept in memory."""

    snapshots: list = field(default_factory=list)  # (t, psi)
    vortices: list = field(default_factory=list)  # VortexRecord
    winding: list = field(default_factory=list)  # (step, t, plaquette_total, boundary)
    cjj: list = field(default_factory=list)  # (t, r, C)
    final: ComplexGridField | None = None


def run_sc(
    beam: BeamSpec,
    grid: GridSpec,
    params: TDGLParams,
    snapshot_every: int = 0,
    diag_every: int = 0,
    cjj_every: int = 0,
    threads: int = 1,
    phase_only: bool = False,
) -> SCRun:
    """Time-step the film under the beam and collect diagnostics.

    Diagnostics at step k (k = 0 .. steps) whenever k is a multiple of the
    given cadence (0 disables).  ``phase_only`` clamps |psi| = 1 after every
    step (London limit).
    """
    params.check(grid)
    state = initial_state(grid, params)
    if phase_only:
        state.psi = state.psi / np.abs(state.psi)
    links_at = BeamLinks(beam, grid)
    res = SCRun()
    for k in range(params.steps + 1):
        links = links_at(state.t)
        if snapshot_every and k % snapshot_every == 0:
            res.snapshots.append((state.t, state.psi.copy()))
        if diag_every and k % diag_every == 0:
            total = int(plaquette_charges(state.psi, links).sum())
            res.winding.append((k, state.t, total, boundary_winding(state.psi, links)))
            res.vortices.extend(detect_vortices(state, links))
        if cjj_every and k % cjj_every == 0:
            r, C, _ = jj_correlation(supercurrent(state, links), grid.dx)
            res.cjj.append((state.t, r, C))
        if k == params.steps:
            break
        state = step_tdgl(state, links, params, threads)
        if phase_only:
            state.psi = state.psi / np.abs(state.psi)
    res.final = state
    return res


def london_residual(state: ComplexGridField, beam: BeamSpec, links) -> np.ndarray:
    """curl(J_s) + |psi|^2 B_z per plaquette (B_z at plaquette centres)."""
    bz = longitudinal_B(beam, state.grid.dual(), state.t)
    a2 = np.abs(state.psi) ** 2
    rho = 0.25 * (a2[:-1, :-1] + a2[1:, :-1] + a2[:-1, 1:] + a2[1:, 1:])
    return current_curl(state, links) + rho * bz
