"""Closed-form rectified magnetization: classical, Hall-fluid and dipolar.

Phasor convention matches the beam module: a real quantity a(t) is
Re[a exp(+i w t)].  With it the circular unit vectors are

    e_R = (x - i y)/sqrt(2)   field turns counter-clockwise seen from +z
    e_L = (x + i y)/sqrt(2)   clockwise

so that Im[E x E*]_z = E_R^2 - E_L^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as C

E_RIGHT = np.array([1.0, -1.0j]) / math.sqrt(2)
E_LEFT = np.array([1.0, 1.0j]) / math.sqrt(2)


def field_from_intensity(intensity: float) -> float:
    """Peak field (V/m) of a plane wave with time-averaged intensity (W/m^2)."""
    return math.sqrt(2 * intensity / (C.c * C.epsilon_0))


# harness convention for order-of-magnitude checks: 1 W per square micron
REFERENCE_INTENSITY = 1e12


@dataclass(frozen=True)
class DriveField:
    """Drive as circular amplitudes; ``delta`` is the phase of E_L relative to E_R."""

    E_R: float
    E_L: float
    omega: float
    delta: float = 0.0

    def __post_init__(self):
        if self.E_R < 0 or self.E_L < 0:
            raise ValueError("circular amplitudes must be non-negative")
        if not self.omega > 0:
            raise ValueError("omega must be positive")

    @property
    def vector(self) -> np.ndarray:
        """Complex in-plane phasor (Ex, Ey)."""
        return self.E_R * E_RIGHT + self.E_L * np.exp(1j * self.delta) * E_LEFT

    @classmethod
    def from_vector(cls, E, omega: float) -> "DriveField":
        """Decompose a phasor; the global phase (that of the E_R part) is dropped."""
        E = np.asarray(E, dtype=complex)[:2]
        cr = np.vdot(E_RIGHT, E)
        cl = np.vdot(E_LEFT, E)
        delta = float(np.angle(cl) - np.angle(cr)) if abs(cr) > 0 and abs(cl) > 0 else float(np.angle(cl))
        return cls(float(abs(cr)), float(abs(cl)), omega, delta)

    @classmethod
    def circular(cls, amplitude: float, omega: float, helicity: int) -> "DriveField":
        if helicity not in (-1, 1):
            raise ValueError("helicity must be +1 or -1")
        return cls(amplitude, 0.0, omega) if helicity > 0 else cls(0.0, amplitude, omega)

    @classmethod
    def linear(cls, amplitude: float, omega: float, angle: float = 0.0) -> "DriveField":
        a = amplitude / math.sqrt(2)
        return cls(a, a, omega, 2 * angle)

    def flipped(self) -> "DriveField":
        """Opposite helicity (complex conjugate phasor up to a global phase)."""
        return DriveField(self.E_L, self.E_R, self.omega, -self.delta)


def _as3(E):
    E = np.asarray(E, dtype=complex)
    if E.shape[-1] == 2:
        E = np.concatenate([E, np.zeros(E.shape[:-1] + (1,), complex)], axis=-1)
    return E


def classical_ife(E) -> np.ndarray:
    """Im[E x E*]; also serves axial fields E^5."""
    E = _as3(E)
    return np.imag(np.cross(E, np.conj(E)))


@dataclass(frozen=True)
class ConductivityPair:
    sigma_L: complex  # S (sheet)
    sigma_H: complex  # S (sheet)
    rho0: float  # carriers per m^2
    omega: float  # rad/s

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ValueError("rho0 must be positive")
        if not self.omega > 0:
            raise ValueError("omega must be positive")


def hall_ife(cond: ConductivityPair, E) -> float:
    """M0 = i |sigma_H|^2 / (2 e w rho0) (E x E*)_z in A (moment per area)."""
    E = _as3(E)
    cz = E[0] * np.conj(E[1]) - E[1] * np.conj(E[0])
    val = 1j * abs(cond.sigma_H) ** 2 / (2 * C.e * cond.omega * cond.rho0) * cz
    return float(val.real)


def icme(cond: ConductivityPair, E_amp: float) -> float:
    """M0 = Im(sigma_L sigma_H) |E|^2 / (e w rho0)."""
    return float(np.imag(cond.sigma_L * cond.sigma_H) * E_amp**2 / (C.e * cond.omega * cond.rho0))


def rotating_current(cond: ConductivityPair, E_lin: float, t):
    """Sheet current under E = E0 cos(wt) x and its chirality sign(Im sigma_L sigma_H).

    The current traces an ellipse of signed area -pi E0^2 Im(sigma_L) Re(sigma_H).
    """
    t = np.asarray(t, dtype=float)
    w = cond.omega
    J = np.stack(
        [E_lin * np.imag(cond.sigma_L) * np.sin(w * t), E_lin * np.real(cond.sigma_H) * np.cos(w * t)], axis=-1
    )
    return J, int(np.sign(np.imag(cond.sigma_L * cond.sigma_H)))


def moment_per_carrier_in_bohr(M0: float, rho0: float) -> float:
    return M0 / rho0 / C.physical_constants["Bohr magneton"][0]


# dipolar fluids


@dataclass(frozen=True)
class DipoleFluid:
    n0: float
    P_omega: np.ndarray  # complex 3-vector
    v_omega: np.ndarray  # complex 3-vector

    def __post_init__(self):
        if self.n0 < 0:
            raise ValueError("dipole density must be non-negative")


def dipolar_ife(fluid: DipoleFluid) -> np.ndarray:
    """M0 = n0 Re[v_w x P_{-w}] with P_{-w} = conj(P_w)."""
    return fluid.n0 * np.real(np.cross(_as3(fluid.v_omega), np.conj(_as3(fluid.P_omega))))


@dataclass(frozen=True)
class Layer:
    """One carrier species of a bilayer: charge, mass and coupling to the drive."""

    charge: float
    mass: float
    coupling: float = 1.0


def layer_displacement(layer: Layer, E, omega: float, omega0: float = 0.0, damping: float = 0.0):
    """Phasor displacement of a damped driven oscillator m(x'' + g x' + w0^2 x) = g_c q E."""
    E = _as3(E)
    return layer.coupling * layer.charge * E / (layer.mass * (omega0**2 - omega**2 + 1j * damping * omega))


def bilayer_fluid(electron: Layer, hole: Layer, E, omega: float, n0: float, omega0: float = 0.0, damping: float = 0.0):
    """Dipole fluid of a driven electron-hole bilayer and the two displacements.

    P is the pair dipole q_e r_e + q_h r_h and v the midpoint velocity.
    """
    re = layer_displacement(electron, E, omega, omega0, damping)
    rh = layer_displacement(hole, E, omega, omega0, damping)
    P = electron.charge * re + hole.charge * rh
    v = 1j * omega * 0.5 * (re + rh)
    return DipoleFluid(n0, P, v), re, rh


def layer_current_magnetization(layers, displacements, omega: float, n0: float) -> np.ndarray:
    """(n0/2) sum_s q_s <r_s x dr_s/dt>, the orbital moment of the layer currents.

    For an electron-hole pair this equals -1/2 of ``dipolar_ife`` on the
    same motion, the factor fixed by the definitions of P and v.
    """
    M = np.zeros(3)
    for layer, r in zip(layers, displacements):
        r = _as3(r)
        M += 0.5 * n0 * layer.charge * 0.5 * omega * np.imag(np.cross(r, np.conj(r)))
    return M
