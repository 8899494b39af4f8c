"""Second-order inverse Faraday effect of hydrogenic (Rydberg and donor) states.

Internally lengths are in the host Bohr radius a*, energies in the host
Rydberg Ry* and hbar = 1, so E_n = -1/n^2.  Results are converted to SI
(tesla) at the end.

The effective Hamiltonian within a degenerate shell is

    <a|H|b> = mu_B (2 m* q / hbar^2) w (E_R^2 - E_L^2)
              * sum_c [<a|r+|c><c|r-|b> - <a|r-|c><c|r+|b>] / (w_bc^2 - w^2)

with r+- = x +- i y and c running over bound states up to a shell cutoff.
Functions here return the bracket divided by mu_B, i.e. a field in tesla.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import constants as C

from .errors import CutoffWarning, ResonanceError
from .ife import DriveField

CUTOFF_RATIO = 1e-3


@dataclass(frozen=True)
class HydrogenicState:
    n: int
    l_orb: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.l_orb < self.n:
            raise ValueError("need 0 <= l < n")
        if abs(self.m) > self.l_orb:
            raise ValueError("need |m| <= l")

    @classmethod
    def circular(cls, n: int) -> "HydrogenicState":
        return cls(n, n - 1, n - 1)


@dataclass(frozen=True)
class MaterialHost:
    """Hydrogenic host: free atom or shallow donor in a dielectric."""

    a_star: float  # m
    ry_star: float  # J
    m_star: float  # kg
    q: float = C.e  # C, magnitude
    name: str = "custom"
    mu_B_eff: float = field(init=False)

    def __post_init__(self):
        for k in ("a_star", "ry_star", "m_star", "q"):
            if not getattr(self, k) > 0:
                raise ValueError(f"{k} must be positive")
        object.__setattr__(self, "mu_B_eff", self.q * C.hbar / (2 * self.m_star))

    @classmethod
    def hydrogen(cls) -> "MaterialHost":
        return cls(C.physical_constants["Bohr radius"][0], C.Rydberg * C.h * C.c, C.m_e, C.e, "hydrogen")

    @classmethod
    def from_dielectric(cls, eps: float, mass_ratio: float, name: str = "donor") -> "MaterialHost":
        a0 = C.physical_constants["Bohr radius"][0]
        ry = C.Rydberg * C.h * C.c
        return cls(a0 * eps / mass_ratio, ry * mass_ratio / eps**2, C.m_e * mass_ratio, C.e, name)

    @classmethod
    def si_p(cls) -> "MaterialHost":
        """Phosphorus donor in silicon: eps = 11.7 and a* = 3.17 nm fix the mass."""
        eps = 11.7
        a0 = C.physical_constants["Bohr radius"][0]
        return cls.from_dielectric(eps, eps * a0 / 3.17e-9, "Si:P")

    def omega_units(self, omega: float) -> float:
        """Angular frequency in units of Ry*/hbar."""
        return omega * C.hbar / self.ry_star


# radial integrals


def _laguerre_int(N: int, alpha: int):
    """Integer a_j with L_N^alpha(x) = sum_j a_j x^j / j!."""
    return [(-1) ** j * math.comb(N + alpha, N - j) for j in range(N + 1)]


def _norm_sq(n: int, l: int) -> Fraction:
    # R_nl(r) = N (2r/n)^l exp(-r/n) L_{n-l-1}^{2l+1}(2r/n),  N^2 = (2/n)^3 (n-l-1)! / (2n (n+l)!)
    return Fraction(8 * math.factorial(n - l - 1), n**3 * 2 * n * math.factorial(n + l))


@lru_cache(maxsize=None)
def radial_dipole_units(n: int, l: int, n2: int, l2: int) -> float:
    """<n2 l2| r |n l> in units of a*, exact up to the final rounding.

    The integrand is a polynomial times exp(-(1/n + 1/n2) r); every term
    is rational, so the alternating sum is done in integers and only the
    normalisation square root is taken at the end.
    """
    if abs(l2 - l) != 1:
        raise ValueError("dipole radial element needs l' = l +- 1")
    for nn, ll in ((n, l), (n2, l2)):
        if not 0 <= ll < nn:
            raise ValueError("need 0 <= l < n")
    a = _laguerre_int(n - l - 1, 2 * l + 1)
    b = _laguerre_int(n2 - l2 - 1, 2 * l2 + 1)
    L = l + l2 + 3
    D = len(a) + len(b) - 2
    s_tot = n + n2
    # term(j,k) = (-1)^(j+k) a_j b_k C(j+k,j) (j+k+L)!/(j+k)! 2^(j+k) n^k n2^j (n+n2)^(D-j-k)
    # over a common denominator (n+n2)^D; signs are inside a_j, b_k
    total = 0
    for s in range(D + 1):
        inner = 0
        for j in range(max(0, s - len(b) + 1), min(s, len(a) - 1) + 1):
            k = s - j
            inner += a[j] * b[k] * math.comb(s, j) * n**k * n2**j
        if inner:
            total += inner * (math.factorial(s + L) // math.factorial(s)) * 2**s * s_tot ** (D - s)
    # prefactor 2^(l+l2) n^(l2+4) n2^(l+4) / (n+n2)^(L+1), from (2/n)^l (2/n2)^l2 and beta^-(p+1)
    F = Fraction(total * 2 ** (l + l2) * n ** (l2 + 4) * n2 ** (l + 4), s_tot ** (D + L + 1))
    if F == 0:
        return 0.0
    H = F * F * _norm_sq(n, l) * _norm_sq(n2, l2)
    with localcontext() as ctx:
        ctx.prec = 40
        mag = (Decimal(H.numerator) / Decimal(H.denominator)).sqrt()
    return math.copysign(float(mag), F)


def radial_dipole(n: int, l: int, n2: int, l2: int, host: MaterialHost | None = None) -> float:
    """Radial dipole integral in metres for ``host`` (in a* when host is None)."""
    v = radial_dipole_units(n, l, n2, l2)
    return v if host is None else v * host.a_star


# angular factors of sin(theta) exp(+-i phi), Condon-Shortley phases


def angular_plus(lp: int, mp: int, l: int, m: int) -> float:
    """<lp mp| sin(theta) e^{+i phi} |l m>."""
    if mp != m + 1:
        return 0.0
    if lp == l + 1:
        return -math.sqrt((l + m + 1) * (l + m + 2) / ((2 * l + 1) * (2 * l + 3)))
    if lp == l - 1:
        return math.sqrt((l - m) * (l - m - 1) / ((2 * l - 1) * (2 * l + 1)))
    return 0.0


def angular_minus(lp: int, mp: int, l: int, m: int) -> float:
    """<lp mp| sin(theta) e^{-i phi} |l m>; the adjoint of ``angular_plus``."""
    return angular_plus(l, m, lp, mp)


def r_plus(a: HydrogenicState, c: HydrogenicState) -> float:
    """<a| x + i y |c> in units of a*."""
    ang = angular_plus(a.l_orb, a.m, c.l_orb, c.m)
    return 0.0 if ang == 0.0 else ang * radial_dipole_units(c.n, c.l_orb, a.n, a.l_orb)


def r_minus(a: HydrogenicState, c: HydrogenicState) -> float:
    """<a| x - i y |c> in units of a*."""
    ang = angular_minus(a.l_orb, a.m, c.l_orb, c.m)
    return 0.0 if ang == 0.0 else ang * radial_dipole_units(c.n, c.l_orb, a.n, a.l_orb)


def energy_units(n: int) -> float:
    return -1.0 / n**2


# effective Hamiltonian


@dataclass
class ConvergenceReport:
    n_max: int
    shells: dict  # n_c -> contribution to the dimensionless sum
    last_shell_ratio: float


def default_n_max(a: HydrogenicState, b: HydrogenicState) -> int:
    return 3 * max(a.n, b.n) + 20


def _intermediates(a: HydrogenicState, n_max: int):
    for nc in range(1, n_max + 1):
        for lc in (a.l_orb - 1, a.l_orb + 1):
            if 0 <= lc < nc:
                for mc in (a.m - 1, a.m + 1):
                    if abs(mc) <= lc:
                        yield HydrogenicState(nc, lc, mc)


def ife_sum(a, b, omega_u: float, n_max: int, delta: float = 1e-6):
    """Dimensionless bracket sum (units a*^2 (hbar/Ry*)^2) and per-shell parts."""
    shells: dict[int, float] = {}
    if a.m != b.m:
        return 0.0, shells
    wb = energy_units(b.n)
    for c in _intermediates(a, n_max):
        if c.m == a.m - 1:
            num = r_plus(a, c) * r_minus(c, b)
        else:
            num = -r_minus(a, c) * r_plus(c, b)
        if num == 0.0:
            continue
        w_bc = wb - energy_units(c.n)
        if abs(abs(w_bc) - omega_u) < delta:
            raise ResonanceError(f"drive within {delta} Ry*/hbar of the {b} -> {c} transition")
        shells[c.n] = shells.get(c.n, 0.0) + num / (w_bc * w_bc - omega_u * omega_u)
    total = math.fsum(shells[k] for k in sorted(shells))
    return total, shells


def ife_matrix_element(
    a: HydrogenicState,
    b: HydrogenicState,
    drive: DriveField,
    host: MaterialHost,
    n_max: int | None = None,
    delta: float = 1e-6,
    with_report: bool = False,
):
    """<a|H_eff|b> / mu_B in tesla (complex; real for this basis).

    Raises ResonanceError when the drive sits within ``delta`` (Ry*/hbar)
    of a contributing transition and warns with CutoffWarning when the
    last included shell still changes the sum by more than 1e-3.
    """
    if n_max is None:
        n_max = default_n_max(a, b)
    if n_max < max(a.n, b.n) + 1:
        raise ValueError("n_max must exceed both principal numbers")
    w_u = host.omega_units(drive.omega)
    S, shells = ife_sum(a, b, w_u, n_max, delta)
    ratio = abs(shells.get(n_max, 0.0)) / abs(S) if S else 0.0
    if ratio > CUTOFF_RATIO:
        warnings.warn(f"last shell n={n_max} contributes {ratio:.2e} of the sum", CutoffWarning, stacklevel=2)
    # (2 m* q / hbar^2) w E^2 S with w = w_u Ry*/hbar and S in a*^2 (hbar/Ry*)^2
    pref = 2 * host.m_star * host.q * host.a_star**2 / (C.hbar * host.ry_star)
    value = complex(pref * w_u * (drive.E_R**2 - drive.E_L**2) * S)
    if with_report:
        return value, ConvergenceReport(n_max, shells, ratio)
    return value


def effective_field(a: HydrogenicState, drive: DriveField, host: MaterialHost, n_max: int | None = None, delta: float = 1e-6) -> float:
    """B_eff = <a|H_eff|a> / mu_B in tesla."""
    return ife_matrix_element(a, a, drive, host, n_max, delta).real


def scaling_exponent(ns, fields) -> float:
    """Least-squares slope of log|B| against log n."""
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.abs(np.asarray(fields, float))), 1)[0])
