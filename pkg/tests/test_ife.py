import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import constants as C

from qprint.ife import (
    E_LEFT,
    E_RIGHT,
    ConductivityPair,
    DipoleFluid,
    DriveField,
    Layer,
    bilayer_fluid,
    classical_ife,
    dipolar_ife,
    field_from_intensity,
    hall_ife,
    icme,
    layer_current_magnetization,
    moment_per_carrier_in_bohr,
    rotating_current,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cvec = st.tuples(finite, finite, finite, finite, finite, finite).map(
    lambda v: np.array([v[0] + 1j * v[1], v[2] + 1j * v[3], v[4] + 1j * v[5]])
)
phase = st.floats(0, 2 * math.pi)


def time_average_oracle(E, omega=1.7, samples=4096):
    t = np.arange(samples) * (2 * math.pi / omega) / samples
    ph = np.exp(1j * omega * t)[:, None]
    e = np.real(E[None, :] * ph)
    de = np.real(1j * omega * E[None, :] * ph)
    return (2 / omega) * np.mean(np.cross(e, de), axis=0)


# classical


def test_classical_linear_is_zero():
    E = np.array([1.0, 2.0, -0.5]) * np.exp(0.7j)
    assert np.all(np.abs(classical_ife(E)) < 1e-15)


def test_classical_circular():
    E0 = 1.3
    out = classical_ife(E0 * np.array([1, 1j, 0]))
    assert np.allclose(out, [0, 0, -2 * E0**2], atol=1e-15)
    assert np.allclose(classical_ife(E0 * np.array([1, -1j, 0])), [0, 0, 2 * E0**2], atol=1e-15)
    # the counter-clockwise unit vector gives +1
    assert classical_ife(E_RIGHT)[2] == pytest.approx(1.0, abs=1e-15)
    assert classical_ife(E_LEFT)[2] == pytest.approx(-1.0, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(cvec)
def test_classical_matches_time_average(E):
    assert np.allclose(classical_ife(E), time_average_oracle(E), atol=1e-10 * (1 + np.sum(np.abs(E) ** 2)))


def test_classical_accepts_two_vectors():
    assert np.array_equal(classical_ife([1, 1j]), classical_ife([1, 1j, 0]))


# drive field


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5), st.floats(-math.pi, math.pi))
def test_drive_round_trip(ER, EL, delta):
    d = DriveField(ER, EL, 2.0, delta)
    back = DriveField.from_vector(d.vector, 2.0)
    assert abs(back.E_R - ER) < 1e-12 and abs(back.E_L - EL) < 1e-12
    assert np.allclose(back.vector, d.vector, atol=1e-12)


def test_drive_ife_is_intensity_difference():
    d = DriveField(1.5, 0.5, 1.0, 0.3)
    assert classical_ife(d.vector)[2] == pytest.approx(1.5**2 - 0.5**2, abs=1e-14)
    assert classical_ife(d.flipped().vector)[2] == pytest.approx(-(1.5**2 - 0.5**2), abs=1e-14)


def test_drive_validation():
    with pytest.raises(ValueError):
        DriveField(-1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        DriveField(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        DriveField.circular(1.0, 1.0, 0)


def test_linear_drive_has_equal_amplitudes():
    d = DriveField.linear(2.0, 1.0, 0.4)
    assert d.E_R == d.E_L
    v = d.vector
    assert abs(np.imag(v[0] * np.conj(v[1]))) < 1e-15
    assert math.hypot(*np.abs(v)) == pytest.approx(2.0)


def test_field_from_intensity():
    # 1 W/um^2 gives about 27 MV/m
    assert field_from_intensity(1e12) == pytest.approx(2.745e7, rel=1e-3)


# Hall fluid

cond_st = st.tuples(
    st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 10), st.floats(0.1, 10)
).map(lambda v: ConductivityPair(complex(v[0], v[1]), complex(v[2], v[3]), v[4], v[5]))


def test_conductivity_validation():
    with pytest.raises(ValueError):
        ConductivityPair(1, 1, 0.0, 1.0)
    with pytest.raises(ValueError):
        ConductivityPair(1, 1, 1.0, -1.0)


def test_icme_zero_for_in_phase_response():
    c = ConductivityPair(2.0, -3.0, 1.0, 1.0)
    assert icme(c, 1.0) == 0.0
    c = ConductivityPair(2.0 + 1j, 4.0 + 2j, 1.0, 1.0)  # ratio real, product has imaginary part
    assert icme(c, 1.0) != 0.0
    c = ConductivityPair(1 + 1j, 1 - 1j, 1.0, 1.0)  # product real
    assert abs(icme(c, 1.0)) < 1e-12


def test_icme_quantum_hall_is_maximal():
    rng = np.random.default_rng(3)
    qh = ConductivityPair(2.0j, 3.0, 1.0, 1.0)
    best = abs(icme(qh, 1.0))
    for ph in rng.uniform(0, 2 * np.pi, size=(200, 2)):
        c = ConductivityPair(2.0 * np.exp(1j * ph[0]), 3.0 * np.exp(1j * ph[1]), 1.0, 1.0)
        assert abs(icme(c, 1.0)) <= best * (1 + 1e-12)
    assert best == pytest.approx(6.0 / (C.e * 1.0 * 1.0))


def test_icme_quadratic_in_field():
    c = ConductivityPair(0.3 + 1.1j, 0.7 - 0.2j, 2.0, 3.0)
    assert icme(c, 2.0) == pytest.approx(4 * icme(c, 1.0), rel=1e-15)


def test_hall_ife_linear_zero_and_circular_sign():
    c = ConductivityPair(1j, 1.0, 1.0, 1.0)
    assert hall_ife(c, np.array([1.0, 0.5]) * np.exp(0.4j)) == 0.0
    r = hall_ife(c, E_RIGHT)
    assert r == pytest.approx(-abs(c.sigma_H) ** 2 / (2 * C.e * c.omega * c.rho0))
    assert hall_ife(c, E_LEFT) == -r


@settings(max_examples=200, deadline=None)
@given(cond_st, cvec, phase)
def test_hall_formulas_helicity_odd_and_phase_even(c, E, a):
    h = hall_ife(c, E)
    tol = 1e-12 * abs(c.sigma_H) ** 2 * (1 + np.sum(np.abs(E) ** 2)) / (2 * C.e * c.omega * c.rho0)
    assert hall_ife(c, np.conj(E)) == pytest.approx(-h, abs=tol)
    assert hall_ife(c, E * np.exp(1j * a)) == pytest.approx(h, abs=tol)
    ci = classical_ife(E)
    assert np.allclose(classical_ife(np.conj(E)), -ci, atol=1e-12 * (1 + np.abs(ci).max()))
    assert np.allclose(classical_ife(E * np.exp(1j * a)), ci, atol=1e-12 * (1 + np.abs(ci).max()))


def test_rotating_current_no_rotation_without_dissipative_part():
    c = ConductivityPair(2.0 + 0j, 1.5 - 0.3j, 1.0, 1.0)
    J, _ = rotating_current(c, 1.0, np.linspace(0, 10, 50))
    assert np.all(J[:, 0] == 0) and orbit_area(J) == 0


def orbit_area(J):
    # shoelace on a closed sampled orbit
    x, y = J[:, 0], J[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def test_rotating_current_orbit_and_chirality_on_random_pairs():
    rng = np.random.default_rng(11)
    n_agree = 0
    for _ in range(1000):
        sL, sH = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = ConductivityPair(sL, sH, rng.uniform(0.5, 2), rng.uniform(0.5, 2))
        t = np.arange(2000) * (2 * np.pi / c.omega) / 2000
        J, chi = rotating_current(c, 1.3, t)
        # inscribed 2000-gon of the ellipse
        area = orbit_area(J) * (2 * np.pi / 2000) / np.sin(2 * np.pi / 2000)
        assert area == pytest.approx(-np.pi * 1.3**2 * sL.imag * sH.real, rel=1e-9, abs=1e-12)
        n_agree += chi == int(np.sign(icme(c, 1.3)))
    assert n_agree == 1000


def test_hall_order_of_magnitude_report():
    # graphene-like: four conductance quanta, 1e12 cm^-2 carriers, 1 THz, 3 kV/cm
    sigma_H = 4 * C.e**2 / C.h
    rho0 = 1e16
    c = ConductivityPair(0.5j * sigma_H, sigma_H, rho0, 2 * np.pi * 1e12)
    M0 = hall_ife(c, 3e5 * E_RIGHT)
    per = abs(moment_per_carrier_in_bohr(M0, rho0))
    print(f"hall IFE: {per:.3g} Bohr magnetons per carrier")
    assert 0.1 < per < 10


# dipolar fluid

layer_st = st.tuples(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.5, 2))


def test_dipolar_parallel_is_zero():
    P = np.array([1.0, 2.0, 0.0]) * (1 + 1j)
    assert np.all(dipolar_ife(DipoleFluid(3.0, P, 0.7 * P)) == 0)
    with pytest.raises(ValueError):
        DipoleFluid(-1.0, P, P)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.1, 3), st.floats(0, 1), cvec)
def test_symmetric_bilayer_cancels(m, w, gam, E):
    e, h = Layer(-1.0, m), Layer(1.0, m)
    fluid, re, rh = bilayer_fluid(e, h, E, w, 2.0, omega0=1.3, damping=gam)
    assert np.all(np.abs(fluid.v_omega) <= 1e-12 * (1 + np.abs(re).max()))
    assert np.all(np.abs(dipolar_ife(fluid)) <= 1e-12 * (1 + np.abs(re).max() ** 2))
    assert np.all(np.abs(layer_current_magnetization([e, h], [re, rh], w, 2.0) + 0.5 * dipolar_ife(fluid)) < 1e-12)


@settings(max_examples=200, deadline=None)
@given(layer_st, st.floats(0.1, 3), st.floats(0, 1), cvec, phase)
def test_asymmetric_bilayer_matches_layer_currents(ml, w, gam, E, a):
    me, mh, g = ml
    e, h = Layer(-1.0, me, g), Layer(1.0, mh)
    fluid, re, rh = bilayer_fluid(e, h, E, w, 1.7, omega0=0.9, damping=gam)
    M = dipolar_ife(fluid)
    oracle = layer_current_magnetization([e, h], [re, rh], w, 1.7)
    scale = 1e-8 * (1 + np.abs(M).max())
    assert np.allclose(M, -2.0 * oracle, atol=scale, rtol=0)
    flip = dipolar_ife(bilayer_fluid(e, h, np.conj(E), w, 1.7, 0.9, gam)[0])
    assert np.allclose(flip, -M, atol=1e-12 * (1 + np.abs(M).max()))
    rot = dipolar_ife(bilayer_fluid(e, h, E * np.exp(1j * a), w, 1.7, 0.9, gam)[0])
    assert np.allclose(rot, M, atol=1e-12 * (1 + np.abs(M).max()))


def test_asymmetric_bilayer_nonzero_for_circular_drive():
    e, h = Layer(-1.0, 1.0), Layer(1.0, 3.0)
    E = np.array([1.0, 1j, 0.0])
    M = dipolar_ife(bilayer_fluid(e, h, E, 0.5, 1.0, omega0=1.0, damping=0.1)[0])
    assert abs(M[2]) > 1e-3 and M[0] == 0 and M[1] == 0
    Mf = dipolar_ife(bilayer_fluid(e, h, np.conj(E), 0.5, 1.0, omega0=1.0, damping=0.1)[0])
    assert Mf[2] == -M[2]


def test_layer_current_matches_time_domain_orbit():
    # direct time average of (n0/2) q r x dr/dt for each layer
    lay = Layer(-1.0, 1.4)
    E = np.array([0.3 + 0.2j, -0.1 + 0.9j, 0.0])
    w = 0.8
    r = bilayer_fluid(lay, Layer(1.0, 1.0), E, w, 1.0, 1.1, 0.2)[1]
    t = np.arange(4096) * (2 * np.pi / w) / 4096
    ph = np.exp(1j * w * t)[:, None]
    x = np.real(r[None, :] * ph)
    v = np.real(1j * w * r[None, :] * ph)
    direct = 0.5 * 1.0 * lay.charge * np.mean(np.cross(x, v), axis=0)
    assert np.allclose(layer_current_magnetization([lay], [r], w, 1.0), direct, atol=1e-14)
