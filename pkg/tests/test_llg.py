import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from qprint import kernels
from qprint.errors import AccuracyGuard, SolidAngleDegenerate
from qprint.llg import (
    LLGParams,
    SpinLattice,
    effective_field,
    energy,
    llg_rhs,
    neel_skyrmion,
    run_magnet,
    step_llg,
    topological_charge,
)


def random_lattice(nx, ny, seed):
    M = np.random.default_rng(seed).normal(size=(nx, ny, 3))
    return SpinLattice(M / np.linalg.norm(M, axis=-1)[..., None])


def uniform_field(lat, vec):
    B = np.zeros(lat.M.shape)
    B[...] = vec
    return B


def test_lattice_rejects_non_unit_spins():
    with pytest.raises(ValueError):
        SpinLattice(np.ones((4, 4, 3)))
    with pytest.raises(ValueError):
        SpinLattice(np.ones((4, 4)))


def test_effective_field_counts_neighbours():
    p = LLGParams(J_ex=1.3, K_z=0.4)
    H = effective_field(SpinLattice.uniform(6, 5), p)
    assert np.allclose(H[2, 2], [0, 0, 4 * 1.3 + 0.4], atol=0, rtol=1e-15)
    assert H[0, 2, 2] == pytest.approx(3 * 1.3 + 0.4)
    assert H[0, 0, 2] == pytest.approx(2 * 1.3 + 0.4)


def test_flipped_spin_changes_neighbour_field():
    p = LLGParams(J_ex=0.7, K_z=0.2)
    lat = SpinLattice.uniform(6, 6)
    ref = effective_field(lat, p)
    M = lat.M.copy()
    M[3, 3] = [0, 0, -1]
    H = effective_field(SpinLattice(M), p)
    d = H - ref
    for nb in [(2, 3), (4, 3), (3, 2), (3, 4)]:
        assert d[nb][2] == pytest.approx(-2 * 0.7)
    d[2, 3] = d[4, 3] = d[3, 2] = d[3, 4] = 0
    d[3, 3] = 0  # the flipped site's own anisotropy term
    assert np.all(d == 0)


def test_zeeman_term_adds_scaled_field():
    p = LLGParams(J_ex=0.0, K_z=0.0, zeeman_scale=2.5)
    lat = SpinLattice.uniform(4, 4)
    B = uniform_field(lat, [0.1, -0.2, 0.3])
    assert np.allclose(effective_field(lat, p, B), 2.5 * B)


@pytest.mark.parametrize("backend", ["numpy", "cython"])
def test_kernel_rhs_matches_reference_formula(backend, monkeypatch):
    try:
        impl = kernels.get_backend(backend)
    except ImportError:
        pytest.skip("compiled extension not built")
    monkeypatch.setattr(kernels, "_impl", impl)
    lat = random_lattice(7, 9, 1)
    p = LLGParams(J_ex=0.8, K_z=0.3, alpha=0.25, gamma=1.7, zeeman_scale=0.6)
    B = np.random.default_rng(2).normal(size=lat.M.shape)
    H = effective_field(lat, p, B)
    M = lat.M
    ref = -p.gamma / (1 + p.alpha**2) * (np.cross(M, H) + p.alpha * np.cross(M, np.cross(M, H)))
    got, hmax = llg_rhs(M, B, p)
    assert np.max(np.abs(got - ref)) < 1e-13
    assert hmax == pytest.approx(np.max(np.linalg.norm(H, axis=-1)), rel=1e-14)


def test_backends_agree_bitwise():
    try:
        ck = kernels.get_backend("cython")
    except ImportError:
        pytest.skip("compiled extension not built")
    lat = random_lattice(9, 8, 4)
    B = np.random.default_rng(5).normal(size=lat.M.shape)
    outs = []
    for impl in (ck, kernels.get_backend("numpy")):
        out = np.empty_like(lat.M)
        h = impl.llg_stage(lat.M, B, 1.0, 0.3, 0.7, 0.9, 0.1, out, 0, 9)
        outs.append((out, h))
    assert np.array_equal(outs[0][0], outs[1][0])
    assert outs[0][1] == outs[1][1]


def test_parallel_field_exerts_no_torque():
    lat = SpinLattice.uniform(5, 5)
    p = LLGParams(J_ex=1.0, K_z=0.2, alpha=0.3, dt=0.01)
    out = step_llg(lat, p, uniform_field(lat, [0, 0, 0.4]), uniform_field(lat, [0, 0, 0.4]))
    assert np.array_equal(out.M, lat.M)


def _single_spin(theta):
    return SpinLattice(np.array([[[math.sin(theta), 0.0, math.cos(theta)]]]))


@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.3])
def test_single_spin_precession_frequency(alpha):
    H, dt, n = 1.5, 5e-4, 16000
    p = LLGParams(J_ex=0.0, K_z=0.0, alpha=alpha, dt=dt)
    lat = _single_spin(0.9)
    B = np.zeros((1, 1, 3))
    B[..., 2] = H
    phase = 0.0
    prev = 0.0
    for _ in range(n):
        lat = step_llg(lat, p, B, B)
        a = math.atan2(lat.M[0, 0, 1], lat.M[0, 0, 0])
        phase += (a - prev + math.pi) % (2 * math.pi) - math.pi
        prev = a
    w = p.gamma * H / (1 + alpha**2)
    assert phase / (n * dt) == pytest.approx(w, rel=1e-6)
    # damping pulls the tilt in as tan(theta/2) ~ exp(-alpha w t)
    th = math.acos(lat.M[0, 0, 2])
    assert math.tan(th / 2) == pytest.approx(math.tan(0.45) * math.exp(-alpha * w * n * dt), rel=1e-5)


def test_undamped_precession_keeps_mz_per_period():
    H = 1.0
    p = LLGParams(J_ex=0.0, K_z=0.0, alpha=0.0, dt=1e-3)
    lat = _single_spin(1.1)
    B = np.zeros((1, 1, 3))
    B[..., 2] = H
    mz0 = lat.M[0, 0, 2]
    for _ in range(int(round(2 * math.pi / (H * p.dt)))):
        lat = step_llg(lat, p, B, B)
    assert abs(lat.M[0, 0, 2] - mz0) < 1e-8


def test_damping_decreases_angle_to_field():
    p = LLGParams(J_ex=0.0, K_z=0.0, alpha=0.2, dt=0.01)
    lat = _single_spin(2.5)
    B = np.zeros((1, 1, 3))
    B[..., 2] = 1.0
    prev = math.inf
    for _ in range(2000):
        lat = step_llg(lat, p, B, B)
        ang = math.acos(lat.M[0, 0, 2])
        assert ang < prev
        prev = ang


def test_norm_and_energy_monotonic():
    lat = random_lattice(10, 10, 7)
    p = LLGParams(J_ex=1.0, K_z=0.1, alpha=0.1, dt=0.02)
    B = uniform_field(lat, [0.0, 0.0, 0.05])
    e = energy(lat, p, B)
    for _ in range(10_000):
        lat = step_llg(lat, p, B, B)
        assert np.max(np.abs(np.linalg.norm(lat.M, axis=-1) - 1)) < 1e-9
        e2 = energy(lat, p, B)
        assert e2 <= e + 1e-10 * abs(e)
        e = e2


def test_conservative_energy_drift():
    lat = neel_skyrmion(24, 24, 4.0, width=2.0)
    p = LLGParams(J_ex=1.0, K_z=0.1, alpha=0.0, dt=0.01)
    B = uniform_field(lat, [0.02, 0.0, 0.05])
    e0 = energy(lat, p, B)
    for _ in range(10_000):
        lat = step_llg(lat, p, B, B)
    assert abs(energy(lat, p, B) - e0) < 1e-6 * abs(e0)


def test_accuracy_guard():
    lat = SpinLattice.uniform(4, 4, (1, 0, 0))
    p = LLGParams(J_ex=1.0, K_z=0.0, dt=0.05)
    B = uniform_field(lat, [0, 0, 10.0])
    with pytest.raises(AccuracyGuard):
        step_llg(lat, p, B, B)


def test_energy_definition_matches_field():
    # H_eff is minus the gradient of E: check with a finite difference
    lat = random_lattice(5, 6, 3)
    p = LLGParams(J_ex=0.9, K_z=0.35, zeeman_scale=1.4)
    B = np.random.default_rng(1).normal(size=lat.M.shape)
    H = effective_field(lat, p, B)
    h = 1e-6
    for site in [(0, 0, 2), (2, 3, 0), (4, 5, 1)]:
        Mp = lat.M.copy()
        Mm = lat.M.copy()
        Mp[site] += h
        Mm[site] -= h
        # energy() never renormalises, so build unvalidated lattices
        lp = object.__new__(SpinLattice)
        lp.M, lp.a0 = Mp, 1.0
        lm = object.__new__(SpinLattice)
        lm.M, lm.a0 = Mm, 1.0
        grad = (energy(lp, p, B) - energy(lm, p, B)) / (2 * h)
        assert grad == pytest.approx(-H[site], abs=1e-7)


# topological charge


def test_uniform_charge_is_exactly_zero():
    t = topological_charge(SpinLattice.uniform(16, 16, (0.3, 0.1, 0.9)))
    assert t.Q_lattice == 0.0 and t.Q_total == 0.0 and np.all(t.q == 0)


@pytest.mark.parametrize("core", [-1, 1])
def test_skyrmion_ansatz_charge(core):
    lat = neel_skyrmion(64, 64, 8.0, core=core)
    t = topological_charge(lat)
    assert abs(t.Q_lattice - core) < 0.02
    # the density route converges more slowly but has the same sign
    assert np.sign(t.Q_total) == core and abs(t.Q_total - core) < 0.1


def test_antiskyrmion_and_mirror_flip_sign():
    sk = topological_charge(neel_skyrmion(48, 48, 6.0)).Q_lattice
    anti = topological_charge(neel_skyrmion(48, 48, 6.0, vorticity=-1)).Q_lattice
    assert anti == pytest.approx(-sk, abs=1e-12)
    M = neel_skyrmion(48, 48, 6.0).M.copy()
    M[..., 1] *= -1
    assert topological_charge(SpinLattice(M)).Q_lattice == pytest.approx(-sk, abs=1e-12)


def test_charge_parity_under_reversal_and_inversion():
    lat = neel_skyrmion(40, 40, 5.0, helicity=0.4)
    Q = topological_charge(lat).Q_lattice
    inv = lat.M[::-1, ::-1]
    assert topological_charge(SpinLattice(inv)).Q_lattice == pytest.approx(Q, abs=1e-12)
    assert topological_charge(SpinLattice(-lat.M)).Q_lattice == pytest.approx(-Q, abs=1e-12)
    assert topological_charge(SpinLattice(-inv)).Q_lattice == pytest.approx(-Q, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(quat=st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: sum(x * x for x in v) > 0.1))
def test_charge_invariant_under_global_spin_rotation(quat):
    lat = neel_skyrmion(32, 32, 5.0)
    R = Rotation.from_quat(quat).as_matrix()
    rot = lat.M @ R.T
    rot /= np.linalg.norm(rot, axis=-1)[..., None]
    a = topological_charge(lat)
    b = topological_charge(SpinLattice(rot))
    assert b.Q_lattice == pytest.approx(a.Q_lattice, abs=1e-10)
    assert np.allclose(b.q, a.q, atol=1e-12)


def test_degenerate_triangles_skipped_or_raised():
    lat = SpinLattice.uniform(4, 4)
    M = lat.M.copy()
    M[1, 1] = [0, 0, -1]
    bad = SpinLattice(M)
    with pytest.warns(RuntimeWarning, match="degenerate"):
        t = topological_charge(bad)
    assert t.skipped > 0
    with pytest.raises(SolidAngleDegenerate):
        topological_charge(bad, strict=True)


# driven runs


def test_zero_beam_keeps_zero_charge():
    p = LLGParams(J_ex=1.0, K_z=0.3, alpha=0.1, dt=0.02, steps=500)
    run = run_magnet(None, SpinLattice.uniform(16, 16, (0, 0, -1)), p, charge_every=50)
    assert all(c[2] == 0 and c[3] == 0 for c in run.charge)
    assert np.array_equal(run.final.M, SpinLattice.uniform(16, 16, (0, 0, -1)).M)


def test_rotating_field_reverses_magnetization():
    # clockwise in-plane field, resonant with precession about -z
    K, w, b, dur = 0.3, 0.3, 1.0, 40.0
    p = LLGParams(J_ex=1.0, K_z=K, alpha=0.1, dt=0.01)
    lat = SpinLattice.uniform(4, 4, (0, 0, -1))

    def field(t):
        on = 1.0 if t < dur else 0.0
        return uniform_field(lat, [on * b * math.cos(w * t), -on * b * math.sin(w * t), 0.0])

    for k in range(int((dur + 150) / p.dt)):
        lat = step_llg(lat, p, field(k * p.dt), field((k + 1) * p.dt))
    assert np.all(lat.M[..., 2] > 0.99)


def test_run_deterministic_across_threads():
    from qprint.beam import BeamSpec, Envelope

    beam = BeamSpec(l=1, sigma=1, theta_pol=math.pi / 4, E0=3.0, w0=5.0, omega=0.3, envelope=Envelope("gaussian", 20, 8))
    p = LLGParams(J_ex=1.0, K_z=0.3, alpha=0.1, dt=0.02, steps=300, noise_amp=1e-3, seed=9)
    lat = SpinLattice.uniform(20, 20, (0, 0, -1))
    ref = run_magnet(beam, lat, p).final.M
    for threads in (2, 3, 0):
        assert np.array_equal(run_magnet(beam, lat, p, threads=threads).final.M, ref)
