"""Scenario dispatch: build module objects from a RunConfig, run, write artifacts."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import platform
import time
import warnings
from collections import Counter

import numpy as np

from . import __version__, kernels
from .acoustic import PROVENANCE, DiracParams, acoustic_ife, rippled_drive, triaxial_drive
from .beam import BeamSpec, Envelope, beam_E, circle_contour, phase_winding, sample_mode
from .config import RunConfig
from .errors import CutoffWarning, ZeroOnContour
from .grid import GridSpec
from .ife import (
    ConductivityPair,
    DriveField,
    Layer,
    bilayer_fluid,
    dipolar_ife,
    field_from_intensity,
    hall_ife,
    icme,
    layer_current_magnetization,
    moment_per_carrier_in_bohr,
    rotating_current,
)
from .llg import LLGParams, SpinLattice, neel_skyrmion, run_magnet, topological_charge
from .render import colorize, to_ppm
from .rydberg import HydrogenicState, MaterialHost, ife_matrix_element, scaling_exponent
from .snapshot import decode, encode
from .tdgl import TDGLParams, run_sc


def beam_spec(cfg: RunConfig) -> BeamSpec:
    b = cfg["beam"]
    env = Envelope(b["envelope"], b["t0"], b["tau"])
    return BeamSpec(b["p"], b["l"], b["sigma"], b["theta_pol"], b["E0"], b["w0"], b["omega"], tuple(b["center"]), env)


def grid_spec(cfg: RunConfig) -> GridSpec:
    g = cfg["grid"]
    return GridSpec.centered(g["nx"], g["ny"], g["dx"])


class Artifacts:
    """Collects files written into one output directory."""

    def __init__(self, out_dir):
        self.dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.names: list[str] = []

    def bytes(self, name: str, data: bytes):
        with open(os.path.join(self.dir, name), "wb") as fh:
            fh.write(data)
        self.names.append(name)

    def csv(self, name: str, header, rows):
        path = os.path.join(self.dir, name)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        self.names.append(name)

    def snapshot(self, name: str, data, dx: float, t: float):
        self.bytes(name, encode(data, dx, t))

    def image(self, name: str, data, dx: float, t: float, style: str = "auto", scale: int = 4):
        self.bytes(name, to_ppm(colorize(decode(encode(data, dx, t)), style), scale))

    def listing(self):
        out = []
        for name in sorted(self.names):
            with open(os.path.join(self.dir, name), "rb") as fh:
                blob = fh.read()
            out.append({"path": name, "sha256": hashlib.sha256(blob).hexdigest(), "bytes": len(blob)})
        return out


# scenarios


def _beam_render(cfg, art, threads):
    spec = beam_spec(cfg)
    grid = grid_spec(cfg)
    mode = sample_mode(spec, grid)
    art.snapshot("mode.qps", mode, grid.dx, 0.0)
    art.image("mode.ppm", mode, grid.dx, 0.0, "phase")
    X, Y = grid.mesh()
    # snapshot_every counts field frames across one optical period here
    period = 2 * math.pi / spec.omega
    n = cfg.snapshot_every or 1
    for k in range(n):
        t = k * period / n
        E = np.real(beam_E(spec, X, Y, t))
        art.snapshot(f"field_{k:04d}.qps", E, grid.dx, t)
        art.image(f"field_{k:04d}.ppm", E, grid.dx, t, "direction")
    rows = []
    wind = None
    for frac in (0.5, 1.0, 1.5):
        r = frac * spec.w0
        try:
            w = phase_winding(mode, circle_contour(grid, spec.center, r))
        except (ZeroOnContour, ValueError):
            rows.append([r, "nan"])
            continue
        rows.append([r, w])
        if frac == 1.0:
            wind = w
    art.csv("winding.csv", ["radius", "winding"], rows)
    return {"phase_winding_w0": wind}


def _sc_run(cfg, art, threads):
    spec = beam_spec(cfg)
    grid = grid_spec(cfg)
    t = cfg["tdgl"]
    params = TDGLParams(dt=t["dt"], steps=t["steps"], noise_amp=t["noise_amp"], seed=cfg.seed)
    diag = t["diag_every"] or max(t["steps"], 1)
    run = run_sc(spec, grid, params, cfg.snapshot_every, diag, t["cjj_every"], threads, t["phase_only"])
    for k, (tt, psi) in enumerate(run.snapshots):
        art.snapshot(f"psi_{k:04d}.qps", psi, grid.dx, tt)
    art.snapshot("psi_final.qps", run.final.psi, grid.dx, run.final.t)
    art.image("psi_final.ppm", run.final.psi, grid.dx, run.final.t, "phase")
    art.csv("winding.csv", ["step", "t", "plaquette_total", "boundary_winding"], run.winding)
    art.csv("vortices.csv", ["t", "x", "y", "charge"], [(v.t, v.x, v.y, v.charge) for v in run.vortices])
    if run.cjj:
        art.csv("cjj.csv", ["t", "r", "C"], [(tt, r, c) for tt, rs, cs in run.cjj for r, c in zip(rs, cs)])
    counts = Counter(v.t for v in run.vortices)
    t_last = max(counts) if counts else None
    final = [v for v in run.vortices if v.t == t_last]
    return {
        "vortices_final": len(final),
        "net_winding_final": int(sum(v.charge for v in final)),
        "vortices_max": max(counts.values()) if counts else 0,
        "max_abs_psi": float(np.max(np.abs(run.final.psi))),
    }


def _lattice(cfg) -> SpinLattice:
    L = cfg["lattice"]
    if L["init"] == "uniform":
        return SpinLattice.uniform(L["nx"], L["ny"], (0.0, 0.0, float(L["mz"])), L["a0"])
    # a skyrmion core points against the background
    return neel_skyrmion(L["nx"], L["ny"], L["radius"], L["width"], core=-L["mz"], a0=L["a0"])


def _magnet_run(cfg, art, threads):
    spec = beam_spec(cfg)
    p = cfg["llg"]
    params = LLGParams(
        J_ex=p["J_ex"],
        K_z=p["K_z"],
        gamma=p["gamma"],
        alpha=p["alpha"],
        dt=p["dt"],
        steps=p["steps"],
        zeeman_scale=p["zeeman_scale"],
        seed=cfg.seed,
        noise_amp=p["noise_amp"],
    )
    lat = _lattice(cfg)
    a0 = lat.a0
    charge_every = p["charge_every"] or max(p["steps"], 1)
    run = run_magnet(spec, lat, params, cfg.snapshot_every, charge_every, p["qmap_every"], threads)
    for k, (t, M) in enumerate(run.snapshots):
        art.snapshot(f"M_{k:04d}.qps", M, a0, t)
    for k, (t, q) in enumerate(run.qmaps):
        art.snapshot(f"q_{k:04d}.qps", q, a0, t)
    t_end = params.steps * params.dt
    art.snapshot("M_final.qps", run.final.M, a0, t_end)
    art.image("mz_final.ppm", run.final.M, a0, t_end, "mz")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        tc = topological_charge(run.final)
    art.snapshot("q_final.qps", tc.q, a0, t_end)
    art.image("q_final.ppm", tc.q, a0, t_end, "diverging")
    art.csv("charge.csv", ["step", "t", "Q_total", "Q_lattice"], run.charge)
    return {"Q_lattice_final": tc.Q_lattice, "Q_total_final": tc.Q_total, "max_norm_drift": run.max_norm_drift}


def _host(r) -> MaterialHost:
    if r["host"] == "hydrogen":
        return MaterialHost.hydrogen()
    if r["host"] == "si_p":
        return MaterialHost.si_p()
    return MaterialHost.from_dielectric(r["eps"], r["mass_ratio"])


def _ife_rydberg(cfg, art, threads):
    r = cfg["rydberg"]
    host = _host(r)
    drive = DriveField.circular(field_from_intensity(r["intensity"]), 2 * math.pi * r["frequency_hz"], r["helicity"])
    rows, ns, fields = [], [], []
    warned = 0
    for n in range(r["n_min"], r["n_max"] + 1):
        a = HydrogenicState.circular(n)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", CutoffWarning)
            v, rep = ife_matrix_element(a, a, drive, host, r["cutoff"] or None, r["delta"], with_report=True)
        warned += sum(issubclass(w.category, CutoffWarning) for w in caught)
        rows.append([n, v.real, rep.n_max, rep.last_shell_ratio])
        ns.append(n)
        fields.append(v.real)
    art.csv("beff.csv", ["n", "B_eff_T", "cutoff", "last_shell_ratio"], rows)
    slope = scaling_exponent(ns, fields) if len(ns) > 1 and all(f != 0 for f in fields) else None
    return {"host": host.name, "loglog_slope": slope, "cutoff_warnings": warned}


def _ife_hall(cfg, art, threads):
    h = cfg["hall"]
    cond = ConductivityPair(complex(*h["sigma_L"]), complex(*h["sigma_H"]), h["rho0"], h["omega"])
    E = h["E_amp"]
    drives = {
        "right": DriveField.circular(E, h["omega"], 1).vector,
        "left": DriveField.circular(E, h["omega"], -1).vector,
        "linear": DriveField.linear(E, h["omega"]).vector,
    }
    rows = []
    for name, vec in drives.items():
        M = hall_ife(cond, vec)
        rows.append([name, M, moment_per_carrier_in_bohr(M, h["rho0"])])
    art.csv("hall_ife.csv", ["drive", "M0", "mu_B_per_carrier"], rows)
    m_icme = icme(cond, E)
    _, chi = rotating_current(cond, E, [0.0])
    art.csv("icme.csv", ["E_amp", "M0", "chirality"], [[E, m_icme, chi]])
    return {"icme": m_icme, "chirality": chi}


def _ife_dipolar(cfg, art, threads):
    d = cfg["dipolar"]
    e = Layer(-1.0, d["m_e"], d["g_e"])
    hole = Layer(1.0, d["m_h"], d["g_h"])
    rows = []
    for name, hel in (("right", 1), ("left", -1), ("linear", 0)):
        if hel:
            vec = DriveField.circular(d["E_amp"], d["omega"], hel).vector
        else:
            vec = DriveField.linear(d["E_amp"], d["omega"]).vector
        fluid, re, rh = bilayer_fluid(e, hole, vec, d["omega"], d["n0"], d["omega0"], d["damping"])
        M = dipolar_ife(fluid)
        oracle = layer_current_magnetization([e, hole], [re, rh], d["omega"], d["n0"])
        rows.append([name, M[2], oracle[2]])
    art.csv("dipolar.csv", ["drive", "M0_z", "layer_current_z"], rows)
    return {"M0_right": rows[0][1]}


def _acoustic_run(cfg, art, threads):
    a = cfg["acoustic"]
    grid = GridSpec(a["nx"], a["nx"], a["dx"])
    rows = []
    for w in a["omegas"]:
        for hel in (1, -1):
            if a["geometry"] == "ripple":
                sf = rippled_drive(
                    grid, w, a["amplitude"], hel, a["ripple"], a["k"] or None, a["modulation"],
                    a["samples_per_period"], a["periods"], a["g"],
                )
            else:
                sf = triaxial_drive(grid, w, a["amplitude"], hel, a["triaxial_c"], a["samples_per_period"], a["periods"], a["g"])
            for ms in (1, -1):
                dp = DiracParams(ms, a["conductance_scale"], a["valleys"])
                rows.append([w, hel, ms, acoustic_ife(sf, dp)])
    art.csv("acoustic_ife.csv", ["omega", "helicity", "mass_sign", "M_z"], rows)
    sel = [(r[0], r[3]) for r in rows if r[1] == 1 and r[2] == 1]
    ws = np.array([s[0] for s in sel])
    ms = np.array([s[1] for s in sel])
    out = {"provenance": PROVENANCE}
    if len(ws) > 1:
        slope, icpt = np.polyfit(ws, ms, 1)
        ss = float(np.sum((ms - ms.mean()) ** 2))
        out["linear_fit"] = {
            "slope": float(slope),
            "intercept": float(icpt),
            "r2": 1 - float(np.sum((ms - slope * ws - icpt) ** 2)) / ss if ss > 0 else None,
        }
    return out


RUNNERS = {
    "beam-render": _beam_render,
    "sc-run": _sc_run,
    "magnet-run": _magnet_run,
    "ife-rydberg": _ife_rydberg,
    "ife-hall": _ife_hall,
    "ife-dipolar": _ife_dipolar,
    "acoustic-run": _acoustic_run,
}


def run(cfg: RunConfig, out_dir: str | None = None, threads: int = 1, config_text: str | None = None) -> dict:
    """Run the scenario, write artifacts and ``manifest.json``; return the manifest."""
    import scipy

    out = out_dir or cfg.output_dir
    art = Artifacts(out)
    t0 = time.perf_counter()
    summary = RUNNERS[cfg.scenario](cfg, art, threads)
    wall = time.perf_counter() - t0
    blob = (config_text if config_text is not None else json.dumps(cfg.blocks, sort_keys=True)).encode()
    manifest = {
        "scenario": cfg.scenario,
        "config_sha256": hashlib.sha256(blob).hexdigest(),
        "seed": cfg.seed,
        "threads": threads,
        "versions": {
            "qprint": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
            "kernels": kernels.BACKEND,
        },
        "wall_time_s": wall,
        "artifacts": art.listing(),
        "summary": summary,
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return manifest


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")
