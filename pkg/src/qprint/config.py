"""Run configuration: one TOML document, strictly validated before any compute.

Grammar (TOML 1.0).  Top-level keys::

    scenario        one of SCENARIOS (required)
    seed            integer, default 0
    output_dir      string, default "out"
    snapshot_every  integer >= 0, default 0 (no field snapshots)

followed by the parameter tables the scenario uses (see ``BLOCKS``).  A
missing table takes all its defaults; an unknown key or a table the
scenario does not use is an error.
"""

from __future__ import annotations

import copy
import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .errors import ParseError, ValidationError

SCENARIOS = ("beam-render", "sc-run", "magnet-run", "ife-rydberg", "ife-hall", "ife-dipolar", "acoustic-run")

REQUIRED = object()


@dataclass(frozen=True)
class Key:
    kind: str  # int, float, bool, str, vec2, vec3, floats
    default: object = REQUIRED
    rule: str | None = None  # pos, nonneg, ge4, unit, sign, sign0
    choices: tuple | None = None
    doc: str = ""


def _rules(rule, v):
    if rule is None:
        return None
    if rule == "pos" and not v > 0:
        return "must be > 0"
    if rule == "nonneg" and not v >= 0:
        return "must be >= 0"
    if rule == "ge4" and not v >= 4:
        return "must be >= 4"
    if rule == "unit" and not 0 <= v <= 1:
        return "must lie in [0, 1]"
    if rule == "sign" and v not in (-1, 1):
        return "must be -1 or +1"
    if rule == "sign0" and v not in (-1, 0, 1):
        return "must be -1, 0 or +1"
    if rule == "ge1" and not v >= 1:
        return "must be >= 1"
    return None


TOP = {
    "scenario": Key("str", REQUIRED, choices=SCENARIOS),
    "seed": Key("int", 0, "nonneg"),
    "output_dir": Key("str", "out"),
    "snapshot_every": Key("int", 0, "nonneg"),
}

BLOCKS = {
    "beam": {
        "p": Key("int", 0, "nonneg"),
        "l": Key("int", 0),
        "sigma": Key("int", 0, "sign0"),
        "theta_pol": Key("float", math.pi / 4),
        "E0": Key("float", 1.0, "nonneg"),
        "w0": Key("float", 8.0, "pos"),
        "omega": Key("float", 1.0, "pos"),
        "center": Key("vec2", [0.0, 0.0]),
        "envelope": Key("str", "cw", choices=("cw", "gaussian")),
        "t0": Key("float", 0.0),
        "tau": Key("float", 1.0, "pos"),
    },
    "grid": {
        "nx": Key("int", 64, "ge4"),
        "ny": Key("int", 64, "ge4"),
        "dx": Key("float", 1.0, "pos"),
    },
    "tdgl": {
        "dt": Key("float", 0.05, "pos"),
        "steps": Key("int", 1000, "nonneg"),
        "noise_amp": Key("float", 1e-3, "nonneg"),
        "diag_every": Key("int", 0, "nonneg"),
        "cjj_every": Key("int", 0, "nonneg"),
        "phase_only": Key("bool", False),
    },
    "lattice": {
        "nx": Key("int", 64, "ge4"),
        "ny": Key("int", 64, "ge4"),
        "a0": Key("float", 1.0, "pos"),
        "init": Key("str", "uniform", choices=("uniform", "skyrmion")),
        "mz": Key("int", -1, "sign"),
        "radius": Key("float", 5.0, "pos"),
        "width": Key("float", 2.0, "pos"),
    },
    "llg": {
        "J_ex": Key("float", 1.0),
        "K_z": Key("float", 0.1, "nonneg"),
        "gamma": Key("float", 1.0, "pos"),
        "alpha": Key("float", 0.1, "unit"),
        "dt": Key("float", 0.01, "pos"),
        "steps": Key("int", 1000, "nonneg"),
        "zeeman_scale": Key("float", 1.0),
        "noise_amp": Key("float", 0.0, "nonneg"),
        "charge_every": Key("int", 100, "nonneg"),
        "qmap_every": Key("int", 0, "nonneg"),
    },
    "rydberg": {
        "host": Key("str", "hydrogen", choices=("hydrogen", "si_p", "dielectric")),
        "eps": Key("float", 11.7, "pos"),
        "mass_ratio": Key("float", 0.2, "pos"),
        "n_min": Key("int", 10, "ge1"),
        "n_max": Key("int", 40, "ge1"),
        "frequency_hz": Key("float", 1e12, "pos"),
        "intensity": Key("float", 1e12, "pos"),
        "helicity": Key("int", 1, "sign"),
        "cutoff": Key("int", 0, "nonneg"),
        "delta": Key("float", 1e-6, "pos"),
    },
    "hall": {
        "sigma_L": Key("vec2", [0.0, 1.0]),
        "sigma_H": Key("vec2", [1.0, 0.0]),
        "rho0": Key("float", 1e16, "pos"),
        "omega": Key("float", 2 * math.pi * 1e12, "pos"),
        "E_amp": Key("float", 1e5, "nonneg"),
    },
    "dipolar": {
        "m_e": Key("float", 1.0, "pos"),
        "m_h": Key("float", 2.0, "pos"),
        "g_e": Key("float", 1.0),
        "g_h": Key("float", 1.0),
        "omega": Key("float", 0.5, "pos"),
        "omega0": Key("float", 1.0, "nonneg"),
        "damping": Key("float", 0.1, "nonneg"),
        "n0": Key("float", 1.0, "nonneg"),
        "E_amp": Key("float", 1.0, "nonneg"),
    },
    "acoustic": {
        "geometry": Key("str", "ripple", choices=("ripple", "triaxial")),
        "nx": Key("int", 32, "ge4"),
        "dx": Key("float", 2 * math.pi / 32, "pos"),
        "amplitude": Key("float", 0.3, "nonneg"),
        "ripple": Key("float", 0.5, "nonneg"),
        "k": Key("float", 0.0, "nonneg"),
        "modulation": Key("float", 0.5),
        "triaxial_c": Key("float", 0.01),
        "samples_per_period": Key("int", 32, "ge1"),
        "periods": Key("int", 1, "ge1"),
        "g": Key("float", 1.0),
        "conductance_scale": Key("float", 1.0, "pos"),
        "valleys": Key("int", 1, "ge1"),
        "omegas": Key("floats", [1.0, 2.0, 4.0, 8.0]),
    },
}

SCENARIO_BLOCKS = {
    "beam-render": ("beam", "grid"),
    "sc-run": ("beam", "grid", "tdgl"),
    "magnet-run": ("beam", "lattice", "llg"),
    "ife-rydberg": ("rydberg",),
    "ife-hall": ("hall",),
    "ife-dipolar": ("dipolar",),
    "acoustic-run": ("acoustic",),
}


@dataclass
class RunConfig:
    scenario: str
    seed: int = 0
    output_dir: str = "out"
    snapshot_every: int = 0
    blocks: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> dict:
        return self.blocks[name]


def _coerce(path: str, key: Key, v):
    k = key.kind
    if k == "int":
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(path, f"expected an integer, got {v!r}")
    elif k == "float":
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(path, f"expected a number, got {v!r}")
        v = float(v)
        if not math.isfinite(v):
            raise ValidationError(path, "must be finite")
    elif k == "bool":
        if not isinstance(v, bool):
            raise ValidationError(path, f"expected true or false, got {v!r}")
    elif k == "str":
        if not isinstance(v, str):
            raise ValidationError(path, f"expected a string, got {v!r}")
    elif k in ("vec2", "vec3", "floats"):
        n = {"vec2": 2, "vec3": 3}.get(k)
        if not isinstance(v, list) or (n is not None and len(v) != n) or not v:
            want = f"a list of {n} numbers" if n else "a non-empty list of numbers"
            raise ValidationError(path, f"expected {want}")
        out = []
        for i, x in enumerate(v):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise ValidationError(f"{path}[{i}]", f"expected a finite number, got {x!r}")
            out.append(float(x))
        v = out
    if key.choices is not None and v not in key.choices:
        raise ValidationError(path, f"must be one of {', '.join(map(str, key.choices))}")
    msg = _rules(key.rule, v) if k in ("int", "float") else None
    if msg:
        raise ValidationError(path, msg)
    return v


def _fill(prefix: str, schema: dict, given: dict) -> dict:
    for name in given:
        if name not in schema:
            raise ValidationError(f"{prefix}{name}", "unknown key")
    out = {}
    for name, key in schema.items():
        path = f"{prefix}{name}"
        if name in given:
            out[name] = _coerce(path, key, given[name])
        elif key.default is REQUIRED:
            raise ValidationError(path, "missing required key")
        else:
            out[name] = copy.deepcopy(key.default)
    return out


def _cross_checks(cfg: RunConfig):
    b = cfg.blocks
    if "tdgl" in b:
        bound = b["grid"]["dx"] ** 2 / 4
        if b["tdgl"]["dt"] > bound:
            raise ValidationError("tdgl.dt", f"exceeds the explicit stability bound dx^2/4 = {bound:g}")
    if "llg" in b:
        p = b["llg"]
        # exchange and anisotropy alone already bound |H_eff|; the drive adds more at run time
        h = 4 * abs(p["J_ex"]) + p["K_z"]
        if p["dt"] * p["gamma"] * h >= 0.1:
            raise ValidationError("llg.dt", f"dt*gamma*(4|J|+K) = {p['dt'] * p['gamma'] * h:g} breaks the accuracy bound 0.1")
    if "beam" in b and b["beam"]["envelope"] == "gaussian" and b["beam"]["omega"] * b["beam"]["tau"] < 5:
        raise ValidationError("beam.tau", "omega*tau must be >= 5 so the pulse carries no dc area")
    if "rydberg" in b:
        r = b["rydberg"]
        if r["n_max"] < r["n_min"]:
            raise ValidationError("rydberg.n_max", "must be >= n_min")
        if r["cutoff"] and r["cutoff"] <= r["n_max"]:
            raise ValidationError("rydberg.cutoff", "must exceed n_max (0 picks the default)")
    if "acoustic" in b:
        a = b["acoustic"]
        if a["valleys"] not in (1, 2):
            raise ValidationError("acoustic.valleys", "must be 1 or 2")
        if a["samples_per_period"] < 8:
            raise ValidationError("acoustic.samples_per_period", "must be >= 8")
        if any(w <= 0 for w in a["omegas"]):
            raise ValidationError("acoustic.omegas", "frequencies must be > 0")


def from_dict(doc: dict) -> RunConfig:
    """Validate an already parsed document."""
    top = {k: v for k, v in doc.items() if not isinstance(v, dict)}
    tables = {k: v for k, v in doc.items() if isinstance(v, dict)}
    vals = _fill("", TOP, top)
    scen = vals["scenario"]
    wanted = SCENARIO_BLOCKS[scen]
    for name in tables:
        if name not in BLOCKS:
            raise ValidationError(name, "unknown table")
        if name not in wanted:
            raise ValidationError(name, f"table not used by scenario {scen}")
    blocks = {name: _fill(f"{name}.", BLOCKS[name], tables.get(name, {})) for name in wanted}
    cfg = RunConfig(scen, vals["seed"], vals["output_dir"], vals["snapshot_every"], blocks)
    _cross_checks(cfg)
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        msg = getattr(exc, "msg", str(exc))
        raise ParseError(msg, getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None
    return from_dict(doc)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
