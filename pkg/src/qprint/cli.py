"""Command-line entry point.

    qprint <scenario> --config FILE [--out DIR] [--seed N] [--threads N]
    qprint <scenario> --preset NAME [...]
    qprint run --config FILE [...]            scenario taken from the file
    qprint validate --config FILE
    qprint render SNAPSHOT --style STYLE [--scale K] [--out FILE]
    qprint presets

Exit status 0 on success, 2 for configuration errors, 3 for numerical
failures, 1 for anything else.  Errors are also written to stderr as one
JSON object.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from importlib import resources

from .config import SCENARIOS, parse_config
from .errors import ConfigError, FormatError, NumericalError, ParseError, QPrintError, ValidationError
from .render import STYLES, render_file

EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def preset_names() -> list[str]:
    root = resources.files("qprint") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def preset_text(name: str) -> str:
    path = resources.files("qprint") / "presets" / f"{name}.toml"
    if not path.is_file():
        raise ValidationError("--preset", f"no preset named {name!r} (try: {', '.join(preset_names())})")
    return path.read_text(encoding="utf-8")


def _error_json(exc: BaseException) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        out.update(line=exc.line, column=exc.column)
    if isinstance(exc, ValidationError):
        out.update(path=exc.path)
    return out


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get("QPRINT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValidationError("QPRINT_THREADS", f"expected an integer, got {env!r}") from None
        if n < 1:
            raise ValidationError("QPRINT_THREADS", "must be >= 1")
        return n
    return 1


def _load(args):
    if (args.config is None) == (args.preset is None):
        raise ValidationError("--config", "give exactly one of --config or --preset")
    if args.preset is not None:
        return preset_text(args.preset)
    with open(args.config, encoding="utf-8") as fh:
        return fh.read()


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qprint", description="Structured-light printing simulators.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SCENARIOS + ("run",):
        sp = sub.add_parser(name, help="run the scenario named in the config" if name == "run" else f"run {name}")
        sp.add_argument("--config")
        sp.add_argument("--preset")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int)
    sp = sub.add_parser("validate", help="parse and validate a config without running it")
    sp.add_argument("--config")
    sp.add_argument("--preset")
    sp = sub.add_parser("render", help="render a snapshot to a PPM image")
    sp.add_argument("snapshot")
    sp.add_argument("--style", default="auto", choices=STYLES)
    sp.add_argument("--scale", type=int, default=1)
    sp.add_argument("--out")
    sub.add_parser("presets", help="list shipped presets")
    return ap


def _dispatch(args) -> int:
    if args.command == "presets":
        for name in preset_names():
            cfg = parse_config(preset_text(name))
            print(f"{name}\t{cfg.scenario}")
        return EXIT_OK
    if args.command == "render":
        out = args.out or os.path.splitext(args.snapshot)[0] + ".ppm"
        if args.scale < 1:
            raise ValidationError("--scale", "must be >= 1")
        render_file(args.snapshot, out, args.style, args.scale)
        print(out)
        return EXIT_OK
    text = _load(args)
    cfg = parse_config(text)
    if args.command == "validate":
        print(json.dumps({"ok": True, "scenario": cfg.scenario}))
        return EXIT_OK
    if args.command != "run" and args.command != cfg.scenario:
        raise ValidationError("scenario", f"config is for {cfg.scenario}, not {args.command}")
    if args.seed is not None:
        if args.seed < 0:
            raise ValidationError("--seed", "must be >= 0")
        cfg = dataclasses.replace(cfg, seed=args.seed)
    threads = _threads(args.threads)
    if threads < 1:
        raise ValidationError("--threads", "must be >= 1")
    from .scenarios import run

    manifest = run(cfg, args.out, threads, text)
    print(json.dumps(manifest["summary"], sort_keys=True, default=float))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        code = EXIT_CONFIG
        err = exc
    except NumericalError as exc:
        code = EXIT_NUMERICAL
        err = exc
    except (FormatError, QPrintError, OSError) as exc:
        code = EXIT_OTHER
        err = exc
    print(json.dumps(_error_json(err), default=str), file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
