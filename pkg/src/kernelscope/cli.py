"""Command-line front end.

    kernelscope <command> --config <path> [--out <dir>]

Commands: scan, components, kernel, converge, metric, probe.  The config is
one JSON object parsed strictly (unknown keys are rejected); every default
lives in the schema here, so a fully explicit config reproduces a run
bit-for-bit.  Exit status: 0 success, 2 configuration error, 3 runtime
error.  Outputs are written atomically: files appear under a ``.partial``
suffix first and are renamed only after every file of the run is on disk, so
a failed run leaves no committed outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

from .errors import KernelscopeError
from .families import FAMILY_IDS, INF
from .metrics import chi_dyn
from .orbits import OrbitBudget
from .scanner import (convergence_report, hyperbolic_component,
                      openness_probe, scan)
from .setgeom import (GridMask, GridSpec, disk_mask, kernel_estimate,
                      render_pbm)

COMMANDS = ("scan", "components", "kernel", "converge", "metric", "probe")


class ConfigError(KernelscopeError):
    """Invalid run configuration."""


# -- strict schema -----------------------------------------------------------

_BUDGET_DEFAULTS = {
    "max_iterations": 2000,
    "escape_radius": 1e10,
    "cycle_tolerance": 1e-9,
    "attracting_margin": 1e-6,
    "max_period": 64,
}

_GRID_KEYS = ("origin", "width", "height", "nx", "ny")

# required / optional(with default) top-level keys per command
_SCHEMAS: dict[str, tuple[tuple[str, ...], dict[str, Any]]] = {
    "scan": (("family", "n", "grid"), {"budget": None, "out_dir": None}),
    "components": (("family", "n", "grid", "seed"),
                   {"budget": None, "out_dir": None}),
    "kernel": (("family", "n_list", "grid", "seed"),
               {"budget": None, "tail_length": 3, "out_dir": None}),
    "converge": (("family", "n_list", "grid", "seed"),
                 {"budget": None, "threshold": 0.05, "tail_length": 3,
                  "out_dir": None}),
    "metric": (("f", "g"), {"K": 6, "out_dir": None}),
    "probe": (("family", "n", "grid", "samples", "delta",
               "region_center", "region_radius"),
              {"budget": None, "rng_seed": 0, "out_dir": None}),
}


def _fail(msg: str) -> "ConfigError":
    return ConfigError(msg)


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise _fail(f"{where}: expected a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise _fail(f"{where}: unknown keys {sorted(unknown)}")


def _parse_number(v, where: str, positive: bool = False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _fail(f"{where}: expected a number, got {v!r}")
    if positive and not v > 0:
        raise _fail(f"{where}: must be positive, got {v!r}")
    return float(v)


def _parse_int(v, where: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise _fail(f"{where}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise _fail(f"{where}: must be >= {minimum}, got {v!r}")
    return v


def _parse_complex(v, where: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)):
        raise _fail(f"{where}: expected [re, im]")
    return complex(float(v[0]), float(v[1]))


def _parse_index(v, where: str):
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise _fail(f"{where}: expected a positive integer or \"inf\"")
    if v < 1:
        raise _fail(f"{where}: must be >= 1")
    return v


def _parse_family(v, where: str) -> str:
    if v not in FAMILY_IDS:
        raise _fail(f"{where}: unknown family {v!r}; known: {list(FAMILY_IDS)}")
    return v


def _parse_grid(obj, where: str) -> GridSpec:
    _require_keys(obj, set(_GRID_KEYS), where)
    for key in _GRID_KEYS:
        if key not in obj:
            raise _fail(f"{where}: missing key {key!r}")
    try:
        return GridSpec(
            origin=_parse_complex(obj["origin"], f"{where}.origin"),
            width=_parse_number(obj["width"], f"{where}.width", positive=True),
            height=_parse_number(obj["height"], f"{where}.height", positive=True),
            nx=_parse_int(obj["nx"], f"{where}.nx", minimum=1),
            ny=_parse_int(obj["ny"], f"{where}.ny", minimum=1),
        )
    except ValueError as exc:
        raise _fail(f"{where}: {exc}") from None


def _parse_budget(obj, where: str) -> OrbitBudget:
    if obj is None:
        return OrbitBudget()
    _require_keys(obj, set(_BUDGET_DEFAULTS), where)
    merged = dict(_BUDGET_DEFAULTS)
    merged.update(obj)
    try:
        return OrbitBudget(
            max_iterations=_parse_int(merged["max_iterations"],
                                      f"{where}.max_iterations", minimum=1),
            escape_radius=_parse_number(merged["escape_radius"],
                                        f"{where}.escape_radius", positive=True),
            cycle_tolerance=_parse_number(merged["cycle_tolerance"],
                                          f"{where}.cycle_tolerance", positive=True),
            attracting_margin=_parse_number(merged["attracting_margin"],
                                            f"{where}.attracting_margin", positive=True),
            max_period=_parse_int(merged["max_period"],
                                  f"{where}.max_period", minimum=1),
        )
    except ValueError as exc:
        raise _fail(f"{where}: {exc}") from None


def _parse_member(obj, where: str) -> tuple:
    _require_keys(obj, {"family", "n", "lambda"}, where)
    for key in ("family", "n", "lambda"):
        if key not in obj:
            raise _fail(f"{where}: missing key {key!r}")
    return (_parse_family(obj["family"], f"{where}.family"),
            _parse_index(obj["n"], f"{where}.n"),
            _parse_complex(obj["lambda"], f"{where}.lambda"))


@dataclass
class RunConfig:
    """Parsed, normalized configuration of one CLI run."""

    command: str
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Fully explicit config dict; parsing it again yields an equal RunConfig."""
        out: dict[str, Any] = {"command": self.command}
        v = self.values
        for key, val in v.items():
            if isinstance(val, GridSpec):
                out[key] = {"origin": [val.origin.real, val.origin.imag],
                            "width": val.width, "height": val.height,
                            "nx": val.nx, "ny": val.ny}
            elif isinstance(val, OrbitBudget):
                out[key] = {
                    "max_iterations": val.max_iterations,
                    "escape_radius": val.escape_radius,
                    "cycle_tolerance": val.cycle_tolerance,
                    "attracting_margin": val.attracting_margin,
                    "max_period": val.max_period,
                }
            elif isinstance(val, complex):
                out[key] = [val.real, val.imag]
            elif val == INF:
                out[key] = "inf"
            elif isinstance(val, tuple) and key in ("f", "g"):
                fam, n, lam = val
                out[key] = {"family": fam, "n": "inf" if n == INF else n,
                            "lambda": [lam.real, lam.imag]}
            elif isinstance(val, tuple):
                out[key] = list(val)
            else:
                out[key] = val
        return out


def parse_config(command: str, raw: dict) -> RunConfig:
    """Strictly parse a raw JSON object against the command's schema."""
    if command not in COMMANDS:
        raise _fail(f"unknown command {command!r}")
    required, optional = _SCHEMAS[command]
    allowed = set(required) | set(optional) | {"command"}
    _require_keys(raw, allowed, "config")
    if "command" in raw and raw["command"] != command:
        raise _fail(f"config names command {raw['command']!r} but {command!r} was invoked")
    for key in required:
        if key not in raw:
            raise _fail(f"config: missing required key {key!r}")

    values: dict[str, Any] = {}
    for key in (*required, *optional):
        present = key in raw
        val = raw.get(key, optional.get(key))
        if key == "family":
            values[key] = _parse_family(val, "family")
        elif key == "n":
            values[key] = _parse_index(val, "n")
        elif key == "n_list":
            if not isinstance(val, list) or not val:
                raise _fail("n_list: expected a nonempty array of integers")
            ns = [_parse_int(x, "n_list[]", minimum=1) for x in val]
            if ns != sorted(set(ns)):
                raise _fail("n_list: must be ascending and duplicate-free")
            values[key] = tuple(ns)
        elif key == "grid":
            values[key] = _parse_grid(val, "grid")
        elif key == "budget":
            values[key] = _parse_budget(val, "budget")
        elif key in ("seed", "region_center"):
            values[key] = _parse_complex(val, key)
        elif key in ("threshold", "delta", "region_radius"):
            values[key] = _parse_number(val, key)
        elif key in ("tail_length", "samples", "K", "rng_seed"):
            minimum = {"tail_length": 2, "samples": 1, "K": 1, "rng_seed": 0}[key]
            values[key] = _parse_int(val, key, minimum=minimum)
        elif key in ("f", "g"):
            values[key] = _parse_member(val, key)
        elif key == "out_dir":
            if present and val is not None and not isinstance(val, str):
                raise _fail("out_dir: expected a string path")
            values[key] = val
        else:  # pragma: no cover - schema and handlers must stay in sync
            raise _fail(f"unhandled config key {key!r}")
    return RunConfig(command=command, values=values)


# -- execution ----------------------------------------------------------------


def _json_text(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def run(config: RunConfig, out_dir: str | None = None) -> dict[str, str]:
    """Execute a parsed config; returns {filename: text} of committed outputs.

    Everything is computed before anything is written; the files then go to
    disk under a .partial suffix and are renamed once all of them exist.
    """
    v = config.values
    target = out_dir or v.get("out_dir") or "."
    outputs: dict[str, str] = {}
    t0 = time.time()

    if config.command == "scan":
        result = scan(v["family"], v["n"], v["grid"], v["budget"])
        counts = result.counts()
        print(f"scan: {v['family']} n={v['n']} {v['grid'].nx}x{v['grid'].ny} "
              f"-> {counts} [{time.time() - t0:.1f}s]")
        outputs["scan.pgm"] = result.render_pgm()
        outputs["scan.csv"] = result.render_csv()

    elif config.command == "components":
        result = scan(v["family"], v["n"], v["grid"], v["budget"])
        comp = hyperbolic_component(result, v["seed"])
        print(f"components: seed {v['seed']} -> component of {comp.count} cells "
              f"[{time.time() - t0:.1f}s]")
        outputs["component.pbm"] = render_pbm(comp)

    elif config.command == "kernel":
        comps = []
        for n in v["n_list"]:
            result = scan(v["family"], n, v["grid"], v["budget"])
            comps.append(hyperbolic_component(result, v["seed"]))
            print(f"kernel: n={n} component {comps[-1].count} cells")
        est = kernel_estimate(comps, v["seed"], v["tail_length"])
        print(f"kernel: has_kernel={est.has_kernel} cells={est.mask.count} "
              f"[{time.time() - t0:.1f}s]")
        outputs["kernel.pbm"] = render_pbm(est.mask)
        outputs["kernel.json"] = _json_text({
            "has_kernel": est.has_kernel,
            "cells": est.mask.count,
            "tail_length": est.tail_length,
            "source_count": est.source_count,
            "marked_point": [est.marked_point.real, est.marked_point.imag],
        })

    elif config.command == "converge":
        report = convergence_report(
            v["family"], v["n_list"], v["grid"], v["seed"], v["budget"],
            threshold=v["threshold"], tail_length=v["tail_length"])
        for e in report.entries:
            print(f"converge: n={e.n} cells={e.cells} hausdorff={e.hausdorff} "
                  f"symdiff={e.symdiff:.4f}")
        print(f"converge: verdict={report.dichotomy_verdict.value} "
              f"[{time.time() - t0:.1f}s]")
        outputs["converge_report.json"] = _json_text(report.to_json_dict())
        outputs["kernel.pbm"] = render_pbm(report.kernel.mask)
        outputs["limit_component.pbm"] = render_pbm(report.limit_component)
        for n, comp in zip(report.n_list, report.components):
            outputs[f"component_n{n}.pbm"] = render_pbm(comp)

    elif config.command == "metric":
        report = chi_dyn(v["f"], v["g"], v["K"])
        print(f"metric: chi_luc={report.chi_luc:.6f} "
              f"hausdorff_singular={report.hausdorff_singular:.6f} "
              f"chi_dyn={report.chi_dyn:.6f} [{time.time() - t0:.1f}s]")
        outputs["metric.json"] = _json_text(report.to_json_dict())

    elif config.command == "probe":
        result = scan(v["family"], v["n"], v["grid"], v["budget"])
        region = disk_mask(v["grid"], v["region_center"], v["region_radius"])
        region = GridMask(v["grid"], region.cells & result.hyperbolic_mask().cells)
        report = openness_probe(v["family"], v["n"], v["samples"], v["delta"],
                                v["budget"], region, rng_seed=v["rng_seed"])
        print(f"probe: tested={report.tested} violations={len(report.violations)} "
              f"unresolved={report.unresolved} [{time.time() - t0:.1f}s]")
        outputs["probe.json"] = _json_text(report.to_json_dict())

    else:  # pragma: no cover - parse_config rejects unknown commands
        raise ConfigError(f"unknown command {config.command!r}")

    os.makedirs(target, exist_ok=True)
    partials = []
    for name, text in outputs.items():
        path = os.path.join(target, name)
        with open(path + ".partial", "w", encoding="ascii") as fh:
            fh.write(text)
        partials.append(path)
    for path in partials:
        os.replace(path + ".partial", path)
    return outputs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kernelscope",
        description="parameter-plane scans, kernels and metrics for "
                    "entire-function families")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory override")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"kernelscope: config error: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(args.command, raw)
    except ConfigError as exc:
        print(f"kernelscope: config error: {exc}", file=sys.stderr)
        return 2
    try:
        run(config, out_dir=args.out)
    except KernelscopeError as exc:
        print(f"kernelscope: {args.command} failed: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"kernelscope: {args.command} failed: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
