"""Strict YAML job configuration.

One document drives a whole run: a single ``units`` declaration (SI base
units throughout: meters, pascals, newtons per meter), exactly one mode
block, an optional sampling extent and output options.  Unknown keys are
hard errors, missing required fields name the field and the mode, and
parsing a serialized configuration reproduces it exactly (all defaults are
resolved and echoed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import yaml

from .elasticity import Layer, RibbonSection, SurfaceStressSpec, laminate_prestretch_to_residual
from .geometry import PrincipalCurvatureState
from .surface import RibbonExtent
from .sweep import GridAxis, SweepSpec

__all__ = ["ConfigError", "JobConfig", "parse_config", "serialize_config", "load_config"]

MODES = ("geometric", "single_surface", "two_surface", "laminate", "sweep")

_EXTENT_DEFAULTS = {"length": 10.0, "width": 1.0, "samples_s": 120, "samples_t": 12}
_OUTPUT_DEFAULTS = {"tolerance": 1e-9, "residual_tolerance": 1e-8}


class ConfigError(ValueError):
    pass


def _require_map(value, where):
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping")
    return value


def _check_keys(mapping, allowed, where):
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")


def _number(mapping, key, where, mode, default=None):
    if key not in mapping:
        if default is not None:
            return float(default)
        raise ConfigError(f"mode {mode!r} requires {where}.{key}")
    v = mapping[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{where}.{key} must be finite")
    return v


def _integer(mapping, key, where, mode, default=None):
    if key not in mapping:
        if default is not None:
            return int(default)
        raise ConfigError(f"mode {mode!r} requires {where}.{key}")
    v = mapping[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key} must be an integer")
    return v


def _stress_block(mapping, name, mode):
    block = _require_map(mapping, f"loads.{name}")
    _check_keys(block, ("f1", "f2", "orientation"), f"loads.{name}")
    return {
        "f1": _number(block, "f1", f"loads.{name}", mode),
        "f2": _number(block, "f2", f"loads.{name}", mode),
        "orientation": _number(block, "orientation", f"loads.{name}", mode, default=0.0),
    }


@dataclass(frozen=True)
class JobConfig:
    """Fully resolved configuration; ``data`` is the canonical echo."""

    data: dict

    @property
    def mode(self) -> str:
        return self.data["mode"]

    @property
    def tolerance(self) -> float:
        return self.data["output"]["tolerance"]

    @property
    def residual_tolerance(self) -> float:
        return self.data["output"]["residual_tolerance"]

    def extent(self) -> RibbonExtent:
        e = self.data["extent"]
        return RibbonExtent(e["length"], e["width"], e["samples_s"], e["samples_t"])

    def state(self) -> PrincipalCurvatureState:
        if self.mode != "geometric":
            raise ConfigError(f"mode {self.mode!r} has no geometry block")
        g = self.data["geometry"]
        return PrincipalCurvatureState(g["kappa1"], g["kappa2"], g["phi"])

    def section(self) -> RibbonSection:
        if self.mode in ("single_surface", "two_surface"):
            s = self.data["section"]
            return RibbonSection.homogeneous(
                s["thickness"], s["youngs_modulus"], s["poisson_ratio"]
            )
        if self.mode == "laminate":
            layers = []
            prestretch = []
            for spec in self.data["section"]["layers"]:
                layers.append(
                    Layer(spec["thickness"], spec["youngs_modulus"], spec["poisson_ratio"])
                )
                prestretch.append(spec.get("prestretch"))
            layers = laminate_prestretch_to_residual(layers, prestretch)
            return RibbonSection.laminate(layers)
        raise ConfigError(f"mode {self.mode!r} has no section block")

    def loads(self):
        """(f_plus, f_minus); either may be None."""
        blocks = self.data.get("loads") or {}
        f_minus = blocks.get("f_minus")
        f_plus = blocks.get("f_plus")
        to_spec = lambda b: SurfaceStressSpec(b["f1"], b["f2"], b["orientation"])
        return (
            to_spec(f_plus) if f_plus else None,
            to_spec(f_minus) if f_minus else None,
        )

    def sweep_spec(self) -> SweepSpec:
        if self.mode != "sweep":
            raise ConfigError(f"mode {self.mode!r} has no sweep block")
        s = self.data["sweep"]
        axes = tuple(GridAxis(a["name"], a["min"], a["max"], a["count"]) for a in s["axes"])
        return SweepSpec(axes=axes, fixed=dict(s["fixed"]), mode=s["space"])


def parse_config(text: str) -> JobConfig:
    """Parse and validate a YAML job document into a resolved JobConfig."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}") from exc
    raw = _require_map(raw, "configuration")
    _check_keys(raw, ("units", "mode", "geometry", "section", "loads", "extent", "output", "sweep"), "configuration")

    units = raw.get("units")
    if units is None:
        raise ConfigError("configuration requires a units declaration (units: SI)")
    if units != "SI":
        raise ConfigError(f"unsupported unit system {units!r}; only SI is supported")

    mode = raw.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {mode!r}")

    blocks_present = {k for k in ("geometry", "section", "loads", "sweep") if k in raw}
    allowed_blocks = {
        "geometric": {"geometry"},
        "single_surface": {"section", "loads"},
        "two_surface": {"section", "loads"},
        "laminate": {"section", "loads"},
        "sweep": {"sweep"},
    }[mode]
    stray = sorted(blocks_present - allowed_blocks)
    if stray:
        raise ConfigError(
            f"mode {mode!r} conflicts with block(s): {', '.join(stray)}"
        )

    out: dict = {"units": "SI", "mode": mode}

    if mode == "geometric":
        g = _require_map(raw.get("geometry"), "geometry") if "geometry" in raw else None
        if g is None:
            raise ConfigError("mode 'geometric' requires a geometry block")
        _check_keys(g, ("kappa1", "kappa2", "phi"), "geometry")
        out["geometry"] = {
            "kappa1": _number(g, "kappa1", "geometry", mode),
            "kappa2": _number(g, "kappa2", "geometry", mode),
            "phi": _number(g, "phi", "geometry", mode),
        }
    elif mode in ("single_surface", "two_surface"):
        s = raw.get("section")
        if s is None:
            raise ConfigError(f"mode {mode!r} requires a section block")
        s = _require_map(s, "section")
        _check_keys(s, ("thickness", "youngs_modulus", "poisson_ratio"), "section")
        out["section"] = {
            "thickness": _number(s, "thickness", "section", mode),
            "youngs_modulus": _number(s, "youngs_modulus", "section", mode),
            "poisson_ratio": _number(s, "poisson_ratio", "section", mode),
        }
        loads = raw.get("loads")
        if loads is None:
            raise ConfigError(f"mode {mode!r} requires a loads block")
        loads = _require_map(loads, "loads")
        allowed = ("f_minus", "f_plus") if mode == "two_surface" else ("f_minus",)
        _check_keys(loads, allowed, "loads")
        if "f_minus" not in loads:
            raise ConfigError(f"mode {mode!r} requires loads.f_minus")
        out_loads = {"f_minus": _stress_block(loads["f_minus"], "f_minus", mode)}
        if mode == "two_surface":
            if "f_plus" not in loads:
                raise ConfigError("mode 'two_surface' requires loads.f_plus")
            out_loads["f_plus"] = _stress_block(loads["f_plus"], "f_plus", mode)
        out["loads"] = out_loads
    elif mode == "laminate":
        s = raw.get("section")
        if s is None:
            raise ConfigError("mode 'laminate' requires a section block")
        s = _require_map(s, "section")
        _check_keys(s, ("layers",), "section")
        layer_specs = s.get("layers")
        if not isinstance(layer_specs, list) or not layer_specs:
            raise ConfigError("section.layers must be a non-empty list")
        out_layers = []
        for i, spec in enumerate(layer_specs):
            where = f"section.layers[{i}]"
            spec = _require_map(spec, where)
            _check_keys(spec, ("thickness", "youngs_modulus", "poisson_ratio", "prestretch"), where)
            entry = {
                "thickness": _number(spec, "thickness", where, mode),
                "youngs_modulus": _number(spec, "youngs_modulus", where, mode),
                "poisson_ratio": _number(spec, "poisson_ratio", where, mode),
            }
            if "prestretch" in spec:
                pre = spec["prestretch"]
                if (
                    not isinstance(pre, list)
                    or len(pre) != 3
                    or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pre)
                ):
                    raise ConfigError(f"{where}.prestretch must be [exx, eyy, exy]")
                entry["prestretch"] = [float(v) for v in pre]
            out_layers.append(entry)
        out["section"] = {"layers": out_layers}
        if "loads" in raw:
            loads = _require_map(raw["loads"], "loads")
            _check_keys(loads, ("f_minus", "f_plus"), "loads")
            out_loads = {}
            for name in ("f_minus", "f_plus"):
                if name in loads:
                    out_loads[name] = _stress_block(loads[name], name, mode)
            if out_loads:
                out["loads"] = out_loads
    elif mode == "sweep":
        s = raw.get("sweep")
        if s is None:
            raise ConfigError("mode 'sweep' requires a sweep block")
        s = _require_map(s, "sweep")
        _check_keys(s, ("space", "axes", "fixed"), "sweep")
        space = s.get("space")
        if space not in ("geometric", "mechanical"):
            raise ConfigError("sweep.space must be 'geometric' or 'mechanical'")
        axes_raw = s.get("axes")
        if not isinstance(axes_raw, list) or not axes_raw:
            raise ConfigError("sweep.axes must be a non-empty list")
        axes = []
        for i, ax in enumerate(axes_raw):
            where = f"sweep.axes[{i}]"
            ax = _require_map(ax, where)
            _check_keys(ax, ("name", "min", "max", "count"), where)
            if "name" not in ax or not isinstance(ax["name"], str):
                raise ConfigError(f"{where} requires a string name")
            axes.append(
                {
                    "name": ax["name"],
                    "min": _number(ax, "min", where, mode),
                    "max": _number(ax, "max", where, mode),
                    "count": _integer(ax, "count", where, mode),
                }
            )
        fixed_raw = s.get("fixed", {})
        fixed = {}
        for k, v in sorted(_require_map(fixed_raw, "sweep.fixed").items()):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"sweep.fixed.{k} must be a number")
            fixed[k] = float(v)
        out["sweep"] = {"space": space, "axes": axes, "fixed": fixed}
        # validate axis/fixed names eagerly so errors surface at parse time
        SweepSpec(
            axes=tuple(GridAxis(**a) for a in axes), fixed=fixed, mode=space
        )

    extent = _require_map(raw.get("extent", {}), "extent")
    _check_keys(extent, tuple(_EXTENT_DEFAULTS), "extent")
    out["extent"] = {
        "length": _number(extent, "length", "extent", mode, _EXTENT_DEFAULTS["length"]),
        "width": _number(extent, "width", "extent", mode, _EXTENT_DEFAULTS["width"]),
        "samples_s": _integer(extent, "samples_s", "extent", mode, _EXTENT_DEFAULTS["samples_s"]),
        "samples_t": _integer(extent, "samples_t", "extent", mode, _EXTENT_DEFAULTS["samples_t"]),
    }

    output = _require_map(raw.get("output", {}), "output")
    _check_keys(output, tuple(_OUTPUT_DEFAULTS), "output")
    out["output"] = {
        "tolerance": _number(output, "tolerance", "output", mode, _OUTPUT_DEFAULTS["tolerance"]),
        "residual_tolerance": _number(
            output, "residual_tolerance", "output", mode, _OUTPUT_DEFAULTS["residual_tolerance"]
        ),
    }

    cfg = JobConfig(out)
    # construct the typed objects once so invalid values fail at parse time
    cfg.extent()
    if mode == "geometric":
        cfg.state()
    elif mode != "sweep":
        cfg.section()
        cfg.loads()
    else:
        cfg.sweep_spec()
    return cfg


def serialize_config(cfg: JobConfig) -> str:
    """Canonical YAML echo of a resolved configuration; feeding it back to
    parse_config reproduces the configuration exactly."""
    return yaml.safe_dump(cfg.data, sort_keys=True, default_flow_style=False)


def load_config(path) -> JobConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    return parse_config(text)
