"""INI configuration files for single evolutions and parameter sweeps.

Flat key-value sections, one per control block:

    [background] mu, nu
    [wave]       k1, k2, k3
    [window]     t_a, t, t_tilde_a
    [method]     name, dyson_order
    [ode]        rel_tol, abs_tol, max_steps, start_offset_s0
    [quad]       rel_tol, max_subdivisions
    [series]     rel_tol, max_terms, asymptotic_switch
    [sweep]      mu, nu, k1, k2, k3, t_a, t (comma lists), methods, t_tilde_a

Missing sections/keys fall back to built-in defaults; every run embeds
the fully resolved configuration in its report so outputs are
reproducible from the report alone.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from ..background import BackgroundParams, TimeWindow, WaveVector
from ..closedform import QuadControl
from ..errors import ConfigError, DomainError
from ..propagation import OdeControl
from ..specfun import SeriesControl
from .requests import METHODS, EvolutionRequest

SCHEMA_VERSION = 1


@dataclass
class SweepConfig:
    mu: list[float]
    nu: list[float]
    k1: list[float]
    k2: list[float]
    k3: list[float]
    t_a: list[float]
    t: list[float]
    t_tilde_a: float = 0.0
    methods: list[str] = field(default_factory=lambda: ["ode"])
    ode: OdeControl = field(default_factory=OdeControl)
    quad: QuadControl = field(default_factory=QuadControl)
    series: SeriesControl = field(default_factory=SeriesControl)


def _parser(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is not None:
        read = cp.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
    return cp


def _get(cp, section, key, conv, default):
    if not cp.has_section(section) or not cp.has_option(section, key):
        return default
    raw = cp.get(section, key)
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _float_list(raw: str) -> list[float]:
    vals = [v.strip() for v in raw.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty list")
    return [float(v) for v in vals]


def _str_list(raw: str) -> list[str]:
    return [v.strip() for v in raw.split(",") if v.strip()]


def _controls(cp):
    ode = OdeControl(
        rel_tol=_get(cp, "ode", "rel_tol", float, 1e-10),
        abs_tol=_get(cp, "ode", "abs_tol", float, 1e-12),
        max_steps=_get(cp, "ode", "max_steps", int, 1_000_000),
        start_offset_s0=_get(cp, "ode", "start_offset_s0", float, None),
    )
    quad = QuadControl(
        rel_tol=_get(cp, "quad", "rel_tol", float, 1e-10),
        max_subdivisions=_get(cp, "quad", "max_subdivisions", int, 4096),
    )
    series = SeriesControl(
        rel_tol=_get(cp, "series", "rel_tol", float, 1e-14),
        max_terms=_get(cp, "series", "max_terms", int, 500),
        asymptotic_switch=_get(cp, "series", "asymptotic_switch", float, 25.0),
    )
    return ode, quad, series


def load_request(path: str | None, method_override: str | None = None) -> EvolutionRequest:
    cp = _parser(path)
    try:
        bg = BackgroundParams(
            mu=_get(cp, "background", "mu", float, 0.5),
            nu=_get(cp, "background", "nu", float, 0.5),
        )
        wave = WaveVector(
            k1=_get(cp, "wave", "k1", float, 1.0),
            k2=_get(cp, "wave", "k2", float, 0.0),
            k3=_get(cp, "wave", "k3", float, 0.0),
        )
        window = TimeWindow(
            t_a=_get(cp, "window", "t_a", float, 0.0),
            t=_get(cp, "window", "t", float, 1.0),
            t_tilde_a=_get(cp, "window", "t_tilde_a", float, 0.0),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    method = method_override or _get(cp, "method", "name", str, "ode")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    ode, quad, series = _controls(cp)
    return EvolutionRequest(
        background=bg, wave=wave, window=window, method=method,
        dyson_order=_get(cp, "method", "dyson_order", int, 2),
        ode=ode, quad=quad, series=series,
    )


def load_sweep(path: str | None) -> SweepConfig:
    cp = _parser(path)
    if not cp.has_section("sweep"):
        raise ConfigError("sweep requires a [sweep] section")
    ode, quad, series = _controls(cp)
    cfg = SweepConfig(
        mu=_get(cp, "sweep", "mu", _float_list, [0.5]),
        nu=_get(cp, "sweep", "nu", _float_list, [0.5]),
        k1=_get(cp, "sweep", "k1", _float_list, [1.0]),
        k2=_get(cp, "sweep", "k2", _float_list, [0.0]),
        k3=_get(cp, "sweep", "k3", _float_list, [0.0]),
        t_a=_get(cp, "sweep", "t_a", _float_list, [0.0]),
        t=_get(cp, "sweep", "t", _float_list, [1.0]),
        t_tilde_a=_get(cp, "sweep", "t_tilde_a", float, 0.0),
        methods=_get(cp, "sweep", "methods", _str_list, ["ode"]),
        ode=ode, quad=quad, series=series,
    )
    bad = [m for m in cfg.methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown sweep methods {bad}; choose from {METHODS}")
    return cfg


def request_to_dict(req: EvolutionRequest) -> dict:
    """Fully resolved request for report headers."""
    return {
        "schema": SCHEMA_VERSION,
        "background": {"mu": req.background.mu, "nu": req.background.nu,
                       "delta": req.background.delta},
        "wave": {"k1": req.wave.k1, "k2": req.wave.k2, "k3": req.wave.k3},
        "window": {"t_a": req.window.t_a, "t": req.window.t,
                   "t_tilde_a": req.window.t_tilde_a},
        "method": req.method,
        "dyson_order": req.dyson_order,
        "ode": {"rel_tol": req.ode.rel_tol, "abs_tol": req.ode.abs_tol,
                "max_steps": req.ode.max_steps,
                "start_offset_s0": req.ode.start_offset_s0},
        "quad": {"rel_tol": req.quad.rel_tol,
                 "max_subdivisions": req.quad.max_subdivisions},
        "series": {"rel_tol": req.series.rel_tol, "max_terms": req.series.max_terms,
                   "asymptotic_switch": req.series.asymptotic_switch},
    }


def sweep_to_dict(cfg: SweepConfig) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "grids": {"mu": cfg.mu, "nu": cfg.nu, "k1": cfg.k1, "k2": cfg.k2,
                  "k3": cfg.k3, "t_a": cfg.t_a, "t": cfg.t},
        "t_tilde_a": cfg.t_tilde_a,
        "methods": cfg.methods,
        "ode": {"rel_tol": cfg.ode.rel_tol, "abs_tol": cfg.ode.abs_tol,
                "max_steps": cfg.ode.max_steps,
                "start_offset_s0": cfg.ode.start_offset_s0},
        "quad": {"rel_tol": cfg.quad.rel_tol,
                 "max_subdivisions": cfg.quad.max_subdivisions},
        "series": {"rel_tol": cfg.series.rel_tol, "max_terms": cfg.series.max_terms,
                   "asymptotic_switch": cfg.series.asymptotic_switch},
    }
