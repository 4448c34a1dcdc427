"""Evolution requests: one record in, one propagator + diagnostics out.

Every public propagator route is reachable through ``evolve_request``
with method-specific preconditions checked up front, so the CLI, the
sweep engine and the validation suite share a single dispatch path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..background import BackgroundParams, TimeWindow, WaveVector
from ..closedform import QuadControl, asymptotic_propagator, closed_propagator, short_time_propagator
from ..errors import DomainError
from ..exact_models import RW_BACKGROUND, STIFF_BACKGROUND, rw_propagator, stiff_propagator
from ..propagation import OdeControl, Propagator, dyson_partial_K, evolve_ode
from ..specfun import SeriesControl

METHODS = ("ode", "closed", "dyson", "rw", "stiff", "short", "asymptotic")


@dataclass
class EvolutionRequest:
    background: BackgroundParams
    wave: WaveVector
    window: TimeWindow
    method: str = "ode"
    dyson_order: int = 2
    ode: OdeControl = field(default_factory=OdeControl)
    quad: QuadControl = field(default_factory=QuadControl)
    series: SeriesControl = field(default_factory=SeriesControl)


@dataclass
class EvolutionResult:
    propagator: Propagator
    diagnostics: dict[str, float]
    warnings: list[str]

    def to_jsonable(self) -> dict:
        k = self.propagator
        return {
            "k11": [k.k11.real, k.k11.imag],
            "k12": [k.k12.real, k.k12.imag],
            "k21": [k.k21.real, k.k21.imag],
            "k22": [k.k22.real, k.k22.imag],
            "diagnostics": dict(self.diagnostics),
            "warnings": list(self.warnings),
        }


def _require(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


def evolve_request(req: EvolutionRequest) -> EvolutionResult:
    bg, k, w = req.background, req.wave, req.window
    method = req.method
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")

    if method == "ode":
        r = evolve_ode(bg, k, w, req.ode)
        return EvolutionResult(r.propagator, r.diagnostics, r.warnings)

    if method == "closed":
        r = closed_propagator(bg, k, w, req.quad, req.series)
        return EvolutionResult(r.propagator, r.diagnostics, r.warnings)

    if method == "dyson":
        _require(0 <= req.dyson_order <= 3, "dyson order must be 0..3")
        prop = dyson_partial_K(bg, k, w, req.dyson_order, req.quad.rel_tol)
        return EvolutionResult(prop, {"unitarity_defect": prop.unitarity_defect,
                                      "order": float(req.dyson_order)}, [])

    if method == "rw":
        _require(bg == RW_BACKGROUND, "method 'rw' requires mu = nu = 1/2")
        prop = rw_propagator(k, w.t_a, w.t, w.t_tilde_a)
        return EvolutionResult(prop, {"unitarity_defect": prop.unitarity_defect}, [])

    if method == "stiff":
        _require(bg == STIFF_BACKGROUND, "method 'stiff' requires mu = 1, nu = 1/2")
        _require(k.k3 != 0.0, "method 'stiff' requires k3 != 0")
        _require(w.t_a > 0.0, "method 'stiff' requires t_a > 0")
        prop = stiff_propagator(k, w.t_a, w.t, w.t_tilde_a, req.series)
        return EvolutionResult(prop, {"unitarity_defect": prop.unitarity_defect}, [])

    if method == "short":
        _require(w.t_a == 0.0 and w.t_tilde_a == 0.0,
                 "method 'short' requires t_a = t_tilde_a = 0")
        r = short_time_propagator(bg, k, w.t)
        return EvolutionResult(r.propagator, r.diagnostics, r.warnings)

    # asymptotic
    _require(w.t_a == 0.0, "method 'asymptotic' requires t_a = 0")
    r = asymptotic_propagator(bg, k, w.t)
    return EvolutionResult(r.propagator, r.diagnostics, r.warnings)
