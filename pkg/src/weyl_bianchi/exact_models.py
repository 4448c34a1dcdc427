"""Exactly solvable benchmark backgrounds.

Two members of the metric family admit closed-form mode evolution and
serve as ground truth for everything else:

* mu = nu = 1/2 (radiation-type, conformally flat, delta = 1): the
  coupling has constant modulus in s = sqrt(t) and the evolution
  operator is elementary trigonometric.
* mu = 1, nu = 1/2 (stiff fluid, delta = 1/2): the two independent
  negative-chirality solutions are Whittaker functions of imaginary
  argument 2 i k3 t with parameter eta = kappa^2/(2 k3).

The stiff solutions fix the conventions used throughout: principal
powers for every (+-2 i k3 t)^p, and the asymptotic residual phase
(+-2 i k3 t)^{-+ i eta}, whose instantaneous frequency dies off like
ln(2|k3|t)/t, is reported rather than bounded.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .background import BackgroundParams, WaveVector
from .closedform import asymptotic_propagator
from .errors import DomainError
from .propagation import Propagator
from .specfun import SeriesControl, complex_gamma, reciprocal_gamma, whittaker_w

_SQRT_PI = math.sqrt(math.pi)

STIFF_BACKGROUND = BackgroundParams(mu=1.0, nu=0.5)
RW_BACKGROUND = BackgroundParams(mu=0.5, nu=0.5)


@dataclass(frozen=True)
class StiffParams:
    """Signed anisotropy coupling eta = kappa^2/(2 k3) of the stiff model."""

    eta: float
    k3: float

    def __post_init__(self):
        if self.k3 == 0.0:
            raise DomainError("stiff model requires k3 != 0")

    @classmethod
    def from_wave(cls, k: WaveVector) -> "StiffParams":
        if k.k3 == 0.0:
            raise DomainError("stiff model requires k3 != 0")
        return cls(eta=k.kappa ** 2 / (2.0 * k.k3), k3=k.k3)


@dataclass(frozen=True)
class SpinorPair:
    """Two-component mode amplitude (phi1, phi2)."""

    phi1: complex
    phi2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2], dtype=complex)

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.phi1), abs(self.phi2))


def _rw_kplus(k: WaveVector, t_tilde_a: float) -> complex:
    return complex(k.k2, k.k1) * cmath.exp(4j * k.k3 * math.sqrt(t_tilde_a))


def rw_propagator(k: WaveVector, t_a: float, t: float, t_tilde_a: float = 0.0) -> Propagator:
    """Exact evolution operator of the mu = nu = 1/2 background.

    K11 = e^{-2ik3 d} [cos(2|k|d) + i (k3/|k|) sin(2|k|d)],
    K12 = (k_+/|k|) e^{-2ik3 (sqrt t + sqrt t_a)} sin(2|k|d),
    d = sqrt(t) - sqrt(t_a).
    """
    if t_a < 0.0 or t < t_a:
        raise DomainError("rw_propagator requires 0 <= t_a <= t")
    kk = k.magnitude
    d = math.sqrt(t) - math.sqrt(t_a)
    c, s_ = math.cos(2.0 * kk * d), math.sin(2.0 * kk * d)
    k11 = cmath.exp(-2j * k.k3 * d) * (c + 1j * (k.k3 / kk) * s_)
    k12 = (_rw_kplus(k, t_tilde_a) / kk) * cmath.exp(
        -2j * k.k3 * (math.sqrt(t) + math.sqrt(t_a))) * s_
    return Propagator(k11, k12)


def rw_solution_fixture(k: WaveVector, t_a: float, t: float, j: int,
                        t_tilde_a: float = 0.0):
    """A pinned pair (initial amplitude, its exact evolution) for branch j.

    The initial data are chosen so the evolved amplitude is a pure
    double-phase expression; the pair (j = 1, 2) is linearly independent.
    """
    if j not in (1, 2):
        raise DomainError("branch j must be 1 or 2")
    if k.k3 == 0.0:
        raise DomainError("rw_solution_fixture requires k3 != 0")
    if k.kappa == 0.0:
        raise DomainError("rw_solution_fixture requires kappa != 0")
    kk = k.magnitude
    sgn = k.sign_k3
    a = (-1.0) ** j * kk * sgn - k.k3
    kp = _rw_kplus(k, t_tilde_a)
    initial = SpinorPair(cmath.exp(-4j * k.k3 * math.sqrt(t_a)), 1j * a / kp)
    d = math.sqrt(t) - math.sqrt(t_a)
    evolved = SpinorPair(
        cmath.exp(-4j * k.k3 * math.sqrt(t_a)) * cmath.exp(2j * a * d),
        (1j * a / kp) * cmath.exp(2j * ((-1.0) ** j * kk * sgn + k.k3) * d),
    )
    return initial, evolved


# ------------------------------------------------------------ stiff model

def stiff_solutions(k: WaveVector, t: float, j: int, t_tilde_a: float = 0.0,
                    ctl: SeriesControl | None = None) -> SpinorPair:
    """Exact negative-chirality solution branch j of the stiff background."""
    if j not in (1, 2):
        raise DomainError("branch j must be 1 or 2")
    if k.k3 == 0.0:
        raise DomainError("stiff_solutions requires k3 != 0")
    if t <= 0.0:
        raise DomainError("stiff_solutions requires t > 0")
    eta = StiffParams.from_wave(k).eta
    kp = complex(k.k2, k.k1) * cmath.exp(2j * k.k3 * t_tilde_a)
    km = kp.conjugate()
    z = 2j * k.k3 * t
    mz_q = cmath.exp(-0.25 * cmath.log(-z))       # (-2 i k3 t)^{-1/4}
    mz_3q = cmath.exp(-0.75 * cmath.log(-z))      # (-2 i k3 t)^{-3/4}
    if j == 1:
        w1 = whittaker_w(complex(-0.25, -eta), 0.25, z, ctl)
        w2 = whittaker_w(complex(0.75, -eta), 0.25, z, ctl)
        phi1 = mz_q * cmath.exp(-1j * k.k3 * t) * w1
        phi2 = (cmath.sqrt(-2j * k.k3) / kp) * mz_3q * cmath.exp(1j * k.k3 * t) * (
            1j * eta * w1 - w2)
    else:
        w1 = whittaker_w(complex(0.25, eta), 0.25, -z, ctl)
        w2 = whittaker_w(complex(-0.75, eta), 0.25, -z, ctl)
        phi1 = mz_q * cmath.exp(-1j * k.k3 * t) * w1
        phi2 = (1j * km * k.sign_k3 / cmath.sqrt(2j * k.k3)) * mz_3q * cmath.exp(
            1j * k.k3 * t) * (w1 + complex(-0.5, eta) * w2)
    return SpinorPair(phi1, phi2)


def stiff_fundamental_matrix(k: WaveVector, t: float, t_tilde_a: float = 0.0,
                             ctl: SeriesControl | None = None) -> np.ndarray:
    """Columns are the two stiff solution branches at time t."""
    s1 = stiff_solutions(k, t, 1, t_tilde_a, ctl)
    s2 = stiff_solutions(k, t, 2, t_tilde_a, ctl)
    return np.array([[s1.phi1, s2.phi1], [s1.phi2, s2.phi2]], dtype=complex)


def stiff_propagator(k: WaveVector, t_a: float, t: float, t_tilde_a: float = 0.0,
                     ctl: SeriesControl | None = None) -> Propagator:
    """Exact stiff evolution operator Phi(t) Phi(t_a)^{-1} from the two
    Whittaker branches (t_a > 0)."""
    if t_a <= 0.0:
        raise DomainError("stiff_propagator requires t_a > 0")
    phi_t = stiff_fundamental_matrix(k, t, t_tilde_a, ctl)
    phi_a = stiff_fundamental_matrix(k, t_a, t_tilde_a, ctl)
    m = phi_t @ np.linalg.inv(phi_a)
    return Propagator.from_matrix(m)


def stiff_limits(k: WaveVector, t: float, regime: str, j: int) -> SpinorPair:
    """Closed-form limits of the stiff solutions.

    regime 'initial' (t = 0), 'short' (|k3| t <= 0.05, two-term small-t
    expansion) or 'asymptotic' (|k3| t >= 20, leading large-t form
    including the residual power-phase (+-2ik3t)^{-+i eta}).
    """
    if j not in (1, 2):
        raise DomainError("branch j must be 1 or 2")
    if k.k3 == 0.0:
        raise DomainError("stiff_limits requires k3 != 0")
    eta = StiffParams.from_wave(k).eta
    sgn = k.sign_k3
    kp = complex(k.k2, k.k1)
    km = kp.conjugate()
    sq2ik3 = cmath.sqrt(2j * k.k3)

    if regime == "initial":
        if t != 0.0:
            raise DomainError("regime 'initial' means t = 0")
        if j == 1:
            pref = _SQRT_PI * cmath.exp(1j * math.pi / 4.0 * sgn)
            return SpinorPair(pref * reciprocal_gamma(complex(1.0, eta)),
                              -pref * sq2ik3 / kp * reciprocal_gamma(complex(0.5, eta)))
        return SpinorPair(_SQRT_PI * reciprocal_gamma(complex(0.5, -eta)),
                          _SQRT_PI * 1j * km * sgn / sq2ik3 * reciprocal_gamma(complex(1.0, -eta)))

    if regime == "short":
        if not 0.0 < abs(k.k3) * t <= 0.05:
            raise DomainError("regime 'short' requires 0 < |k3| t <= 0.05")
        rt_p = cmath.sqrt(2j * k.k3 * t)
        rt_m = cmath.sqrt(-2j * k.k3 * t)
        if j == 1:
            pref = _SQRT_PI * cmath.exp(1j * math.pi / 4.0 * sgn)
            return SpinorPair(
                pref * (reciprocal_gamma(complex(1.0, eta))
                        - 2.0 * rt_p * reciprocal_gamma(complex(0.5, eta))),
                -pref * sq2ik3 / kp * (reciprocal_gamma(complex(0.5, eta))
                                       - 2.0 * rt_p * reciprocal_gamma(complex(0.0, eta))),
            )
        return SpinorPair(
            _SQRT_PI * (reciprocal_gamma(complex(0.5, -eta))
                        - 2.0 * rt_m * reciprocal_gamma(complex(0.0, -eta))),
            _SQRT_PI * 1j * km * sgn / sq2ik3 * reciprocal_gamma(complex(1.0, -eta)) * (
                1.0 - 2.0 * rt_m * complex_gamma(complex(1.0, -eta))
                * reciprocal_gamma(complex(0.5, -eta))),
        )

    if regime == "asymptotic":
        if abs(k.k3) * t < 20.0:
            raise DomainError("regime 'asymptotic' requires |k3| t >= 20")
        zp = 2j * k.k3 * t
        if j == 1:
            power = cmath.exp(-1j * eta * cmath.log(zp))
            pref = cmath.exp(1j * math.pi / 4.0 * sgn) * power
            return SpinorPair(pref * cmath.exp(-zp) / cmath.sqrt(zp),
                              -pref * sq2ik3 / kp)
        power = cmath.exp(1j * eta * cmath.log(-zp))
        return SpinorPair(power,
                          power * 1j * km * sgn / sq2ik3 * cmath.exp(zp) / cmath.sqrt(-zp))

    raise DomainError(f"unknown regime {regime!r}")


def stiff_ode_residual(k: WaveVector, t: float, j: int) -> float:
    """Relative residual of the stiff mode system at time t for branch j.

    Derivatives by 5-point central differences with the step tied to the
    oscillation scale 1/(2|k3|), so the stencil error sits far below the
    1e-7 scale this check certifies."""
    h = 1e-4 / (2.0 * abs(k.k3))
    coef = (1.0, -8.0, 8.0, -1.0)
    offs = (-2, -1, 1, 2)
    d1 = d2 = 0.0 + 0.0j
    for c, o in zip(coef, offs):
        s = stiff_solutions(k, t + o * h, j)
        d1 += c * s.phi1
        d2 += c * s.phi2
    d1 /= 12.0 * h
    d2 /= 12.0 * h
    s0 = stiff_solutions(k, t, j)
    g = complex(k.k2, k.k1) / math.sqrt(t) * cmath.exp(-2j * k.k3 * t)
    r1 = d1 - g * s0.phi2
    r2 = d2 + g.conjugate() * s0.phi1
    scale = max(abs(d1), abs(d2), 1e-300)
    return max(abs(r1), abs(r2)) / scale


@dataclass
class AsymptoticMatchReport:
    """Comparison of asymptotically propagated initial data against the
    exact large-t forms over a time grid."""

    eta: float
    t_grid: list[float]
    modulus_errors: list[float] = field(default_factory=list)
    budgets: list[float] = field(default_factory=list)
    c_fit: float = 0.0
    phase_slope_j1: float = 0.0
    phase_slope_j2: float = 0.0
    phase_slope_targets: tuple[float, float] = (0.0, 0.0)

    @property
    def slope_rel_errors(self) -> tuple[float, float]:
        tj1, tj2 = self.phase_slope_targets
        return (abs(self.phase_slope_j1 - tj1) / max(abs(tj1), 1e-300),
                abs(self.phase_slope_j2 - tj2) / max(abs(tj2), 1e-300))


def asymptotic_match_report(k: WaveVector, t_grid) -> AsymptoticMatchReport:
    """Propagate the t = 0 amplitudes with the asymptotic operator and
    compare against the exact asymptotic forms.

    Moduli agree within a budget proportional to |eta| + 1/(|k3| t); the
    residual phase grows like -+ eta ln(2|k3|t) (branch j = 1 / 2), i.e.
    with a frequency that vanishes at large times.  Both measurements
    are reported, not asserted.
    """
    t_grid = [float(t) for t in t_grid]
    eta = StiffParams.from_wave(k).eta
    report = AsymptoticMatchReport(eta=eta, t_grid=t_grid,
                                   phase_slope_targets=(-eta, eta))
    log_phase = np.log(2.0 * abs(k.k3) * np.asarray(t_grid))
    for j in (1, 2):
        phi0 = stiff_limits(k, 0.0, "initial", j).as_array()
        resid = []
        for t in t_grid:
            kprop = asymptotic_propagator(STIFF_BACKGROUND, k, t).propagator
            phi_c = kprop.apply(phi0)
            phi_e = stiff_limits(k, t, "asymptotic", j).as_array()
            budget = abs(eta) + 1.0 / (abs(k.k3) * t)
            # normalize against the amplitude scale: the dropped O(eta)
            # constants are small relative to the spinor, not relative to
            # its asymptotically decaying component
            scale = float(np.max(np.abs(phi_e)))
            for c, e in zip(phi_c, phi_e):
                report.modulus_errors.append(abs(abs(c) - abs(e)) / scale)
                report.budgets.append(budget)
            comp = 1 if j == 1 else 0  # the non-oscillating component
            resid.append(phi_e[comp] * phi_c[comp].conjugate())
        phases = np.unwrap(np.angle(np.asarray(resid)))
        slope = float(np.polyfit(log_phase, phases, 1)[0])
        if j == 1:
            report.phase_slope_j1 = slope
        else:
            report.phase_slope_j2 = slope
    report.c_fit = float(max(e / b for e, b in zip(report.modulus_errors, report.budgets)))
    return report
