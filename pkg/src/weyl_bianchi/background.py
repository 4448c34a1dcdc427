"""Planar power-law backgrounds and the kinematic quantities derived from them.

The metric family is ds^2 = dt^2 - t^{2 nu} [(dx^1)^2 + (dx^2)^2]
- t^{2 - 2 mu} (dx^3)^2 with mu > 0.  All times are dimensionless
(units of an arbitrary reference time; wave numbers in its inverse).

The anisotropy parameter delta = (1 - nu)/mu controls everything:
delta = 1 is the conformally flat radiation-type family, delta < 1 is
genuinely anisotropic.  The natural evolution variable is s = t^mu.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class BackgroundParams:
    """Scale-factor exponents (mu, nu); transverse directions share nu."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise DomainError("background exponents must be finite")
        if self.mu <= 0.0:
            raise DomainError("background requires mu > 0")

    @property
    def delta(self) -> float:
        return (1.0 - self.nu) / self.mu


@dataclass(frozen=True)
class WaveVector:
    """Comoving wave numbers; (0, 0, 0) is excluded."""

    k1: float
    k2: float
    k3: float

    def __post_init__(self):
        if self.k1 == 0.0 and self.k2 == 0.0 and self.k3 == 0.0:
            raise DomainError("wave vector must be nonzero")

    @property
    def kappa(self) -> float:
        return math.hypot(self.k1, self.k2)

    @property
    def magnitude(self) -> float:
        return math.sqrt(self.k1 ** 2 + self.k2 ** 2 + self.k3 ** 2)

    @property
    def sign_k3(self) -> int:
        return (self.k3 > 0) - (self.k3 < 0)

    def negated(self) -> "WaveVector":
        return WaveVector(-self.k1, -self.k2, -self.k3)


@dataclass(frozen=True)
class TimeWindow:
    """Evolution window 0 <= t_tilde_a <= t_a <= t.

    ``t_tilde_a`` is the reference time of the transverse phase stripped
    from the spinor components; ``t_a`` the initial and ``t`` the target
    time.  t_a == t is allowed and denotes the empty evolution.
    """

    t_a: float
    t: float
    t_tilde_a: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.t_tilde_a <= self.t_a <= self.t):
            raise DomainError(
                f"window requires 0 <= t_tilde_a <= t_a <= t, got "
                f"({self.t_tilde_a}, {self.t_a}, {self.t})"
            )


@dataclass(frozen=True)
class DerivedParams:
    delta: float
    kappa: float
    eta_delta: float | None
    sign_k3: int


@dataclass(frozen=True)
class ClosedFormInputs:
    """Arguments of the Bessel-kernel propagator at target time t."""

    s: float
    sigma_a: float
    x: float
    lam: complex


def physical_momentum(bg: BackgroundParams, k: WaveVector, t: float):
    """Physical 3-momentum (p1, p2, p3) = (k1 t^-nu, k2 t^-nu, k3 t^{mu-1})."""
    if t <= 0.0:
        raise DomainError("physical_momentum requires t > 0")
    trans = t ** (-bg.nu)
    return (k.k1 * trans, k.k2 * trans, k.k3 * t ** (bg.mu - 1.0))


def derived_params(bg: BackgroundParams, k: WaveVector) -> DerivedParams:
    """delta, kappa and (for k3 != 0) the anisotropy coupling
    eta_delta = kappa^2 / (2 |k3|^{2 delta})."""
    delta = bg.delta
    kappa = k.kappa
    eta = None
    if k.k3 != 0.0:
        eta = kappa * kappa / (2.0 * abs(k.k3) ** (2.0 * delta))
    return DerivedParams(delta=delta, kappa=kappa, eta_delta=eta, sign_k3=k.sign_k3)


def k_plus(bg: BackgroundParams, k: WaveVector, t_tilde_a: float = 0.0) -> complex:
    """Transverse combination k2 + i k1 carrying the reference-time phase."""
    phase = cmath.exp(2j * k.k3 * t_tilde_a ** bg.mu / bg.mu) if t_tilde_a > 0.0 else 1.0
    return complex(k.k2, k.k1) * phase


def gamma_coupling(bg: BackgroundParams, k: WaveVector, t_tilde_a: float, t: float) -> complex:
    """Off-diagonal coupling of the negative-chirality mode system:
    (k_+ / t^nu) exp(-2i k3 t^mu / mu)."""
    if t <= 0.0:
        raise DomainError("gamma_coupling requires t > 0")
    return k_plus(bg, k, t_tilde_a) * t ** (-bg.nu) * cmath.exp(-2j * k.k3 * t ** bg.mu / bg.mu)


def closed_form_inputs(bg: BackgroundParams, k: WaveVector, t_a: float, t: float) -> ClosedFormInputs:
    """s = t^mu, sigma_a = (t_a/t)^mu, and the Bessel argument/order

        x(s)   = kappa s^delta / (mu (1 - delta))
        lam(s) = 1/2 + i k3 s / (mu (1 - delta))

    The kappa-form of x is used so that k3 = 0 is regular (the
    eta_delta-form has a purely notational divergence there).
    """
    delta = bg.delta
    if delta >= 1.0:
        raise DomainError("closed_form_inputs requires delta < 1")
    if t_a == 0.0 and delta <= 0.0:
        raise DomainError("t_a = 0 requires delta > 0")
    if t <= 0.0 or t < t_a:
        raise DomainError("closed_form_inputs requires 0 < t and t_a <= t")
    s = t ** bg.mu
    sigma_a = (t_a / t) ** bg.mu if t_a > 0.0 else 0.0
    denom = bg.mu * (1.0 - delta)
    x = k.kappa * s ** delta / denom
    lam = complex(0.5, k.k3 * s / denom)
    return ClosedFormInputs(s=s, sigma_a=sigma_a, x=x, lam=lam)


def metric_determinant_abs(bg: BackgroundParams, t: float) -> float:
    """|g(t)| = t^{2 (2 nu + 1 - mu)} for the metric family above."""
    if t <= 0.0:
        raise DomainError("metric determinant requires t > 0")
    return t ** (2.0 * (2.0 * bg.nu + 1.0 - bg.mu))
