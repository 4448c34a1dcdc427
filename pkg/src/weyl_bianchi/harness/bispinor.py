"""Reconstruction of four-component bispinor samples from mode amplitudes.

The two-component amplitudes evolved by the propagators are rescaled,
phase-stripped fields.  Undoing that rescaling,

    phi_J -> |g(t)|^{-1/4} exp(chirality (-1)^J i (k3/mu)(s - s_ref)) phi_J,

and stacking (phi, chirality * phi) with a plane-wave factor gives the
bispinor solution at a spacetime point (chirality = -1: lower pair is
minus the upper pair).  |g(t)| = t^{2(2 nu + 1 - mu)} is the metric
determinant of the background family.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from ..background import BackgroundParams, WaveVector, metric_determinant_abs
from ..errors import DomainError
from ..exact_models import SpinorPair


@dataclass(frozen=True)
class BispinorSample:
    """Bispinor value at one spacetime point; the lower pair equals
    -chirality times the upper pair."""

    position: tuple[float, float, float]
    t: float
    c1: complex
    c2: complex
    c3: complex
    c4: complex

    def as_tuple(self):
        return (self.c1, self.c2, self.c3, self.c4)


def reconstruct_bispinor(bg: BackgroundParams, k: WaveVector, chirality: int,
                         phi: SpinorPair, position, t: float,
                         t_tilde_a: float = 0.0,
                         c_norm: complex = 1.0 + 0.0j) -> BispinorSample:
    """Assemble the bispinor c e^{i k.x} (phi, -chirality * phi) at (x, t)."""
    if chirality not in (-1, 1):
        raise DomainError("chirality must be +1 or -1")
    if t <= 0.0:
        raise DomainError("reconstruct_bispinor requires t > 0")
    x1, x2, x3 = (float(v) for v in position)
    g_quarter = metric_determinant_abs(bg, t) ** (-0.25)
    phase_arg = (k.k3 / bg.mu) * (t ** bg.mu - t_tilde_a ** bg.mu)
    plane = complex(c_norm) * cmath.exp(1j * (k.k1 * x1 + k.k2 * x2 + k.k3 * x3))
    # (-1)^J for components J = 1, 2
    u1 = g_quarter * cmath.exp(chirality * (-1.0) * 1j * phase_arg) * phi.phi1
    u2 = g_quarter * cmath.exp(chirality * (+1.0) * 1j * phase_arg) * phi.phi2
    lower = float(chirality)
    return BispinorSample(
        position=(x1, x2, x3), t=t,
        c1=plane * u1, c2=plane * u2,
        c3=plane * lower * u1, c4=plane * lower * u2,
    )
