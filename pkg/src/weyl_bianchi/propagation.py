"""Direct numerical evolution of the two-component mode system.

The negative-chirality modes obey d/dt phi = Omega(t) phi with the
anti-Hermitian, traceless coupling matrix Omega built from
``background.gamma_coupling``.  In the variable s = t^mu the system
becomes

    d/ds (u, v) = ( g(s) v, -conj(g(s)) u ),
    g(s) = (k_+ / mu) s^{delta - 1} exp(-2i k3 s / mu),

which makes the s -> 0 endpoint integrable for delta > 0 and exposes the
oscillation rate 2 k3 / mu explicitly.  A Dormand-Prince 5(4) embedded
pair with PI step control integrates one column of the evolution
operator; the SU(2) structure K = [[k11, k12], [-conj(k12), conj(k11)]]
supplies the second column by construction.

Also provided: the exact iterated (time-ordered) integrals I_n of the
coupling, evaluated by nested adaptive quadrature for n <= 3, and the
corresponding truncated series propagator.  These converge to the ODE
solution with error of order (coupling)^{N+1} and serve as an
independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .background import BackgroundParams, TimeWindow, WaveVector, gamma_coupling, k_plus
from .errors import DomainError, NumericalError, ToleranceError
from .quadrature import integrate_batched, oscillation_edges


@dataclass(frozen=True)
class Propagator:
    """2x2 evolution operator with the SU(2)-like structure
    k21 = -conj(k12), k22 = conj(k11) built in."""

    k11: complex
    k12: complex

    @property
    def k21(self) -> complex:
        return -self.k12.conjugate()

    @property
    def k22(self) -> complex:
        return self.k11.conjugate()

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.k11, self.k12], [self.k21, self.k22]], dtype=complex)

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.k11) ** 2 + abs(self.k12) ** 2 - 1.0)

    @classmethod
    def identity(cls) -> "Propagator":
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def from_matrix(cls, m) -> "Propagator":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    def structure_defect_of(self, m) -> float:
        """How far a raw 2x2 matrix deviates from the built-in structure."""
        m = np.asarray(m, dtype=complex)
        return float(max(abs(m[1, 1] - m[0, 0].conjugate()),
                         abs(m[1, 0] + m[0, 1].conjugate())))

    def __matmul__(self, other: "Propagator") -> "Propagator":
        return Propagator(
            self.k11 * other.k11 + self.k12 * other.k21,
            self.k11 * other.k12 + self.k12 * other.k22,
        )

    def inverse(self) -> "Propagator":
        """Hermitian-conjugate inverse (exact for unitary K)."""
        return Propagator(self.k11.conjugate(), -self.k12)

    def apply(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=complex)
        return self.matrix @ phi


@dataclass(frozen=True)
class OdeControl:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    start_offset_s0: float | None = None

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise DomainError("OdeControl tolerances must be positive")


@dataclass
class PropagatorResult:
    propagator: Propagator
    diagnostics: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def omega_matrix(bg: BackgroundParams, k: WaveVector, t_tilde_a: float, t: float) -> np.ndarray:
    """Traceless anti-Hermitian coupling matrix of the mode system."""
    g = gamma_coupling(bg, k, t_tilde_a, t)
    return np.array([[0.0, g], [-g.conjugate(), 0.0]], dtype=complex)


# ------------------------------------------------- Dormand-Prince 5(4) core

_DP_C = (0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_DP_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
         -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def _integrate_column(g, s0: float, s1: float, u: complex, v: complex,
                      ctl: OdeControl, h_max: float, checkpoints=None):
    """Advance (u, v) with u' = g v, v' = -conj(g) u from s0 to s1.

    ``checkpoints`` is an ascending list of s values in (s0, s1]; the
    state at each is recorded.  Returns (states, n_steps, n_rejected)
    where states has one (u, v) per checkpoint (or just the endpoint).
    """
    targets = list(checkpoints) if checkpoints is not None else [s1]
    states = []
    s = s0
    gs = g(s)
    k1 = (gs * v, -gs.conjugate() * u)
    span = s1 - s0
    # near a power-law singular start the natural step scales like s itself
    h = min(h_max, span, 0.1 / max(abs(gs), 1e-3), max(0.25 * s0, 1e-280))
    errold = 1e-4
    n_steps = n_rejected = 0
    ti = 0

    while ti < len(targets):
        target = targets[ti]
        while s < target:
            if n_steps + n_rejected > ctl.max_steps:
                raise ToleranceError("ODE step budget exhausted")
            h = min(h, target - s)
            if h < 1e-15 * max(abs(s), 1e-300):
                raise ToleranceError("ODE step size underflow")
            ks = [k1]
            for i in range(6):
                du = sum(a * kk[0] for a, kk in zip(_DP_A[i], ks))
                dv = sum(a * kk[1] for a, kk in zip(_DP_A[i], ks))
                gs = g(s + _DP_C[i] * h)
                uu = u + h * du
                vv = v + h * dv
                ks.append((gs * vv, -gs.conjugate() * uu))
            u_new = u + h * sum(b * kk[0] for b, kk in zip(_DP_A[5], ks))
            v_new = v + h * sum(b * kk[1] for b, kk in zip(_DP_A[5], ks))
            eu = h * sum(e * kk[0] for e, kk in zip(_DP_E, ks))
            ev = h * sum(e * kk[1] for e, kk in zip(_DP_E, ks))
            sc_u = ctl.abs_tol + ctl.rel_tol * max(abs(u), abs(u_new))
            sc_v = ctl.abs_tol + ctl.rel_tol * max(abs(v), abs(v_new))
            err = math.sqrt(0.5 * ((abs(eu) / sc_u) ** 2 + (abs(ev) / sc_v) ** 2))
            if err <= 1.0:
                s += h
                u, v = u_new, v_new
                k1 = ks[6]  # FSAL
                n_steps += 1
                err = max(err, 1e-10)
                fac = 0.9 * err ** (-0.14) * errold ** 0.08
                errold = err
                h = min(h_max, h * min(5.0, max(0.2, fac)))
            else:
                n_rejected += 1
                h *= max(0.2, 0.9 * err ** (-0.2))
        states.append((u, v))
        ti += 1
    return states, n_steps, n_rejected


def _seed_start(bg: BackgroundParams, k: WaveVector, ctl: OdeControl, s_end: float):
    """Starting point and short-time seed for evolutions from t_a = 0.

    Chooses s0 so the accumulated coupling kappa s0^delta / (mu delta)
    stays below 1e-8 (seed error is quadratic in it) and the phase
    2 k3 s0 / mu below 1e-4, subject to float representability.
    """
    delta = bg.delta
    kappa = k.kappa
    s0 = (1e-8 * bg.mu * delta / kappa) ** (1.0 / delta)
    if k.k3 != 0.0:
        s0 = min(s0, 1e-4 * bg.mu / (2.0 * abs(k.k3)))
    s0 = min(s0, 0.5 * s_end)
    if ctl.start_offset_s0 is not None:
        s0 = min(ctl.start_offset_s0, 0.5 * s_end)
    if s0 < 1e-290 or s0 == 0.0:
        s0 = 1e-290
        coupling = kappa * s0 ** delta / (bg.mu * delta)
        if coupling > 1e-3:
            raise ToleranceError(
                "t_a = 0 start not representable: coupling at the smallest "
                f"usable s0 is {coupling:.3g} (delta = {delta:.3g} too close to 0)"
            )
    return s0


def evolve_ode(bg: BackgroundParams, k: WaveVector, window: TimeWindow,
               ctl: OdeControl | None = None) -> PropagatorResult:
    """Evolution operator K(t | t_a) by adaptive embedded Runge-Kutta in s.

    For t_a = 0 (requires delta > 0) integration starts at a small s0 > 0
    seeded with the analytic short-time operator, whose error there is
    below the solver tolerances.
    """
    ctl = ctl or OdeControl()
    result = _evolve_checkpoints(bg, k, window, [window.t], ctl)
    props, diag, warns = result
    return PropagatorResult(propagator=props[0], diagnostics=diag, warnings=warns)


def evolve_ode_checkpoints(bg: BackgroundParams, k: WaveVector, window: TimeWindow,
                           times, ctl: OdeControl | None = None):
    """K(t_i | t_a) at several ascending times t_i in one integration pass."""
    ctl = ctl or OdeControl()
    props, diag, warns = _evolve_checkpoints(bg, k, window, times, ctl)
    return props, PropagatorResult(propagator=props[-1], diagnostics=diag, warnings=warns)


def _evolve_checkpoints(bg: BackgroundParams, k: WaveVector, window: TimeWindow,
                        times, ctl: OdeControl):
    times = [float(t) for t in times]
    if any(t < window.t_a for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise DomainError("checkpoint times must ascend and lie in [t_a, t]")
    delta = bg.delta
    if window.t_a == 0.0 and delta <= 0.0:
        raise DomainError("evolution from t_a = 0 requires delta > 0")

    warns: list[str] = []
    if k.kappa == 0.0:
        props = [Propagator.identity() for _ in times]
        return props, {"unitarity_defect": 0.0, "n_steps": 0.0, "n_rejected": 0.0}, warns

    c0 = k_plus(bg, k, window.t_tilde_a) / bg.mu
    om = 2.0 * k.k3 / bg.mu
    dm1 = delta - 1.0

    def g(s: float) -> complex:
        return c0 * s ** dm1 * cmath.exp(-1j * om * s)

    h_max = 0.1 * bg.mu / abs(k.k3) if k.k3 != 0.0 else math.inf

    s_end = window.t ** bg.mu
    if window.t_a > 0.0:
        s_start = window.t_a ** bg.mu
        u, v = 1.0 + 0.0j, 0.0 + 0.0j
    else:
        s_start = _seed_start(bg, k, ctl, s_end)
        coupl = k.kappa * s_start ** delta / (bg.mu * delta)
        u = 1.0 + 0.0j
        v = -k_plus(bg, k, window.t_tilde_a).conjugate() * s_start ** delta / (bg.mu * delta)
        if coupl > 1e-6:
            warns.append(f"t_a = 0 seed coupling {coupl:.2g} above 1e-6; accuracy degraded")

    s_targets = [t ** bg.mu for t in times]
    live = [st for st in s_targets if st > s_start]
    states, n_steps, n_rejected = _integrate_column(
        g, s_start, max(s_targets[-1], s_start), u, v, ctl, h_max,
        checkpoints=live or [s_start])

    props = []
    si = 0
    kp0 = k_plus(bg, k, window.t_tilde_a)
    for st in s_targets:
        if st <= s_start:
            if window.t_a > 0.0:
                props.append(Propagator.identity())
            else:
                # below the seed point the short-time operator is exact
                # to within the solver tolerances
                cc = st ** delta / (bg.mu * delta)
                props.append(Propagator(1.0 + 0.0j, kp0 * cc))
            continue
        uu, vv = states[si]
        si += 1
        if not (math.isfinite(uu.real) and math.isfinite(uu.imag)
                and math.isfinite(vv.real) and math.isfinite(vv.imag)):
            raise NumericalError("ODE evolution produced non-finite state")
        props.append(Propagator(uu, -vv.conjugate()))

    defect = max(p.unitarity_defect for p in props)
    diag = {"unitarity_defect": defect, "n_steps": float(n_steps), "n_rejected": float(n_rejected)}
    return props, diag, warns


# --------------------------------------------- iterated coupling integrals

def dyson_In(bg: BackgroundParams, k: WaveVector, n: int, window: TimeWindow,
             rel_tol: float = 1e-10) -> complex:
    """n-fold time-ordered integral I_n of the coupling (n <= 3).

    I_n = (kappa/mu)^n s^{delta n} *
          int_{sigma_a <= sigma_n <= ... <= sigma_1 <= 1}
          prod_l sigma_l^{delta-1} exp[i (2 k3 s / mu) sum_m (-1)^m sigma_m]

    The sigma -> sigma^delta substitution removes the endpoint
    singularity at sigma_a = 0 for every nesting level.
    """
    if not 1 <= n <= 3:
        raise DomainError("dyson_In supports n in 1..3")
    delta = bg.delta
    if delta > 1.0:
        raise DomainError("dyson_In requires delta <= 1")
    if window.t_a == 0.0 and delta <= 0.0:
        raise DomainError("t_a = 0 requires delta > 0")
    if k.kappa == 0.0 or window.t == window.t_a:
        return 0.0 + 0.0j

    s = window.t ** bg.mu
    sigma_a = (window.t_a / window.t) ** bg.mu if window.t_a > 0.0 else 0.0
    c = 2.0 * k.k3 * s / bg.mu
    pref = (k.kappa / bg.mu) ** n * s ** (delta * n)
    val = _ordered_integral(n, delta, sigma_a, c, rel_tol)
    return pref * val


def _ordered_integral(n: int, delta: float, sigma_a: float, c: float, rel_tol: float,
                      kernel_extra=None) -> complex:
    """G_1(1) for the nesting G_m(tau) = int_{sigma_a}^tau w_m(sigma) G_{m+1} dsigma.

    w_m(sigma) = sigma^{delta-1} exp(i c (-1)^m sigma) by default;
    ``kernel_extra(m, sigma)`` multiplies extra factors in (used by the
    exponential-kernel variant of the series).
    """
    substitute = sigma_a == 0.0 and delta < 1.0

    def level(m: int, tau: float) -> complex:
        if tau <= sigma_a:
            return 0.0 + 0.0j
        tol = rel_tol * 0.25 ** (m - 1)
        sign = -1.0 if m % 2 else 1.0

        def weighted(sig, jac):
            out = jac * np.exp(1j * (c * sign) * sig)
            if kernel_extra is not None:
                out = out * kernel_extra(m, sig)
            if m < n:
                out = out * np.array([level(m + 1, float(x)) for x in sig])
            return out

        sig_edges = oscillation_edges(sigma_a, tau, c, cap=256)
        if substitute:
            # u = sigma^delta removes the sigma^{delta-1} endpoint weight
            def f(u):
                return weighted(np.asarray(u) ** (1.0 / delta), 1.0 / delta)

            edges = sig_edges ** delta
        else:
            def f(sig):
                sig = np.asarray(sig)
                return weighted(sig, sig ** (delta - 1.0))

            edges = sig_edges
        val, _err, _n = integrate_batched(
            f, float(edges[0]), float(edges[-1]), rel_tol=tol,
            max_panels=4096, initial_edges=edges, abs_floor=1e-16)
        return val

    return level(1, 1.0)


def dyson_partial_K(bg: BackgroundParams, k: WaveVector, window: TimeWindow,
                    order: int, rel_tol: float = 1e-10) -> Propagator:
    """Truncated time-ordered series through the given order (<= 3).

    Not unitary; converges to the ODE propagator with error
    O(coupling^{order+1}).  The k3-free direction matrix satisfies
    M^2 = -1, so even orders feed the diagonal and odd orders the
    off-diagonal."""
    if not 0 <= order <= 3:
        raise DomainError("dyson_partial_K supports order in 0..3")
    if k.kappa == 0.0 or order == 0:
        return Propagator.identity()
    kp = k_plus(bg, k, window.t_tilde_a)
    m12 = kp / k.kappa
    k11 = 1.0 + 0.0j
    k12 = 0.0 + 0.0j
    for n in range(1, order + 1):
        i_n = dyson_In(bg, k, n, window, rel_tol)
        if n % 2 == 0:
            k11 += (-1.0) ** (n // 2) * i_n
        else:
            k12 += (-1.0) ** ((n - 1) // 2) * i_n * m12
    return Propagator(k11, k12)
