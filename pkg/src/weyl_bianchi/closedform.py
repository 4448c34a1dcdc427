"""Analytic Bessel-kernel approximation of the evolution operator.

For delta = (1 - nu)/mu < 1 the evolution operator admits the closed
form

    K11 = 1 + i (1-delta) x(s) int_0^{1-sigma_a} dz (1-z)^{delta-1} V(z)
    K12 = (k_+/kappa) (1-delta) x(s) e^{-2 i k3 s / mu}
            int_0^{1-sigma_a} dz (1-z)^{delta-1} U(z)

with kernels built from Bessel functions of complex order
lam = 1/2 + i k3 s/(mu (1-delta)) at arguments x(s) and
x(s) e^{(1-delta) z}.  Two exact rewrites make this numerically robust
for arbitrarily large Im(lam) and for the endpoint weight:

* Every Bessel product is expressed through the entire function
  F_b(x) = 0F1(; b; -x^2/4); the gamma/sine prefactors of J_{+-lam}
  cancel identically in the kernel ratios, removing all exp(pi|Im lam|/2)
  over/underflow.  Because Re(lam) = 1/2, conj(lam) = 1 - lam, and the
  phase factors fold into e^{(1-delta) z} and e^{+-2 i k3 s z / mu}.
* The substitution u = (1-z)^delta removes the (1-z)^{delta-1} weight
  exactly (for delta > 0), leaving a smooth integrand for the adaptive
  Gauss-Kronrod panels, which are pre-split per quarter oscillation.

Also here: the short-time operator (the s -> 0 limit of the above), the
large-phase asymptotic operator for the stiff background (mu = 1,
nu = 1/2), the chirality flip wrapper, and the exponential-kernel
variants of the iterated integrals used for regression against the
exact ones.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .background import BackgroundParams, TimeWindow, WaveVector, k_plus
from .errors import DomainError, NumericalError, ZeroDenominatorError
from .propagation import Propagator, PropagatorResult, _ordered_integral
from .quadrature import integrate_batched, oscillation_edges
from .specfun import SeriesControl, hyp0f1

# reject (1 - delta) strictly below this gap; x(s) ~ 1/(1-delta) amplifies
# roundoff catastrophically closer to the conformally flat family, which
# is served exactly by exact_models.rw_propagator
_DELTA_GAP = 1e-3 * (1.0 - 1e-9)

_SHORT_TIME_COUPLING_MAX = 0.1


@dataclass(frozen=True)
class QuadControl:
    rel_tol: float = 1e-10
    max_subdivisions: int = 4096

    def __post_init__(self):
        if self.rel_tol <= 0.0:
            raise DomainError("QuadControl.rel_tol must be positive")
        if self.max_subdivisions < 8:
            raise DomainError("QuadControl.max_subdivisions must be >= 8")


def _one_minus_delta(bg: BackgroundParams) -> float:
    # formed before any division so delta -> 1 keeps full precision
    return (bg.mu - 1.0 + bg.nu) / bg.mu


def closed_propagator(bg: BackgroundParams, k: WaveVector, window: TimeWindow,
                      qc: QuadControl | None = None,
                      series_ctl: SeriesControl | None = None) -> PropagatorResult:
    """Bessel-kernel evolution operator K(t | t_a) for delta < 1."""
    qc = qc or QuadControl()
    omd = _one_minus_delta(bg)
    delta = 1.0 - omd
    if omd <= 0.0:
        raise DomainError("closed_propagator requires delta < 1")
    if omd < _DELTA_GAP:
        raise DomainError(
            f"closed_propagator rejects 1 - delta = {omd:.3g} < 1e-3; "
            "use the exact conformally flat operator instead")
    warns: list[str] = []
    if delta <= 0.0:
        if window.t_a == 0.0:
            raise DomainError("delta <= 0 requires t_a > 0")
        warns.append(f"delta = {delta:.3g} <= 0: closed-form accuracy unvalidated here")

    if window.t == window.t_a or k.kappa == 0.0:
        return PropagatorResult(Propagator.identity(), {"quadrature_error_estimate": 0.0}, warns)

    s = window.t ** bg.mu
    sigma_a = (window.t_a / window.t) ** bg.mu if window.t_a > 0.0 else 0.0
    x = k.kappa * s ** delta / (bg.mu * omd)
    lam = complex(0.5, k.k3 * s / (bg.mu * omd))
    om_z = 2.0 * k.k3 * s / bg.mu  # oscillation rate of the kernels in z

    w0 = -0.25 * x * x
    fm_x = hyp0f1(1.0 - lam, w0, series_ctl)
    fp_x = hyp0f1(1.0 + lam, w0, series_ctl)
    fa_x = hyp0f1(lam, w0, series_ctl)
    fb_x = hyp0f1(2.0 - lam, w0, series_ctl)
    lam_prod = lam * (1.0 - lam)
    za = (2.0 / x) * fm_x * fa_x
    zb = (0.5 * x / lam_prod) * fp_x * fb_x
    a_z0 = za + zb
    if abs(a_z0) < 1e-13 * max(abs(za), abs(zb)):
        raise ZeroDenominatorError(
            f"kernel normalizer vanishes at s = {s:.6g} (|Z0| ratio "
            f"{abs(a_z0) / max(abs(za), abs(zb)):.2e})")

    def kernels(z):
        """Folded V and U kernels on a batch of z values."""
        z = np.asarray(z, dtype=float)
        x2 = x * np.exp(omd * z)
        w2 = -0.25 * x2 * x2
        fp2 = hyp0f1(1.0 + lam, w2.astype(complex), series_ctl)
        fm2 = hyp0f1(1.0 - lam, w2.astype(complex), series_ctl)
        fa2 = hyp0f1(lam, w2.astype(complex), series_ctl)
        fb2 = hyp0f1(2.0 - lam, w2.astype(complex), series_ctl)
        grow = np.exp(omd * z)
        osc = np.exp(1j * om_z * z)
        v = 1j * (grow * fm_x * fp2 - fp_x * fm2 / osc) / (lam * a_z0)
        u = (grow * osc * (2.0 / x2) * fm_x * fa2 + (0.5 * x2 / lam_prod) * fp_x * fb2) / a_z0
        return v, u

    z_max = 1.0 - sigma_a
    rate = abs(om_z) + omd * x * math.exp(omd * z_max)
    cap = max(16, qc.max_subdivisions // 2)
    z_edges = oscillation_edges(0.0, z_max, rate, cap=cap)

    if delta > 0.0:
        u_edges = (1.0 - z_edges) ** delta
        u_edges = u_edges[::-1].copy()

        def fv(uu):
            zz = 1.0 - np.asarray(uu) ** (1.0 / delta)
            return kernels(zz)[0] / delta

        def fu(uu):
            zz = 1.0 - np.asarray(uu) ** (1.0 / delta)
            return kernels(zz)[1] / delta

        a_, b_ = float(u_edges[0]), float(u_edges[-1])
        edges = u_edges
    else:
        def fv(zz):
            zz = np.asarray(zz)
            return (1.0 - zz) ** (delta - 1.0) * kernels(zz)[0]

        def fu(zz):
            zz = np.asarray(zz)
            return (1.0 - zz) ** (delta - 1.0) * kernels(zz)[1]

        a_, b_ = float(z_edges[0]), float(z_edges[-1])
        edges = z_edges

    iv, err_v, _ = integrate_batched(fv, a_, b_, rel_tol=qc.rel_tol,
                                     max_panels=qc.max_subdivisions, initial_edges=edges)
    iu, err_u, _ = integrate_batched(fu, a_, b_, rel_tol=qc.rel_tol,
                                     max_panels=qc.max_subdivisions, initial_edges=edges)

    pref = omd * x
    k11 = 1.0 + 1j * pref * iv
    kp = k_plus(bg, k, window.t_tilde_a)
    k12 = (kp / k.kappa) * pref * cmath.exp(-2j * k.k3 * s / bg.mu) * iu
    prop = Propagator(k11, k12)
    if not all(math.isfinite(c) for c in
               (k11.real, k11.imag, k12.real, k12.imag)):
        raise NumericalError("closed_propagator produced non-finite entries")
    diag = {
        "quadrature_error_estimate": pref * (err_v + err_u),
        "unitarity_defect": prop.unitarity_defect,
        "bessel_argument": x,
        "order_imag": lam.imag,
    }
    return PropagatorResult(prop, diag, warns)


def short_time_propagator(bg: BackgroundParams, k: WaveVector, t: float) -> PropagatorResult:
    """Leading small-s operator for evolution from t_a = 0:

        K = [[1, k_+ s^delta/(mu delta)], [-k_- s^delta/(mu delta), 1]]

    valid up to relative corrections O(s^{2 delta}); the dimensionless
    coupling kappa s^delta/(mu delta) must stay small (warned above 0.1).
    """
    delta = bg.delta
    if delta <= 0.0:
        raise DomainError("short_time_propagator requires delta > 0")
    if t < 0.0:
        raise DomainError("short_time_propagator requires t >= 0")
    warns: list[str] = []
    s = t ** bg.mu
    c = s ** delta / (bg.mu * delta)
    coupling = k.kappa * c
    if coupling > _SHORT_TIME_COUPLING_MAX:
        warns.append(f"short-time coupling {coupling:.3g} exceeds {_SHORT_TIME_COUPLING_MAX}")
    kp = k_plus(bg, k, 0.0)
    prop = Propagator(1.0 + 0.0j, kp * c)
    return PropagatorResult(prop, {"coupling": coupling}, warns)


def asymptotic_propagator(bg: BackgroundParams, k: WaveVector, t: float) -> PropagatorResult:
    """Large-phase (2|k3|t >= 10) operator for the stiff background
    (mu = 1, nu = 1/2), evolution from t_a = 0, to leading order in the
    anisotropy coupling eta = kappa^2/(2 k3):

        K11 = 1 + sqrt(pi) |eta| e^{-2 i k3 t} / sqrt(2 i k3 t)
        K12 = (k2 + i k1)/sqrt(-2 i k3) *
              ( -i sqrt(pi) sign k3 + e^{-2 i k3 t} / sqrt(-2 i k3 t) )
    """
    if not (bg.mu == 1.0 and bg.nu == 0.5):
        raise DomainError("asymptotic_propagator requires mu = 1, nu = 1/2")
    if k.k3 == 0.0:
        raise DomainError("asymptotic_propagator requires k3 != 0")
    phase = 2.0 * abs(k.k3) * t
    if phase < 10.0:
        raise DomainError(f"asymptotic_propagator requires 2|k3|t >= 10, got {phase:.3g}")
    eta = k.kappa ** 2 / (2.0 * k.k3)
    zp = 2j * k.k3 * t
    osc = cmath.exp(-zp)
    k11 = 1.0 + math.sqrt(math.pi) * abs(eta) * osc / cmath.sqrt(zp)
    k12 = (complex(k.k2, k.k1) / cmath.sqrt(-2j * k.k3)) * (
        -1j * math.sqrt(math.pi) * k.sign_k3 + osc / cmath.sqrt(-zp))
    return PropagatorResult(Propagator(k11, k12), {"eta": eta, "phase": phase}, [])


def chirality_flip(op):
    """Wrap a negative-chirality operation so it produces the positive-
    chirality result: K^(+) for k equals K^(-) for -k.  Every WaveVector
    argument of the wrapped callable is negated."""

    def flipped(*args, **kwargs):
        args = tuple(a.negated() if isinstance(a, WaveVector) else a for a in args)
        kwargs = {n: (a.negated() if isinstance(a, WaveVector) else a)
                  for n, a in kwargs.items()}
        return op(*args, **kwargs)

    flipped.__name__ = f"{getattr(op, '__name__', 'op')}_positive_chirality"
    return flipped


def approx_In(bg: BackgroundParams, k: WaveVector, n: int, window: TimeWindow,
              rel_tol: float = 1e-10) -> complex:
    """Iterated coupling integral with the exponential-kernel replacement
    sigma_l^{delta-1} -> e^{(1-delta)(1-sigma_l)} for l < n (the innermost
    power-law factor is kept).  Coincides with dyson_In for n = 1;
    provided for n <= 2 as a regression handle on the kernel replacement.
    """
    if not 1 <= n <= 2:
        raise DomainError("approx_In supports n in 1..2")
    delta = bg.delta
    if delta > 1.0:
        raise DomainError("approx_In requires delta <= 1")
    if window.t_a == 0.0 and delta <= 0.0:
        raise DomainError("t_a = 0 requires delta > 0")
    if k.kappa == 0.0 or window.t == window.t_a:
        return 0.0 + 0.0j
    s = window.t ** bg.mu
    sigma_a = (window.t_a / window.t) ** bg.mu if window.t_a > 0.0 else 0.0
    c = 2.0 * k.k3 * s / bg.mu
    omd = _one_minus_delta(bg)

    def kernel_extra(m, sig):
        if m >= n:
            return 1.0
        # replace the power-law weight (already applied) by the exponential one
        return np.asarray(sig) ** (1.0 - delta) * np.exp(-omd * np.asarray(sig))

    pref = (k.kappa / bg.mu) ** n * s ** (delta * n) * math.exp(omd * (n - 1))
    return pref * _ordered_integral(n, delta, sigma_a, c, rel_tol, kernel_extra=kernel_extra)
