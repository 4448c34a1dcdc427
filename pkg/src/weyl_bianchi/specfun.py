"""Self-contained special-function kernels.

Provides the complex gamma function (Lanczos), Bessel J of complex order
and real non-negative argument, the Kummer confluent series M(a,b,z) and
the Whittaker function W with complex parameters, which down the line
feed the mode propagators.  Everything here is scalar pure-python except
``hyp0f1``, which is vectorized over its argument because the propagator
quadrature evaluates it on whole batches of nodes.

Numerical strategy
------------------
* gamma: Lanczos rational approximation (g = 7, 9 coefficients) for
  Re z >= 1/2, reflection formula otherwise.  Typical relative accuracy
  ~1e-13 for |z| <= 50.
* Bessel J: ascending series through the confluent limit function
  0F1(; order+1; -x^2/4) with double-double accumulation; switches to
  the large-argument (Hankel) expansion above ``asymptotic_switch``.
* Whittaker W: two-term Kummer connection formula for moderate |z|
  (requires 2*mw non-integer), asymptotic expansion beyond the switch.
  Validated to 1e-9 relative on the imaginary axis for |z| <= 60.

Branch conventions: principal logarithm everywhere.  Arguments on the
negative real axis raise BranchError rather than silently picking a side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .ddarith import (
    cdd,
    cdd_abs,
    cdd_add,
    cdd_div,
    cdd_mul,
    cdd_mul_c,
    cdd_one_like,
    cdd_to_complex,
    dd_add_d,
)
from .errors import BranchError, ConvergenceError, DomainError, NumericalError, PoleError

# double-double accumulation noise floor (2**-104)
_DD_EPS = 4.93e-32

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LOG_2PI_HALF = 0.9189385332046727  # log(2*pi)/2


@dataclass(frozen=True)
class SeriesControl:
    """Tolerances for the series kernels.

    ``asymptotic_switch`` is the |argument| above which bessel_j and
    whittaker_w leave the ascending series for the asymptotic expansion.
    """

    rel_tol: float = 1e-14
    max_terms: int = 500
    asymptotic_switch: float = 25.0

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise DomainError("SeriesControl.rel_tol must be positive")
        if self.max_terms < 10:
            raise DomainError("SeriesControl.max_terms must be >= 10")


_DEFAULT_CTL = SeriesControl()


def _check_finite(z, what):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericalError(f"{what} produced a non-finite value")
    return z


def _is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real)


# ------------------------------------------------------------------ gamma

def log_gamma(z) -> complex:
    """Principal-branch log Gamma via Lanczos; imaginary part may differ
    from the analytic continuation by a multiple of 2*pi*i, which is
    irrelevant once exponentiated."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at z = {z}")
    if z.real < 0.5:
        # reflection: log G(z) = log pi - log sin(pi z) - log G(1 - z)
        return math.log(math.pi) - _log_sin_pi(z) - log_gamma(1.0 - z)
    zm = z - 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    out = _LOG_2PI_HALF + (zm + 0.5) * cmath.log(t) - t + cmath.log(acc)
    return _check_finite(out, "log_gamma")


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)), stable for large |Im z| (never overflows)."""
    if z.imag >= 0.0:
        # sin(pi z) = e^{i pi z}(1 - e^{-2 i pi z}) / (2i); use the decaying exponential
        w = cmath.exp(2j * math.pi * z)  # |w| = e^{-2 pi Im z} <= 1
        return -1j * math.pi * z + cmath.log(1.0 - w) - math.log(2.0) + 1j * math.pi / 2.0
    w = cmath.exp(-2j * math.pi * z)
    return 1j * math.pi * z + cmath.log(1.0 - w) - math.log(2.0) - 1j * math.pi / 2.0


def complex_gamma(z) -> complex:
    """Gamma(z) for complex z; PoleError at non-positive integers."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at z = {z}")
    return _check_finite(cmath.exp(log_gamma(z)), "complex_gamma")


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z); entire, so this returns 0 at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0.0 + 0.0j
    return cmath.exp(-log_gamma(z))


# ------------------------------------------------------- confluent series

def hyp0f1(b, w, ctl: SeriesControl | None = None):
    """Confluent limit function 0F1(; b; w) = sum_n w^n / ((b)_n n!).

    ``b`` is a complex scalar (not a non-positive integer); ``w`` may be
    a complex scalar or ndarray.  Double-double accumulation keeps the
    cancellation error of the alternating series near the noise floor
    maxterm * 2**-104.
    """
    ctl = ctl or _DEFAULT_CTL
    if _is_nonpositive_integer(b):
        raise PoleError(f"hyp0f1 parameter pole at b = {b}")
    b = complex(b)
    warr = np.asarray(w, dtype=complex)
    scalar_in = warr.ndim == 0
    if scalar_in:
        # plain python floats keep the compensated kernels allocation-free
        wre, wim = float(warr.real), float(warr.imag)
        shape = ()
    else:
        wre = np.ascontiguousarray(warr.real)
        wim = np.ascontiguousarray(warr.imag)
        shape = warr.shape

    term = cdd_one_like(shape)
    total = cdd_one_like(shape)
    maxterm = np.ones(shape) if shape else 1.0
    b_dd = cdd(b)
    one = cdd(1.0 + 0.0j)
    ok_streak = 0
    for n in range(ctl.max_terms):
        b_plus_n = (dd_add_d(b_dd[0], float(n)), b_dd[1])
        den = cdd_mul(b_plus_n, cdd(complex(n + 1.0)))
        fac = cdd_div(one, den)  # scalar dd, shared across the whole batch
        term = cdd_mul_c(term, wre, wim)
        term = cdd_mul(term, fac)
        total = cdd_add(total, term)
        tabs = cdd_abs(term)
        maxterm = np.maximum(maxterm, tabs)
        scale = np.maximum(cdd_abs(total), maxterm * (_DD_EPS / ctl.rel_tol))
        if np.all(tabs <= ctl.rel_tol * scale):
            ok_streak += 1
            if ok_streak >= 2:
                out = cdd_to_complex(total)
                if not np.all(np.isfinite(out)):
                    raise NumericalError("hyp0f1 produced a non-finite value")
                return complex(out) if scalar_in else out
        else:
            ok_streak = 0
    raise ConvergenceError(
        f"hyp0f1(b={b}) did not converge within {ctl.max_terms} terms "
        f"(max |w| = {float(np.max(np.abs(warr))):.3g})"
    )


def _hyp0f1_noise(w) -> float:
    """Relative accuracy floor of hyp0f1 at argument w (cancellation estimate)."""
    x = 2.0 * math.sqrt(abs(w))
    return math.exp(min(x, 700.0)) * _DD_EPS


def kummer_m(a, b, z, ctl: SeriesControl | None = None) -> complex:
    """Kummer confluent function M(a, b, z) by its dd-compensated series."""
    ctl = ctl or _DEFAULT_CTL
    if _is_nonpositive_integer(b):
        raise PoleError(f"kummer_m parameter pole at b = {b}")
    a = complex(a)
    b = complex(b)
    z = complex(z)

    term = cdd(1.0 + 0.0j)
    total = cdd(1.0 + 0.0j)
    maxterm = 1.0
    ok_streak = 0
    for n in range(ctl.max_terms):
        # factor (a+n) / ((b+n)(n+1)), all in dd
        num = cdd(a + n)
        den = cdd_mul(cdd(b + n), cdd(complex(n + 1.0)))
        fac = cdd_div(num, den)
        term = cdd_mul_c(term, z.real, z.imag)
        term = cdd_mul(term, fac)
        total = cdd_add(total, term)
        tabs = cdd_abs(term)
        maxterm = max(maxterm, tabs)
        scale = max(cdd_abs(total), maxterm * (_DD_EPS / ctl.rel_tol))
        if tabs <= ctl.rel_tol * scale:
            ok_streak += 1
            if ok_streak >= 2:
                out = cdd_to_complex(total)
                noise = maxterm * _DD_EPS
                if abs(out) > 0.0 and noise / abs(out) > 1e-6:
                    raise ConvergenceError(
                        f"kummer_m cancellation beyond compensated range at |z| = {abs(z):.3g}"
                    )
                return _check_finite(complex(out), "kummer_m")
        else:
            ok_streak = 0
    raise ConvergenceError(f"kummer_m did not converge within {ctl.max_terms} terms (|z| = {abs(z):.3g})")


# ----------------------------------------------------------------- Bessel

def bessel_j(order, x: float, ctl: SeriesControl | None = None) -> complex:
    """Bessel function of the first kind, complex order, real x >= 0.

    Ascending series (x/2)^order / Gamma(order+1) * 0F1(order+1; -x^2/4)
    below ``ctl.asymptotic_switch``, Hankel expansion above; falls back
    to the compensated series when the expansion cannot reach tolerance
    (order too large for the argument).  Principal branch of (x/2)^order.
    """
    ctl = ctl or _DEFAULT_CTL
    order = complex(order)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("bessel_j requires finite x")
    if x < 0.0:
        raise DomainError("bessel_j requires x >= 0")
    if x == 0.0:
        if order == 0:
            return 1.0 + 0.0j
        if order.real > 0.0:
            return 0.0 + 0.0j
        raise DomainError("bessel_j at x = 0 needs Re(order) > 0 or order = 0")
    if _is_nonpositive_integer(order):
        # J_{-n}(x) = (-1)^n J_n(x)
        n = int(round(-order.real))
        return (-1.0) ** n * bessel_j(complex(n), x, ctl)

    if x > ctl.asymptotic_switch:
        val = _bessel_hankel(order, x, ctl)
        if val is not None:
            return val
        if x > 64.0:
            raise ConvergenceError(
                f"bessel_j: order {order} too large for the asymptotic expansion at x = {x:.3g} "
                "and x beyond the compensated-series range"
            )
    return _bessel_series(order, x, ctl)


def _bessel_series(order: complex, x: float, ctl: SeriesControl) -> complex:
    # |J| grows like exp(pi |Im order| / 2); the prefactor overflows first
    pref_log = order * math.log(x / 2.0) - log_gamma(order + 1.0)
    if pref_log.real > 700.0:
        raise NumericalError(
            f"bessel_j({order}, {x}) exceeds the float64 range "
            "(|Im order| too large for direct evaluation)")
    pref = cmath.exp(pref_log)
    f = hyp0f1(order + 1.0, -0.25 * x * x, ctl)
    return _check_finite(pref * f, "bessel_j")


def _bessel_hankel(order: complex, x: float, ctl: SeriesControl) -> complex | None:
    """Large-x expansion; returns None when it cannot reach tolerance."""
    mu4 = 4.0 * order * order
    p = 1.0 + 0.0j
    q = 0.0 + 0.0j
    c = 1.0 + 0.0j  # c_k = a_k(order) / x^k with alternating signs folded in
    best = 1.0
    converged = False
    for k in range(1, 60):
        c = c * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        mag = abs(c)
        if mag >= best and k > 2:
            break
        best = min(best, mag)
        if k % 2 == 1:
            q += c * (-1.0) ** ((k - 1) // 2)
        else:
            p += c * (-1.0) ** (k // 2)
        if mag <= 0.1 * ctl.rel_tol:
            converged = True
            break
    if not converged and best > 100.0 * max(ctl.rel_tol, 1e-14):
        return None
    omega = x - order * (math.pi / 2.0) - math.pi / 4.0
    out = cmath.sqrt(2.0 / (math.pi * x)) * (cmath.cos(omega) * p - cmath.sin(omega) * q)
    return _check_finite(out, "bessel_j")


# -------------------------------------------------------------- Whittaker

def whittaker_w(kw, mw, z, ctl: SeriesControl | None = None) -> complex:
    """Whittaker function W_{kw, mw}(z), principal branches.

    Uses the two-term Kummer connection formula for moderate |z| (needs
    2*mw non-integer) and the asymptotic expansion
    e^{-z/2} z^{kw} (1 + sum c_n z^{-n}) beyond ``asymptotic_switch``.
    """
    ctl = ctl or _DEFAULT_CTL
    kw = complex(kw)
    mw = complex(mw)
    z = complex(z)
    if z == 0.0:
        raise DomainError("whittaker_w requires z != 0")
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchError("whittaker_w argument on the negative real axis")

    two_mw = 2.0 * mw
    if two_mw.imag == 0.0 and two_mw.real == round(two_mw.real):
        if kw == 0.0 and mw == 0.5:
            return cmath.exp(-0.5 * z)  # W_{0,1/2}(z) = e^{-z/2}
        raise DomainError("whittaker_w: integer 2*mw unsupported (except kw=0, mw=1/2)")

    if abs(z) >= ctl.asymptotic_switch:
        return _whittaker_asymptotic(kw, mw, z, ctl)

    c1 = complex_gamma(-two_mw) * reciprocal_gamma(0.5 - mw - kw)
    c2 = complex_gamma(two_mw) * reciprocal_gamma(0.5 + mw - kw)
    m1 = kummer_m(0.5 + mw - kw, 1.0 + two_mw, z, ctl)
    m2 = kummer_m(0.5 - mw - kw, 1.0 - two_mw, z, ctl)
    logz = cmath.log(z)
    out = cmath.exp(-0.5 * z) * (
        c1 * cmath.exp((0.5 + mw) * logz) * m1 + c2 * cmath.exp((0.5 - mw) * logz) * m2
    )
    return _check_finite(out, "whittaker_w")


def _whittaker_asymptotic(kw: complex, mw: complex, z: complex, ctl: SeriesControl) -> complex:
    a = 0.5 + mw - kw
    b = 0.5 - mw - kw
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    best_total = total
    best = 1.0
    achieved = 1.0
    for s in range(1, 2 * ctl.max_terms):
        term = term * (a + s - 1.0) * (b + s - 1.0) / (s * (-z))
        mag = abs(term)
        if mag >= best and s > 2:
            achieved = best
            total = best_total
            break
        total += term
        if mag < best:
            best = mag
            best_total = total
        if mag <= ctl.rel_tol * abs(total):
            achieved = mag
            break
    if achieved / max(abs(total), 1e-300) > 1e-6:
        raise ConvergenceError(
            f"whittaker_w asymptotic expansion stalled at relative {achieved:.3g} for |z| = {abs(z):.3g}"
        )
    out = cmath.exp(-0.5 * z + kw * cmath.log(z)) * total
    return _check_finite(out, "whittaker_w")
