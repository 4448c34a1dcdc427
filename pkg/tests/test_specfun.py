"""Special-function kernel tests.

Pinned values come from the arbitrary-precision generators in
tools/oracles/ (independent implementations of the defining series);
identities are checked on grids/random draws with fixed seeds.
"""

import math

import numpy as np
import pytest

from weyl_bianchi.errors import BranchError, ConvergenceError, DomainError, PoleError
from weyl_bianchi.specfun import (
    SeriesControl,
    bessel_j,
    complex_gamma,
    hyp0f1,
    kummer_m,
    log_gamma,
    reciprocal_gamma,
    whittaker_w,
)

# ---------------------------------------------------------------- fixtures

# tools/oracles/gamma_values.py
GAMMA_VALUES = [
    (0.5 + 3.0j, 0.0214456705524306460595528 + 0.006865364837261677914238494j),
    (-2.5 + 0.5j, -0.3338752035224323374032773 - 0.2064573079636084149182876j),
    (10.0 - 20.0j, -0.1337139778284720315195293 - 0.1236749752712452495891617j),
    (0.5 + 40.0j, 9.529551049431158831338054e-28 + 8.737568201838441790105278e-28j),
    (1.0j, -0.1549498283018106851249551 - 0.4980156681183560427136911j),
]

# tools/oracles/bessel_series.py
BESSEL_VALUES = [
    (0.5 + 1.0j, 1.0, 0.7812044742794555417239892 - 0.7494820474731410495852659j),
    (0.3 - 2.0j, 7.5, 2.924165488174958733129526 + 0.9279990297534188621775837j),
    (0.5 + 4.0j, 30.0, -36.11586058749206412969744 + 3.995901390355282951404149j),
    (-0.5 - 1.5j, 12.0, 1.023794367847096475051519 + 0.7857635099343246656526832j),
]

# tools/oracles/kummer_series.py
KUMMER_VALUES = [
    (-0.25, 1.5, 2.0j, 1.090462897508568936363535 - 0.3026347617369188015641522j),
    (0.5 + 0.5j, 1.25 - 0.25j, -3.0 + 4.0j,
     0.2055489726769634297334045 - 0.2377446468920359783220682j),
    (0.25 - 1.0j, 1.5, 55.0j, -0.8373633385680634288063468 - 2.805884534519375652640889j),
]

# tools/oracles/whittaker_connection.py
WHITTAKER_VALUES = [
    (-0.25 - 0.5j, 0.25, 2.0j, -0.2288561342459095051225703 - 1.363416478146673396853142j),
    (0.75 - 0.8j, 0.25, -12.0j, -1.718410773108608979010743 + 0.4378391246763186132161148j),
    (-0.25 - 1.5j, 0.25, 40.0j, 2.664739127306507827787101 - 2.954730682126482778031089j),
]


# ------------------------------------------------------------------ gamma

def test_gamma_basic_points():
    assert complex_gamma(1.0) == pytest.approx(1.0, rel=1e-12)
    assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    # |gamma(i)|^2 = pi / sinh(pi)
    assert abs(complex_gamma(1j)) ** 2 == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-12)


@pytest.mark.parametrize("z,want", GAMMA_VALUES)
def test_gamma_reference_values(z, want):
    assert complex_gamma(z) == pytest.approx(want, rel=1e-9)


def test_gamma_reflection_identity():
    for y in np.linspace(0.1, 10.0, 40):
        val = abs(complex_gamma(1j * y)) ** 2 * y * math.sinh(math.pi * y)
        assert abs(val - math.pi) <= 1e-10


def test_gamma_poles():
    for z in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            complex_gamma(z)
    assert reciprocal_gamma(-3.0) == 0.0


def test_log_gamma_large_imaginary_no_overflow():
    # |gamma(0.5 + 500i)| underflows; the log stays finite
    lg = log_gamma(0.5 + 500.0j)
    assert math.isfinite(lg.real) and math.isfinite(lg.imag)
    assert lg.real < -700


# ----------------------------------------------------------------- bessel

def test_bessel_trivial_points():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(2.5, 0.0) == 0.0
    x = math.pi / 2.0
    assert bessel_j(0.5, x) == pytest.approx(2.0 / math.pi, rel=1e-12)


@pytest.mark.parametrize("order,x,want", BESSEL_VALUES)
def test_bessel_reference_values(order, x, want):
    assert bessel_j(order, x) == pytest.approx(want, rel=1e-9)


def test_bessel_half_integer_closed_form():
    for x in np.linspace(0.1, 30.0, 60):
        want = math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
        assert abs(bessel_j(0.5, x) - want) <= 1e-12


def test_bessel_negative_integer_order_reflection():
    for n, x in [(1, 3.0), (3, 5.0), (6, 11.0)]:
        assert bessel_j(-n, x) == pytest.approx((-1) ** n * bessel_j(n, x), rel=1e-12)


def test_bessel_recurrence_complex_order():
    rng = np.random.default_rng(42)
    for _ in range(40):
        lam = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        x = rng.uniform(0.5, 20.0)
        lhs = bessel_j(lam - 1, x) + bessel_j(lam + 1, x)
        rhs = 2.0 * lam / x * bessel_j(lam, x)
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1.0)


def test_bessel_wronskian_with_step_study():
    # cross-order Wronskian; central differences at steps h and h/2 with
    # Richardson extrapolation, and the pair must agree
    for lam, x in [(0.5 + 2.0j, 3.0), (0.3 - 1.0j, 8.0), (1.5 + 0.5j, 15.0)]:
        results = []
        for h in (4e-3, 2e-3):
            def dj(order, xx):
                d1 = (bessel_j(order, xx + h) - bessel_j(order, xx - h)) / (2 * h)
                d2 = (bessel_j(order, xx + h / 2) - bessel_j(order, xx - h / 2)) / h
                return (4.0 * d2 - d1) / 3.0

            results.append(bessel_j(lam, x) * dj(-lam, x) - bessel_j(-lam, x) * dj(lam, x))
        want = -2.0 * np.sin(np.pi * lam) / (np.pi * x)
        scale = max(abs(want), 1.0)
        assert abs(results[0] - results[1]) <= 1e-9 * scale
        assert abs(results[1] - want) <= 1e-9 * scale


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)
    with pytest.raises(DomainError):
        bessel_j(-0.5, 0.0)
    with pytest.raises(ConvergenceError):
        bessel_j(0.5, 5.0, SeriesControl(max_terms=10))


def test_bessel_huge_imaginary_order_overflows_loudly():
    # |J| ~ exp(pi |Im order| / 2) leaves float64 around |Im order| ~ 450
    from weyl_bianchi.errors import NumericalError

    with pytest.raises(NumericalError):
        bessel_j(0.5 + 500.0j, 1.0)


def test_bessel_series_asymptotic_branches_agree():
    ctl_series = SeriesControl(asymptotic_switch=1e9)
    ctl_asym = SeriesControl(asymptotic_switch=20.0)
    for order in (0.5 + 1.0j, 1.5, -0.3 + 2.0j):
        for x in (26.0, 40.0):
            a = bessel_j(order, x, ctl_series)
            b = bessel_j(order, x, ctl_asym)
            assert a == pytest.approx(b, rel=1e-10)


# ------------------------------------------------------------------ 0F1

def test_hyp0f1_vectorized_matches_scalar():
    b = 1.5 - 2.0j
    w = np.array([-0.5, -25.0, -400.0], dtype=complex)
    vec = hyp0f1(b, w)
    for wi, vi in zip(w, vec):
        assert hyp0f1(b, complex(wi)) == pytest.approx(vi, rel=1e-13)


def test_hyp0f1_parameter_pole():
    with pytest.raises(PoleError):
        hyp0f1(-2.0, 1.0 + 0.0j)


# ----------------------------------------------------------------- kummer

def test_kummer_trivial_identities():
    # a = b collapses to exp(z)
    assert kummer_m(1.7, 1.7, 1.0) == pytest.approx(math.e, rel=1e-12)
    z = 0.3 - 2.0j
    assert kummer_m(1.0 + 0.5j, 1.0 + 0.5j, z) == pytest.approx(np.exp(z), rel=1e-12)
    # a = 0 truncates
    assert kummer_m(0.0, 2.5, 10.0j) == 1.0


@pytest.mark.parametrize("a,b,z,want", KUMMER_VALUES)
def test_kummer_reference_values(a, b, z, want):
    assert kummer_m(a, b, z) == pytest.approx(want, rel=1e-9)


def test_kummer_derivative_identity():
    for a, b, z in [(0.5 + 0.5j, 1.5, 1.0 + 2.0j), (-0.25, 1.25 - 0.5j, -2.0 + 1.0j)]:
        h = 1e-4
        fd = (kummer_m(a, b, z + h) - kummer_m(a, b, z - h)) / (2 * h)
        want = a / b * kummer_m(a + 1, b + 1, z)
        assert abs(fd - want) <= 1e-7 * max(abs(want), 1.0)


def test_kummer_parameter_pole():
    with pytest.raises(PoleError):
        kummer_m(0.5, -1.0, 1.0)


# -------------------------------------------------------------- whittaker

def test_whittaker_exponential_identity():
    assert whittaker_w(0.0, 0.5, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-14)


def test_whittaker_leading_asymptotics_ratio():
    kw, mw = -0.25 - 0.5j, 0.25
    z = 200.0j
    ratio = whittaker_w(kw, mw, z) / (np.exp(-z / 2.0) * np.exp(kw * np.log(z)))
    assert abs(ratio - 1.0) <= 1e-2


@pytest.mark.parametrize("kw,mw,z,want", WHITTAKER_VALUES)
def test_whittaker_reference_values(kw, mw, z, want):
    assert whittaker_w(kw, mw, z) == pytest.approx(want, rel=1e-9)


def test_whittaker_branch_and_domain_errors():
    with pytest.raises(BranchError):
        whittaker_w(-0.25, 0.25, -3.0)
    with pytest.raises(DomainError):
        whittaker_w(-0.25, 0.25, 0.0)
    with pytest.raises(DomainError):
        whittaker_w(0.5, 0.5, 2.0j)  # integer 2*mw without the exact shortcut


def test_whittaker_branch_continuity_across_switch():
    kw, mw = -0.25 - 0.8j, 0.25
    lo = whittaker_w(kw, mw, 24.9j, SeriesControl(asymptotic_switch=1e9))
    hi = whittaker_w(kw, mw, 24.9j, SeriesControl(asymptotic_switch=20.0))
    assert lo == pytest.approx(hi, rel=1e-9)


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=5)
