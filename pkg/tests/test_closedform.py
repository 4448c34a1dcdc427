"""Bessel-kernel propagator: identities, limits, and asymptotics."""

import cmath
import math

import numpy as np
import pytest

from weyl_bianchi.background import BackgroundParams, TimeWindow, WaveVector
from weyl_bianchi.closedform import (
    QuadControl,
    approx_In,
    asymptotic_propagator,
    chirality_flip,
    closed_propagator,
    short_time_propagator,
)
from weyl_bianchi.errors import DomainError
from weyl_bianchi.exact_models import (
    STIFF_BACKGROUND,
    rw_propagator,
    stiff_limits,
    stiff_solutions,
)
from weyl_bianchi.propagation import dyson_In, evolve_ode

STIFF_K = WaveVector(1.0, 0.0, 1.0)


def test_identity_limits():
    bg = BackgroundParams(1.0, 0.5)
    ident = np.eye(2)
    r = closed_propagator(bg, WaveVector(0.0, 0.0, 2.0), TimeWindow(0.0, 1.0))
    assert np.allclose(r.propagator.matrix, ident)
    r = closed_propagator(bg, STIFF_K, TimeWindow(1.0, 1.0))
    assert np.allclose(r.propagator.matrix, ident)


def test_structure_is_built_in():
    bg = BackgroundParams(1.0, 0.5)
    p = closed_propagator(bg, WaveVector(1.0, -2.0, 0.7), TimeWindow(0.0, 0.8)).propagator
    m = p.matrix
    assert m[1, 1] == m[0, 0].conjugate()
    assert m[1, 0] == -m[0, 1].conjugate()


def test_short_time_match_at_small_time():
    # delta = 1/2 point check: the closed kernel reduces to the short-time
    # operator with relative corrections O(s^{2 delta}) = O(s)
    bg = BackgroundParams(1.0, 0.5)
    t = 0.01
    diff = (closed_propagator(bg, STIFF_K, TimeWindow(0.0, t)).propagator.matrix
            - short_time_propagator(bg, STIFF_K, t).propagator.matrix)
    s2d = t  # s^{2 delta} with s = t, delta = 1/2
    assert np.max(np.abs(diff)) <= 2.0 * s2d
    assert np.max(np.abs(diff)) > 1e-6 * s2d  # the bound is not vacuous


def test_short_time_operator_values():
    bg = BackgroundParams(1.0, 0.5)
    r = short_time_propagator(bg, WaveVector(0.0, 0.3, 0.4), 0.0)
    assert np.allclose(r.propagator.matrix, np.eye(2))
    # real k_plus puts the transverse kick on the off-diagonal, real
    t = 0.01
    r = short_time_propagator(bg, WaveVector(0.0, 0.3, 0.4), t)
    want = 0.3 * t ** 0.5 / (1.0 * 0.5)
    assert r.propagator.k12 == pytest.approx(want, rel=1e-14)
    assert not r.warnings
    r = short_time_propagator(bg, WaveVector(0.0, 5.0, 0.0), 1.0)
    assert r.warnings  # coupling above the smallness threshold


def test_short_time_slope_single_delta():
    bg = BackgroundParams(1.0, 0.6)  # delta = 0.4
    k = WaveVector(0.4, 0.3, 0.8)
    svals = np.logspace(-4, -2, 6)
    errs = []
    for s in svals:
        diff = (closed_propagator(bg, k, TimeWindow(0.0, float(s))).propagator.matrix
                - short_time_propagator(bg, k, float(s)).propagator.matrix)
        errs.append(np.max(np.abs(diff)))
    slope = np.polyfit(np.log(svals), np.log(errs), 1)[0]
    assert abs(slope - 0.8) <= 0.08


def test_conformal_limit_monotone():
    k = WaveVector(0.012, -0.016, 0.3)
    ref = rw_propagator(k, 0.0, 1.0).matrix
    errs = []
    for eps in (1e-2, 3e-3, 1e-3):
        bg = BackgroundParams(0.5, 1.0 - 0.5 * (1.0 - eps))
        got = closed_propagator(bg, k, TimeWindow(0.0, 1.0)).propagator.matrix
        errs.append(np.max(np.abs(got - ref)))
    assert errs[0] > errs[1] > errs[2]


def test_delta_gap_rejection():
    # exactly 1e-3 away from the conformally flat family is still accepted
    eps = 1e-3
    bg = BackgroundParams(0.5, 1.0 - 0.5 * (1.0 - eps))
    closed_propagator(bg, WaveVector(0.01, 0.0, 0.1), TimeWindow(0.0, 1.0))
    with pytest.raises(DomainError):
        bg = BackgroundParams(0.5, 1.0 - 0.5 * (1.0 - 1e-4))
        closed_propagator(bg, WaveVector(0.01, 0.0, 0.1), TimeWindow(0.0, 1.0))
    with pytest.raises(DomainError):
        closed_propagator(BackgroundParams(0.5, 0.4), WaveVector(1, 0, 0),
                          TimeWindow(0.0, 1.0))  # delta > 1


def test_negative_delta_warns_but_runs():
    bg = BackgroundParams(0.5, 1.2)  # delta = -0.4
    r = closed_propagator(bg, WaveVector(0.5, 0.2, 0.6), TimeWindow(0.5, 1.5))
    assert any("unvalidated" in w for w in r.warnings)
    ode = evolve_ode(bg, WaveVector(0.5, 0.2, 0.6), TimeWindow(0.5, 1.5)).propagator
    # still a sane approximation of the true operator
    assert np.max(np.abs(r.propagator.matrix - ode.matrix)) < 0.2


def test_agrees_with_ode_at_weak_coupling():
    # the kernel replacement perturbs the second-order coupling term at
    # relative O(1), so the discrepancy is bounded by kappa^2 at weak
    # transverse coupling (measured empirically, no tighter claim made)
    bg = BackgroundParams(1.0, 0.5)
    k = WaveVector(0.05, 0.02, 1.0)
    w = TimeWindow(0.0, 1.5)
    pc = closed_propagator(bg, k, w).propagator.matrix
    po = evolve_ode(bg, k, w).propagator.matrix
    assert np.max(np.abs(pc - po)) < k.kappa ** 2


def test_reference_time_phase_consistent_with_ode():
    # a nonzero phase reference time enters only through the constant
    # phase of k_plus; both evolution routes must carry it identically
    bg = BackgroundParams(1.0, 0.5)
    k = WaveVector(0.05, 0.02, 1.0)
    base = None
    for tta in (0.0, 0.1, 0.2):
        w = TimeWindow(0.2, 1.5, t_tilde_a=tta)
        diff = np.max(np.abs(closed_propagator(bg, k, w).propagator.matrix
                             - evolve_ode(bg, k, w).propagator.matrix))
        base = diff if base is None else base
        assert diff == pytest.approx(base, rel=1e-6)
        assert diff < k.kappa ** 2


# ------------------------------------------------------------- asymptotic

def test_asymptotic_operator_limits():
    k_small = WaveVector(1e-8, 0.0, 1.0)
    r = asymptotic_propagator(STIFF_BACKGROUND, k_small, 50.0)
    assert r.propagator.k11 == pytest.approx(1.0, abs=1e-8)
    # late-time off-diagonal modulus approaches sqrt(pi) kappa / sqrt(2 |k3|)
    k = WaveVector(0.3, 0.4, 2.0)
    want = math.sqrt(math.pi) * k.kappa / math.sqrt(2.0 * abs(k.k3))
    r1 = asymptotic_propagator(STIFF_BACKGROUND, k, 1e4)
    r2 = asymptotic_propagator(STIFF_BACKGROUND, k, 1e6)
    assert abs(abs(r1.propagator.k12) - want) > abs(abs(r2.propagator.k12) - want)
    assert abs(r2.propagator.k12) == pytest.approx(want, rel=1e-3)


def test_asymptotic_operator_domain():
    with pytest.raises(DomainError):
        asymptotic_propagator(BackgroundParams(0.5, 0.5), WaveVector(1, 0, 1), 50.0)
    with pytest.raises(DomainError):
        asymptotic_propagator(STIFF_BACKGROUND, WaveVector(1, 0, 1), 1.0)
    with pytest.raises(DomainError):
        asymptotic_propagator(STIFF_BACKGROUND, WaveVector(1, 0, 0), 50.0)


def test_closed_matches_asymptotic_within_budget():
    # late-time comparison at k = (1, 1, 2), t = 50: discrepancies are
    # bounded by the dropped O(eta) and O(1/(k3 t)) terms
    k = WaveVector(1.0, 1.0, 2.0)
    t = 50.0
    eta = k.kappa ** 2 / (2.0 * k.k3)
    budget = 3.0 * (abs(eta) + 1.0 / (abs(k.k3) * t))
    pc = closed_propagator(STIFF_BACKGROUND, k, TimeWindow(0.0, t),
                           QuadControl(rel_tol=1e-8)).propagator.matrix
    pa = asymptotic_propagator(STIFF_BACKGROUND, k, t).propagator.matrix
    assert np.max(np.abs(pc - pa)) <= budget


def test_asymptotic_phase_law_against_stiff_exact():
    # residual phase between the numerically evaluated kernel propagator
    # and the exact stiff solution grows like -+ eta ln(2|k3|t); the
    # instantaneous frequency eta ln(2|k3|t)/t dies off at large times
    k = WaveVector(0.12, 0.09, 1.0)
    eta = k.kappa ** 2 / (2.0 * k.k3)
    ts = np.geomspace(1e2, 1e4, 7)
    qc = QuadControl(rel_tol=3e-7, max_subdivisions=6000)
    resid = {1: [], 2: []}
    for t in ts:
        kk = closed_propagator(STIFF_BACKGROUND, k, TimeWindow(0.0, float(t)), qc).propagator
        for j in (1, 2):
            phi0 = stiff_limits(k, 0.0, "initial", j).as_array()
            phi_c = kk.apply(phi0)
            phi_e = stiff_solutions(k, float(t), j).as_array()
            comp = 1 if j == 1 else 0
            resid[j].append(phi_e[comp] * phi_c[comp].conjugate())
    lg = np.log(2.0 * abs(k.k3) * ts)
    for j, target in ((1, -eta), (2, eta)):
        slope = np.polyfit(lg, np.unwrap(np.angle(np.array(resid[j]))), 1)[0]
        assert abs(slope - target) <= 0.05 * abs(target)


# ---------------------------------------------------------------- helpers

def test_chirality_flip_involution_and_definition():
    bg = BackgroundParams(1.0, 0.5)
    w = TimeWindow(0.0, 0.7)
    k = WaveVector(0.8, -0.6, 1.1)
    flip = chirality_flip(closed_propagator)
    double = chirality_flip(flip)
    assert double(bg, k, w).propagator == closed_propagator(bg, k, w).propagator
    assert flip(bg, k, w).propagator == closed_propagator(bg, k.negated(), w).propagator
    # kappa = 0: both chiralities evolve trivially
    k0 = WaveVector(0.0, 0.0, 1.5)
    assert flip(bg, k0, w).propagator == closed_propagator(bg, k0, w).propagator


def test_approx_In_matches_exact_at_first_order():
    bg = BackgroundParams(1.0, 0.5)
    k = WaveVector(0.8, 0.2, 1.3)
    w = TimeWindow(0.0, 0.6)
    assert approx_In(bg, k, 1, w) == pytest.approx(dyson_In(bg, k, 1, w), rel=1e-10)


def test_approx_In_second_order_kernel_replacement():
    # the exponential-kernel replacement is exact as delta -> 1 and stays
    # a small relative perturbation at delta = 1/2 short times
    k = WaveVector(0.5, 0.0, 0.8)
    bg_near = BackgroundParams(0.5, 1.0 - 0.5 * 0.99)  # delta = 0.99
    w = TimeWindow(0.25, 1.0)
    a2 = approx_In(bg_near, k, 2, w)
    e2 = dyson_In(bg_near, k, 2, w)
    assert abs(a2 - e2) <= 2e-2 * abs(e2)
    bg_half = BackgroundParams(1.0, 0.5)
    w_short = TimeWindow(0.0, 0.05)
    a2 = approx_In(bg_half, k, 2, w_short)
    e2 = dyson_In(bg_half, k, 2, w_short)
    assert abs(a2 - e2) <= 0.35 * abs(e2)
    with pytest.raises(DomainError):
        approx_In(bg_half, k, 3, w_short)


def test_quad_control_validation():
    with pytest.raises(DomainError):
        QuadControl(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadControl(max_subdivisions=2)
