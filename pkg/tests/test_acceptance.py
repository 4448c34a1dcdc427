"""Acceptance suite: the eight exit criteria at full scale.

Each test runs one criterion from the validation module (the same code
the `weyl-bianchi validate` command executes), prints a PASS/FAIL line
with the measured values, and asserts both the criterion and its
runtime budget.
"""

import pytest

from weyl_bianchi.harness import validation as v

BUDGETS_S = {
    "unitarity_and_composition": 30.0,
    "conformally_flat_exactness": 10.0,
    "stiff_exactness": 60.0,
    "short_time_order": 30.0,
    "conformal_limit_continuity": 30.0,
    "asymptotic_matching": 30.0,
    "dyson_convergence": 60.0,
    "specfun_conformance": 10.0,
}


def _run(criterion):
    import time

    t0 = time.perf_counter()
    res = criterion("full")
    res.runtime_s = time.perf_counter() - t0
    status = "PASS" if res.passed else "FAIL"
    print(f"\n{status}  {res.name}  ({res.runtime_s:.1f} s)  "
          f"measured={res.measured}  tolerance={res.tolerance}")
    assert res.passed, f"{res.name} failed: {res.measured} vs {res.tolerance}"
    assert res.runtime_s <= BUDGETS_S[res.name], (
        f"{res.name} exceeded its runtime budget: {res.runtime_s:.1f} s")
    return res


def test_criterion_1_unitarity_and_composition():
    res = _run(v.unitarity_and_composition)
    assert res.measured["n_cases"] >= 200
    assert res.measured["max_unitarity_defect"] <= 1e-8
    assert res.measured["max_composition_error"] <= 1e-8


def test_criterion_2_conformally_flat_exactness():
    res = _run(v.conformally_flat_exactness)
    assert res.measured["n_cases"] >= 50
    assert res.measured["max_entrywise_error"] <= 1e-8


def test_criterion_3_stiff_exactness():
    res = _run(v.stiff_exactness)
    assert res.measured["max_relative_error"] <= 1e-6
    assert res.measured["max_ode_residual"] <= 1e-7


def test_criterion_4_short_time_order():
    res = _run(v.short_time_order)
    for delta in (0.3, 0.5, 0.8):
        slope = res.measured[f"slope_delta_{delta}"]
        assert abs(slope - 2.0 * delta) <= 0.10 * 2.0 * delta


def test_criterion_5_conformal_limit_continuity():
    res = _run(v.conformal_limit_continuity)
    errs = [res.measured[f"err_eps_{e}"] for e in (1e-2, 3e-3, 1e-3)]
    assert errs[0] > errs[1] > errs[2]


def test_criterion_6_asymptotic_matching():
    res = _run(v.asymptotic_matching)
    assert res.measured["c_fit"] <= 3.0
    assert res.measured["slope_rel_err_j1"] <= 0.05
    assert res.measured["slope_rel_err_j2"] <= 0.05


def test_criterion_7_dyson_convergence():
    res = _run(v.dyson_convergence)
    for order in (1, 2, 3):
        slope = res.measured[f"slope_order_{order}"]
        assert abs(slope - (order + 1)) <= 0.15 * (order + 1)


def test_criterion_8_specfun_conformance():
    res = _run(v.specfun_conformance)
    assert res.measured["gamma_reflection"] <= 1e-10
    assert res.measured["bessel_half_integer"] <= 1e-12
    assert res.measured["bessel_recurrence"] <= 1e-9
    assert res.measured["bessel_wronskian"] <= 1e-9
    assert res.measured["kummer_derivative"] <= 1e-7
    assert res.measured["reference_values"] <= 1e-9


def test_full_suite_report_machine_readable(tmp_path):
    out = tmp_path / "report.json"
    report, all_passed = v.run_validation_suite("quick", out_path=str(out))
    assert all_passed
    assert out.exists()
    assert report["schema"] == 1
    assert {c["name"] for c in report["criteria"]} == set(BUDGETS_S)
