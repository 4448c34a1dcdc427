"""Harness: bispinor assembly, request dispatch, config, sweeps, CLI."""

import cmath
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from weyl_bianchi.background import BackgroundParams, TimeWindow, WaveVector
from weyl_bianchi.errors import ConfigError, DomainError
from weyl_bianchi.exact_models import STIFF_BACKGROUND, SpinorPair, stiff_solutions
from weyl_bianchi.harness.bispinor import reconstruct_bispinor
from weyl_bianchi.harness.config import SweepConfig, load_request, load_sweep, request_to_dict
from weyl_bianchi.harness.requests import EvolutionRequest, evolve_request
from weyl_bianchi.harness.sweep import (
    grid_points,
    read_csv,
    rows_to_csv_text,
    run_sweep,
    write_csv_path,
)

EVOLVE_INI = """
[background]
mu = 0.5
nu = 0.5

[wave]
k1 = 3.0
k2 = 4.0
k3 = 0.0

[window]
t_a = 0.0
t = {t}

[method]
name = ode
"""

SWEEP_INI = """
[sweep]
mu = 1.0
nu = 0.5
k1 = 0.3
k2 = 0.1
k3 = 0.8, 1.6
t_a = 0.0
t = 0.5, 1.5
methods = ode, closed
"""


# --------------------------------------------------------------- bispinor

def test_bispinor_structure_and_phases():
    bg = STIFF_BACKGROUND
    k = WaveVector(0.7, -1.3, 0.9)
    t = 1.7
    phi = stiff_solutions(k, t, 1)
    sample = reconstruct_bispinor(bg, k, -1, phi, (0.0, 0.0, 0.0), t)
    # negative chirality: lower pair is minus the upper pair
    assert sample.c3 == -sample.c1
    assert sample.c4 == -sample.c2
    # stiff background phases: |g| = t^2 and the stripped phases e^{+-i k3 t}
    g4 = t ** (-0.5)
    assert sample.c1 == pytest.approx(g4 * cmath.exp(1j * k.k3 * t) * phi.phi1, rel=1e-13)
    assert sample.c2 == pytest.approx(g4 * cmath.exp(-1j * k.k3 * t) * phi.phi2, rel=1e-13)


def test_bispinor_plane_wave_and_chirality_sign():
    bg = BackgroundParams(0.5, 0.5)  # |g| = t^3
    k = WaveVector(1.0, 2.0, 3.0)
    phi = SpinorPair(0.8 + 0.1j, -0.3 + 0.4j)
    pos = (0.2, -0.5, 1.0)
    t = 2.0
    plus = reconstruct_bispinor(bg, k, +1, phi, pos, t, c_norm=2.0)
    assert plus.c3 == plus.c1 and plus.c4 == plus.c2
    phase = 2.0 * cmath.exp(1j * (k.k1 * pos[0] + k.k2 * pos[1] + k.k3 * pos[2]))
    expected_mod = abs(phase) * t ** (-0.75) * abs(phi.phi1)
    assert abs(plus.c1) == pytest.approx(expected_mod, rel=1e-13)
    with pytest.raises(DomainError):
        reconstruct_bispinor(bg, k, 0, phi, pos, t)
    with pytest.raises(DomainError):
        reconstruct_bispinor(bg, k, 1, phi, pos, 0.0)


# --------------------------------------------------------------- requests

def test_dispatch_each_method_runs():
    k = WaveVector(0.4, 0.2, 1.0)
    cases = [
        ("ode", BackgroundParams(0.8, 0.3), TimeWindow(0.2, 1.0)),
        ("closed", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),
        ("dyson", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),
        ("rw", BackgroundParams(0.5, 0.5), TimeWindow(0.2, 1.0)),
        ("stiff", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),
        ("short", STIFF_BACKGROUND, TimeWindow(0.0, 0.05)),
        ("asymptotic", STIFF_BACKGROUND, TimeWindow(0.0, 40.0)),
    ]
    for method, bg, w in cases:
        res = evolve_request(EvolutionRequest(background=bg, wave=k, window=w, method=method))
        assert "unitarity_defect" in res.diagnostics or res.diagnostics
        payload = res.to_jsonable()
        assert set(payload) == {"k11", "k12", "k21", "k22", "diagnostics", "warnings"}


def test_dispatch_preconditions():
    k = WaveVector(0.4, 0.2, 1.0)
    bad = [
        ("rw", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),
        ("stiff", STIFF_BACKGROUND, TimeWindow(0.0, 1.0)),        # t_a = 0
        ("stiff", BackgroundParams(0.5, 0.5), TimeWindow(0.2, 1.0)),
        ("short", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),        # t_a != 0
        ("asymptotic", STIFF_BACKGROUND, TimeWindow(0.0, 0.5)),   # phase too small
        ("bogus", STIFF_BACKGROUND, TimeWindow(0.2, 1.0)),
    ]
    for method, bg, w in bad:
        with pytest.raises(DomainError):
            evolve_request(EvolutionRequest(background=bg, wave=k, window=w, method=method))


def test_dispatch_methods_agree_where_exact():
    k = WaveVector(0.4, 0.2, 1.0)
    w = TimeWindow(0.2, 1.0)
    r_ode = evolve_request(EvolutionRequest(background=STIFF_BACKGROUND, wave=k,
                                            window=w, method="ode"))
    r_stiff = evolve_request(EvolutionRequest(background=STIFF_BACKGROUND, wave=k,
                                              window=w, method="stiff"))
    assert np.max(np.abs(r_ode.propagator.matrix - r_stiff.propagator.matrix)) <= 1e-8


# ----------------------------------------------------------------- config

def test_load_request_defaults_and_file(tmp_path):
    req = load_request(None)
    assert req.method == "ode"
    assert req.background.mu == 0.5
    path = tmp_path / "run.ini"
    path.write_text(EVOLVE_INI.format(t=(math.pi / 20.0) ** 2))
    req = load_request(str(path))
    assert req.wave.k1 == 3.0 and req.wave.k2 == 4.0
    as_dict = request_to_dict(req)
    assert as_dict["schema"] == 1
    assert as_dict["background"]["delta"] == 1.0


def test_load_request_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_request(str(tmp_path / "missing.ini"))
    bad = tmp_path / "bad.ini"
    bad.write_text("[background]\nmu = zero\n")
    with pytest.raises(ConfigError):
        load_request(str(bad))
    neg = tmp_path / "neg.ini"
    neg.write_text("[background]\nmu = -1.0\n")
    with pytest.raises(ConfigError):
        load_request(str(neg))
    meth = tmp_path / "meth.ini"
    meth.write_text("[method]\nname = warp\n")
    with pytest.raises(ConfigError):
        load_request(str(meth))


def test_load_sweep(tmp_path):
    path = tmp_path / "sweep.ini"
    path.write_text(SWEEP_INI)
    cfg = load_sweep(str(path))
    assert cfg.k3 == [0.8, 1.6]
    assert cfg.methods == ["ode", "closed"]
    assert len(grid_points(cfg)) == 4
    with pytest.raises(ConfigError):
        load_sweep(None)  # no [sweep] section


# ------------------------------------------------------------------ sweep

def test_sweep_rows_and_roundtrip(tmp_path):
    cfg = load_sweep_from_text(tmp_path, SWEEP_INI)
    rows = run_sweep(cfg, threads=1)
    assert len(rows) == 4
    # singleton grid equals a direct evolve call
    req = EvolutionRequest(background=BackgroundParams(1.0, 0.5),
                           wave=WaveVector(0.3, 0.1, 0.8),
                           window=TimeWindow(0.0, 0.5), method="ode")
    direct = evolve_request(req).propagator
    assert rows[0]["ode_k11_re"] == pytest.approx(direct.k11.real, rel=1e-12)
    # err columns present because both methods requested
    assert "err_abs_k11" in rows[0] and "err_abs_k12" in rows[0]
    # determinism: identical config -> byte-identical CSV
    text1 = rows_to_csv_text(rows, cfg.methods)
    text2 = rows_to_csv_text(run_sweep(cfg, threads=1), cfg.methods)
    assert text1 == text2
    # round trip is bit-exact
    out = tmp_path / "sweep.csv"
    write_csv_path(rows, cfg.methods, str(out))
    back = read_csv(str(out))
    for row, parsed in zip(rows, back):
        for key, val in row.items():
            assert parsed[key] == float(val)


def load_sweep_from_text(tmp_path, text):
    path = tmp_path / "sweep_cfg.ini"
    path.write_text(text)
    return load_sweep(str(path))


def test_sweep_grid_validation(tmp_path):
    cfg = load_sweep_from_text(tmp_path, SWEEP_INI)
    bad = SweepConfig(mu=cfg.mu, nu=cfg.nu, k1=cfg.k1, k2=cfg.k2, k3=cfg.k3,
                      t_a=[2.0], t=[1.0], methods=["ode"])
    with pytest.raises(ConfigError):
        grid_points(bad)


def test_sweep_method_domain_mismatch_is_config_error(tmp_path):
    # the conformally flat family (delta = 1) is outside the closed form;
    # the offending grid point must be named
    cfg = SweepConfig(mu=[0.5], nu=[0.5], k1=[1.0], k2=[0.0], k3=[0.5],
                      t_a=[0.0], t=[1.0], methods=["closed"])
    with pytest.raises(ConfigError, match="grid point"):
        run_sweep(cfg, threads=1)


def test_sweep_parallel_matches_serial(tmp_path):
    cfg = load_sweep_from_text(tmp_path, SWEEP_INI)
    serial = rows_to_csv_text(run_sweep(cfg, threads=1), cfg.methods)
    parallel = rows_to_csv_text(run_sweep(cfg, threads=2), cfg.methods)
    assert serial == parallel


# -------------------------------------------------------------------- CLI

def _cli(*args):
    return subprocess.run([sys.executable, "-m", "weyl_bianchi.harness.cli", *args],
                          capture_output=True, text=True)


def test_cli_evolve_and_specfun(tmp_path):
    cfg = tmp_path / "run.ini"
    t = (math.pi / 20.0) ** 2
    cfg.write_text(EVOLVE_INI.format(t=t))
    out = tmp_path / "res.json"
    proc = _cli("evolve", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(out.read_text())
    assert payload["result"]["k12"][0] == pytest.approx(0.8, abs=1e-9)
    assert payload["result"]["k12"][1] == pytest.approx(0.6, abs=1e-9)

    proc = _cli("specfun", "eval", "--fn", "gamma", "--z", "0.5")
    assert proc.returncode == 0
    val = json.loads(proc.stdout)
    assert val["re"] == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    proc = _cli("specfun", "eval", "--fn", "whittaker_w", "--kw", "0", "--mw", "0.5",
                "--z", "3")
    assert json.loads(proc.stdout)["re"] == pytest.approx(math.exp(-1.5), rel=1e-12)


def test_cli_sweep_and_errors(tmp_path):
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(SWEEP_INI)
    out = tmp_path / "data.csv"
    proc = _cli("sweep", "--config", str(cfg), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    rows = read_csv(str(out))
    assert len(rows) == 4 and "closed_k12_im" in rows[0]

    proc = _cli("sweep", "--config", str(tmp_path / "nope.ini"), "--out", str(out))
    assert proc.returncode == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[sweep]\nmu = x\n")
    proc = _cli("sweep", "--config", str(bad), "--out", str(out))
    assert proc.returncode == 2


def test_cli_validate_quick(tmp_path):
    out = tmp_path / "report.json"
    proc = _cli("validate", "--profile", "quick", "--out", str(out))
    assert proc.returncode == 0, proc.stdout + proc.stderr
    report = json.loads(out.read_text())
    assert report["all_passed"] is True
    assert len(report["criteria"]) == 8
    assert all(("runtime_s" in c and "measured" in c) for c in report["criteria"])
