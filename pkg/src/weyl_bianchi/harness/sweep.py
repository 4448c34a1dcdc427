"""Parameter sweeps over (mu, nu, k, t_a, t) grids with CSV output.

Row order is the lexicographic product of the grids in the order
mu, nu, k1, k2, k3, t_a, t, so identical configs give byte-identical
files.  All floats are written with 17 significant digits, which
round-trips float64 exactly.  Grid points may run in parallel
(WEYL_BIANCHI_THREADS) but assembly preserves order.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
from concurrent.futures import ProcessPoolExecutor

from ..background import BackgroundParams, TimeWindow, WaveVector
from ..errors import ConfigError, DomainError
from .config import SCHEMA_VERSION, SweepConfig
from .requests import EvolutionRequest, evolve_request

_FLOAT_FMT = "%.17g"

_POINT_COLUMNS = ("mu", "nu", "k1", "k2", "k3", "t_tilde_a", "t_a", "t")


def thread_count() -> int:
    raw = os.environ.get("WEYL_BIANCHI_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"WEYL_BIANCHI_THREADS = {raw!r} is not an integer")
    return max(1, n)


def grid_points(cfg: SweepConfig):
    """Validated grid points in deterministic order."""
    points = []
    for mu, nu, k1, k2, k3, t_a, t in itertools.product(
            cfg.mu, cfg.nu, cfg.k1, cfg.k2, cfg.k3, cfg.t_a, cfg.t):
        if t < t_a:
            raise ConfigError(f"grid point has t = {t} < t_a = {t_a}")
        if (k1, k2, k3) == (0.0, 0.0, 0.0):
            raise ConfigError("grid contains the zero wave vector")
        points.append((mu, nu, k1, k2, k3, cfg.t_tilde_a, t_a, t))
    return points


def _columns(methods) -> list[str]:
    cols = list(_POINT_COLUMNS)
    for m in methods:
        cols += [f"{m}_k11_re", f"{m}_k11_im", f"{m}_k12_re", f"{m}_k12_im",
                 f"{m}_unitarity_defect"]
    if "ode" in methods and "closed" in methods:
        cols += ["err_abs_k11", "err_abs_k12"]
    return cols


def _evaluate_point(args):
    cfg, point = args
    mu, nu, k1, k2, k3, t_tilde_a, t_a, t = point
    row = dict(zip(_POINT_COLUMNS, point))
    props = {}
    for m in cfg.methods:
        req = EvolutionRequest(
            background=BackgroundParams(mu, nu),
            wave=WaveVector(k1, k2, k3),
            window=TimeWindow(t_a=t_a, t=t, t_tilde_a=t_tilde_a),
            method=m, ode=cfg.ode, quad=cfg.quad, series=cfg.series,
        )
        try:
            res = evolve_request(req)
        except DomainError as exc:
            raise ConfigError(
                f"method {m!r} rejects grid point "
                f"(mu={mu:g}, nu={nu:g}, k=({k1:g},{k2:g},{k3:g}), "
                f"t_a={t_a:g}, t={t:g}): {exc}") from exc
        p = res.propagator
        props[m] = p
        row[f"{m}_k11_re"] = p.k11.real
        row[f"{m}_k11_im"] = p.k11.imag
        row[f"{m}_k12_re"] = p.k12.real
        row[f"{m}_k12_im"] = p.k12.imag
        row[f"{m}_unitarity_defect"] = p.unitarity_defect
    if "ode" in props and "closed" in props:
        row["err_abs_k11"] = abs(props["closed"].k11 - props["ode"].k11)
        row["err_abs_k12"] = abs(props["closed"].k12 - props["ode"].k12)
    return row


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> list[dict]:
    points = grid_points(cfg)
    threads = thread_count() if threads is None else max(1, threads)
    jobs = [(cfg, p) for p in points]
    if threads == 1 or len(points) < 4:
        return [_evaluate_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_evaluate_point, jobs, chunksize=4))


def write_csv(rows: list[dict], methods, stream) -> None:
    cols = _columns(methods)
    stream.write(f"# schema={SCHEMA_VERSION}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_FLOAT_FMT % row[c] for c in cols])


def write_csv_path(rows: list[dict], methods, path: str) -> None:
    with open(path, "w", newline="") as fh:
        write_csv(rows, methods, fh)


def read_csv(path_or_stream) -> list[dict]:
    """Parse a sweep CSV back into float dicts (bit-exact round trip)."""
    if isinstance(path_or_stream, (str, os.PathLike)):
        with open(path_or_stream, "r", newline="") as fh:
            return read_csv(fh)
    stream = path_or_stream
    first = stream.readline()
    if not first.startswith("# schema="):
        raise ConfigError("missing schema header line")
    schema = int(first.strip().split("=", 1)[1])
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema {schema}")
    reader = csv.DictReader(stream)
    return [{k: float(v) for k, v in row.items()} for row in reader]


def rows_to_csv_text(rows: list[dict], methods) -> str:
    buf = io.StringIO()
    write_csv(rows, methods, buf)
    return buf.getvalue()
