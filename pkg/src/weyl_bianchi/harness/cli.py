"""Command-line interface.

Subcommands:

    evolve   one propagator from an INI config (JSON to stdout or --out)
    sweep    grid sweep to CSV
    validate run the validation suite (exit 1 on any failure)
    specfun  point evaluation of the special-function kernels (debugging)

Exit codes: 0 success, 1 validation failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError, WeylBianchiError
from ..specfun import SeriesControl, bessel_j, complex_gamma, kummer_m, whittaker_w
from .config import load_request, load_sweep, request_to_dict, sweep_to_dict
from .requests import METHODS, evolve_request
from .sweep import run_sweep, thread_count, write_csv_path
from .validation import run_validation_suite


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl-bianchi",
        description="Evolution operators for massless spinor modes in "
                    "planar power-law anisotropic backgrounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ev = sub.add_parser("evolve", help="evaluate one evolution operator")
    p_ev.add_argument("--config", default=None, help="INI config path (defaults apply if omitted)")
    p_ev.add_argument("--method", default=None, choices=METHODS,
                      help="override the configured method")
    p_ev.add_argument("--out", default=None, help="write the JSON result here instead of stdout")

    p_sw = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    p_sw.add_argument("--config", required=True, help="INI config with a [sweep] section")
    p_sw.add_argument("--out", required=True, help="output CSV path")

    p_va = sub.add_parser("validate", help="run the validation suite")
    p_va.add_argument("--profile", default="full", choices=("quick", "full"))
    p_va.add_argument("--out", default=None, help="write the JSON report here")

    p_sf = sub.add_parser("specfun", help="special-function utilities")
    sf_sub = p_sf.add_subparsers(dest="specfun_command", required=True)
    p_eval = sf_sub.add_parser(
        "eval", help="evaluate one kernel at a point",
        epilog="values with a leading minus need the equals form, e.g. --kw=-0.25-0.5j")
    p_eval.add_argument("--fn", required=True,
                        choices=("gamma", "bessel_j", "kummer_m", "whittaker_w"))
    p_eval.add_argument("--z", default=None, help="complex argument, e.g. '1.5+2j'")
    p_eval.add_argument("--order", default=None, help="complex order for bessel_j")
    p_eval.add_argument("--x", type=float, default=None, help="real argument for bessel_j")
    p_eval.add_argument("--a", default=None, help="complex parameter a for kummer_m")
    p_eval.add_argument("--b", default=None, help="complex parameter b for kummer_m")
    p_eval.add_argument("--kw", default=None, help="complex first index for whittaker_w")
    p_eval.add_argument("--mw", default=None, help="complex second index for whittaker_w")
    p_eval.add_argument("--rel-tol", type=float, default=1e-14)
    return parser


def _cplx(raw: str | None, what: str) -> complex:
    if raw is None:
        raise ConfigError(f"missing required argument {what}")
    try:
        return complex(raw.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"{what} = {raw!r} is not a complex number") from exc


def _cmd_evolve(args) -> int:
    req = load_request(args.config, args.method)
    res = evolve_request(req)
    payload = {"config": request_to_dict(req), "result": res.to_jsonable()}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_sweep(args.config)
    rows = run_sweep(cfg, threads=thread_count())
    write_csv_path(rows, cfg.methods, args.out)
    sys.stderr.write(f"wrote {len(rows)} rows to {args.out}\n")
    sys.stderr.write(json.dumps({"config": sweep_to_dict(cfg)}) + "\n")
    return 0


def _cmd_validate(args) -> int:
    _report, all_passed = run_validation_suite(
        args.profile, out_path=args.out, echo=lambda line: print(line))
    return 0 if all_passed else 1


def _cmd_specfun_eval(args) -> int:
    ctl = SeriesControl(rel_tol=args.rel_tol)
    if args.fn == "gamma":
        val = complex_gamma(_cplx(args.z, "--z"))
    elif args.fn == "bessel_j":
        if args.x is None:
            raise ConfigError("bessel_j needs --x")
        val = bessel_j(_cplx(args.order, "--order"), args.x, ctl)
    elif args.fn == "kummer_m":
        val = kummer_m(_cplx(args.a, "--a"), _cplx(args.b, "--b"), _cplx(args.z, "--z"), ctl)
    else:
        val = whittaker_w(_cplx(args.kw, "--kw"), _cplx(args.mw, "--mw"),
                          _cplx(args.z, "--z"), ctl)
    print(json.dumps({"fn": args.fn, "re": val.real, "im": val.imag}))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evolve":
            return _cmd_evolve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_specfun_eval(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except WeylBianchiError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
