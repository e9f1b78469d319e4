"""Command line interface: series, verify, sudden-death, selftest.

Every command is a deterministic function of its arguments (seed
included); CSV and JSON payloads are byte-identical across reruns.
Exit codes: 0 success, 1 verification/selftest failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .assistance import OPT_TOL, OptimizerConfig
from .channels import FAMILY_NAMES, GAD, ChannelFamily
from .laws import ALG_TOL, LAWS, evolve_series, run_verify_batch, sudden_death_time
from .selftest import run_selftest
from .states import generalized_ghz

_CHANNEL_ALIASES = {"gad": GAD}


def _channel_name(text: str) -> str:
    name = _CHANNEL_ALIASES.get(text, text)
    if name not in FAMILY_NAMES:
        raise argparse.ArgumentTypeError(
            f"unknown channel {text!r}; options: {', '.join(FAMILY_NAMES)} (alias: gad)"
        )
    return name


def _grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    if not start < stop:
        raise argparse.ArgumentTypeError(f"grid start must be below stop, got {text!r}")
    if steps < 2:
        raise argparse.ArgumentTypeError(f"grid needs at least 2 steps, got {steps}")
    if start < 0:
        raise argparse.ArgumentTypeError(f"gamma_t is nonnegative, got start {start}")
    return np.linspace(start, stop, steps)


def _bracket(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"bracket must be lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad bracket {text!r}: {exc}") from None
    if not 0 <= lo < hi:
        raise argparse.ArgumentTypeError(f"need 0 <= lo < hi, got {text!r}")
    return lo, hi


def _alpha(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a float, got {text!r}") from None
    if not 0.0 < val < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {val}")
    return val


def _family(args) -> ChannelFamily:
    if args.channel == GAD:
        if args.p is None:
            raise ValueError("--p is required for generalized-amplitude-damping")
        return ChannelFamily(args.channel, p=args.p)
    return ChannelFamily(args.channel)


def _usage_error(msg: str) -> int:
    print(f"eoa: error: {msg}", file=sys.stderr)
    return 2


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eoa", description=__doc__)
    parser.add_argument("--version", action="version", version=f"eoa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="factor and assisted product along a gamma_t grid")
    p.add_argument("--channel", type=_channel_name, required=True)
    p.add_argument("--p", type=float, default=None, help="stationary parameter for gad")
    p.add_argument("--alpha", type=_alpha, required=True, help="amplitude of |000> in the probe state")
    p.add_argument("--grid", type=_grid, default="0:3:301", help="start:stop:steps (linspace, inclusive)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("verify", help="random-instance scan of one evolution law")
    p.add_argument("law", choices=LAWS)
    p.add_argument("--n", type=int, default=20, help="number of instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=2, help="local dimension for theorem2 / remark-d2")
    p.add_argument("--n3", type=int, default=2, help="dimension of the assisting party")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--opt-tol", type=float, default=OPT_TOL)
    p.add_argument("--alg-tol", type=float, default=ALG_TOL)
    p.add_argument("--out", default=None, help="JSON records path (default: stdout)")

    p = sub.add_parser("sudden-death", help="locate the first zero of the channel factor")
    p.add_argument("--channel", type=_channel_name, required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--bracket", type=_bracket, default=(0.0, 10.0))
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", default=None, help="JSON result path (default: stdout)")

    p = sub.add_parser("selftest", help="run the built-in invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=("kraus",), default=None,
                   help="deliberately corrupt one check (negative testing)")
    return parser


def cmd_series(args) -> int:
    family = _family(args)
    grid = args.grid if isinstance(args.grid, np.ndarray) else _grid(args.grid)
    points = evolve_series(generalized_ghz(args.alpha), family, grid)
    if args.format == "csv":
        lines = ["gamma_t,factor,eoa_product,channel,alpha"]
        for pt in points:
            lines.append(
                f"{_fmt(pt.gamma_t)},{_fmt(pt.factor)},{_fmt(pt.eoa_product)},{family.name},{_fmt(args.alpha)}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        payload = {
            "version": __version__,
            "config": {
                "command": "series",
                "channel": family.name,
                "p": family.p,
                "alpha": args.alpha,
                "grid": [float(t) for t in grid],
            },
            "points": [
                {"gamma_t": pt.gamma_t, "factor": pt.factor, "eoa_product": pt.eoa_product}
                for pt in points
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    if args.n < 1:
        return _usage_error(f"--n must be >= 1, got {args.n}")
    if args.law in ("theorem2", "remark-d2") and args.d < 2:
        return _usage_error(f"--d must be >= 2, got {args.d}")
    if args.n3 < 2:
        return _usage_error(f"--n3 must be >= 2, got {args.n3}")
    cfg = OptimizerConfig(restarts=args.restarts, max_iters=args.iters, seed=args.seed)
    records = run_verify_batch(
        args.law, args.n, args.seed, cfg, d=args.d, n3=args.n3,
        opt_tol=args.opt_tol, alg_tol=args.alg_tol,
    )
    config_echo = {
        "command": "verify",
        "law": args.law,
        "n": args.n,
        "seed": args.seed,
        "d": args.d,
        "n3": args.n3,
        "restarts": args.restarts,
        "iters": args.iters,
        "opt_tol": args.opt_tol,
        "alg_tol": args.alg_tol,
    }
    blobs = []
    for rec in records:
        blob = rec.to_dict()
        blob["version"] = __version__
        blob["config"] = config_echo
        blobs.append(blob)
    _emit(json.dumps(blobs, indent=2) + "\n", args.out)

    n_pass = sum(r.passed for r in records)
    n_cert = sum(r.certified for r in records)
    cert_fail = sum(r.certified and not r.passed for r in records)
    adv_fail = sum((not r.certified) and (not r.passed) for r in records)
    max_gap = max(abs(r.gap) for r in records)
    print(
        f"verify {args.law}: {n_pass}/{args.n} passed, {n_cert} certified "
        f"({cert_fail} certified failures, {adv_fail} advisory), max |gap| {max_gap:.3e}"
    )
    return 1 if cert_fail else 0


def cmd_sudden_death(args) -> int:
    family = _family(args)
    if args.tol <= 0:
        return _usage_error(f"--tol must be positive, got {args.tol}")
    try:
        res = sudden_death_time(family, bracket=args.bracket, tol=args.tol)
    except ValueError as exc:
        return _usage_error(str(exc))
    payload = {
        "version": __version__,
        "config": {
            "command": "sudden-death",
            "channel": family.name,
            "p": family.p,
            "bracket": [args.bracket[0], args.bracket[1]],
            "tol": args.tol,
        },
        "t_star": res.t_star,
        "residual": res.residual,
    }
    print(_fmt(res.t_star) if res.t_star is not None else "none")
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_selftest(args) -> int:
    ok = run_selftest(args.seed, inject_fault=args.inject_fault)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "series":
            return cmd_series(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "sudden-death":
            return cmd_sudden_death(args)
        return cmd_selftest(args)
    except ValueError as exc:
        return _usage_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
