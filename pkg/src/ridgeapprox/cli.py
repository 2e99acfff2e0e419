"""Command-line driver: rate sweeps, certificates, norms and covering nets.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .errors import InvalidArgument, NumericalError
from .experiments import (ENTROPY_LB, MAUREY, STRATIFIED, ExperimentConfig, rows_to_csv,
                          run_rate_experiment, write_svg)
from .numerics.weights import BOCHNER_RIESZ, LEBESGUE

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _ints(text: str):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with default values for these flags")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--weight", choices=[LEBESGUE, BOCHNER_RIESZ], default=LEBESGUE)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--svg", help="also write a log-log plot to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ridgeapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ridgeapprox ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maurey", help="Maurey sampling error sweep")
    _common(p)
    p.add_argument("--ns", type=_ints, default=(16, 32, 64, 128, 256))
    p.add_argument("--n-atoms", type=int, default=200)

    p = sub.add_parser("compress", help="stratified compression error sweep")
    _common(p)
    p.add_argument("--ns", type=_ints, default=(16, 32, 64, 128, 256))
    p.add_argument("--n-atoms", type=int, default=200)

    p = sub.add_parser("entropy-lb", help="certified entropy lower bounds over a grid of N")
    _common(p)
    p.add_argument("--Ns", type=_ints, default=(8, 16, 32, 64))
    p.add_argument("--a", type=float, default=None, help="shrink factor (bisection when omitted)")

    p = sub.add_parser("k1norm", help="K_1 norm of a 1-D profile")
    _common(p)
    p.add_argument("--profile", choices=["relu", "cos", "poly"], default="cos")
    p.add_argument("--shift", type=float, default=0.0, help="relu: knot position")
    p.add_argument("--power", type=int, default=1, help="relu: exponent")
    p.add_argument("--freq", type=float, default=0.5, help="cos: t -> cos(2 pi freq t)")
    p.add_argument("--coeffs", default="0,1", help="poly: ascending coefficients")

    p = sub.add_parser("spectral-norm", help="spectral Barron integral of a Fourier density")
    _common(p)
    p.add_argument("--density", choices=["gaussian", "exponential"], default="gaussian")
    p.add_argument("--param", type=float, default=10.0, help="gaussian width / exponential rate")
    p.add_argument("--R", type=float, default=10.0, help="truncation radius")

    p = sub.add_parser("superposition", help="ridge superposition bound of a 2-D Gaussian density")
    _common(p)
    p.add_argument("--param", type=float, default=1.0, help="gaussian width")
    p.add_argument("--angular-nodes", type=int, default=64)
    p.add_argument("--R", type=float, default=8.0)

    p = sub.add_parser("covernet", help="brute-force covering net of Sigma_{n,M}")
    _common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--M", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.1)

    p = sub.add_parser("rates", help="all three sweeps and the exponent ordering")
    _common(p)
    p.add_argument("--ns", type=_ints, default=(16, 32, 64, 128, 256))
    p.add_argument("--Ns", type=_ints, default=(8, 16, 32, 64))
    p.add_argument("--n-atoms", type=int, default=200)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv):
    """Re-parse with defaults taken from --config (explicit flags still win)."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        doc = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"cannot read config {args.config!r}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidArgument("config must be a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, val in doc.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise InvalidArgument(f"unknown config key {key!r}")
        defaults[dest] = tuple(val) if isinstance(val, list) else val
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_value(args, value, **meta):
    doc = {"value": value, **meta}
    if args.format == "csv":
        cols = list(doc)
        _emit(args, rows_to_csv(cols, [doc]))
    else:
        _emit(args, json.dumps(doc) + "\n")


def _sweep(args, mode, grid_key):
    cfg_kw = dict(d=args.d, k=args.k, seed=args.seed, trials=args.trials, weight=args.weight)
    if mode == ENTROPY_LB:
        cfg_kw.update(N_grid=args.Ns, a=args.a)
    else:
        cfg_kw.update(n_grid=args.ns, n_atoms=args.n_atoms)
    cfg = ExperimentConfig(**cfg_kw)
    res = run_rate_experiment(cfg, mode, echo=lambda s: print(s, file=sys.stderr))
    if args.format == "json":
        _emit(args, json.dumps(res.summary(), indent=2) + "\n")
    else:
        _emit(args, res.to_csv())
    if args.svg:
        write_svg(res, args.svg)
    return res


def _cmd_k1norm(args):
    from .norms import k1_norm_1d
    from .piecewise import PiecewisePoly
    if args.profile == "relu":
        f = PiecewisePoly.ramp(-args.shift, args.power)
        label = f"max(0, t - {args.shift})^{args.power}"
    elif args.profile == "poly":
        c = [float(t) for t in args.coeffs.split(",")]
        f = PiecewisePoly.from_pieces([-1.0, 1.0], [c])
        label = f"poly{c}"
    else:
        w = 2 * np.pi * args.freq
        f = [lambda t, j=j: (w ** j) * np.cos(w * np.asarray(t) + j * np.pi / 2) for j in range(args.k + 2)]
        label = f"cos(2 pi {args.freq} t)"
    _emit_value(args, k1_norm_1d(f, args.k), profile=label, k=args.k)


def _cmd_spectral(args):
    from .norms import exponential_density, gaussian_density, spectral_barron_norm
    F = gaussian_density(args.param, args.d) if args.density == "gaussian" else exponential_density(args.param)
    _emit_value(args, spectral_barron_norm(F, args.s, args.R), density=args.density,
                param=args.param, s=args.s, truncation_radius=args.R, d=F.d)


def _cmd_superposition(args):
    from .norms import gaussian_density, ridge_superposition_bound
    if args.d != 2:
        raise InvalidArgument("the superposition bound is implemented for d = 2")
    F = gaussian_density(args.param, 2)
    val = ridge_superposition_bound(F, args.k, args.angular_nodes, R=args.R)
    _emit_value(args, val, density="gaussian", param=args.param, k=args.k,
                angular_nodes=args.angular_nodes, truncation_radius=args.R)


def _cmd_covernet(args):
    from .entropy.covering import build_covering_net
    from .stratified import default_chart
    net = build_covering_net(default_chart(args.d, args.k), args.n, args.M, args.eps, args.seed, args.weight)
    doc = {"n": args.n, "M": args.M, "epsilon_dict": args.eps, **net.__dict__}
    if args.format == "json":
        _emit(args, json.dumps(doc) + "\n")
    else:
        _emit(args, rows_to_csv(list(doc), [doc]))


def _cmd_rates(args):
    out = {}
    base = dict(d=args.d, k=args.k, seed=args.seed, trials=args.trials, weight=args.weight,
                n_grid=args.ns, n_atoms=args.n_atoms, N_grid=args.Ns)
    for mode in (MAUREY, STRATIFIED, ENTROPY_LB):
        res = run_rate_experiment(ExperimentConfig(**base), mode, echo=lambda s: print(s, file=sys.stderr))
        out[mode] = res.summary()
    slopes = {m: out[m]["fitted_slope"] for m in out}
    if None not in slopes.values():
        out["ordering_holds"] = bool(slopes[ENTROPY_LB] <= slopes[MAUREY] <= 0
                                     and slopes[STRATIFIED] < slopes[MAUREY])
    if args.format == "json":
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        rows = [{"mode": m, "theoretical_exponent": out[m]["theoretical_exponent"],
                 "fitted_slope": out[m]["fitted_slope"], "abs_difference": out[m]["abs_difference"]}
                for m in (MAUREY, STRATIFIED, ENTROPY_LB)]
        _emit(args, rows_to_csv(list(rows[0]), rows))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if args.command == "maurey":
            _sweep(args, MAUREY, "ns")
        elif args.command == "compress":
            _sweep(args, STRATIFIED, "ns")
        elif args.command == "entropy-lb":
            _sweep(args, ENTROPY_LB, "Ns")
        elif args.command == "k1norm":
            _cmd_k1norm(args)
        elif args.command == "spectral-norm":
            _cmd_spectral(args)
        elif args.command == "superposition":
            _cmd_superposition(args)
        elif args.command == "covernet":
            _cmd_covernet(args)
        elif args.command == "rates":
            _cmd_rates(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID
    except (InvalidArgument, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
