"""Command-line front end emitting CSV data files.

Commands: isotropy, exact, semiclassical, wigner-slice, scaling.  Every file
starts with `#` metadata lines (tool version, full config echo, ISO-8601
timestamp unless --no-timestamp); values are written with 17 significant
digits so identical configs reproduce byte-identical files.  Exit codes:
0 success, 2 argument validation, 3 numerical failure (degraded optimizer
samples escalate only under --strict).
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .evolution import (
    NoMinimumError,
    ScalingError,
    default_time_window,
    find_minimum,
    initial_coset_point,
    scaling_study,
    squeezing_curve,
)
from .groupops import CosetPoint
from .irrep import space_for
from .kernel import kernel_for, quantum_wigner_slice
from .semiclassical import semiclassical_squeezing_curve, transported_wigner
from .squeezing import isotropy_samples

BACKEND_MAP = {"exact": "exact-kernel", "gauss": "gaussian-approx"}


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_csv(path: str, command: str, config: dict, columns, rows,
               footer=(), no_timestamp: bool = False) -> None:
    lines = [f"# su3squeeze {__version__}", f"# command: {command}"]
    cfg = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(config.items()))
    lines.append(f"# config: {cfg}")
    if not no_timestamp:
        lines.append(f"# generated: {datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    lines.extend(footer)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _lambda_list(text: str):
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad lambda list {text!r}") from exc
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("lambda values must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su3squeeze",
        description="Qutrit-ensemble squeezing: exact evolution, phase-space "
                    "transport, and figure data files.")
    parser.add_argument("--version", action="version",
                        version=f"su3squeeze {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, steps_default=150):
        p.add_argument("--lambda", dest="lam", type=_positive_int, required=True,
                       help="irrep label (positive integer)")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=_positive_int, default=1)
        p.add_argument("--strict", action="store_true",
                       help="escalate degraded numerical results to exit 3")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp line for byte-stable output")
        return p

    p = common(sub.add_parser("isotropy", help="variance of K_perp over random "
                                               "directions on a coherent state"))
    p.add_argument("--samples", type=_positive_int, required=True)

    p = common(sub.add_parser("exact", help="exact-evolution squeezing curve"))
    p.add_argument("--t-max", type=_positive_float, default=None)
    p.add_argument("--steps", type=_positive_int, default=150)

    p = common(sub.add_parser("semiclassical",
                              help="phase-space transported squeezing curve"))
    p.add_argument("--backend", choices=sorted(BACKEND_MAP), required=True)
    p.add_argument("--t-max", type=_positive_float, default=None)
    p.add_argument("--steps", type=_positive_int, default=150)
    p.add_argument("--grid", type=_positive_int, default=None,
                   help="beta-quadrature nodes for the moment fields")

    p = common(sub.add_parser("wigner-slice",
                              help="Wigner function on the alpha1=beta1=0 plane"))
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--evolution", choices=("quantum", "classical"), required=True)
    p.add_argument("--backend", choices=sorted(BACKEND_MAP), default="exact",
                   help="profile used by the classical transport")
    p.add_argument("--grid", type=_positive_int, default=96,
                   help="nodes per slice axis")

    p = sub.add_parser("scaling", help="t_min and depth scaling over lambda")
    p.add_argument("--lambdas", type=_lambda_list,
                   default=(10, 14, 20, 28, 40, 57, 80))
    p.add_argument("--steps", type=_positive_int, default=150)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--no-timestamp", action="store_true")
    return parser


def _cmd_isotropy(args) -> int:
    rng = np.random.default_rng(args.seed)
    omega = CosetPoint(rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi),
                       rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi))
    space = space_for(args.lam)
    samples = isotropy_samples(space, omega, args.samples,
                               seed=rng.integers(2**32))
    rows = [(i, d.alpha3, d.beta3, d.chi, v, abs(v - args.lam))
            for i, (d, v) in enumerate(samples)]
    max_dev = max(r[-1] for r in rows)
    config = dict(command="isotropy", **{"lambda": args.lam}, samples=args.samples,
                  seed=args.seed,
                  omega_alpha1=omega.alpha1, omega_beta1=omega.beta1,
                  omega_alpha2=omega.alpha2, omega_beta2=omega.beta2)
    _write_csv(args.out, "isotropy", config,
               ("sample", "alpha3", "beta3", "chi", "variance", "deviation"),
               rows, footer=(f"# max_deviation = {_fmt(max_dev)}",),
               no_timestamp=args.no_timestamp)
    if args.strict and max_dev > 1e-9:
        print(f"isotropy deviation {max_dev:.3e} exceeds 1e-9", file=sys.stderr)
        return 3
    return 0


def _curve_rows(curve, extra=()):
    rows = []
    for t, v, d in zip(curve.times, curve.min_variances, curve.best_directions):
        rows.append((float(t), float(v), d.alpha3, d.beta3, d.chi) + tuple(extra))
    return rows


def _cmd_exact(args) -> int:
    curve = squeezing_curve(args.lam, t_max=args.t_max, n_steps=args.steps,
                            threads=args.threads)
    config = {"lambda": args.lam, "steps": args.steps,
              "t_max": args.t_max if args.t_max is not None
              else default_time_window(args.lam),
              "seed": args.seed, "threads": args.threads}
    _write_csv(args.out, "exact", config,
               ("t", "min_variance", "alpha3", "beta3", "chi"),
               _curve_rows(curve), no_timestamp=args.no_timestamp)
    if args.strict and bool(np.any(curve.degraded)):
        print("optimizer reported degraded samples", file=sys.stderr)
        return 3
    return 0


def _cmd_semiclassical(args) -> int:
    backend = BACKEND_MAP[args.backend]
    curve = semiclassical_squeezing_curve(args.lam, backend, t_max=args.t_max,
                                          n_steps=args.steps, n_beta=args.grid)
    config = {"lambda": args.lam, "steps": args.steps, "backend": args.backend,
              "t_max": args.t_max if args.t_max is not None
              else default_time_window(args.lam),
              "grid": args.grid if args.grid else "auto",
              "seed": args.seed, "threads": args.threads}
    _write_csv(args.out, "semiclassical", config,
               ("t", "min_variance", "alpha3", "beta3", "chi", "backend"),
               _curve_rows(curve, extra=(backend,)),
               no_timestamp=args.no_timestamp)
    if args.strict and bool(np.any(curve.degraded)):
        print("optimizer reported degraded samples", file=sys.stderr)
        return 3
    return 0


def _cmd_wigner_slice(args) -> int:
    alpha2 = np.arange(args.grid) * (2.0 * np.pi / args.grid)
    beta2 = np.linspace(0.0, np.pi, args.grid)
    if args.evolution == "quantum":
        from .evolution import evolve, hamiltonian
        from .groupops import coherent_state_closed_form

        space = space_for(args.lam)
        kernel = kernel_for(args.lam)
        psi = coherent_state_closed_form(space, initial_coset_point())
        psi = evolve(psi, hamiltonian(space), args.t)
        values = quantum_wigner_slice(kernel, psi.amplitudes, alpha2, beta2)
    else:
        tw = transported_wigner(args.lam, BACKEND_MAP[args.backend])
        values = tw.evaluate_arrays(0.0, alpha2[:, None], beta2[None, :], args.t)
    rows = [(float(a), float(b), float(values[i, j]))
            for i, a in enumerate(alpha2) for j, b in enumerate(beta2)]
    config = {"lambda": args.lam, "t": args.t, "evolution": args.evolution,
              "backend": args.backend, "grid": args.grid, "seed": args.seed}
    _write_csv(args.out, "wigner-slice", config, ("alpha2", "beta2", "W"), rows,
               no_timestamp=args.no_timestamp)
    return 0


def _cmd_scaling(args, parser) -> int:
    if len(args.lambdas) < 2:
        parser.error("scaling requires at least two lambda values")
    try:
        study = scaling_study(args.lambdas, n_steps=args.steps,
                              threads=args.threads)
    except (ScalingError, NoMinimumError) as exc:
        print(f"scaling failed: {exc}", file=sys.stderr)
        return 3
    rows = [(r.lam, r.t_min, r.v_min, r.v_min / r.lam, r.degraded_samples)
            for r in study.rows]
    config = {"lambdas": ",".join(str(v) for v in args.lambdas),
              "steps": args.steps, "seed": args.seed, "threads": args.threads}
    footer = (f"# exponent_t = {_fmt(study.exponent_t)}",
              f"# exponent_v = {_fmt(study.exponent_v)}")
    _write_csv(args.out, "scaling", config,
               ("lambda", "t_min", "v_min", "v_min_over_lambda",
                "degraded_samples"),
               rows, footer=footer, no_timestamp=args.no_timestamp)
    if args.strict and any(r.degraded_samples for r in study.rows):
        print("optimizer reported degraded samples", file=sys.stderr)
        return 3
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "isotropy":
            return _cmd_isotropy(args)
        if args.command == "exact":
            return _cmd_exact(args)
        if args.command == "semiclassical":
            return _cmd_semiclassical(args)
        if args.command == "wigner-slice":
            return _cmd_wigner_slice(args)
        if args.command == "scaling":
            return _cmd_scaling(args, parser)
    except NoMinimumError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
