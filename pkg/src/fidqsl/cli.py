"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 state-invariant failure,
4 numerical failure, 5 a hard assertion failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dynamics, qsl, verify
from .densmat import check_density
from .errors import CoarseGridError, InvalidStateError, NumericalError
from .fidelity import FidelityKind, evaluate
from .formats import StateFileError, fmt, load_state
from .sweep import ConfigError, SweepConfig, rows_to_csv, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_STATE, EXIT_NUMERIC, EXIT_ASSERT = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return dims


def cmd_fidelity(args) -> int:
    kind = FidelityKind.parse(args.kind)
    a = check_density(load_state(args.state_a))
    b = check_density(load_state(args.state_b))
    _emit(fmt(evaluate(kind, a, b)) + "\n", args.out)
    return EXIT_OK


def _quad(args) -> qsl.QuadratureConfig:
    return qsl.QuadratureConfig(n_points=args.n_points, refinement=args.refinement,
                                purity_guard=args.purity_guard, tol=args.quad_tol)


def cmd_bound(args) -> int:
    cfg = _quad(args)
    rho0 = dynamics.werner_state(args.r)
    p = dynamics.ReservoirParams(args.gamma0, args.lam, args.omega0)
    model = dynamics.FrozenModel() if args.frozen else None
    if args.method == "newf":
        out = qsl.qsl_time(rho0, p, args.tau, cfg, model=model).as_dict()
    elif args.method == "mt-pure":
        out = {"tau": args.tau, "tau_qsl": qsl.mt_pure_bound(rho0, p, args.tau, cfg, model=model)}
    else:
        out = {"tau": args.tau, "kind": FidelityKind.parse(args.kind).value,
               "tau_qsl": qsl.generic_fidelity_bound(args.kind, rho0, p, args.tau, cfg,
                                                     model=model)}
    _emit(json.dumps(out, indent=1, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = SweepConfig.load(args.config)
    rows = run_sweep(cfg, threads=args.threads)
    out = args.out or cfg.output_path
    _emit(rows_to_csv(rows), out)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Run one property check.

    Reports are tagged "hard" (must be clean), "expected-violation" (must
    show a violation) or "conjecture" (violations are findings only).
    """
    prop = args.property
    kind = FidelityKind.parse(args.kind)
    hard_fail = False
    reports = []
    if prop == "jozsa":
        res = verify.check_jozsa(kind, args.trials, args.dims, args.seed, tol=args.tol)
        for axiom, rep in res.items():
            expect_violation = kind is FidelityKind.F1 and axiom == "A4"
            reports.append((rep, "expected-violation" if expect_violation else "hard"))
            hard_fail |= rep.violated != expect_violation
    elif prop == "supermultiplicative":
        rep = verify.check_supermultiplicative(args.trials, (args.dims[0], args.dims[-1]),
                                               args.seed)
        reports.append((rep, "hard"))
        hard_fail |= rep.violated or rep.details["purity_inequality_violations"] > 0
    elif prop == "monotonicity":
        rep = verify.check_monotonicity(kind, args.trials, args.dims, args.seed, tol=args.tol)
        reports.append((rep, "conjecture"))
        hard_fail |= not rep.details["fixed_ok"]
    elif prop == "monotonicity-fixed":
        rep = verify.check_monotonicity_fixed()
        reports.append((rep, "hard"))
        hard_fail |= rep.violated
    elif prop == "concavity":
        rep = verify.check_concavity(args.trials, args.dims, args.seed, tol=args.tol, kind=kind)
        reports.append((rep, "conjecture"))
    elif prop == "derivative-chain":
        p = dynamics.ReservoirParams(args.gamma0, args.lam)
        rep = verify.check_derivative_chain(dynamics.werner_state(args.r), p, args.tau,
                                            args.samples)
        reports.append((rep, "hard"))
        hard_fail |= rep.violated
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown property {prop!r}")
    payload = {
        "property": prop,
        "kind": kind.value,
        "status": "fail" if hard_fail else "pass",
        "reports": [dict(r.as_dict(), expectation=e) for r, e in reports],
    }
    _emit(json.dumps(payload, indent=1) + "\n", args.out)
    return EXIT_ASSERT if hard_fail else EXIT_OK


def cmd_gmodel(args) -> int:
    p = dynamics.ReservoirParams(args.gamma0, args.lam)
    h = args.t_max / args.steps
    if args.steps < 100 or h * p.lam > 0.1:
        raise CoarseGridError(f"{args.steps} steps over t_max={args.t_max} is too coarse "
                              "(need >= 100 steps and >= 10 per 1/lambda)")
    t = np.linspace(0.0, args.t_max, args.steps + 1)
    g = np.asarray(dynamics.g_function(t, p))
    gd = np.asarray(dynamics.g_dot(t, p))
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.where(np.abs(g) < 1e-12, np.nan, -2.0 * np.real(gd / g))
    cols = ["t", "re_g", "im_g", "abs_g2", "gamma_t"]
    data = [t, g.real, g.imag, np.abs(g) ** 2, rate]
    footer = ""
    if args.oracle:
        _, gv = dynamics.solve_g_volterra(p, args.t_max, args.steps)
        cols += ["volterra_re_g", "volterra_im_g"]
        data += [gv.real, gv.imag]
        footer = f"# max_deviation={fmt(np.max(np.abs(gv - g)))}\n"
    lines = [",".join(cols)]
    for row in zip(*data):
        lines.append(",".join(fmt(v) for v in row))
    _emit("\n".join(lines) + "\n" + footer, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the flags with suppressed defaults so they do not
        # overwrite values given before the subcommand name
        g = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=dflt(0), help="master RNG seed")
        g.add_argument("--threads", type=int, default=dflt(1), help="worker threads for sweeps")
        g.add_argument("--out", default=dflt(None), help="write output here instead of stdout")
        return g

    common = global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="fidqsl", parents=[global_flags(suppress=False)],
                                     description="Fidelities, speed-limit bounds and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    kinds = [k.value for k in FidelityKind]
    sp = sub.add_parser("fidelity", parents=[common], help="fidelity of two state files")
    sp.add_argument("kind", choices=kinds)
    sp.add_argument("state_a")
    sp.add_argument("state_b")
    sp.set_defaults(func=cmd_fidelity)

    def add_quad(p):
        p.add_argument("--n-points", type=int, default=2001)
        p.add_argument("--refinement", type=int, default=1)
        p.add_argument("--purity-guard", type=float, default=1e-9)
        p.add_argument("--quad-tol", type=float, default=1e-6)

    sp = sub.add_parser("bound", parents=[common], help="speed-limit bound for a Werner state")
    sp.add_argument("--r", type=float, required=True, help="Werner weight in [0, 1]")
    sp.add_argument("--gamma0", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--omega0", type=float, default=1.0)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--method", choices=["newf", "mt-pure", "generic"], default="newf")
    sp.add_argument("--kind", choices=kinds, default="f1", help="fidelity for --method generic")
    sp.add_argument("--frozen", action="store_true", help="replace the dynamics by rho(t) = rho0")
    add_quad(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("sweep", parents=[common], help="gamma0 x r sweep to CSV")
    sp.add_argument("config")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", parents=[common], help="property checks")
    sp.add_argument("property", choices=["jozsa", "supermultiplicative", "monotonicity",
                                         "monotonicity-fixed", "concavity", "derivative-chain"])
    sp.add_argument("--kind", choices=kinds, default="newf")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--dims", type=_dims, default=(2, 3, 4))
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--r", type=float, default=0.5)
    sp.add_argument("--gamma0", type=float, default=5.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--samples", type=int, default=500)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gmodel", parents=[common], help="tabulate G(t) and the decay rate")
    sp.add_argument("--gamma0", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--t-max", type=float, default=10.0)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--oracle", action="store_true", help="add the numerical Volterra solution")
    sp.set_defaults(func=cmd_gmodel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateFileError, ConfigError, CoarseGridError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidStateError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_STATE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
