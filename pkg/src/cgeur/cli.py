"""Command-line front end.

Subcommands::

    cgeur bound    --gamma 7 --alpha 1 --n 3
    cgeur sweep    --gamma-min 0.1 --gamma-max 12 --points 500 --out fig1.csv
    cgeur crossing --a MAJ:4 --b B --bracket 3 6
    cgeur verify   --state random --trials 200 --delta 2 --delta-p 2 --n 6
    cgeur prolate  --c 1 --method nystrom --nodes 512

Exit codes: 0 success, 1 verification failure, 2 usage, 3 domain or
numerical error, 4 I/O error, 5 bracket error.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds, coarsegrain, prolate
from .errors import BracketError, CGEURError, DomainError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_BRACKET = 5

SWEEP_HEADER = "gamma,B,R,MAJ_2,MAJ_3,MAJ_4"
MAX_SWEEP_POINTS = 1_000_000


def fmt(x):
    """17 significant digits; round-trips through float()."""
    return format(float(x), ".17g")


def dumps(obj):
    """Serialize to compact JSON with floats at 17 significant digits."""
    if obj is None or (isinstance(obj, float) and not math.isfinite(obj)):
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _truncation(text):
    if text.lower() in ("inf", "unbounded", "none"):
        return None
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("n must be >= 2 or 'inf'")
    return n


def _order(text):
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


@dataclass
class SweepConfig:
    """Grid of gamma values and the bound columns evaluated on it."""

    gamma_min: float
    gamma_max: float
    points: int
    scale: str = "linear"
    alpha: float = 1.0
    families: tuple = field(default=(("B", None), ("R", None), ("MAJ", 2), ("MAJ", 3), ("MAJ", 4)))

    def __post_init__(self):
        if not 0 < self.gamma_min < self.gamma_max:
            raise DomainError("need 0 < gamma_min < gamma_max")
        if not 2 <= self.points <= MAX_SWEEP_POINTS:
            raise DomainError(f"points must lie in [2, {MAX_SWEEP_POINTS}]")
        if self.scale not in ("linear", "log"):
            raise DomainError("scale must be 'linear' or 'log'")

    def grid(self):
        if self.scale == "log":
            return np.geomspace(self.gamma_min, self.gamma_max, self.points)
        return np.linspace(self.gamma_min, self.gamma_max, self.points)

    def header(self):
        names = [name if n is None else f"{name}_{n}" for name, n in self.families]
        return ",".join(["gamma"] + names)

    def row(self, gamma):
        out = [gamma]
        for name, n in self.families:
            if name == "B":
                out.append(bounds.bound_B(gamma, self.alpha) if self.alpha >= 0.5 else math.nan)
            elif name == "R":
                out.append(bounds.bound_R(gamma))
            else:
                out.append(bounds.bound_majorization(gamma, self.alpha, n))
        return out


def sweep_rows(config):
    return [config.row(float(g)) for g in config.grid()]


def cmd_bound(args, out):
    result = bounds.evaluate(bounds.BoundRequest(args.gamma, args.alpha, args.n, args.family))
    omitted = {}
    if args.family in ("BEST_SAME_ORDER", "BEST_CONJUGATE"):
        omitted = dict(result.reasons)
    if args.format == "csv":
        cols = ("B", "R", "MAJ")
        out.write("gamma,alpha,n,B,R,MAJ,dominant\n")
        cells = [fmt(args.gamma), fmt(args.alpha), "inf" if args.n is None else str(args.n)]
        cells += [fmt(result.values[c]) if c in result.values else "" for c in cols]
        cells.append(result.dominant)
        out.write(",".join(cells) + "\n")
        return EXIT_OK
    payload = {
        "gamma": args.gamma,
        "alpha": args.alpha,
        "n": "inf" if args.n is None else args.n,
        "bounds": dict(result.values),
        "dominant": result.dominant,
    }
    if omitted:
        payload["omitted"] = omitted
    out.write(dumps(payload) + "\n")
    return EXIT_OK


def cmd_sweep(args, out):
    config = SweepConfig(args.gamma_min, args.gamma_max, args.points, args.scale, args.alpha)
    lines = [config.header()] + [",".join(fmt(v) for v in row) for row in sweep_rows(config)]
    text = "\n".join(lines) + "\n"
    if args.out in (None, "-"):
        out.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_crossing(args, out):
    gamma_star = bounds.find_crossing(args.a, args.b, args.alpha, args.n, tuple(args.bracket), args.tol)
    out.write(dumps({"gamma_star": gamma_star}) + "\n")
    return EXIT_OK


def _states(args):
    if args.state == "gaussian":
        return [coarsegrain.StateSpec.gaussian(args.sigma, args.shift)] * args.trials
    if args.state == "file":
        if not args.file:
            raise DomainError("--state file needs --file PATH")
        return [coarsegrain.load_sampled(args.file)] * args.trials
    return [s.shifted(args.shift) if args.shift else s
            for s in coarsegrain.random_states(args.trials, args.seed, args.levels)]


def cmd_verify(args, out):
    passes = 0
    margins = []
    for state in _states(args):
        report = coarsegrain.verify_eur(state, args.delta, args.delta_p, args.alpha, args.n)
        ok = coarsegrain.verify_direct_sum_majorization(state, args.delta, args.delta_p, args.n)
        margins.append(report.margin)
        passes += report.passed and ok
    summary = {
        "trials": len(margins),
        "passes": passes,
        "min_margin": min(margins),
        "gamma": args.delta * args.delta_p,
        "bound": report.rhs,
    }
    out.write(dumps(summary) + "\n")
    return EXIT_OK if passes == len(margins) else EXIT_FAILED


def cmd_prolate(args, out):
    ev = prolate.evaluate(args.c, args.method, args.nodes)
    out.write(dumps({"c": ev.c, "lambda0": ev.lambda0, "deficit": ev.deficit, "method": ev.method}) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cgeur",
        description="Entropic uncertainty bounds for coarse-grained position and momentum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate the bounds at one gamma")
    p.add_argument("--gamma", type=float, required=True, help="Delta*delta/hbar")
    p.add_argument("--alpha", type=_order, default=1.0, help="Renyi order (default: 1)")
    p.add_argument("--n", type=_truncation, default=4, help="truncation index or 'inf' (default: 4)")
    p.add_argument("--family", choices=bounds.FAMILIES, default="BEST_SAME_ORDER",
                   help="bound family (default: BEST_SAME_ORDER)")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="output format (default: json)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help=f"tabulate {SWEEP_HEADER} over a gamma grid")
    p.add_argument("--gamma-min", type=float, default=0.1)
    p.add_argument("--gamma-max", type=float, default=12.0)
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--alpha", type=_order, default=1.0, help="Renyi order (default: 1)")
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crossing", help="gamma where two bound curves cross")
    p.add_argument("--a", required=True, help="family: B, R, ZERO, MAJ or MAJ:<n>")
    p.add_argument("--b", required=True, help="family: B, R, ZERO, MAJ or MAJ:<n>")
    p.add_argument("--alpha", type=_order, default=1.0, help="Renyi order (default: 1)")
    p.add_argument("--n", type=_truncation, default=4, help="truncation for a bare MAJ (default: 4)")
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"), default=(3.0, 6.0))
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("verify", help="check the relations on concrete states")
    p.add_argument("--state", choices=("gaussian", "random", "file"), default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian position width")
    p.add_argument("--shift", type=float, default=0.0, help="translate states by this offset")
    p.add_argument("--file", default=None, help="sampled state file for --state file")
    p.add_argument("--levels", type=int, default=10, help="Hermite levels of random states")
    p.add_argument("--delta", type=float, required=True, help="position bin width")
    p.add_argument("--delta-p", type=float, required=True, help="momentum bin width")
    p.add_argument("--alpha", type=_order, default=1.0, help="Renyi order (default: 1)")
    p.add_argument("--n", type=_truncation, default=4, help="truncation index (default: 4)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prolate", help="evaluate lambda0(c)")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--method", choices=prolate.METHODS, default=None,
                   help="evaluation route (default: automatic)")
    p.add_argument("--nodes", type=int, default=prolate.DEFAULT_NODES)
    p.set_defaults(func=cmd_prolate)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        return args.func(args, out)
    except BracketError as exc:
        print(f"cgeur: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except (CGEURError, ArithmeticError, ValueError) as exc:
        print(f"cgeur: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"cgeur: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
