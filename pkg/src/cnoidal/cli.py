"""Command-line front end: tables, scans, thresholds and verdicts as CSV or JSON.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .floquet import THETA_RTOL, theta_L1, theta_L2, theta_residual
from .stability import (
    critical_constants,
    kg_convexity,
    mass_closed_form,
    mass_derivative,
    ddprime_nls,
    verdict,
)
from .wave import k_from_omega, params_from_k, phi, phi_dx, phi_dxx

TABLE_PERIODS = (7.0, 4.0 * math.pi, 20.0, 100.0)
TABLE_MODULI = (0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for domain errors here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> list[float]:
    """A float, or "start:stop:count" (inclusive, count >= 2)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"expected a number or start:stop:count, got {text!r}") from None
    if count < 2:
        raise UsageError(f"grid count must be at least 2, got {count}")
    return [float(v) for v in np.linspace(start, stop, count)]


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def _check_finite(rows):
    for row in rows:
        for key, value in row.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise NumericalError(f"non-finite value in column {key!r}")


def render(rows: list[dict], fmt: str) -> str:
    _check_finite(rows)
    if fmt == "json":
        return json.dumps(rows, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def _pool_size():
    raw = os.environ.get("CNOIDAL_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep(fn: Callable, points: Iterable) -> list:
    """Evaluate ``fn`` over ``points``; results always come back in input order."""
    points = list(points)
    workers = min(_pool_size(), max(1, len(points)))
    if workers == 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _column_for_period(L):
    return "theta_at_l_" + format(L, ".17g").replace(".", "_").replace("-", "m")


def _one_of(args, names):
    given = [n for n in names if getattr(args, n) is not None]
    if len(given) != 1:
        raise UsageError("supply exactly one of " + ", ".join("--" + n for n in names))
    return given[0], parse_grid(getattr(args, given[0]))


def _single(values, flag):
    if len(values) != 1:
        raise UsageError(f"--{flag} takes a single value for this command")
    return values[0]


def _periods(args):
    if not args.L:
        raise UsageError("--L is required")
    return [float(v) for v in args.L]


def _wave_for(L, name, value, equation):
    if name == "k":
        k = value
    elif name == "omega":
        k = k_from_omega(L, value)
    else:
        if not abs(value) < 1.0:
            raise DomainError(f"wave speed must satisfy |c| < 1, got {value!r}")
        k = k_from_omega(L, 1.0 - value * value)
    return params_from_k(L, k, equation)


def cmd_params(args):
    L = _single(_periods(args), "L")
    name, values = _one_of(args, ("k", "omega", "c"))

    def row(v):
        w = _wave_for(L, name, v, args.equation)
        return {"l": L, "k": w.k, "a": w.a, "b": w.b, "q": w.q, "omega": w.omega,
                "c": w.c, "phi_dd0": w.phi_dd0}

    return sweep(row, values)


def cmd_profile(args):
    L = _single(_periods(args), "L")
    name, values = _one_of(args, ("k", "omega", "c"))
    w = _wave_for(L, name, _single(values, name), args.equation)
    xs = parse_grid(args.grid) if args.grid else [float(x) for x in np.linspace(0.0, L, 129)]
    return [{"x": x, "phi": float(phi(w, x)), "phi_dx": float(phi_dx(w, x)),
             "phi_dxx": float(phi_dxx(w, x))} for x in xs]


def _theta_kwargs(args):
    return {"rel_tol": args.tol, "abs_tol": args.tol * 1e-2}


def cmd_theta(args):
    periods = _periods(args)
    name, values = _one_of(args, ("k", "omega", "c"))
    kw = _theta_kwargs(args)

    def row(point):
        L, v = point
        w = _wave_for(L, name, v, args.equation)
        r1, r2 = theta_L1(w, **kw), theta_L2(w, **kw)
        out = {"l": L, "k": w.k, "theta_1": r1.theta, "y_prime_end_1": r1.y_prime_end,
               "n_1": r1.n_negative, "z_1": r1.kernel_dim, "theta_2": r2.theta,
               "y_end_2": r2.y_end, "n_2": r2.n_negative, "z_2": r2.kernel_dim}
        if args.residual:
            out["residual_1"] = theta_residual(w, "L1", theta=r1.theta, **kw)
            out["residual_2"] = theta_residual(w, "L2", theta=r2.theta, **kw)
        return out

    return sweep(row, [(L, v) for L in periods for v in values])


def cmd_theta_table(args):
    periods = [float(v) for v in args.L] if args.L else list(TABLE_PERIODS)
    moduli = parse_grid(args.k) if args.k is not None else list(TABLE_MODULI)
    kw = _theta_kwargs(args)

    def both(point):
        L, k = point
        w = params_from_k(L, k)
        return theta_L1(w, **kw).theta, theta_L2(w, **kw).theta

    points = [(L, k) for k in moduli for L in periods]
    values = dict(zip(points, sweep(both, points)))
    rows = []
    for op, idx in (("L1", 0), ("L2", 1)):
        for k in moduli:
            row = {"operator": op, "k": k}
            row.update({_column_for_period(L): values[(L, k)][idx] for L in periods})
            rows.append(row)
    return rows


def cmd_ddprime_scan(args):
    L = _single(_periods(args), "L")
    name, values = _one_of(args, ("k", "omega", "c"))
    arg = args.lambda_argument
    if name == "k":
        def row(k):
            return {"k": k, "r": mass_closed_form(k, argument=arg), "dr_dk": mass_derivative(k, argument=arg)}
    elif name == "c":
        def row(c):
            d = kg_convexity(L, c, argument=arg)
            return {"c": c, "k": d.k, "omega": d.omega, "d1": d.d1, "d2": d.d2}
    else:
        def row(w):
            return {"omega": w, "k": k_from_omega(L, w), "d2": ddprime_nls(L, w, argument=arg)}
    return sweep(row, values)


def cmd_thresholds(args):
    L = _single(_periods(args), "L")
    cc = critical_constants(L, argument=args.lambda_argument)
    return [{"l": L, "k_star": cc.k_star, "omega_star": cc.omega_star, "omega_star_l2": cc.omega_star_L2,
             "c_star": cc.c_star, "c_star_fit": cc.c_star_fit, "l0": cc.L0, "argument": cc.argument}]


def cmd_verdict(args):
    L = _single(_periods(args), "L")
    names = ("c",) if args.equation == "qkg" else ("omega",)
    if args.equation == "qkg" and args.omega is not None or args.equation == "qnls" and args.c is not None:
        raise UsageError("qkg verdicts take --c, qnls verdicts take --omega")
    name, values = _one_of(args, names)

    def row(v):
        r = verdict(args.equation, L, v, argument=args.lambda_argument)
        return {"equation": r.equation, "l": L, name: v, "k": r.k, "d2": r.d2, "n_le": r.n_Le,
                "p_d2": r.p_d2, "parity": r.parity, "verdict": r.verdict, "argument": r.argument}

    return sweep(row, values)


COMMANDS = {
    "params": (cmd_params, "wave parameters a, b, q, omega, c"),
    "profile": (cmd_profile, "phi, phi' and phi'' on an x grid"),
    "theta": (cmd_theta, "Floquet theta values and inertial indices"),
    "theta-table": (cmd_theta_table, "both theta tables, rows k and one column per period"),
    "ddprime-scan": (cmd_ddprime_scan, "R'(k), d''(c) or d''(omega) over a grid"),
    "thresholds": (cmd_thresholds, "k*, omega*, c* and L0"),
    "verdict": (cmd_verdict, "parity verdict n(L_e) - p(d'')"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cnoidal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--L", action="append", type=float, help="period (repeatable for theta and theta-table)")
        p.add_argument("--k", help="modulus: value or start:stop:count")
        p.add_argument("--c", help="wave speed (qkg): value or start:stop:count")
        p.add_argument("--omega", help="frequency: value or start:stop:count")
        p.add_argument("--grid", help="x grid start:stop:count for profile")
        p.add_argument("--equation", choices=("qkg", "qnls"), default="qnls" if name != "verdict" else None,
                       required=name == "verdict")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--tol", type=float, default=THETA_RTOL, help="relative ODE tolerance for theta")
        p.add_argument("--residual", action="store_true", help="theta: add the Floquet residual columns")
        p.add_argument("--lambda-argument", choices=("amplitude", "sine"), default="amplitude",
                       help="how Heuman's Lambda reads its angle argument")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        if not args.tol > 0.0:
            raise UsageError("--tol must be positive")
        text = render(handler(args), args.format)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cnoidal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"cnoidal: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"cnoidal: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
