"""Command-line front end: ``apsidal {theta,scan,schaaf,oracle,duality}``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 consistency failure,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys

from .analysis import default_e_grid, duality_probe, monotonicity_scan
from .errors import DomainError, NumericalError
from .model import BoundedOrbit, ForceLaw, energy_window
from .oracle import IntegratorOptions, export_trajectory, integrate_arc
from .quadrature import QuadratureOptions, apsidal_angle
from .schaaf import classify

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INCONSISTENT, EXIT_NUMERICAL = 0, 1, 2, 3, 4
ORACLE_TOLERANCE = 1e-6

THETA_FIELDS = ["alpha", "ell", "h", "e", "r_minus", "r_plus", "theta", "theta_err"]
SCAN_FIELDS = THETA_FIELDS + ["dtheta_dh_fd"]
TRAJECTORY_FIELDS = ["t", "r", "rdot", "theta", "x1", "x2"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- formatting ---

def fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and not math.isfinite(value):
        return "null"
    if isinstance(value, (int, float)):
        return fmt(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    return json.dumps(str(value))


def render(records, fields, kind, footer=()):
    """CSV (header + rows + ``# key=value`` footer) or a JSON array of objects."""
    if kind == "json":
        lines = []
        for rec in records:
            body = ", ".join(f"{json.dumps(k)}: {_json_value(rec.get(k))}" for k in fields)
            lines.append("  {" + body + "}")
        return "[\n" + ",\n".join(lines) + "\n]\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([fmt(rec.get(k)) for k in fields])
    for key, value in footer:
        buf.write(f"# {key}={fmt(value)}\n")
    return buf.getvalue()


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(args, text):
    with _output(args.out) as fh:
        fh.write(text)


def _quad_opts(args):
    return QuadratureOptions(node_count=args.nodes, rel_tol=args.tol)


def _orbit(law, h=None, e=None):
    try:
        if h is not None:
            return BoundedOrbit.from_energy(law, h)
        return BoundedOrbit.from_eccentricity(law, e)
    except DomainError as exc:
        if "window" in str(exc):
            raise
        raise DomainError(f"{exc}; valid energy window {energy_window(law).describe()}") from exc


# --- subcommands ---

def cmd_theta(args):
    law = ForceLaw(args.alpha, args.ell)
    orbit = _orbit(law, args.h, args.e)
    res = apsidal_angle(orbit, _quad_opts(args))
    rec = dict(alpha=law.alpha, ell=law.ell, h=orbit.h, e=orbit.e, r_minus=orbit.r_minus,
               r_plus=orbit.r_plus, theta=res.theta, theta_err=res.err_estimate)
    _emit(args, render([rec], THETA_FIELDS, args.format))
    return EXIT_OK


def cmd_scan(args):
    law = ForceLaw(args.alpha, args.ell)
    if args.h_from is not None or args.h_to is not None:
        if args.h_from is None or args.h_to is None:
            raise UsageError("--h-from and --h-to must be given together")
        grid = [args.h_from + (args.h_to - args.h_from) * i / (args.points - 1)
                for i in range(args.points)]
        kind = "h"
    else:
        grid, kind = default_e_grid(args.points, args.e_from, args.e_to), "e"
    report = monotonicity_scan(law, grid, kind=kind, opts=_quad_opts(args))
    verdict = dict(
        verdict_measured=report.verdict_measured.value,
        verdict_predicted=report.verdict_predicted.verdict.value,
        consistent=report.consistent,
    )
    records = [dict(vars(row)) for row in report.rows]
    if args.format == "json":
        for rec in records:
            rec.update(verdict)
        text = render(records, SCAN_FIELDS + list(verdict), "json")
    else:
        footer = list(verdict.items()) + [("skipped", len(report.skipped))]
        text = render(records, SCAN_FIELDS, "csv", footer)
    _emit(args, text)
    for value, message in report.skipped:
        print(f"skipped grid point {value!r}: {message}", file=sys.stderr)
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


SCHAAF_FIELDS = ["alpha", "ell", "verdict", "route", "phi_lower", "phi_upper", "l_lower",
                 "l_upper", "p_lower", "p_upper", "q_at_inflection", "dual_alpha"]


def cmd_schaaf(args):
    law = ForceLaw(args.alpha, args.ell)
    v = classify(law)
    rec = dict(alpha=law.alpha, ell=law.ell, verdict=v.verdict.value, route=v.route.value,
               q_at_inflection=v.q_at_inflection, dual_alpha=v.dual_alpha)
    if v.phi_interval:
        rec.update(phi_lower=v.phi_interval[0], phi_upper=v.phi_interval[1],
                   l_lower=v.l_interval[0], l_upper=v.l_interval[1],
                   p_lower=v.p_endpoints[0][1], p_upper=v.p_endpoints[1][1])
    _emit(args, render([rec], SCHAAF_FIELDS, args.format))
    return EXIT_OK


ORACLE_FIELDS = ["alpha", "ell", "h", "e", "theta_quadrature", "theta_ode", "abs_diff", "steps"]


def cmd_oracle(args):
    law = ForceLaw(args.alpha, args.ell)
    orbit = _orbit(law, args.h, args.e)
    quad = apsidal_angle(orbit, _quad_opts(args))
    arc = integrate_arc(orbit, IntegratorOptions(keep_trajectory=args.trajectory is not None))
    diff = abs(quad.theta - arc.delta_theta)
    rec = dict(alpha=law.alpha, ell=law.ell, h=orbit.h, e=orbit.e, theta_quadrature=quad.theta,
               theta_ode=arc.delta_theta, abs_diff=diff, steps=arc.steps)
    _emit(args, render([rec], ORACLE_FIELDS, args.format))
    if args.trajectory is not None:
        rows = [dict(zip(TRAJECTORY_FIELDS, map(float, row))) for row in export_trajectory(arc)]
        with _output(args.trajectory) as fh:
            fh.write(render(rows, TRAJECTORY_FIELDS, "csv"))
    return EXIT_OK if diff <= ORACLE_TOLERANCE else EXIT_INCONSISTENT


DUALITY_FIELDS = ["alpha", "dual_alpha", "ell", "e", "theta_alpha", "theta_dual", "ratio",
                  "reference"]


def cmd_duality(args):
    probe = duality_probe(args.alpha, args.ell, args.e_list, _quad_opts(args))
    records = [dict(alpha=probe.alpha, dual_alpha=probe.dual_alpha, ell=probe.ell, e=e,
                    theta_alpha=t, theta_dual=td, ratio=ratio, reference=probe.reference)
               for e, t, td, ratio in probe.rows]
    _emit(args, render(records, DUALITY_FIELDS, args.format))
    return EXIT_OK


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    parser = _Parser(prog="apsidal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, quad=True):
        p.add_argument("--alpha", type=float, required=True, help="force-law exponent (< 2, != 0)")
        p.add_argument("--ell", type=float, default=1.0, help="angular momentum (default 1)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if quad:
            p.add_argument("--nodes", type=int, default=64, help="initial Gauss-Legendre nodes")
            p.add_argument("--tol", type=float, default=1e-10, help="relative refinement tolerance")

    def energy_or_e(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--h", type=float, help="energy")
        group.add_argument("--e", type=float, help="eccentricity in [0, 1)")

    p = sub.add_parser("theta", help="apsidal angle of one orbit")
    common(p)
    energy_or_e(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("scan", help="monotonicity scan over energy")
    common(p)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--e-from", type=float, default=0.05)
    p.add_argument("--e-to", type=float, default=0.9)
    p.add_argument("--h-from", type=float)
    p.add_argument("--h-to", type=float)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("schaaf", help="monotonicity verdict from the Schaaf criterion")
    common(p, quad=False)
    p.set_defaults(func=cmd_schaaf)

    p = sub.add_parser("oracle", help="compare quadrature with ODE integration")
    common(p)
    energy_or_e(p)
    p.add_argument("--trajectory", default=None, help="write t,r,rdot,theta,x1,x2 CSV here")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("duality", help="apsidal angle ratio under the exponent duality")
    common(p)
    p.add_argument("--e-list", type=_float_list, default=[0.1, 0.01, 0.001])
    p.set_defaults(func=cmd_duality)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"apsidal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"apsidal: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"apsidal: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
