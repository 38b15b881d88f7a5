"""Command-line entry point: ``lapapprox {sweep,table1,schwarz,rates}``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import rates
from .harness import (
    TABLE1_RHOS,
    ConfigError,
    ExperimentConfig,
    parse_degrees,
    run_sweep,
    schwarz_report,
    sweep_csv,
    table1,
    to_json,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _rho_list(s):
    try:
        vals = [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rho list {s!r}") from None
    if not vals or any(not v > 1 for v in vals):
        raise argparse.ArgumentTypeError("every rho must exceed 1")
    return vals


def build_parser():
    p = _Parser(prog="lapapprox", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="error against degree for one solver")
    s.add_argument("--curve", required=True, help="iell:RHO, ell:RHO or trig:c-K,...,cK")
    s.add_argument("--data", default="(y+1)**2", help="boundary data in x, y, z")
    s.add_argument("--method", choices=("poly", "rational"), default="poly")
    s.add_argument("--pole-source", default="exact_branch_cut",
                   choices=("from_data", "from_schwarz", "exact_branch_cut"))
    s.add_argument("--degrees", default="20:200:20", help="start:stop:step or a comma list")
    s.add_argument("--points", type=int, default=None, help="boundary nodes (adaptive if omitted)")
    s.add_argument("--out", default=None, help="output stem; writes STEM.csv and STEM.json")

    t = sub.add_parser("table1", help="analyticity radii and degree per digit")
    t.add_argument("--rho-list", type=_rho_list, default=list(TABLE1_RHOS))
    t.add_argument("--out", default=None)

    w = sub.add_parser("schwarz", help="AAA Schwarz-function report")
    w.add_argument("--curve", required=True)
    w.add_argument("--points", type=int, default=2000)
    w.add_argument("--tol", type=float, default=1e-10)
    w.add_argument("--out", default=None)

    r = sub.add_parser("rates", help="closed-form rates for the inverted ellipse")
    r.add_argument("--rho", type=float, required=True)
    return p


def _emit(text, out, suffix=""):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(str(out) + suffix).write_text(text)


def _cmd_sweep(a):
    cfg = ExperimentConfig(curve=a.curve, data=a.data, method=a.method, degrees=parse_degrees(a.degrees),
                           points=a.points, pole_source=a.pole_source, out=a.out).validate()
    rec = run_sweep(cfg)
    if not rec.errors:
        print("no degree produced a fit", file=sys.stderr)
        for d, msg in sorted(rec.failures.items()):
            print(f"  {d}: {msg}", file=sys.stderr)
        return EXIT_NUMERIC
    payload = {"config": cfg.to_json(), "record": rec.to_dict()}
    if a.out:
        _emit(sweep_csv(rec), a.out, ".csv")
        _emit(to_json(payload), a.out, ".json")
    else:
        sys.stdout.write(sweep_csv(rec))
    print(f"best error {rec.best_error:.3e}; fitted degree/digit {rec.fitted_degree_per_digit:.4g}; "
          f"predicted {rec.predicted_degree_per_digit:.4g}", file=sys.stderr)
    return EXIT_OK


def _cmd_table1(a):
    rows = table1(a.rho_list)
    if a.out:
        _emit(to_json(rows), a.out)
    print(f"{'rho':>5} {'R':>16} {'degree/digit':>14}")
    for r in rows:
        print(f"{r['rho']:5.2g} {r['R']:16.12g} {r['degree_per_digit']:14,.0f}")
    return EXIT_OK


def _cmd_schwarz(a):
    rep = schwarz_report(a.curve, a.points, a.tol)
    _emit(to_json(rep), a.out)
    return EXIT_OK


def _cmd_rates(a):
    pred = rates.rational_rate_ie(a.rho)
    asym = rates.analyticity_radius_asymptotic(a.rho)
    out = {
        "rho": a.rho,
        "R": pred.R,
        "R_minus_1": rates.analyticity_excess_ie(a.rho),
        "focus_image": rates.focus_image(a.rho),
        "R_asymptotic_log": asym.log_form,
        "R_asymptotic_linear": asym.linear_form,
        "poly_factor": pred.poly_factor,
        "rat_factor": pred.rat_factor,
        "degree_per_digit_poly": pred.degree_per_digit_poly,
        "degree_per_digit_poly_asymptotic": rates.poly_cost_asymptotic(a.rho),
        "degree_per_digit_rat": pred.degree_per_digit_rat,
    }
    if a.rho - 1 < rates.FINGER_EPS_MAX:
        L = rates.finger_length_ie(a.rho)
        loose, sharp = rates.crowding_bounds_ie(a.rho)
        out.update(finger_length=L, crowding_factor=rates.crowding_factor(L),
                   crowding_bound_loose=loose, crowding_bound_sharp=sharp)
    sys.stdout.write(to_json(out))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "table1": _cmd_table1, "schwarz": _cmd_schwarz, "rates": _cmd_rates}
    try:
        return handler[args.cmd](args)
    except (ConfigError, NotImplementedError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # curve and range validation raise plain ValueError
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
