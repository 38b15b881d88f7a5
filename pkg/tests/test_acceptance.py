"""Acceptance suite: one PASS/FAIL line per criterion.

Run standalone with ``python tests/test_acceptance.py`` or through pytest
(``pytest tests/test_acceptance.py -s`` shows the lines).
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass

import pytest

from lapapprox import rates
from lapapprox.harness import ExperimentConfig, parse_degrees, run_sweep, schwarz_report, table1

# Reference rows (rho, R - 1, degree per digit), two significant figures.
REFERENCE_TABLE = (
    (2.0, 0.12, 20),
    (1.9, 0.089, 27),
    (1.8, 0.062, 38),
    (1.7, 0.038, 60),
    (1.6, 0.021, 110),
    (1.5, 0.0091, 250),
    (1.4, 0.0026, 880),
    (1.3, 0.00033, 7000),
    (1.2, 0.0000053, 430_000),
    (1.1, 0.000000000023, 100_000_000_000),
)

INLET_DATA = "(y+1)**2"


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f} s)"


def _run(number, title, fn, limit=None):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if limit is not None:
        within = dt < limit
        detail += f"; runtime {dt:.1f} s {'<' if within else '>='} {limit:g} s"
        ok = ok and within
    out = Outcome(number, title, ok, detail, dt)
    print(out.line())
    return out


def check_table1():
    rows = table1([r[0] for r in REFERENCE_TABLE])
    bad = []
    for row, (rho, ex_ref, dpd_ref) in zip(rows, REFERENCE_TABLE):
        if row["R_minus_1"] != ex_ref:
            bad.append(f"rho={rho}: R-1 {row['R_minus_1']:.2g} (exact {row['R_minus_1_exact']:.6g}) vs {ex_ref:g}")
        if row["degree_per_digit"] != dpd_ref:
            bad.append(f"rho={rho}: degree/digit {row['degree_per_digit']:.2g} vs {dpd_ref:g}")
    cells = 2 * len(REFERENCE_TABLE)
    if bad:
        return False, f"{cells - len(bad)}/{cells} cells match; mismatches: " + "; ".join(bad)
    return True, f"{cells}/{cells} cells match at 2 significant figures"


def check_theta_oracle():
    worst = 0.0
    for rho in (1.2, 1.5, 2.0, 3.0):
        worst = max(worst, abs(rates.analyticity_radius_ie(rho) / rates.theta_ratio_oracle(rho) - 1))
    return worst <= 1e-13, f"max relative difference {worst:.1e} (tol 1e-13)"


def check_constant():
    shown = f"{rates.A_CONST:.6g}"
    return shown == "1.16485", f"A = {shown}"


def check_focus_image():
    v = rates.focus_image(1.5)
    return abs(v - 0.9909) <= 2e-4, f"focus_image(1.5) = {v:.6f} (target 0.9909 +- 0.0002)"


def check_poly_mild():
    cfg = ExperimentConfig(curve="iell:1.8", data=INLET_DATA, method="poly", degrees=parse_degrees("20:400:20"))
    rec = run_sweep(cfg)
    dpd = rec.fitted_degree_per_digit
    ok = rec.rate_defined and 30 <= dpd <= 55 and min(rec.points) >= 1500 and not rec.failures
    return ok, (f"fitted {dpd:.1f} degree/digit in [30, 55] (predicted {rec.predicted_degree_per_digit:.1f}); "
                f"nodes {min(rec.points)}..{max(rec.points)}")


def check_poly_stagnation():
    cfg = ExperimentConfig(curve="iell:1.3", data=INLET_DATA, method="poly",
                           degrees=(20, 40, 80, 160, 320, 640, 1000))
    rec = run_sweep(cfg)
    ok = rec.best_error > 1e-2 and max(rec.degrees) == 1000 and not rec.failures
    return ok, (f"best error {rec.best_error:.3f} > 1e-2 up to degree {max(rec.degrees)} "
                f"(predicted {rec.predicted_degree_per_digit:.0f} degree/digit)")


def check_rational_speed():
    details, ok_any = [], False
    for source in ("exact_branch_cut", "from_schwarz"):
        cfg = ExperimentConfig(curve="iell:1.3", data=INLET_DATA, method="rational", pole_source=source,
                               degrees=parse_degrees("20:140:10"))
        rec = run_sweep(cfg)
        low = [e for d, e in zip(rec.degrees, rec.errors) if d <= 80]
        best = min(low) if low else math.inf
        dpd = rec.fitted_degree_per_digit
        ok = best <= 1e-8 and rec.rate_defined and dpd <= 8
        ok_any = ok_any or ok
        details.append(f"{source}: best error {best:.1e} at degree <= 80, {dpd:.2f} degree/digit")
    return ok_any, "; ".join(details) + f" (limit 8, predicted {rates.rational_rate_ie(1.3).degree_per_digit_rat:.2f})"


def check_rational_bound():
    bound = 1.8**-1.5
    cfg = ExperimentConfig(curve="iell:1.8", data=INLET_DATA, method="rational", pole_source="exact_branch_cut",
                           degrees=parse_degrees("15:90:5"))
    rec = run_sweep(cfg)
    f = rec.fitted_rate
    return rec.rate_defined and f <= bound, (f"fitted per-degree factor {f:.3f} <= {bound:.3f} "
                                             f"(asymptotic {rec.predicted_rate:.3f})")


def check_schwarz():
    parts, ok = [], True
    for rho in (1.3, 1.5, 2.0):
        t0 = time.perf_counter()
        rep = schwarz_report(f"iell:{rho}", 2000, 1e-10)
        dt = time.perf_counter() - t0
        ext = [complex(*b["location"]) for b in rep["branch_estimates"] if b["side"] == "exterior"]
        d = max(min((abs(e - t) for e in ext), default=math.inf) for t in (1, -1))
        good = d < 0.05 and rep["relative_residual"] <= 1e-10 and dt < 30
        ok = ok and good
        parts.append(f"rho={rho}: branch error {d:.3f}, residual {rep['relative_residual']:.1e} rel "
                     f"({rep['residual']:.1e} abs), degree {rep['degree']}, {dt:.1f} s")
    return ok, "; ".join(parts)


def check_invariants():
    import test_properties as tp

    names = ("test_arnoldi_orthonormal", "test_barycentric_interpolates_support",
             "test_maximum_principle", "test_reflection_identity")
    failed = []
    for name in names:
        try:
            getattr(tp, name)()
        except Exception as exc:  # report every suite, not just the first failure
            failed.append(f"{name}: {type(exc).__name__}")
    if failed:
        return False, "; ".join(failed)
    return True, f"{len(names)} suites x {tp.N_EXAMPLES} randomized instances"


CRITERIA = {
    1: ("rate table reproduction", check_table1, 1.0),
    2: ("theta-identity oracle", check_theta_oracle, 1.0),
    3: ("asymptotic constant A", check_constant, None),
    4: ("focus image", check_focus_image, None),
    5: ("polynomial slope, iell:1.8", check_poly_mild, 120.0),
    6: ("polynomial stagnation, iell:1.3", check_poly_stagnation, 600.0),
    7: ("rational speed, iell:1.3", check_rational_speed, 120.0),
    8: ("rational rate bound, iell:1.8", check_rational_bound, None),
    9: ("Schwarz branch detection", check_schwarz, None),
    10: ("invariant suites", check_invariants, None),
}


def run_criterion(k) -> Outcome:
    title, fn, limit = CRITERIA[k]
    return _run(k, title, fn, limit)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 8, 9, 10])
def test_criterion(k):
    out = run_criterion(k)
    assert out.ok, out.line()


@pytest.mark.slow
@pytest.mark.parametrize("k", [5, 6, 7])
def test_criterion_slow(k):
    out = run_criterion(k)
    assert out.ok, out.line()


def main() -> int:
    results = [run_criterion(k) for k in CRITERIA]
    n_ok = sum(r.ok for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return 0 if n_ok == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
