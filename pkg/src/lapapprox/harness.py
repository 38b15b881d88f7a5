"""Experiment driver: degree sweeps, slope fits, rate tables and Schwarz reports."""

from __future__ import annotations

import ast
import csv
import io
import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import rates
from .geometry import INVERTED_ELLIPSE, ParametricCurve, parse_curve, sample_boundary
from .polysolver import fit_harmonic
from .ratsolver import PoleSource, companion_degree, poles_for_degree
from .schwarz import schwarz_fit

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ConvergenceRecord",
    "parse_data",
    "parse_degrees",
    "run_sweep",
    "fit_slope",
    "plateau_floor",
    "table1",
    "TABLE1_RHOS",
    "schwarz_report",
    "sweep_csv",
    "to_json",
    "round_sig",
]

log = logging.getLogger(__name__)

TABLE1_RHOS = (2.0, 1.9, 1.8, 1.7, 1.6, 1.5, 1.4, 1.3, 1.2, 1.1)
SCHWARZ_POLE_SOURCE_POINTS = 2000
PLATEAU_WINDOW = 10.0


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# boundary data expressions

_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "log": np.log,
    "sqrt": np.sqrt, "abs": np.abs, "sinh": np.sinh, "cosh": np.cosh,
    "tanh": np.tanh, "arctan": np.arctan, "arctan2": np.arctan2,
    "re": np.real, "im": np.imag, "conj": np.conj, "angle": np.angle,
}
_CONSTS = {"pi": np.pi, "e": np.e, "i": 1j, "j": 1j}
_VARS = ("x", "y", "z")
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def parse_data(expr: str):
    """Compile a boundary-data expression in ``x``, ``y``, ``z`` into ``h(z)``.

    Only arithmetic, numeric constants, ``pi``, ``e``, ``i`` and the
    functions in ``_FUNCS`` are accepted.  The real part of the value is
    used.
    """
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"bad data expression {expr!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise ConfigError(f"disallowed syntax {type(node).__name__} in {expr!r}")
        if isinstance(node, ast.Name) and node.id not in _FUNCS and node.id not in _CONSTS \
                and node.id not in _VARS:
            raise ConfigError(f"unknown name {node.id!r} in {expr!r}")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise ConfigError(f"only {sorted(_FUNCS)} may be called")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float, complex)):
            raise ConfigError(f"non-numeric constant in {expr!r}")
    code = compile(tree, "<data>", "eval")

    def h(z):
        z = np.asarray(z, dtype=complex)
        env = {**_FUNCS, **_CONSTS, "x": z.real, "y": z.imag, "z": z}
        with np.errstate(all="ignore"):
            val = eval(code, {"__builtins__": {}}, env)  # names vetted above
        return np.real(np.broadcast_to(val, z.shape)).astype(float)

    h.expr = expr
    return h


def parse_degrees(spec) -> tuple[int, ...]:
    """``"20:400:20"`` (start:stop:step, inclusive) or ``"20,40,80"``."""
    if isinstance(spec, (list, tuple)):
        out = tuple(int(d) for d in spec)
    else:
        s = str(spec).strip()
        try:
            if ":" in s:
                parts = [int(p) for p in s.split(":")]
                if len(parts) != 3 or parts[2] <= 0:
                    raise ValueError
                out = tuple(range(parts[0], parts[1] + 1, parts[2]))
            else:
                out = tuple(int(p) for p in s.split(",") if p.strip())
        except ValueError:
            raise ConfigError(f"bad degree schedule {spec!r}") from None
    if not out or min(out) < 0:
        raise ConfigError(f"degree schedule {spec!r} is empty or negative")
    return tuple(sorted(set(out)))


# ---------------------------------------------------------------------------
# configuration and records

@dataclass(frozen=True)
class ExperimentConfig:
    curve: str
    data: str = "(y+1)**2"
    method: str = "poly"
    degrees: tuple[int, ...] = (20, 40, 80, 160)
    points: int | None = None
    aaa_tol: float = 1e-14
    pole_source: str = PoleSource.EXACT_BRANCH_CUT.value
    out: str | None = None

    def validate(self) -> "ExperimentConfig":
        try:
            parse_curve(self.curve)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        parse_data(self.data)
        if self.method not in ("poly", "rational"):
            raise ConfigError(f"method must be poly or rational, not {self.method!r}")
        try:
            PoleSource(self.pole_source)
        except ValueError:
            raise ConfigError(f"unknown pole source {self.pole_source!r}") from None
        parse_degrees(self.degrees)
        if self.points is not None and self.points < 8:
            raise ConfigError("points must be at least 8")
        if not self.aaa_tol > 0:
            raise ConfigError("aaa_tol must be positive")
        return self

    def to_json(self) -> str:
        d = asdict(self)
        d["degrees"] = list(self.degrees)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad config JSON: {exc}") from None
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        if "degrees" in d:
            d["degrees"] = parse_degrees(d["degrees"])
        return cls(**d).validate()


@dataclass(frozen=True)
class ConvergenceRecord:
    """Errors against total degree for one sweep.

    ``fitted_rate`` is the per-degree geometric factor over the pre-plateau
    window, ``nan`` when fewer than three points qualify.  ``predicted_rate``
    is ``nan`` when no theory applies to the curve.
    """

    method: str
    curve: str
    degrees: tuple[int, ...]
    errors: tuple[float, ...]
    fitted_rate: float
    predicted_rate: float
    plateau_floor: float
    points: tuple[int, ...] = ()
    failures: dict = field(default_factory=dict)

    @property
    def rate_defined(self) -> bool:
        return math.isfinite(self.fitted_rate)

    @property
    def fitted_degree_per_digit(self) -> float:
        return _dpd(self.fitted_rate)

    @property
    def predicted_degree_per_digit(self) -> float:
        return _dpd(self.predicted_rate)

    @property
    def best_error(self) -> float:
        return min(self.errors) if self.errors else math.nan

    def predicted_line(self) -> list[float]:
        """Predicted slope anchored at the first point of the fit window."""
        if not (math.isfinite(self.predicted_rate) and self.errors):
            return [math.nan] * len(self.errors)
        mask = _window(self.errors, self.plateau_floor)
        k = int(np.argmax(mask)) if mask.any() else 0
        d0, e0 = self.degrees[k], self.errors[k]
        return [e0 * self.predicted_rate ** (d - d0) for d in self.degrees]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["degrees"] = list(self.degrees)
        d["errors"] = list(self.errors)
        d["points"] = list(self.points)
        d["failures"] = {str(k): v for k, v in sorted(self.failures.items())}
        d["fitted_degree_per_digit"] = self.fitted_degree_per_digit
        d["predicted_degree_per_digit"] = self.predicted_degree_per_digit
        return d


def _dpd(factor: float) -> float:
    if not (math.isfinite(factor) and 0 < factor < 1):
        return math.inf if math.isfinite(factor) else math.nan
    return math.log(10) / -math.log(factor)


# ---------------------------------------------------------------------------
# slopes

def plateau_floor(errors) -> float:
    """Median of the last three errors."""
    e = np.asarray(errors, dtype=float)
    return float(np.median(e[-3:])) if len(e) else math.nan


def _window(errors, floor):
    return np.asarray(errors, dtype=float) > PLATEAU_WINDOW * floor


def fit_slope(degrees, errors, floor: float | None = None) -> float:
    """Per-degree geometric factor ``exp(slope)`` of ``log(error)`` against degree.

    Only points with ``error > 10*floor`` are used; ``floor`` defaults to
    :func:`plateau_floor`.  Returns ``nan`` with fewer than three such points.
    """
    d = np.asarray(degrees, dtype=float)
    e = np.asarray(errors, dtype=float)
    if d.shape != e.shape:
        raise ValueError("degrees and errors differ in length")
    if floor is None:
        floor = plateau_floor(e)
    mask = _window(e, floor) & (e > 0) & np.isfinite(e)
    if mask.sum() < 3 or len(np.unique(d[mask])) < 2:
        return math.nan
    slope = np.polyfit(d[mask], np.log(e[mask]), 1)[0]
    return float(np.exp(slope))


def predicted_rate(curve: ParametricCurve, method: str) -> float:
    if curve.kind != INVERTED_ELLIPSE:
        return math.nan
    pred = rates.rational_rate_ie(curve.rho)
    return pred.poly_factor if method == "poly" else pred.rat_factor


# ---------------------------------------------------------------------------
# sweeps

def run_sweep(config: ExperimentConfig) -> ConvergenceRecord:
    """Fit at every scheduled degree and record the held-out boundary error.

    A failed fit is logged in ``failures`` and the sweep continues.  For
    rational sweeps the recorded degree is the realized total degree
    (polynomial degree plus surviving poles); a degree that repeats an
    earlier one is skipped.
    """
    config.validate()
    curve = parse_curve(config.curve)
    h = parse_data(config.data)
    degrees, errors, points, failures = [], [], [], {}
    hint = 0
    pole_sample = None
    for n in parse_degrees(config.degrees):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                if config.method == "poly":
                    approx = fit_harmonic(curve, h, n, M=config.points, min_points=hint)
                else:
                    if pole_sample is None:
                        pole_sample = sample_boundary(curve, config.points or SCHWARZ_POLE_SOURCE_POINTS)
                    pb = poles_for_degree(curve, pole_sample, h, n, config.pole_source, config.aaa_tol)
                    npoly = companion_degree(len(pb))
                    approx = fit_harmonic(curve, h, npoly, pb.poles, M=config.points, min_points=hint)
        except (ValueError, np.linalg.LinAlgError, ArithmeticError) as exc:
            failures[n] = f"{type(exc).__name__}: {exc}"
            log.warning("degree %d failed: %s", n, exc)
            continue
        err = approx.boundary_error
        if not math.isfinite(err):
            failures[n] = "non-finite boundary error"
            continue
        if degrees and approx.degree <= degrees[-1]:
            failures[n] = f"realized degree {approx.degree} repeats an earlier one"
            continue
        hint = approx.M
        degrees.append(approx.degree)
        # an exact zero is reported as the smallest normal double so logs stay finite
        errors.append(max(err, np.finfo(float).tiny))
        points.append(approx.M)
        log.info("degree %d: error %.3e on %d nodes", approx.degree, err, approx.M)

    floor = plateau_floor(errors)
    return ConvergenceRecord(
        method=config.method,
        curve=curve.spec,
        degrees=tuple(degrees),
        errors=tuple(errors),
        fitted_rate=fit_slope(degrees, errors, floor),
        predicted_rate=predicted_rate(curve, config.method),
        plateau_floor=floor,
        points=tuple(points),
        failures=failures,
    )


# ---------------------------------------------------------------------------
# tables and reports

def round_sig(x: float, sig: int = 2) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return round(x, sig - 1 - math.floor(math.log10(abs(x))))


def table1(rhos=TABLE1_RHOS) -> list[dict]:
    """Rows ``(rho, R, degree_per_digit)`` for the inverted ellipse.

    ``R`` is given by ``R - 1`` rounded to two significant figures (plus
    one), and the degree per digit is rounded likewise.  Full-precision
    values are kept under ``*_exact`` keys.
    """
    rows = []
    for rho in rhos:
        ex = rates.analyticity_excess_ie(rho)
        dpd = rates.degree_per_digit(1 + ex, ex)
        rows.append({
            "rho": float(rho),
            "R": 1 + round_sig(ex, 2),
            "R_minus_1": round_sig(ex, 2),
            "degree_per_digit": round_sig(dpd, 2),
            "R_minus_1_exact": ex,
            "degree_per_digit_exact": dpd,
        })
    return rows


def schwarz_report(curve_spec: str, M: int = 2000, tol: float = 1e-10, mmax: int = 200) -> dict:
    """AAA degree, residual, pole partition and branch estimates as plain data.

    ``residual`` is absolute; ``relative_residual`` is scaled by ``max|Z|``.
    """
    curve = parse_curve(curve_spec)
    sa = schwarz_fit(curve, M, tol, mmax)
    r = sa.rational

    def cplx(v):
        return [float(v.real), float(v.imag)]

    return {
        "curve": curve.spec,
        "points": M,
        "tol": tol,
        "degree": r.degree,
        "converged": bool(r.converged),
        "residual": float(sa.residual),
        "relative_residual": float(r.tol_achieved),
        "exterior_poles": [cplx(p) for p in sa.exterior_poles],
        "interior_poles": [cplx(p) for p in sa.interior_poles],
        "branch_estimates": [
            {"location": cplx(b.location), "side": b.side, "string_size": b.string_size}
            for b in sa.branch_estimates
        ],
    }


# ---------------------------------------------------------------------------
# output

def _fmt(x) -> str:
    return format(float(x), ".17g")


def sweep_csv(record: ConvergenceRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "error", "predicted_error_line"])
    for d, e, p in zip(record.degrees, record.errors, record.predicted_line()):
        w.writerow([d, _fmt(e), "" if math.isnan(p) else _fmt(p)])
    return buf.getvalue()


def _sanitize(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.generic):
        return _sanitize(obj.item())
    return obj


def to_json(obj) -> str:
    """Deterministic JSON; Python's float repr round-trips exactly (17 digits at most).

    ``nan`` becomes ``null`` and infinities become strings.
    """
    return json.dumps(_sanitize(obj), indent=2, sort_keys=True) + "\n"
