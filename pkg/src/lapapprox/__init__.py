"""Polynomial and rational solvers for planar Laplace problems, with the
convergence-rate theory of the inverted ellipse."""

from .aaa import BarycentricRational, aaa_fit, eval_barycentric, poles, residues
from .geometry import (
    BoundarySample,
    ParametricCurve,
    inside,
    parse_curve,
    sample_boundary,
    schwarz_exact,
    schwarz_singularities,
    winding_number,
)
from .harness import ConvergenceRecord, ExperimentConfig, fit_slope, run_sweep, schwarz_report, table1
from .polysolver import HarmonicApproximant, arnoldi_build, arnoldi_eval, fit_harmonic, fit_laplace_poly
from .rates import (
    RatePrediction,
    analyticity_radius_asymptotic,
    analyticity_radius_ie,
    degree_per_digit,
    focus_image,
    rational_rate_ie,
    theta_ratio_oracle,
)
from .ratsolver import PoleBasis, PoleSource, branch_cut_poles, fit_laplace_rational, select_poles
from .schwarz import SchwarzApprox, continuation_violation_witness, reflection_check, schwarz_fit

__version__ = "0.1.0"
