"""Discrete fractional (p,q)-Laplacian eigenvalue problems on an interval."""

from .eigen import Eigenpair, SolverOptions, first_eigenpair, li_condition, li_distance, simplicity_check
from .energy import assemble, energy, lp_norm_pow, operator_apply
from .grid import FractionalParams, Grid, GridFunction, Interval, PQConfig, build_grid
from .pq import Functionals, PQOptions, SolutionReport, solve
from .threshold import CurveOptions, build_context, lambda_star, region_classify, trace_curve

__version__ = "0.1.0"

__all__ = [
    "CurveOptions",
    "Eigenpair",
    "FractionalParams",
    "Functionals",
    "Grid",
    "GridFunction",
    "Interval",
    "PQConfig",
    "PQOptions",
    "SolutionReport",
    "SolverOptions",
    "assemble",
    "build_context",
    "build_grid",
    "energy",
    "first_eigenpair",
    "lambda_star",
    "li_condition",
    "li_distance",
    "lp_norm_pow",
    "operator_apply",
    "region_classify",
    "simplicity_check",
    "solve",
    "trace_curve",
]
