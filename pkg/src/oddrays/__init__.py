"""Exact resultant solver for homogeneous polynomial systems and antipodal
zeros of odd polynomial maps on spheres."""

__version__ = "0.1.0"

from .borsuk_ulam import (BUResult, SampleSet, bu_zero, coincidence,
                          delta_epsilon_guard, fit_odd_poly, sphere_points)
from .config import SolverConfig
from .errors import (DegenerateSystemError, InputError, InvariantViolation,
                     OddRaysError, ParseError)
from .estimator import OddPolynomialRegressor
from .homogenize import (HomSystem, OddMap, build_odd_system, homogenize_odd,
                         odd_symmetrize, sphere_substitute)
from .macaulay import at_infinity_check, macaulay_matrix, macaulay_resultant
from .parser import parse_poly, read_samples, read_system
from .poly import Parity, Poly
from .realray import conjugate_pairing, find_real_ray_odd, perturb_to_generic
from .uresultant import SolutionRay, bezout_check, solve_rays

__all__ = [
    "BUResult", "DegenerateSystemError", "HomSystem", "InputError",
    "InvariantViolation", "OddMap", "OddPolynomialRegressor", "OddRaysError",
    "Parity", "ParseError", "Poly", "SampleSet", "SolutionRay", "SolverConfig",
    "at_infinity_check", "bezout_check", "build_odd_system", "bu_zero",
    "coincidence", "conjugate_pairing", "delta_epsilon_guard", "find_real_ray_odd",
    "fit_odd_poly", "homogenize_odd", "macaulay_matrix", "macaulay_resultant",
    "odd_symmetrize", "parse_poly", "perturb_to_generic", "read_samples",
    "read_system", "solve_rays", "sphere_points", "sphere_substitute",
]
