"""Antipodal zeros of odd polynomial maps on the sphere.

``bu_zero`` composes the odd-map reduction with the real-ray solver:
build the odd-degree homogeneous system, find a real solution ray, and
normalise it onto the sphere. ``coincidence`` handles arbitrary polynomial
maps through their odd part, and the fitting/guard helpers support maps that
are only known through samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import SolverConfig
from .errors import InputError, InvariantViolation
from .homogenize import OddMap, build_odd_system, odd_symmetrize
from .poly import Poly
from .realray import PerturbationTrail, find_real_ray_odd
from .uresultant import BezoutReport


@dataclass(frozen=True)
class RayCertificate:
    residuals: tuple                  # |q_i(y)| on the original components
    system_residuals: tuple           # |F_j(y)| on the homogeneous system
    bezout: BezoutReport | None
    trail: PerturbationTrail | None
    degrees: tuple = ()


@dataclass(frozen=True)
class BUResult:
    point: tuple
    antipode: tuple
    values: tuple
    certificate: RayCertificate
    epsilon_used: float | None = None
    degenerate: bool = False          # every point of the sphere qualifies


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray                # (m, n + 1) unit vectors
    values: np.ndarray                # (m, n)
    degree_cap: int

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        m, dim = pts.shape
        if vals.shape[0] != m:
            raise InputError("points and values have different sample counts")
        if vals.shape[1] != dim - 1:
            raise InputError(
                f"points live in R^{dim}, so values need {dim - 1} components"
            )
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise InputError("samples contain non-finite entries")
        if np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) > 1e-12:
            raise InputError("sample points must lie on the unit sphere")
        if self.degree_cap < 1:
            raise InputError("degree_cap must be positive")
        need = math.comb(dim + self.degree_cap, dim)
        if m < need:
            raise InputError(
                f"{m} samples cannot determine a degree-{self.degree_cap} fit "
                f"({need} monomials)"
            )

    @property
    def n(self) -> int:
        return self.points.shape[1] - 1


@dataclass(frozen=True)
class FitReport:
    max_deviation: float
    degree_cap: int
    rank: int
    condition: float
    degenerate: bool


@dataclass(frozen=True)
class GuardReport:
    delta_hat: float
    epsilon: float
    sample_count: int
    zero_excluded: bool               # delta_hat > epsilon
    reading: str = "distance of the map values from the origin"


# -- sphere sampling ----------------------------------------------------------------

def spiral_points(count: int) -> np.ndarray:
    """Deterministic golden-angle spiral on S^2."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def sphere_points(dim: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` points on the unit sphere in R^dim.

    S^2 uses the spiral; other dimensions use seeded rejection sampling from
    the cube, so a longer run extends a shorter one with the same seed.
    """
    if dim == 3:
        return spiral_points(count)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = rng.uniform(-1.0, 1.0, size=dim)
        r = np.linalg.norm(v)
        if 1e-3 < r <= 1.0:
            out.append(v / r)
    return np.array(out)


# -- drivers ------------------------------------------------------------------------------

def _real(values) -> tuple:
    return tuple(float(abs(v)) for v in values)


def bu_zero(m: OddMap, cfg: SolverConfig | None = None) -> BUResult:
    """A point y on S^n with q(y) = 0; -y is a zero as well."""
    cfg = cfg or SolverConfig()
    if m.is_degenerate():
        y = (1.0,) + (0.0,) * m.n
        cert = RayCertificate((0.0,) * m.n, (0.0,) * m.n, None, None, ())
        return BUResult(y, tuple(-c for c in y), (0.0,) * m.n, cert, degenerate=True)
    system = build_odd_system(m)
    b, trail = find_real_ray_odd(system, cfg)
    y = b / np.linalg.norm(b)
    values = _real(m(list(y)))
    if max(values) > cfg.residual_bound:
        raise InvariantViolation(
            f"antipodal zero has residual {max(values):.3e} on the original map"
        )
    cert = RayCertificate(values, _real(system.evaluate(list(y))), trail.bezout,
                          trail, system.degrees)
    return BUResult(tuple(float(c) for c in y), tuple(float(-c) for c in y), values, cert)


def coincidence(g: Sequence[Poly], cfg: SolverConfig | None = None) -> BUResult:
    """A point y on S^n with g(y) = g(-y), found as a zero of the odd part of g."""
    cfg = cfg or SolverConfig()
    g = list(g)
    n = len(g)
    if n < 1 or any(p.nvars != n + 1 for p in g):
        raise InputError(f"need n polynomials in n + 1 variables, got {n} in "
                         f"{sorted({p.nvars for p in g})}")
    result = bu_zero(OddMap(tuple(odd_symmetrize(p) for p in g)), cfg)
    y = list(result.point)
    neg = list(result.antipode)
    gaps = [abs(p.evaluate(y) - p.evaluate(neg)) for p in g]
    if max(gaps) > 2 * cfg.residual_bound:
        raise InvariantViolation(f"coincidence gap {max(gaps):.3e} exceeds the bound")
    return result


def fit_odd_poly(samples: SampleSet, cfg: SolverConfig | None = None,
                 coef_tol: float = 1e-10) -> tuple[OddMap, FitReport]:
    """Least-squares polynomial fit of sampled values, reduced to its odd part."""
    from .estimator import OddPolynomialRegressor

    model = OddPolynomialRegressor(degree_cap=samples.degree_cap, coef_tol=coef_tol)
    model.fit(samples.points, samples.values)
    report = FitReport(model.max_deviation_, model.degree_cap_, model.rank_,
                       model.condition_, model.degenerate_)
    return model.odd_map_, report


def delta_epsilon_guard(components: Sequence[Poly] | OddMap, epsilon: float,
                        samples: np.ndarray | None = None, count: int = 2000,
                        seed: int = 0) -> GuardReport:
    """Estimate how far the map stays from the origin on the sphere.

    delta_hat = min over sample points of max_i |q_i|. For a map with a zero
    on the sphere delta_hat shrinks to 0 under dense sampling, so an
    epsilon-approximation cannot keep its values more than epsilon away.
    """
    comps = list(components.components if isinstance(components, OddMap) else components)
    if not comps:
        raise InputError("need at least one component")
    dim = comps[0].nvars
    pts = sphere_points(dim, count, seed) if samples is None else np.asarray(samples, float)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise InputError(f"sample points must have {dim} coordinates")
    delta = math.inf
    for x in pts:
        v = max(abs(c.evaluate(list(x))) for c in comps)
        delta = min(delta, v)
    return GuardReport(float(delta), float(epsilon), len(pts), bool(delta > epsilon))
