"""Real solution rays of odd-degree systems.

The u-resultant has degree prod(d_j), which is odd when every d_j is odd.
Non-real rays come in conjugate pairs of equal multiplicity, so at least one
ray is real. Systems that are not generic enough for the resultant machinery
(solutions at infinity in every chart, infinitely many rays) are handled by
perturbing the coefficients by shrinking rational amounts, solving each
perturbed system, and following the real rays to an accumulation point on
the sphere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import SolverConfig
from .errors import DegenerateSystemError, InputError, InvariantViolation
from .homogenize import HomSystem
from .poly import Poly, monomials_of_degree
from .uresultant import (BezoutReport, SolutionRay, bezout_check, canonicalize,
                         pick_chart, sign_normalize, solve_rays)

CONVERGENCE_NOTE = "consecutive-ray agreement (convergence proxy)"


@dataclass(frozen=True)
class PairingReport:
    pairs: tuple          # (i, j) index pairs of conjugate rays
    fixed: tuple          # indices of real rays


@dataclass(frozen=True)
class GenericityCertificate:
    chart: int
    resultant: Fraction
    attempts: int


@dataclass(frozen=True)
class PerturbationStep:
    epsilon: Fraction
    deltas: tuple                     # per form: ((exponents, delta), ...)
    at_infinity_resultant_nonzero: bool
    real_ray: tuple | None


@dataclass(frozen=True)
class PerturbationTrail:
    steps: tuple
    final_ray: tuple
    final_residual: float
    direct: bool                      # solved without perturbation
    bezout: BezoutReport | None = None
    chart: int | None = None
    note: str = ""


def classify_real(ray: SolutionRay | Sequence[complex], tol: float = 1e-8) -> bool:
    coords = ray.coords if isinstance(ray, SolutionRay) else ray
    return max(abs(c.imag) for c in canonicalize(coords)) <= tol


def conjugate_pairing(rays: Sequence[SolutionRay], tol: float = 1e-6) -> PairingReport:
    """Match every non-real ray with its complex conjugate."""
    real = [classify_real(r, tol) for r in rays]
    matched = [False] * len(rays)
    pairs, fixed = [], []
    for i, ray in enumerate(rays):
        if real[i]:
            fixed.append(i)
            continue
        if matched[i]:
            continue
        target = [c.conjugate() for c in canonicalize(ray.coords)]
        best, best_d = None, math.inf
        for j in range(len(rays)):
            if j == i or real[j] or matched[j]:
                continue
            d = max(abs(a - b) for a, b in zip(canonicalize(rays[j].coords), target))
            if d < best_d:
                best, best_d = j, d
        if best is None or best_d > tol:
            raise InvariantViolation(f"non-real ray {i} has no conjugate partner")
        if rays[best].multiplicity != ray.multiplicity:
            raise InvariantViolation(
                f"conjugate rays {i} and {best} have multiplicities "
                f"{ray.multiplicity} and {rays[best].multiplicity}"
            )
        matched[i] = matched[best] = True
        pairs.append((i, best))
    return PairingReport(tuple(pairs), tuple(fixed))


# -- helpers on real unit vectors -------------------------------------------------

def max_residual(system: HomSystem, b: Sequence[float]) -> float:
    return max(abs(f.evaluate(list(b))) for f in system.forms)


def antipodal_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between the lines through a and b (rays up to sign)."""
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def polish(system: HomSystem, b: np.ndarray, iterations: int = 8) -> np.ndarray:
    """Gauss-Newton on F(b) = 0, |b| = 1 with minimum-norm steps; never worsens."""
    grads = [[f.derivative(i) for i in range(system.nvars)] for f in system.forms]
    best = np.asarray(b, dtype=float)
    best_res = max_residual(system, best)
    x = best.copy()
    for _ in range(iterations):
        if best_res == 0:
            break
        F = np.array([f.evaluate(list(x)).real for f in system.forms] + [x @ x - 1.0])
        J = np.array([[g.evaluate(list(x)).real for g in row] for row in grads]
                     + [list(2 * x)])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        x = x + step
        x = x / np.linalg.norm(x)
        res = max_residual(system, x)
        if res < best_res:
            best, best_res = x.copy(), res
        else:
            break
    return best


def _unit(ray: SolutionRay) -> np.ndarray:
    return ray.real_unit_vector()


def _choose_real(rays: Sequence[SolutionRay], system: HomSystem, tol: float) -> SolutionRay:
    conjugate_pairing(rays, tol)
    real = [r for r in rays if r.is_real]
    if not real:
        raise InvariantViolation("odd Bezout number but no real ray found")
    return min(real, key=lambda r: max_residual(system, _unit(r)))


# -- perturbation -------------------------------------------------------------------

def _draw_deltas(system: HomSystem, epsilon: Fraction, rng: random.Random):
    grain = 1000
    deltas = []
    for d in system.degrees:
        row = []
        for mono in monomials_of_degree(system.nvars, d):
            k = rng.randint(-grain, grain)
            if k:
                row.append((mono, Fraction(k, grain) * epsilon))
        deltas.append(tuple(row))
    return tuple(deltas)


def _apply(system: HomSystem, deltas) -> HomSystem:
    forms = []
    for f, row in zip(system.forms, deltas):
        forms.append(f + Poly(system.nvars, dict(row)))
    return HomSystem(tuple(forms), system.degrees)


def perturb_to_generic(system: HomSystem, epsilon, seed: int = 0,
                       cfg: SolverConfig | None = None, force: bool = False
                       ) -> tuple[HomSystem, GenericityCertificate, tuple]:
    """Perturb coefficients by at most ``epsilon`` until no ray lies at infinity.

    Every monomial of each form's degree receives a seeded rational delta, so
    homogeneity and degrees are preserved. The certificate is the exact,
    nonzero at-infinity resultant of the returned system. Without ``force``
    an already certified system is returned unchanged.
    """
    cfg = cfg or SolverConfig()
    epsilon = Fraction(epsilon) if not isinstance(epsilon, float) else \
        Fraction(epsilon).limit_denominator(10**15)
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if not system.is_square():
        raise InputError("need n forms in n + 1 variables")
    if not force:
        chart, check, _ = pick_chart(system, cfg)
        if chart is not None:
            empty = tuple(() for _ in system.forms)
            return system, GenericityCertificate(chart, check.resultant.value, 0), empty
    rng = random.Random(seed)
    for attempt in range(1, cfg.max_retries + 1):
        deltas = _draw_deltas(system, epsilon, rng)
        candidate = _apply(system, deltas)
        if any(f.is_zero() for f in candidate.forms):
            continue
        chart, check, _ = pick_chart(candidate, cfg)
        if chart is not None:
            return candidate, GenericityCertificate(chart, check.resultant.value, attempt), deltas
    raise DegenerateSystemError(
        f"no certified perturbation within epsilon={epsilon} after {cfg.max_retries} attempts"
    )


def _serial_deltas(deltas):
    return tuple(tuple((tuple(m), str(v)) for m, v in row) for row in deltas)


def find_real_ray_odd(system: HomSystem, cfg: SolverConfig | None = None
                      ) -> tuple[np.ndarray, PerturbationTrail]:
    """A real unit vector b with F(b) = 0; -b is equally valid.

    The returned representative has its first nonzero coordinate positive.
    """
    cfg = cfg or SolverConfig()
    if not system.is_square():
        raise InputError("need n forms in n + 1 variables")
    even = [d for d in system.degrees if d % 2 == 0]
    if even:
        raise InputError(f"all degrees must be odd, got {system.degrees}")

    direct_failure = None
    try:
        rays, rep = solve_rays(system, cfg)
    except DegenerateSystemError as exc:
        direct_failure = exc
    else:
        ray = _choose_real(rays, system, cfg.cluster_tol)
        b = sign_normalize(polish(system, _unit(ray)))
        res = max_residual(system, b)
        if res <= cfg.residual_bound:
            trail = PerturbationTrail((), tuple(b), res, True,
                                      bezout_check(rays, system.degrees), rep.chart)
            return b, trail
        direct_failure = DegenerateSystemError(f"direct real ray has residual {res:.3e}")

    # One perturbation direction per run, scaled by eps_k = eps0 / 2^k, so the
    # perturbed rays move along algebraic curves and accumulate as eps -> 0.
    rng = random.Random(cfg.seed)
    eps0 = cfg.epsilon0_rational()
    steps = []
    for restart in range(cfg.max_retries):
        direction_seed = rng.randrange(2**31)
        solve_cfg = cfg.replace(seed=rng.randrange(2**31))
        prev = None
        for k in range(cfg.max_refine_steps):
            eps = eps0 / 2 ** k
            try:
                psys, cert, deltas = perturb_to_generic(
                    system, eps, direction_seed, cfg, force=True)
                prays, _ = solve_rays(psys, solve_cfg)
            except DegenerateSystemError:
                steps.append(PerturbationStep(eps, (), False, None))
                continue
            conjugate_pairing(prays, cfg.cluster_tol)
            reals = [_unit(r) for r in prays if r.is_real]
            if not reals:
                raise InvariantViolation("perturbed odd system without a real ray")
            if prev is None:
                pick = min(reals, key=lambda v: max_residual(system, v))
            else:
                dists = sorted((antipodal_distance(prev, v), i) for i, v in enumerate(reals))
                nearest = dists[0][0]
                if (len(dists) > 1 and dists[1][0] <= 2 * nearest
                        and nearest > cfg.refine_tol):
                    steps.append(PerturbationStep(eps, _serial_deltas(deltas), True, None))
                    break   # ambiguous match: restart with a fresh direction
                pick = reals[dists[0][1]]
                if prev @ pick < 0:
                    pick = -pick
            steps.append(PerturbationStep(eps, _serial_deltas(deltas), True, tuple(pick)))
            if prev is not None and antipodal_distance(prev, pick) <= cfg.refine_tol:
                b = sign_normalize(polish(system, pick, iterations=50))
                res = max_residual(system, b)
                if res <= cfg.residual_bound:
                    trail = PerturbationTrail(tuple(steps), tuple(b), res, False,
                                              bezout_check(prays, psys.degrees),
                                              cert.chart, CONVERGENCE_NOTE)
                    return b, trail
            prev = pick
    raise DegenerateSystemError(
        "perturbation loop did not stabilise",
        {"direct_failure": str(direct_failure), "steps": len(steps),
         "trail": [(str(s.epsilon), s.real_ray) for s in steps]},
    )
