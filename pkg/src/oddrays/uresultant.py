"""Solution rays of square homogeneous systems from the u-resultant.

Adding the linear form u.x to n forms in n + 1 variables gives the
u-resultant R(u), which factors as a product of L_p(u)^{s_p} with
L_p(u) = u . xi_p over the solution rays xi_p. R(u) is never expanded;
instead it is restricted to lines

    u = t * e_a + r + eps * e_j,

where ``a`` is the chart variable. P0(t) = R(t e_a + r) has the roots
t_p = -(r . xi_p) / xi_p[a] with multiplicity s_p, and the eps-derivative
P1_j satisfies

    P1_j / P0 = sum_p s_p (xi_p[j] / xi_p[a]) / (t - t_p),

so each coordinate ratio is a residue. Both polynomials are interpolated
exactly from determinants of Macaulay matrices over Z[eps]/(eps^2).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .config import SolverConfig
from .errors import (DegenerateSystemError, InputError, InvariantViolation,
                     RootFindingError)
from .homogenize import HomSystem
from .linalg import (SingularPivot, bareiss_det, bareiss_det_dual, integer_rows,
                     interpolate, squarefree_decomposition, upoly_degree,
                     upoly_derivative, upoly_eval, upoly_exact_div, upoly_mul,
                     upoly_trim)
from .macaulay import at_infinity_check, macaulay_matrix
from .poly import Poly


@dataclass(frozen=True)
class Specialization:
    direction: tuple          # rational vector r (entry at the chart is unused)
    coefficients: tuple       # P0(t), ascending


@dataclass(frozen=True)
class URepresentation:
    degree_D: int
    chart: int
    specializations: tuple
    seed: int
    method: str = "determinant_quotient"


@dataclass(frozen=True)
class SolutionRay:
    coords: tuple                 # canonical: largest-modulus coordinate is 1
    multiplicity: int
    is_real: bool
    residuals: tuple
    cluster_radius: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def real_unit_vector(self) -> np.ndarray:
        """Real representative of norm one with first nonzero coordinate positive."""
        v = np.array([c.real for c in self.coords])
        v = v / np.linalg.norm(v)
        return sign_normalize(v)


@dataclass(frozen=True)
class BezoutReport:
    degree_product: int
    multiplicity_sum: int
    consistent: bool


@dataclass(frozen=True)
class RootCluster:
    root: complex
    multiplicity: int
    radius: float = 0.0


def sign_normalize(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    for x in v:
        if abs(x) > tol:
            return v if x > 0 else -v
    return v


def canonicalize(coords: Sequence[complex], tol: float = 1e-12) -> tuple:
    """Scale so that the largest-modulus coordinate is 1 (ties: lowest index)."""
    mods = [abs(c) for c in coords]
    top = max(mods)
    if top == 0:
        raise InputError("the zero vector is not a projective point")
    k = next(i for i, m in enumerate(mods) if m >= top * (1 - tol))
    pivot = coords[k]
    out = []
    for i, c in enumerate(coords):
        out.append(complex(1.0, 0.0) if i == k else complex(c / pivot))
    return tuple(out)


def projective_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """sin of the angle between two complex lines."""
    va = np.asarray(a, dtype=complex)
    vb = np.asarray(b, dtype=complex)
    va = va / np.linalg.norm(va)
    vb = vb / np.linalg.norm(vb)
    # norm of the component of vb orthogonal to va; avoids 1 - cos^2 cancellation
    return float(np.linalg.norm(vb - va * np.vdot(va, vb)))


# -- univariate root finding --------------------------------------------------

def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _roots_squarefree(coeffs: Sequence[Fraction], bits: int) -> list[complex]:
    """Roots of a squarefree rational polynomial (ascending coefficients)."""
    if len(coeffs) < 2:
        return []
    return [complex(z) for z in _roots_squarefree_mp(coeffs, bits)]


def _roots_squarefree_mp(coeffs: Sequence[Fraction], bits: int) -> list:
    deg = len(coeffs) - 1
    with mpmath.workprec(bits):
        if deg == 1:
            return [-_mp(coeffs[0]) / _mp(coeffs[1])]
        desc = [_mp(c) for c in reversed(coeffs)]
        last = None
        for steps, extra in ((100, 20), (400, 60), (2000, 200)):
            try:
                return list(mpmath.polyroots(desc, maxsteps=steps, extraprec=extra + bits))
            except mpmath.libmp.NoConvergence as exc:
                last = exc
    raise RootFindingError(f"root finder did not converge on degree {deg}: {last}")


def _root_sort_key(z: complex):
    return (round(z.real, 9), round(z.imag, 9))


def solve_univariate(coeffs: Sequence, cluster_tol: float = 1e-6,
                     precision_bits: int = 128) -> list[RootCluster]:
    """All complex roots with multiplicities; coefficients in ascending order.

    Rational coefficients are split exactly into squarefree factors, so
    multiplicities are exact. Complex coefficients fall back to clustering
    numerical roots within ``cluster_tol`` (relative).
    """
    if all(isinstance(c, (int, Fraction)) for c in coeffs):
        p = upoly_trim(coeffs)
        if not p:
            raise InputError("the zero polynomial has no finite root set")
        out = []
        for factor, mult in squarefree_decomposition(p):
            for z in _roots_squarefree(factor, precision_bits):
                out.append(RootCluster(z, mult, 0.0))
        return sorted(out, key=lambda c: _root_sort_key(c.root))

    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(np.abs(c) > 0)[0]
    if len(nz) == 0:
        raise InputError("the zero polynomial has no finite root set")
    c = c[: nz[-1] + 1]
    if not np.all(np.isfinite(c)):
        raise InputError("non-finite coefficient")
    roots = np.roots(c[::-1]) if len(c) > 1 else np.array([])
    clusters: list[list[complex]] = []
    for z in sorted(roots, key=_root_sort_key):
        for cl in clusters:
            centre = np.mean(cl)
            if abs(z - centre) <= cluster_tol * max(1.0, abs(centre)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        centre = complex(np.mean(cl))
        radius = float(max(abs(z - centre) for z in cl))
        out.append(RootCluster(centre, len(cl), radius))
    return out


# -- u-line specialization ------------------------------------------------------

class _ULine:
    """Macaulay data for (F_1, ..., F_n, u.x) with u restricted to lines."""

    def __init__(self, system: HomSystem, cfg: SolverConfig):
        self.system = system
        n = system.n
        k = n + 1
        degrees = list(system.degrees) + [1]
        placeholder = Poly(k, {tuple(int(i == j) for i in range(k)): 1 for j in range(k)})
        forms = list(system.forms) + [placeholder]
        self.method = None
        first = None
        for order in itertools.permutations(range(k)):
            mat = macaulay_matrix(forms, degrees, var_order=order,
                                  size_cap=cfg.matrix_size_cap)
            if first is None:
                first = mat
            self._setup(mat, n)
            den = self._plain_det(self.nonreduced, 0)
            if den:
                self.method = "determinant_quotient"
                self.denominator = Fraction(den, self._nonreduced_scale())
                return
        self._setup(first, n)
        self.method = "gcp_perturbation"
        self._setup_gcp()

    def _setup(self, mat, n):
        self.mat = mat
        self.size = mat.size
        col_of = {m: i for i, m in enumerate(mat.col_index)}
        k = n + 1
        self.f_rows, self.u_rows = [], []
        ints, scales = [], []
        for r, (form, mult) in enumerate(mat.row_index):
            if form == n:
                self.u_rows.append(
                    (r, [col_of[tuple(a + int(i == j) for i, a in enumerate(mult))]
                         for j in range(k)])
                )
                ints.append([0] * self.size)
                scales.append(1)
            else:
                self.f_rows.append(r)
                row, sc = integer_rows([mat.entries[r]])
                ints.append(row[0])
                scales.append(sc)
        self.base = ints
        self.scales = scales
        self.scale_product = math.prod(scales)
        self.nonreduced = mat.nonreduced

    def _nonreduced_scale(self) -> int:
        return math.prod(self.scales[i] for i in self.nonreduced)

    def _plain_det(self, indices, s) -> int:
        sub = [[self.base[i][j] for j in indices] for i in indices]
        for pos, i in enumerate(indices):
            sub[pos][pos] += s * self.scales[i]
        return bareiss_det(sub)

    def _setup_gcp(self):
        # det M'(s) as a polynomial in s; its lowest-order coefficient rescales R(u)
        m = len(self.nonreduced)
        xs = [Fraction(s) for s in range(1, m + 2)]
        ys = [Fraction(self._plain_det(self.nonreduced, int(s))) for s in xs]
        den_poly = interpolate(xs, ys)
        order = next(i for i, c in enumerate(den_poly) if c)
        self.gcp_order = order
        self.denominator = den_poly[order] / self._nonreduced_scale()
        self.gcp_degree = len(self.f_rows)

    def _matrices(self, u: Sequence[int], dirs: Sequence[int], s: int = 0):
        a = [list(row) for row in self.base]
        if s:
            for r in self.f_rows:
                a[r][r] += s * self.scales[r]
        derivs = [[[0] * self.size for _ in range(self.size)] for _ in dirs]
        for r, cols in self.u_rows:
            row = a[r]
            for j, c in enumerate(cols):
                row[c] += u[j]
            for t, j in enumerate(dirs):
                derivs[t][r][cols[j]] += 1
        return a, derivs

    def values(self, u: Sequence[int], dirs: Sequence[int]):
        """(R(u), [dR/du_j for j in dirs]) up to one fixed nonzero constant.

        Returns None when R(u) = 0 (the dual elimination has no pivot).
        """
        if self.method == "determinant_quotient":
            a, derivs = self._matrices(u, dirs)
            try:
                det, dd = bareiss_det_dual(a, derivs)
            except SingularPivot:
                return None
            return Fraction(det), [Fraction(x) for x in dd]
        xs, ys, dys = [], [], [[] for _ in dirs]
        s = 0
        while len(xs) < self.gcp_degree + 1:
            s += 1
            a, derivs = self._matrices(u, dirs, s)
            try:
                det, dd = bareiss_det_dual(a, derivs)
            except SingularPivot:
                det, dd = 0, None
            if det == 0:
                if s > 8 * self.gcp_degree + 32:
                    raise DegenerateSystemError("no admissible GCP perturbation on this line")
                continue
            xs.append(Fraction(s))
            ys.append(Fraction(det))
            for t in range(len(dirs)):
                dys[t].append(Fraction(dd[t]))
        o = self.gcp_order
        val = interpolate(xs, ys)
        val = val[o] if len(val) > o else Fraction(0)
        if val == 0:
            return None
        out = []
        for t in range(len(dirs)):
            p = interpolate(xs, dys[t])
            out.append(p[o] if len(p) > o else Fraction(0))
        return val, out

    def normaliser(self) -> Fraction:
        # det of the row-scaled matrix = R(u) * det M' * (product of row scales)
        return self.denominator * self.scale_product


def _t_samples():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _line_polys(uline: _ULine, chart: int, r: Sequence[int], dirs: Sequence[int],
                degree: int):
    """Interpolate P0(t) and P1_j(t) on the line t*e_chart + r, exactly."""
    need = degree + 2   # one extra node checks the fit
    ts, p0, p1 = [], [], [[] for _ in dirs]
    tried = 0
    for t in _t_samples():
        tried += 1
        if tried > 4 * degree + 40:
            raise DegenerateSystemError("u-resultant vanishes on too many sample points")
        u = list(r)
        u[chart] = t
        got = uline.values(u, dirs)
        if got is None:
            continue
        val, dvals = got
        ts.append(Fraction(t))
        p0.append(val)
        for i, dv in enumerate(dvals):
            p1[i].append(dv)
        if len(ts) == need:
            break
    norm = uline.normaliser()
    P0 = interpolate(ts, p0)
    if upoly_degree(P0) > degree:
        raise DegenerateSystemError(
            "interpolation inconsistency in the specialized u-resultant",
            {"expected_degree": degree, "found_degree": upoly_degree(P0)},
        )
    P0 = [c / norm for c in P0]
    P1 = []
    for vals in p1:
        poly = interpolate(ts, vals)
        if upoly_degree(poly) > degree - 1:
            raise DegenerateSystemError("interpolation inconsistency in the u-derivative")
        P1.append([c / norm for c in poly])
    return upoly_trim(P0), [upoly_trim(p) for p in P1]


def u_specialized_poly(system: HomSystem, r: Sequence, axis: int,
                       cfg: SolverConfig | None = None) -> list[Fraction]:
    """Coefficients (ascending) of t -> R(F_1, ..., F_n, t*x_axis + sum r_i x_i)."""
    cfg = cfg or SolverConfig()
    if not system.is_square():
        raise InputError("need n forms in n + 1 variables")
    if len(r) != system.nvars:
        raise InputError("direction vector has the wrong length")
    r = [Fraction(x) for x in r]
    lcm = math.lcm(*(x.denominator for x in r))
    ints = [int(x * lcm) for x in r]
    uline = _ULine(system, cfg)
    D = system.bezout_number()
    ints[axis] = 0
    p0, _ = _line_polys(uline, axis, ints, [], D)
    # undo the integer scaling of the direction: t*lcm*x_a + lcm*r.x = lcm*(...)
    # R is homogeneous of degree D, and t was sampled in units of the scaled line
    shift = r[axis]
    out = [c / Fraction(lcm) ** D for c in p0]
    out = _rescale_argument(out, lcm)
    if shift:
        out = _shift_argument(out, shift)
    return upoly_trim(out)


def _rescale_argument(p, factor):
    # p(t) computed for u = t e_a + lcm r'; we want q(t) = p(lcm t)
    return [c * Fraction(factor) ** i for i, c in enumerate(p)]


def _shift_argument(p, shift):
    # q(t) = p(t + shift)
    out = [Fraction(0)] * len(p)
    for i, c in enumerate(p):
        for k in range(i + 1):
            out[k] += c * math.comb(i, k) * Fraction(shift) ** (i - k)
    return out


# -- ray extraction ------------------------------------------------------------------

def _draw_direction(rng: random.Random, nvars: int, chart: int, span: int) -> list[int]:
    r = [rng.randint(-span, span) for _ in range(nvars)]
    r[chart] = 0
    return r


def _residuals(system: HomSystem, coords) -> tuple:
    return tuple(abs(f.evaluate(coords)) for f in system.forms)


def residual_ok(system: HomSystem, residuals: Sequence[float], bound: float) -> bool:
    return all(res <= bound * max(1.0, f.coefficient_norm())
               for f, res in zip(system.forms, residuals))


def _rays_from_line(system, chart, P0, P1, dirs, cfg):
    """Rays (canonical coords) with multiplicities from the line polynomials."""
    bits = cfg.float_precision_bits
    sqf = squarefree_decomposition(P0)
    S = [Fraction(1)]
    for g, _ in sqf:
        S = upoly_mul(S, g)
    dS = upoly_derivative(S)
    A = []
    for p in P1:
        A.append(upoly_exact_div(upoly_mul(p, S), P0) if p else [])
    rays = []
    with mpmath.workprec(bits):
        Amp = [[_mp(c) for c in a] for a in A]
        dSmp = [_mp(c) for c in dS]
        for g, mult in sqf:
            for tau in _roots_squarefree_mp(g, bits):
                coords = [mpmath.mpc(0)] * system.nvars
                coords[chart] = mpmath.mpc(1)
                denom = mult * upoly_eval(dSmp, tau)
                for j, a in zip(dirs, Amp):
                    coords[j] = upoly_eval(a, tau) / denom if a else mpmath.mpc(0)
                rays.append(([complex(c) for c in coords], mult, complex(tau)))
    return rays


def _cross_check(rays, chart, r2, P0b, cfg) -> list[float] | None:
    """Predicted roots of the second line must be its roots, multiplicities included."""
    found = solve_univariate(P0b, cfg.cluster_tol, cfg.float_precision_bits)
    used = [False] * len(found)
    radii = []
    for coords, mult, _ in rays:
        xa = coords[chart]
        pred = -sum(ri * c for ri, c in zip(r2, coords)) / xa
        best, best_d = None, math.inf
        for i, cl in enumerate(found):
            if used[i] or cl.multiplicity != mult:
                continue
            d = abs(cl.root - pred)
            if d < best_d:
                best, best_d = i, d
        if best is None or best_d > cfg.cluster_tol * max(1.0, abs(pred)):
            return None
        used[best] = True
        radii.append(best_d / max(1.0, abs(pred)))
    return radii if all(used) else None


def _charts(system: HomSystem, cfg: SolverConfig):
    if cfg.chart_variable is not None:
        if not 0 <= cfg.chart_variable < system.nvars:
            raise InputError(f"chart variable {cfg.chart_variable} out of range")
        return [cfg.chart_variable]
    return list(range(system.nvars))


def pick_chart(system: HomSystem, cfg: SolverConfig):
    """First chart whose hyperplane carries no solution ray, with its check."""
    checks = []
    for chart in _charts(system, cfg):
        chk = at_infinity_check(system, chart, size_cap=cfg.matrix_size_cap)
        checks.append(chk)
        if not chk.has_infinite_solutions:
            return chart, chk, checks
    return None, None, checks


def solve_rays(system: HomSystem, cfg: SolverConfig | None = None
               ) -> tuple[list[SolutionRay], URepresentation]:
    """All solution rays of a square system, with exact multiplicities."""
    cfg = cfg or SolverConfig()
    if not system.is_square():
        raise InputError(
            f"need n forms in n + 1 variables, got {system.n} forms in {system.nvars}"
        )
    chart, check, checks = pick_chart(system, cfg)
    if chart is None:
        raise DegenerateSystemError(
            "solutions at infinity in every admissible chart (or infinitely many rays)",
            {"charts": [c.chart for c in checks]},
        )
    D = system.bezout_number()
    uline = _ULine(system, cfg)
    dirs = [j for j in range(system.nvars) if j != chart]
    rng = random.Random(cfg.seed)
    failures = []
    for attempt in range(cfg.max_retries):
        r1 = _draw_direction(rng, system.nvars, chart, cfg.direction_range)
        r2 = _draw_direction(rng, system.nvars, chart, cfg.direction_range)
        P0, P1 = _line_polys(uline, chart, r1, dirs, D)
        if upoly_degree(P0) != D:
            failures.append({"attempt": attempt, "reason": "degree-deficiency"})
            continue
        raw = _rays_from_line(system, chart, P0, P1, dirs, cfg)
        total = sum(m for _, m, _ in raw)
        if total != D:
            raise InvariantViolation(
                f"multiplicities sum to {total}, Bezout number is {D}"
            )
        P0b, _ = _line_polys(uline, chart, r2, [], D)
        radii = _cross_check(raw, chart, r2, P0b, cfg)
        if radii is None:
            failures.append({"attempt": attempt, "reason": "root-collision"})
            continue
        rays = []
        bad = False
        for (coords, mult, _), rad in zip(raw, radii):
            canon = canonicalize(coords)
            res = _residuals(system, canon)
            if not residual_ok(system, res, cfg.residual_bound):
                bad = True
                break
            real = max(abs(c.imag) for c in canon) <= cfg.realness_tol
            rays.append(SolutionRay(canon, mult, real, res, rad))
        if bad:
            failures.append({"attempt": attempt, "reason": "residual"})
            continue
        rays.sort(key=lambda ray: (not ray.is_real,
                                   [_root_sort_key(c) for c in ray.coords]))
        rep = URepresentation(
            D, chart,
            (Specialization(tuple(r1), tuple(P0)), Specialization(tuple(r2), tuple(P0b))),
            cfg.seed, uline.method,
        )
        return rays, rep
    raise DegenerateSystemError(
        "could not extract rays after all retries", {"failures": failures}
    )


def bezout_check(rays: Sequence[SolutionRay], degrees: Sequence[int]) -> BezoutReport:
    prod = math.prod(degrees)
    total = sum(r.multiplicity for r in rays)
    return BezoutReport(prod, total, prod == total)
