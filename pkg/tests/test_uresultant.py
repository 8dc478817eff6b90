import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_system
from oddrays.config import SolverConfig
from oddrays.errors import DegenerateSystemError, InputError
from oddrays.homogenize import HomSystem
from oddrays.parser import parse_poly
from oddrays.uresultant import (bezout_check, canonicalize, projective_distance,
                                solve_rays, solve_univariate, u_specialized_poly)

CFG = SolverConfig()


def S(*texts, nvars):
    return HomSystem(tuple(parse_poly(t, nvars).parsed for t in texts))


def ray_set(rays):
    return [(tuple(complex(round(c.real, 9), round(c.imag, 9)) for c in r.coords),
             r.multiplicity) for r in rays]


def test_u_specialized_examples():
    assert u_specialized_poly(S("x1^2", nvars=2), [0, 1], 0) == [0, 0, 1]
    assert u_specialized_poly(S("x0^2 + x1^2", nvars=2), [0, 1], 0) == [1, 0, 1]


def test_u_specialized_rational_direction():
    # R(u) = u0^2 + u1^2; on u = (t, 1/2) it is t^2 + 1/4
    p = u_specialized_poly(S("x0^2 + x1^2", nvars=2), [0, Fraction(1, 2)], 0)
    assert p == [Fraction(1, 4), 0, 1]


def test_solve_univariate_examples():
    roots = solve_univariate([1, 0, 1])
    assert sorted((round(r.root.imag), r.multiplicity) for r in roots) == [(-1, 1), (1, 1)]
    (double,) = solve_univariate([0, 0, 1])
    assert double.multiplicity == 2 and abs(double.root) < 1e-12
    roots = solve_univariate([0, -1, 0, 1])
    assert sorted(round(r.root.real) for r in roots) == [-1, 0, 1]
    assert all(r.multiplicity == 1 for r in roots)


def test_solve_univariate_complex_clusters():
    # (t - i)^2 (t + 1) with complex coefficients
    c = np.polymul(np.polymul([1, -1j], [1, -1j]), [1, 1])[::-1]
    out = solve_univariate(list(c))
    mults = sorted(r.multiplicity for r in out)
    assert mults == [1, 2]


def test_solve_rays_factorized_cubic():
    rays, rep = solve_rays(S("x0^3 - x0*x1^2", nvars=2), CFG)
    got = sorted((round(r.coords[0].real, 9), round(r.coords[1].real, 9)) for r in rays)
    assert got == [(-1.0, 1.0), (0.0, 1.0), (1.0, 1.0)] or got == [(0.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert all(r.is_real and r.multiplicity == 1 for r in rays)
    assert bezout_check(rays, [3]).consistent
    assert rep.degree_D == 3


def test_solve_rays_sum_of_cubes():
    rays, _ = solve_rays(S("x0^3 + x1^3", nvars=2), CFG)
    real = [r for r in rays if r.is_real]
    assert len(real) == 1 and len(rays) == 3
    assert projective_distance(real[0].coords, (1, -1)) < 1e-9
    w = cmath.exp(1j * cmath.pi / 3)
    for target in (w, w.conjugate()):
        assert min(projective_distance(r.coords, (1, target)) for r in rays) < 1e-9


def test_solve_rays_double_ray():
    rays, _ = solve_rays(S("x1^2", nvars=2), CFG)
    assert len(rays) == 1 and rays[0].multiplicity == 2
    assert projective_distance(rays[0].coords, (1, 0)) < 1e-12
    assert bezout_check(rays, [2]).consistent


def test_bezout_check_examples():
    assert not bezout_check([], [1]).consistent
    assert bezout_check([], [1]).degree_product == 1


def test_canonicalize_ties_and_phase():
    assert canonicalize([1j, -1j]) == (1, -1)
    assert canonicalize([2, -2]) == (1, -1)


def test_degenerate_system_reports():
    with pytest.raises(DegenerateSystemError):
        solve_rays(S("x0", "x0*x1*x2", nvars=3), CFG)
    with pytest.raises(InputError):
        solve_rays(S("x0", nvars=3), CFG)


def test_residuals_and_completeness_random():
    rng = random.Random(99)
    for i in range(30):
        n = rng.choice([1, 2, 3]) if i % 5 == 0 else rng.choice([1, 2])
        degrees = [rng.choice([1, 2]) for _ in range(n)] if n == 3 else \
            [rng.choice([1, 2, 3]) for _ in range(n)]
        s = random_system(rng, n, degrees)
        try:
            rays, _ = solve_rays(s, CFG.replace(seed=i))
        except DegenerateSystemError:
            continue
        assert sum(r.multiplicity for r in rays) == s.bezout_number()
        for r in rays:
            scale = max(f.coefficient_norm() for f in s.forms)
            assert max(r.residuals) <= CFG.residual_bound * max(1.0, scale)
            assert max(abs(c) for c in r.coords) == pytest.approx(1.0)


def test_chart_independence():
    rng = random.Random(7)
    for i in range(10):
        s = random_system(rng, 2, [2, 2])
        a, ra = solve_rays(s, CFG.replace(chart_variable=0))
        b, rb = solve_rays(s, CFG.replace(chart_variable=2))
        assert ra.chart != rb.chart
        for ray in a:
            assert min(projective_distance(ray.coords, o.coords) for o in b) < 1e-6


def test_determinism():
    s = random_system(random.Random(3), 2, [3, 2])
    a = solve_rays(s, CFG.replace(seed=5))
    b = solve_rays(s, CFG.replace(seed=5))
    assert a == b
