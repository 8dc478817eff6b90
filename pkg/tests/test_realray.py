import math
import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_system
from oddrays.config import SolverConfig
from oddrays.errors import DegenerateSystemError, InputError
from oddrays.homogenize import HomSystem
from oddrays.macaulay import at_infinity_check
from oddrays.parser import parse_poly
from oddrays.realray import (CONVERGENCE_NOTE, classify_real, conjugate_pairing,
                             find_real_ray_odd, perturb_to_generic)
from oddrays.uresultant import SolutionRay, solve_rays

CFG = SolverConfig()


def S(*texts, nvars):
    return HomSystem(tuple(parse_poly(t, nvars).parsed for t in texts))


def test_classify_real_examples():
    assert classify_real((1, -1))
    assert not classify_real((1, 1j))
    assert classify_real((1j, -1j))


def test_pairing_examples():
    rays, _ = solve_rays(S("x0^3 + x1^3", nvars=2), CFG)
    rep = conjugate_pairing(rays)
    assert len(rep.pairs) == 1 and len(rep.fixed) == 1
    rays, _ = solve_rays(S("x0^2 + x1^2", nvars=2), CFG)
    rep = conjugate_pairing(rays)
    assert len(rep.pairs) == 1 and rep.fixed == ()
    rays, _ = solve_rays(S("x0^3 - x0*x1^2", nvars=2), CFG)
    assert conjugate_pairing(rays).pairs == ()


def test_pairing_detects_corruption():
    from oddrays.errors import InvariantViolation
    lone = [SolutionRay((1, 1j), 1, False, (0.0,))]
    with pytest.raises(InvariantViolation):
        conjugate_pairing(lone)
    mismatch = [SolutionRay((1, 1j), 1, False, (0.0,)), SolutionRay((1, -1j), 2, False, (0.0,))]
    with pytest.raises(InvariantViolation):
        conjugate_pairing(mismatch)


def test_real_ray_examples():
    b, _ = find_real_ray_odd(S("x0", nvars=2), CFG)
    assert np.allclose(b, [0, 1])
    b, _ = find_real_ray_odd(S("x0^3 - x0*x1^2", nvars=2), CFG)
    s2 = 1 / math.sqrt(2)
    allowed = [(0, 1), (s2, s2), (s2, -s2)]
    assert any(np.allclose(b, a) for a in allowed)
    b, trail = find_real_ray_odd(S("x0^3 + x1^3", nvars=2), CFG)
    assert np.allclose(b, [s2, -s2]) and trail.direct


def test_real_ray_rejects_even_degree():
    with pytest.raises(InputError):
        find_real_ray_odd(S("x0^2 + x1^2", nvars=2), CFG)


def test_degenerate_system_uses_perturbation():
    s = S("x0", "x0*x1*x2", nvars=3)
    b, trail = find_real_ray_odd(s, CFG)
    assert not trail.direct and trail.note == CONVERGENCE_NOTE
    assert max(abs(f.evaluate(list(b))) for f in s.forms) <= CFG.residual_bound
    assert abs(np.linalg.norm(b) - 1) < 1e-12
    eps = [s.epsilon for s in trail.steps]
    # each restart halves epsilon step by step
    assert all(b == a / 2 or b == eps[0] for a, b in zip(eps, eps[1:]))


def test_antipodal_residuals_and_existence():
    rng = random.Random(17)
    for i in range(25):
        n = rng.choice([1, 2, 3])
        degrees = [rng.choice([1, 3]) for _ in range(n)] if n < 3 else [rng.choice([1, 1, 3])
                                                                        for _ in range(n)]
        s = random_system(rng, n, degrees)
        b, _ = find_real_ray_odd(s, CFG.replace(seed=i))
        for f in s.forms:
            assert abs(f.evaluate(list(-b))) == pytest.approx(abs(f.evaluate(list(b))), abs=1e-15)
        try:
            rays, _ = solve_rays(s, CFG.replace(seed=i))
        except DegenerateSystemError:
            continue
        assert any(r.is_real for r in rays)
        assert sum(1 for r in rays if not r.is_real) % 2 == 0


def test_perturb_examples():
    generic = S("x0^3 + x1^3", nvars=2)
    same, cert, deltas = perturb_to_generic(generic, Fraction(1, 100))
    assert same is generic and cert.attempts == 0 and all(d == () for d in deltas)
    bad = S("x0*x1", "x0*x2", nvars=3)
    assert all(at_infinity_check(bad, c).has_infinite_solutions for c in range(3))
    new, cert, deltas = perturb_to_generic(bad, Fraction(1, 100), seed=3)
    assert cert.resultant != 0 and any(deltas)
    assert new.degrees == bad.degrees
    assert not at_infinity_check(new, cert.chart).has_infinite_solutions
    for row in deltas:
        assert all(abs(Fraction(v)) <= Fraction(1, 100) for _, v in row)
    with pytest.raises(InputError):
        perturb_to_generic(bad, 0)
