"""Acceptance criteria; each test prints one PASS/FAIL line."""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy

from gen import (random_form, random_odd_poly, random_poly, random_system,
                 rational_sphere_point)
from oddrays import (OddMap, SolverConfig, bu_zero, coincidence, conjugate_pairing,
                     find_real_ray_odd, homogenize_odd, macaulay_resultant, parse_poly,
                     solve_rays, sphere_substitute)
from oddrays.cli import run_command
from oddrays.errors import InvariantViolation
from oddrays.poly import Poly
from oddrays.report import dumps
from oddrays.uresultant import pick_chart

CFG = SolverConfig()


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


def _criterion1_runs():
    rng = random.Random(20240101)
    runs = []
    for i in range(200):
        n = rng.choice([1, 2])
        degrees = [rng.choice([1, 2, 3]) for _ in range(n)]
        runs.append((i, random_system(rng, n, degrees)))
    return runs


_SOLVED: list = []


def test_criterion_1_bezout_completeness(verdict):
    start = time.perf_counter()
    accepted = skipped = 0
    mismatches = []
    for i, system in _criterion1_runs():
        if pick_chart(system, CFG)[0] is None:
            skipped += 1
            continue
        rays, _ = solve_rays(system, CFG.replace(seed=i))
        total = sum(r.multiplicity for r in rays)
        if total != system.bezout_number():
            mismatches.append((i, total, system.bezout_number()))
        _SOLVED.append(rays)
        accepted += 1
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed <= 120 and accepted > 0
    verdict(1, ok, f"{accepted} accepted, {skipped} skipped at infinity, "
                   f"{len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_2_odd_degree_real_ray(verdict):
    rng = random.Random(20240202)
    start = time.perf_counter()
    worst_res = worst_norm = 0.0
    failures = []
    for i in range(100):
        n = rng.choice([1, 2])
        system = random_system(rng, n, [rng.choice([1, 3]) for _ in range(n)])
        try:
            b, _ = find_real_ray_odd(system, CFG.replace(seed=i))
        except Exception as exc:          # any failure counts
            failures.append((i, repr(exc)))
            continue
        worst_norm = max(worst_norm, abs(np.linalg.norm(b) - 1.0))
        worst_res = max(worst_res, max(abs(f.evaluate(list(b))) for f in system.forms))
    elapsed = time.perf_counter() - start
    ok = not failures and worst_res <= 1e-8 and worst_norm <= 1e-12 and elapsed <= 120
    verdict(2, ok, f"{len(failures)} failures, max residual {worst_res:.2e}, "
                   f"norm error {worst_norm:.1e}, {elapsed:.1f}s")


def test_criterion_3_conjugate_pairing(verdict):
    if not _SOLVED:
        for i, system in _criterion1_runs():
            if pick_chart(system, CFG)[0] is not None:
                _SOLVED.append(solve_rays(system, CFG.replace(seed=i))[0])
    violations = pairs = 0
    for rays in _SOLVED:
        try:
            pairs += len(conjugate_pairing(rays, CFG.cluster_tol).pairs)
        except InvariantViolation:
            violations += 1
    verdict(3, violations == 0 and len(_SOLVED) > 0,
            f"{len(_SOLVED)} solves, {pairs} conjugate pairs, {violations} violations")


def _sylvester_oracle(f: Poly, g: Poly) -> Fraction:
    """Determinant of the Sylvester matrix in x0 (coefficients listed from x0^deg down)."""
    m, n = f.total_degree, g.total_degree
    fc = [f.coefficient((m - i, i)) for i in range(m + 1)]
    gc = [g.coefficient((n - i, i)) for i in range(n + 1)]
    rows = []
    for r in range(n):
        rows.append([0] * r + fc + [0] * (n - 1 - r))
    for r in range(m):
        rows.append([0] * r + gc + [0] * (m - 1 - r))
    det = sympy.Matrix(rows).applyfunc(sympy.nsimplify).det()
    num, den = sympy.fraction(sympy.Rational(det))
    return Fraction(int(num), int(den))


def test_criterion_4_resultant_oracles(verdict):
    rng = random.Random(20240404)
    linear_bad = sylvester_bad = 0
    for _ in range(100):
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        f = Poly(2, {(1, 0): a, (0, 1): b})
        g = Poly(2, {(1, 0): c, (0, 1): d})
        if macaulay_resultant([f, g], [1, 1]).value != a * d - b * c:
            linear_bad += 1
    nonzero = 0
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        f = random_form(rng, 2, m)
        g = random_form(rng, 2, n)
        value = macaulay_resultant([f, g], [m, n]).value
        nonzero += value != 0
        if value != _sylvester_oracle(f, g):
            sylvester_bad += 1
    verdict(4, linear_bad == 0 and sylvester_bad == 0,
            f"linear mismatches {linear_bad}/100, Sylvester mismatches "
            f"{sylvester_bad}/100 ({nonzero} nonzero)")


def test_criterion_5_multihomogeneity(verdict):
    rng = random.Random(20240505)
    bad = nonzero = 0
    for _ in range(50):
        k = rng.choice([2, 3])
        degrees = [rng.choice([1, 2]) if k == 3 else rng.choice([1, 2, 3]) for _ in range(k)]
        forms = [random_form(rng, k, d) for d in degrees]
        base = macaulay_resultant(forms, degrees).value
        nonzero += base != 0
        for j in range(k):
            expo = 1
            for i, d in enumerate(degrees):
                if i != j:
                    expo *= d
            for lam in (Fraction(2), Fraction(-3), Fraction(5, 7)):
                scaled = list(forms)
                scaled[j] = forms[j].scale(lam)
                if macaulay_resultant(scaled, degrees).value != lam ** expo * base:
                    bad += 1
    verdict(5, bad == 0, f"{bad} violations over 50 systems ({nonzero} nonzero resultants)")


def test_criterion_6_pipeline_fidelity(verdict):
    rng = random.Random(20240606)
    worst = worst_sym = 0.0
    failures = []
    for i in range(50):
        n = 1 + i % 2
        m = OddMap(tuple(random_odd_poly(rng, n + 1) for _ in range(n)))
        try:
            res = bu_zero(m, CFG.replace(seed=i))
        except Exception as exc:
            failures.append((i, repr(exc)))
            continue
        y, z = list(res.point), list(res.antipode)
        worst = max(worst, max(abs(c.evaluate(y)) for c in m.components))
        worst_sym = max(worst_sym, max(abs(c.evaluate(z) + c.evaluate(y))
                                       for c in m.components))
    ok = not failures and worst <= 1e-8 and worst_sym <= 1e-12
    verdict(6, ok, f"{len(failures)} failures, max |q(y)| {worst:.2e}, "
                   f"max |q(-y) + q(y)| {worst_sym:.2e}")


WORKED_Q = "2*x1 - x2*x3^2 + x1^3*x2*x3 - 3*x1*x3^2 + x2^2*x3"


def test_criterion_7_worked_example_round_trip(verdict):
    q = parse_poly(WORKED_Q, 4).parsed.drop_variable(0)
    h = homogenize_odd(q)
    restored = h.substitute(0, Poly.constant(h.nvars, 1)).drop_variable(0)
    expected_h = parse_poly(
        "2*x0^4*x1 - x0^2*x2*x3^2 + x1^3*x2*x3 - 3*x0^2*x1*x3^2 + x0^2*x2^2*x3", 4).parsed
    s = sphere_substitute(h)
    rng = random.Random(20240707)
    mismatches = 0
    for _ in range(25):
        y = rational_sphere_point(rng, 3)
        assert sum(v * v for v in y) == 1
        if s.evaluate(list(y), exact=True) != q.evaluate(list(y), exact=True):
            mismatches += 1
    ok = restored == q and h == expected_h and mismatches == 0
    verdict(7, ok, f"restore at x0=1: {restored == q}, homogenized form matches: "
                   f"{h == expected_h}, sphere mismatches {mismatches}/25")


def test_criterion_8_coincidence(verdict):
    rng = random.Random(20240808)
    worst = 0.0
    failures = []
    for i in range(25):
        g = [random_poly(rng, 3) for _ in range(2)]
        try:
            res = coincidence(g, CFG.replace(seed=i))
        except Exception as exc:
            failures.append((i, repr(exc)))
            continue
        y, z = list(res.point), list(res.antipode)
        worst = max(worst, max(abs(p.evaluate(y) - p.evaluate(z)) for p in g))
    verdict(8, not failures and worst <= 1e-6,
            f"{len(failures)} failures, max gap {worst:.2e}")


def _cli_cases(tmp: Path) -> list[list[str]]:
    sysfile = tmp / "cubic.txt"
    sysfile.write_text("nvars=2 forms=1\nx0^3 - x0*x1^2\n")
    rng = random.Random(20240909)
    odd = tmp / "odd.txt"
    forms = [random_form(rng, 3, 3) for _ in range(2)]
    odd.write_text(f"nvars=3 forms=2\n{forms[0]}\n{forms[1]}\n")
    degenerate = tmp / "degenerate.txt"
    degenerate.write_text("nvars=3 forms=2\nx0\nx0*x1*x2\n")
    samples = tmp / "samples.txt"
    from oddrays.borsuk_ulam import sphere_points
    from oddrays.parser import format_samples
    pts = sphere_points(3, 60)
    samples.write_text(format_samples(pts, np.column_stack([pts[:, 0], pts[:, 1] ** 3]), 3))
    return [
        ["solve", "--system", str(sysfile), "--seed", "7"],
        ["bezout", "--system", str(odd), "--seed", "3"],
        ["real-ray", "--system", str(odd), "--seed", "5"],
        ["real-ray", "--system", str(degenerate), "--seed", "5"],
        ["solve", "--system", str(degenerate), "--perturb", "--seed", "2"],
        ["resultant", "--poly", "x0^2+x1*x2", "--poly", "x1^2+x2^2-x0*x1",
         "--poly", "x0+2*x1+3*x2"],
        ["bu-zero", "--poly", "x1^3 + 2*x2 - x3", "--poly", "x1*x2*x3 - x2", "--seed", "9"],
        ["coincidence", "--poly", "x1 + x2^2", "--poly", "x3 + x1*x2", "--seed", "9"],
        ["homogenize", "--poly", WORKED_Q],
        ["fit", "--samples", str(samples)],
        ["guard", "--samples", str(samples)],
        ["solve", "--system", str(degenerate)],
    ]


def test_criterion_9_determinism(verdict, tmp_path):
    cases = _cli_cases(tmp_path)
    differing = []
    for argv in cases:
        first, code1, _ = run_command(argv)
        second, code2, _ = run_command(argv)
        if dumps(first) != dumps(second) or code1 != code2:
            differing.append(argv[0])
    # separate interpreters with different hash seeds
    outs = []
    for hashseed in ("1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-m", "oddrays.cli", *cases[2]],
                              capture_output=True, env=env, check=False)
        outs.append(proc.stdout)
    cross = outs[0] == outs[1] and len(outs[0]) > 0
    verdict(9, not differing and cross,
            f"{len(cases)} commands, in-process differences {differing}, "
            f"cross-process identical {cross}")
