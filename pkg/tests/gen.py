"""Seeded random instances shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from oddrays.homogenize import HomSystem
from oddrays.poly import Poly, monomials_of_degree


def random_form(rng: random.Random, nvars: int, degree: int, lo: int = -5, hi: int = 5,
                density: float = 1.0) -> Poly:
    while True:
        terms = {m: rng.randint(lo, hi) for m in monomials_of_degree(nvars, degree)
                 if rng.random() < density}
        p = Poly(nvars, terms)
        if not p.is_zero():
            return p


def random_system(rng: random.Random, n: int, degrees, lo=-5, hi=5) -> HomSystem:
    return HomSystem(tuple(random_form(rng, n + 1, d, lo, hi) for d in degrees))


def random_odd_poly(rng: random.Random, nvars: int, max_degree: int = 3,
                    lo: int = -5, hi: int = 5) -> Poly:
    while True:
        terms = {}
        for d in range(1, max_degree + 1, 2):
            for m in monomials_of_degree(nvars, d):
                if rng.random() < 0.6:
                    terms[m] = rng.randint(lo, hi)
        p = Poly(nvars, terms)
        if not p.is_zero():
            return p


def random_poly(rng: random.Random, nvars: int, max_degree: int = 3,
                lo: int = -5, hi: int = 5) -> Poly:
    while True:
        terms = {}
        for d in range(0, max_degree + 1):
            for m in monomials_of_degree(nvars, d):
                if rng.random() < 0.5:
                    terms[m] = rng.randint(lo, hi)
        p = Poly(nvars, terms)
        if not p.is_zero():
            return p


def rational_sphere_point(rng: random.Random, dim: int) -> tuple:
    """Exact rational point on the unit sphere in Q^dim via inverse stereographic projection."""
    t = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(dim - 1)]
    s = sum(v * v for v in t)
    return tuple([2 * v / (1 + s) for v in t] + [(s - 1) / (1 + s)])
