import random
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oddrays.linalg import (SingularPivot, bareiss_det, bareiss_det_dual, fraction_det,
                            interpolate, squarefree_decomposition, upoly_eval, upoly_mul)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(rows) == sympy.Matrix(rows).det()


def test_fraction_det():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert fraction_det(m) == Fraction(1, 10) - Fraction(1, 12)


def test_dual_determinant_derivative():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 5)
        A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        B = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        e = sympy.symbols("e")
        M = sympy.Matrix(n, n, lambda i, j: A[i][j] + e * B[i][j])
        d = sympy.expand(M.det())
        if sympy.Matrix(A).det() == 0:
            try:
                bareiss_det_dual(A, [B])
            except SingularPivot:
                continue
        value, (deriv,) = bareiss_det_dual(A, [B])
        assert value == d.subs(e, 0)
        assert deriv == sympy.diff(d, e).subs(e, 0)


def test_squarefree_decomposition():
    # (t - 1)^2 (t + 2)^3 t
    p = [Fraction(1)]
    for root, k in ((1, 2), (-2, 3), (0, 1)):
        for _ in range(k):
            p = upoly_mul(p, [Fraction(-root), Fraction(1)])
    parts = squarefree_decomposition(p)
    mults = {k: g for g, k in parts}
    assert set(mults) == {1, 2, 3}
    assert upoly_eval(mults[2], Fraction(1)) == 0
    assert upoly_eval(mults[3], Fraction(-2)) == 0


def test_interpolate_exact():
    target = [Fraction(3), Fraction(-1, 2), Fraction(0), Fraction(7)]
    xs = [Fraction(k) for k in range(4)]
    ys = [upoly_eval(target, x) for x in xs]
    assert interpolate(xs, ys) == target
