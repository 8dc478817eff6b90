"""Exact linear algebra and univariate polynomial helpers over Q.

Determinants use fraction-free (Bareiss) elimination on integer matrices;
rational matrices are brought to integers by scaling each row by the lcm of
its denominators. Univariate polynomials are lists of Fractions in ascending
order of degree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence

from .errors import InvariantViolation

UPoly = List[Fraction]


class SingularPivot(ArithmeticError):
    """No admissible pivot: the constant part of the matrix is singular."""


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            a = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - a * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def integer_rows(matrix: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale rows to integers; returns the integer matrix and the product of scales."""
    out = []
    scale = 1
    for row in matrix:
        lcm = 1
        for v in row:
            if isinstance(v, Fraction):
                lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        out.append([int(v * lcm) for v in row])
        scale *= lcm
    return out, scale


def fraction_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    ints, scale = integer_rows(matrix)
    return Fraction(bareiss_det(ints), scale)


def bareiss_det_dual(const: Sequence[Sequence[int]],
                     derivs: Sequence[Sequence[Sequence[int]]]) -> tuple[int, list[int]]:
    """Determinant of A + sum_k eps_k B_k modulo all products eps_i eps_j.

    ``const`` is A and ``derivs`` the list of B_k, all integer matrices. Returns
    ``(det A, [d/deps_k det])``. Pivots must have a nonzero constant part;
    otherwise :class:`SingularPivot` is raised (det A is then zero).
    """
    n = len(const)
    nd = len(derivs)
    a = [list(row) for row in const]
    b = [[list(row) for row in mat] for mat in derivs]
    if n == 0:
        return 1, [0] * nd
    sign = 1
    prev = 1
    prev_d = [0] * nd
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    for mat in b:
                        mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                raise SingularPivot(k)
        if k == n - 1:
            break
        p = a[k][k]
        pd = [mat[k][k] for mat in b]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            q = row_i[k]
            qd = [mat[i][k] for mat in b]
            for j in range(k + 1, n):
                # (a_ij p - q a_kj) / prev in the dual ring
                x = row_i[j] * p - q * row_k[j]
                val = x // prev
                for t in range(nd):
                    mat = b[t]
                    xd = (mat[i][j] * p + row_i[j] * pd[t]
                          - q * mat[k][j] - qd[t] * row_k[j])
                    mat[i][j] = (xd - val * prev_d[t]) // prev
                row_i[j] = val
            row_i[k] = 0
            for mat in b:
                mat[i][k] = 0
        prev = p
        prev_d = pd
    det = sign * a[n - 1][n - 1]
    return det, [sign * mat[n - 1][n - 1] for mat in b]


# -- univariate polynomials --------------------------------------------------

def upoly_trim(p: Sequence[Fraction]) -> UPoly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_degree(p: Sequence[Fraction]) -> int:
    return len(upoly_trim(p)) - 1


def upoly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return upoly_trim(out)


def upoly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                       for i in range(n)])


def upoly_derivative(p: Sequence[Fraction]) -> UPoly:
    return upoly_trim([i * p[i] for i in range(1, len(p))])


def upoly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[UPoly, UPoly]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] -= c * y
    return upoly_trim(q), upoly_trim(r[:len(b) - 1])


def upoly_exact_div(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    q, r = upoly_divmod(a, b)
    if r:
        raise InvariantViolation("expected exact polynomial division")
    return q


def upoly_monic(p: Sequence[Fraction]) -> UPoly:
    p = upoly_trim(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def upoly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    a = upoly_trim(a)
    b = upoly_trim(b)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, upoly_monic(r)
    return upoly_monic(a)


def squarefree_decomposition(p: Sequence[Fraction]) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime factors with multiplicities.

    ``p = lead * prod(f ** m)``; constant factors are omitted.
    """
    p = upoly_trim(p)
    if not p:
        raise ValueError("squarefree decomposition of the zero polynomial")
    if len(p) == 1:
        return []
    dp = upoly_derivative(p)
    a = upoly_gcd(p, dp)
    b = upoly_exact_div(p, a)
    c = upoly_exact_div(dp, a)
    d = upoly_sub(c, upoly_derivative(b))
    out = []
    i = 1
    while len(b) > 1:
        g = upoly_gcd(b, d)
        if len(g) > 1:
            out.append((upoly_monic(g), i))
        b = upoly_exact_div(b, g)
        c = upoly_exact_div(d, g)
        d = upoly_sub(c, upoly_derivative(b))
        i += 1
    return out


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UPoly:
    """Coefficients (ascending) of the unique polynomial of degree < len(xs)."""
    n = len(xs)
    if n != len(ys) or len(set(xs)) != n:
        raise ValueError("interpolation needs distinct nodes and matching values")
    coef = [Fraction(y) for y in ys]
    xs = [Fraction(x) for x in xs]
    # Newton divided differences
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [s - xs[i] * o for s, o in zip(shifted, out)]
        out[0] += coef[i]
    return upoly_trim(out)
