"""Macaulay matrices and multivariate resultants of k forms in k variables.

The resultant is computed as Macaulay's quotient det(M) / det(M'), where M'
is the square submatrix on the non-reduced monomials. When M' is singular
for a particular input, the forms are perturbed to F_i + s * x_i^{d_i}; in
the matrix this only adds s on the diagonal, the quotient becomes a
polynomial in s, and its value at s = 0 is the resultant.

Sign convention: Res(x_1^{d_1}, ..., x_k^{d_k}) = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateSystemError, InputError, MatrixSizeError
from .homogenize import HomSystem
from .linalg import bareiss_det, integer_rows, interpolate, upoly_degree, upoly_eval
from .poly import Poly, monomials_of_degree

DEFAULT_MATRIX_SIZE_CAP = 3000


@dataclass(frozen=True)
class MacaulayMatrix:
    degree_D: int
    row_index: list          # (form index, multiplier exponents) per row
    col_index: list          # degree-D exponents, descending grlex
    entries: list            # rows of Fractions
    nonreduced: list = field(default_factory=list)
    var_order: tuple = ()

    @property
    def size(self) -> int:
        return len(self.col_index)

    def submatrix(self, indices: Sequence[int]) -> list:
        return [[self.entries[i][j] for j in indices] for i in indices]

    def dump(self) -> str:
        """Plain listing: one ``row  monomial  value`` line per nonzero entry."""
        lines = [f"% macaulay degree={self.degree_D} size={self.size}"]
        for r, row in enumerate(self.entries):
            for c, v in enumerate(row):
                if v:
                    mono = "*".join(
                        f"x{i}^{e}" if e > 1 else f"x{i}"
                        for i, e in enumerate(self.col_index[c]) if e
                    ) or "1"
                    lines.append(f"{r + 1} {mono} {v}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ResultantValue:
    value: Fraction
    method: str              # "determinant_quotient" or "gcp_perturbation"
    degenerate_retries: int = 0

    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class InfinityCheck:
    chart: int
    has_infinite_solutions: bool
    resultant: ResultantValue | None
    zero_forms: tuple = ()


def _check_forms(forms: Sequence[Poly], degrees: Sequence[int] | None) -> tuple[list, list]:
    forms = list(forms)
    k = len(forms)
    if k < 1:
        raise InputError("need at least one form")
    for i, f in enumerate(forms):
        if f.nvars != k:
            raise InputError(f"form {i} has {f.nvars} variables; {k} forms need {k} variables")
    if degrees is None:
        degrees = []
        for i, f in enumerate(forms):
            if f.is_zero():
                raise InputError(f"form {i} is zero; its degree must be given")
            degrees.append(f.total_degree)
    degrees = [int(d) for d in degrees]
    if len(degrees) != k:
        raise InputError("degree vector length differs from the form count")
    for i, (f, d) in enumerate(zip(forms, degrees)):
        if d < 1:
            raise InputError(f"form {i} has non-positive degree {d}")
        if not f.is_homogeneous(d):
            raise InputError(f"form {i} is not homogeneous of degree {d}")
    return forms, degrees


def critical_degree(degrees: Sequence[int]) -> int:
    return sum(d - 1 for d in degrees) + 1


def macaulay_matrix(forms: Sequence[Poly], degrees: Sequence[int] | None = None,
                    var_order: Sequence[int] | None = None,
                    size_cap: int = DEFAULT_MATRIX_SIZE_CAP) -> MacaulayMatrix:
    """Build the Macaulay matrix; form i is paired with variable ``var_order[i]``."""
    forms, degrees = _check_forms(forms, degrees)
    k = len(forms)
    order = tuple(range(k)) if var_order is None else tuple(var_order)
    if sorted(order) != list(range(k)):
        raise InputError(f"var_order {order} is not a permutation of range({k})")
    D = critical_degree(degrees)
    n_cols = math.comb(D + k - 1, k - 1)
    if n_cols > size_cap:
        raise MatrixSizeError(
            f"Macaulay matrix would have {n_cols} columns (cap {size_cap})"
        )
    cols = monomials_of_degree(k, D)
    col_of = {m: i for i, m in enumerate(cols)}
    rows, entries, nonreduced = [], [], []
    for r, mono in enumerate(cols):
        hits = [i for i in range(k) if mono[order[i]] >= degrees[i]]
        i = hits[0]
        if len(hits) > 1:
            nonreduced.append(r)
        mult = list(mono)
        mult[order[i]] -= degrees[i]
        mult = tuple(mult)
        row = [Fraction(0)] * len(cols)
        for m, c in forms[i].terms.items():
            row[col_of[tuple(a + b for a, b in zip(m, mult))]] = c
        rows.append((i, mult))
        entries.append(row)
    return MacaulayMatrix(D, rows, cols, entries, nonreduced, order)


def _scaled_rows(entries):
    ints, scales = [], []
    for row in entries:
        sub, sc = integer_rows([row])
        ints.append(sub[0])
        scales.append(sc)
    return ints, scales


def _shifted_det(ints, scales, indices, s) -> Fraction:
    sub = [[ints[i][j] for j in indices] for i in indices]
    denom = 1
    for pos, i in enumerate(indices):
        sub[pos][pos] += s * scales[i]
        denom *= scales[i]
    return Fraction(bareiss_det(sub), denom)


def resultant_from_matrix(mat: MacaulayMatrix, degrees: Sequence[int]) -> ResultantValue:
    ints, scales = _scaled_rows(mat.entries)
    everything = list(range(mat.size))
    den = _shifted_det(ints, scales, mat.nonreduced, 0)
    if den != 0:
        num = _shifted_det(ints, scales, everything, 0)
        return ResultantValue(num / den, "determinant_quotient", 0)

    # generalized characteristic polynomial: Q(s) = det(M + sI) / det(M' + sI)
    total = 0
    prod_all = math.prod(degrees)
    for d in degrees:
        total += prod_all // d
    xs, ys, skipped = [], [], 0
    s = 0
    while len(xs) < total + 2:
        s += 1
        den = _shifted_det(ints, scales, mat.nonreduced, s)
        if den == 0:
            skipped += 1
            if skipped > 4 * mat.size + 16:
                raise DegenerateSystemError("no admissible perturbation found for the resultant")
            continue
        xs.append(Fraction(s))
        ys.append(_shifted_det(ints, scales, everything, s) / den)
    poly = interpolate(xs, ys)
    if upoly_degree(poly) > total:
        raise DegenerateSystemError(
            "perturbed resultant is not a polynomial of the expected degree",
            {"expected_degree": total, "found_degree": upoly_degree(poly)},
        )
    return ResultantValue(Fraction(upoly_eval(poly, Fraction(0))), "gcp_perturbation", skipped + 1)


def macaulay_resultant(forms: Sequence[Poly], degrees: Sequence[int] | None = None,
                       size_cap: int = DEFAULT_MATRIX_SIZE_CAP) -> ResultantValue:
    """Exact resultant of k homogeneous forms in k variables."""
    forms, degrees = _check_forms(forms, degrees)
    mat = macaulay_matrix(forms, degrees, size_cap=size_cap)
    return resultant_from_matrix(mat, degrees)


def at_infinity_check(system: HomSystem, chart: int = 0,
                      size_cap: int = DEFAULT_MATRIX_SIZE_CAP) -> InfinityCheck:
    """Resultant test for solutions with ``x_chart = 0``.

    A nonzero resultant certifies that no solution ray lies in the hyperplane
    x_chart = 0, hence the system has finitely many solution rays.
    """
    if not system.is_square():
        raise InputError(
            f"need n forms in n+1 variables, got {system.n} forms in {system.nvars}"
        )
    if not 0 <= chart < system.nvars:
        raise InputError(f"chart variable {chart} out of range")
    special = [f.specialize_zero(chart) for f in system.forms]
    zero = tuple(i for i, f in enumerate(special) if f.is_zero())
    if zero:
        return InfinityCheck(chart, True, None, zero)
    res = macaulay_resultant(special, system.degrees, size_cap=size_cap)
    return InfinityCheck(chart, res.is_zero(), res, ())


def coefficient_count(n: int, degrees: Sequence[int]) -> int:
    """Sum over j of (n + d_j)! / (n! d_j!)."""
    if n < 1 or any(d < 1 for d in degrees):
        raise InputError("n and all degrees must be positive")
    return sum(math.comb(n + d, n) for d in degrees)
