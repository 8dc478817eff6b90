from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import InputError
from .homogenize import OddMap, odd_symmetrize
from .poly import Poly, monomials_of_degree


def monomial_basis(dim: int, degree_cap: int) -> list[tuple]:
    out = []
    for d in range(degree_cap + 1):
        out.extend(monomials_of_degree(dim, d))
    return out


def design_matrix(X: np.ndarray, basis) -> np.ndarray:
    cols = [np.prod(X ** np.asarray(m), axis=1) for m in basis]
    return np.column_stack(cols)


class OddPolynomialRegressor(RegressorMixin, BaseEstimator):
    """Fit a polynomial map S^n -> R^n to samples and keep its odd part.

    The fit runs in the full monomial basis up to ``degree_cap`` (raised to
    the next odd number), coefficients are snapped to nearby rationals, and
    every component is odd-symmetrized. Only the odd part of the sampled
    function survives; for odd targets nothing is lost.

    Attributes after ``fit``: ``odd_map_``, ``max_deviation_``,
    ``degenerate_``, ``rank_``, ``condition_``, ``degree_cap_``.
    """

    def __init__(self, degree_cap=3, coef_tol=1e-10, max_denominator=10**12,
                 rcond=1e-10):
        self.degree_cap = degree_cap
        self.coef_tol = coef_tol
        self.max_denominator = max_denominator
        self.rcond = rcond

    def fit(self, X, y):
        X, y = check_X_y(X, y, multi_output=True, y_numeric=True)
        if y.ndim == 1:
            y = y.reshape(-1, 1)
        dim = X.shape[1]
        if y.shape[1] != dim - 1:
            raise InputError(f"{dim}-dimensional points need {dim - 1} value components")
        cap = int(self.degree_cap)
        if cap < 1:
            raise InputError("degree_cap must be positive")
        if cap % 2 == 0:
            cap += 1
        basis = monomial_basis(dim, cap)
        if X.shape[0] < len(basis):
            raise InputError(
                f"{X.shape[0]} samples cannot determine {len(basis)} coefficients"
            )
        A = design_matrix(X, basis)
        coef, _, rank, sv = np.linalg.lstsq(A, y, rcond=self.rcond)
        kept = sv[sv > self.rcond * sv[0]]
        self.rank_ = int(rank)
        self.condition_ = float(kept[0] / kept[-1])
        comps = []
        for k in range(y.shape[1]):
            terms = {}
            for m, c in zip(basis, coef[:, k]):
                if abs(c) > self.coef_tol:
                    terms[m] = Fraction(float(c)).limit_denominator(self.max_denominator)
            comps.append(odd_symmetrize(Poly(dim, terms)))
        self.odd_map_ = OddMap(tuple(comps))
        self.degree_cap_ = cap
        self.degenerate_ = self.odd_map_.is_degenerate()
        self.n_features_in_ = dim
        self.max_deviation_ = float(np.max(np.abs(self.predict(X) - y)))
        return self

    def predict(self, X):
        check_is_fitted(self, "odd_map_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InputError(f"expected {self.n_features_in_} coordinates")
        out = np.array([[c.evaluate(list(x)).real for c in self.odd_map_.components]
                        for x in X])
        return out
