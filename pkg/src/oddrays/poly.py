"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` stores a mapping from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients. Values are immutable; every
operation returns a new polynomial in canonical form (no zero coefficients,
one entry per monomial).

Example in 3 variables (x0, x1, x2)::

    2*x0^2*x1 - x2^3   ->   {(2, 1, 0): 2, (0, 0, 3): -1}

Monomials are ordered graded-lexicographically with x0 the highest variable,
which fixes the display order and the column order of Macaulay matrices.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .errors import InputError

Exponent = Tuple[int, ...]

ZERO_DEGREE = -1
"""Degree reported for the zero polynomial."""


class Parity(str, enum.Enum):
    ODD = "odd"
    EVEN = "even"
    NEITHER = "neither"


@dataclass(frozen=True)
class DegreeInfo:
    total_degree: int
    homogeneous: bool


def grlex_key(exps: Exponent) -> tuple:
    """Sort key; larger keys come first in graded-lex order (x0 highest)."""
    return (sum(exps), exps)


def monomials_of_degree(nvars: int, degree: int) -> list[Exponent]:
    """All exponent tuples of the given total degree, in descending grlex order."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, numbers.Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"non-finite coefficient {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"coefficient must be rational, got {type(value).__name__}")


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise InputError("nvars must be non-negative")
        clean: Dict[Exponent, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise InputError(
                    f"monomial {mono} has {len(mono)} exponents, expected {nvars}"
                )
            if any(e < 0 for e in mono):
                raise InputError(f"negative exponent in {mono}")
            c = _to_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p._nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, index: int) -> "Poly":
        if not 0 <= index < nvars:
            raise InputError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # -- accessors ----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in descending graded-lex order."""
        for mono in sorted(self._terms, key=grlex_key, reverse=True):
            yield mono, self._terms[mono]

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(m) for m in self._terms)

    def degree_info(self) -> DegreeInfo:
        degrees = {sum(m) for m in self._terms}
        if not degrees:
            return DegreeInfo(ZERO_DEGREE, True)
        return DegreeInfo(max(degrees), len(degrees) == 1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        info = self.degree_info()
        if not info.homogeneous:
            return False
        return degree is None or self.is_zero() or info.total_degree == degree

    def parity(self) -> Parity:
        """Decided from term degrees; the zero polynomial reports ``EVEN``."""
        degs = {sum(m) % 2 for m in self._terms}
        if degs == {1}:
            return Parity.ODD
        if len(degs) <= 1:
            return Parity.EVEN
        return Parity.NEITHER

    def is_odd(self) -> bool:
        """True when p(-x) = -p(x); includes the zero polynomial."""
        return all(sum(m) % 2 == 1 for m in self._terms)

    def coefficient_norm(self) -> float:
        """Largest absolute coefficient (0 for the zero polynomial)."""
        return float(max((abs(c) for c in self._terms.values()), default=0))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other._nvars != self._nvars:
            raise InputError(
                f"variable-count mismatch: {self._nvars} vs {other._nvars}"
            )

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self._nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return Poly._raw(self._nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self._nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                out[mono] = out.get(mono, 0) + ca * cb
        return Poly._raw(self._nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise InputError("negative polynomial power")
        result = Poly.constant(self._nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, r) -> "Poly":
        r = _to_fraction(r)
        if not r:
            return Poly.zero(self._nvars)
        return Poly._raw(self._nvars, {m: c * r for m, c in self._terms.items()})

    def mul_monomial(self, exps: Sequence[int]) -> "Poly":
        return Poly._raw(
            self._nvars,
            {tuple(a + b for a, b in zip(m, exps)): c for m, c in self._terms.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and substitution -----------------------------------------

    def evaluate(self, point: Sequence, exact: bool = False):
        """Evaluate at ``point``.

        With ``exact=True`` the point must be rational and the result is a
        Fraction; otherwise the result is a Python complex.
        """
        if len(point) != self._nvars:
            raise InputError(
                f"point has {len(point)} coordinates, polynomial has {self._nvars} variables"
            )
        if exact:
            vals = [_to_fraction(v) for v in point]
            total = Fraction(0)
        else:
            vals = [complex(v) for v in point]
            if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
                raise InputError("evaluation point has non-finite entries")
            total = 0j
        powers: Dict[tuple[int, int], object] = {}
        for mono, c in self._terms.items():
            term = c if exact else complex(float(c))
            for i, e in enumerate(mono):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = vals[i] ** e
                    term = term * powers[key]
            total += term
        return total

    def __call__(self, *point):
        return self.evaluate(point)

    def substitute(self, var: int, replacement: "Poly") -> "Poly":
        """Replace variable ``var`` by ``replacement`` (same variable count)."""
        if not 0 <= var < self._nvars:
            raise InputError(f"variable index {var} out of range for {self._nvars} variables")
        self._check(replacement)
        out = Poly.zero(self._nvars)
        powers = {0: Poly.constant(self._nvars, 1)}
        for mono, c in self._terms.items():
            e = mono[var]
            if e not in powers:
                powers[e] = replacement ** e
            rest = list(mono)
            rest[var] = 0
            out = out + powers[e].mul_monomial(rest).scale(c)
        return out

    def derivative(self, var: int) -> "Poly":
        out = {}
        for mono, c in self._terms.items():
            e = mono[var]
            if e:
                m = list(mono)
                m[var] -= 1
                out[tuple(m)] = c * e
        return Poly._raw(self._nvars, out)

    def negate_variables(self) -> "Poly":
        """p(-x)."""
        return Poly._raw(
            self._nvars,
            {m: (-c if sum(m) % 2 else c) for m, c in self._terms.items()},
        )

    def drop_variable(self, var: int) -> "Poly":
        """Remove a variable that does not occur (exponent zero everywhere)."""
        out = {}
        for mono, c in self._terms.items():
            if mono[var]:
                raise InputError(f"variable x{var} occurs in the polynomial")
            out[mono[:var] + mono[var + 1:]] = c
        return Poly._raw(self._nvars - 1, out)

    def insert_variable(self, var: int) -> "Poly":
        """Embed into nvars + 1 variables with a new (absent) variable at ``var``."""
        return Poly._raw(
            self._nvars + 1,
            {m[:var] + (0,) + m[var:]: c for m, c in self._terms.items()},
        )

    def specialize_zero(self, var: int) -> "Poly":
        """Set ``x_var = 0`` and drop that variable."""
        return Poly._raw(
            self._nvars - 1,
            {m[:var] + m[var + 1:]: c for m, c in self._terms.items() if not m[var]},
        )

    # -- display ------------------------------------------------------------

    def to_string(self, offset: int = 0, names: Sequence[str] | None = None) -> str:
        """Render in the parser's grammar; ``offset`` shifts variable numbering."""
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i + offset}" for i in range(self._nvars)]
        parts = []
        for k, (mono, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(mono) if e
            ]
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = f"{a}*" + "*".join(factors)
            if k == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Poly({self._nvars}, {self.to_string()!r})"


def as_polys(items: Iterable[Poly]) -> tuple[Poly, ...]:
    polys = tuple(items)
    if polys and len({p.nvars for p in polys}) != 1:
        raise InputError("polynomials have differing variable counts")
    return polys


def poly_arith(a: Poly, b: Poly | None, op: str, r=None) -> Poly:
    """Dispatch one of ``add``, ``sub``, ``mul``, ``neg``, ``scale``."""
    if op == "neg":
        return -a
    if op == "scale":
        return a.scale(r)
    if b is None:
        raise InputError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown operation {op!r}")


def evaluate(p: Poly, point: Sequence, exact: bool = False):
    return p.evaluate(point, exact=exact)


def substitute(p: Poly, var: int, replacement: Poly) -> Poly:
    return p.substitute(var, replacement)


def degree_info(p: Poly) -> DegreeInfo:
    return p.degree_info()


def parity_check(p: Poly) -> Parity:
    return p.parity()
