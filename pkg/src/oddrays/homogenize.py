"""From odd polynomial maps on the sphere to odd-degree homogeneous systems.

An odd polynomial only contains terms of odd total degree, so padding each
term up to the top degree with a homogenizing variable x0 always uses an
even power of x0. On the unit sphere x0^2 may then be replaced by the sum of
squares of the remaining variables, which gives a homogeneous form that
agrees with the original polynomial everywhere on the sphere.

Variable layout: odd maps live in variables x1..x_{n+1} stored at indices
0..n; homogenization prepends x0 at index 0, and sphere substitution removes
it again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .poly import Poly


@dataclass(frozen=True)
class OddMap:
    """n odd polynomials in n + 1 variables (the zero polynomial counts as odd)."""

    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InputError("an odd map needs at least one component")
        n = len(comps)
        for k, c in enumerate(comps):
            if c.nvars != n + 1:
                raise InputError(
                    f"component {k} has {c.nvars} variables, expected {n + 1} for n={n}"
                )
            if not c.is_odd():
                raise InputError(f"component {k} is not odd: {c}")

    @property
    def n(self) -> int:
        return len(self.components)

    def __call__(self, point):
        return [c.evaluate(point) for c in self.components]

    def is_degenerate(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True)
class HomSystem:
    """Homogeneous forms with their recorded degrees.

    A zero form is accepted when an explicit degree is given for it; the
    perturbation machinery treats it as a form of that degree.
    """

    forms: tuple[Poly, ...]
    degrees: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        forms = tuple(self.forms)
        if not forms:
            raise InputError("a system needs at least one form")
        nv = {f.nvars for f in forms}
        if len(nv) != 1:
            raise InputError("forms have differing variable counts")
        if self.degrees is None:
            degs = []
            for k, f in enumerate(forms):
                if f.is_zero():
                    raise InputError(f"form {k} is zero; pass its degree explicitly")
                degs.append(f.total_degree)
        else:
            degs = [int(d) for d in self.degrees]
            if len(degs) != len(forms):
                raise InputError("degree vector length differs from the form count")
        for k, (f, d) in enumerate(zip(forms, degs)):
            if d < 1:
                raise InputError(f"form {k} has non-positive degree {d}")
            if not f.is_homogeneous(d):
                raise InputError(f"form {k} is not homogeneous of degree {d}: {f}")
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "degrees", tuple(degs))

    @property
    def nvars(self) -> int:
        return self.forms[0].nvars

    @property
    def n(self) -> int:
        return len(self.forms)

    def is_square(self) -> bool:
        """n forms in n + 1 variables."""
        return self.nvars == self.n + 1

    def bezout_number(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    def evaluate(self, point) -> list[complex]:
        return [f.evaluate(point) for f in self.forms]


def homogenize_odd(q: Poly) -> Poly:
    """Homogenize an odd polynomial with even powers of a new leading variable x0."""
    if q.is_zero():
        raise InputError("cannot homogenize the zero polynomial")
    if not q.is_odd():
        raise InputError(f"homogenize_odd needs an odd polynomial, got {q}")
    d = q.total_degree
    out = {}
    for mono, c in q.terms.items():
        out[(d - sum(mono),) + mono] = c
    return Poly(q.nvars + 1, out)


def sphere_substitute(f: Poly) -> Poly:
    """Replace x0^(2k) by (x1^2 + ... + x_m^2)^k and drop x0."""
    m = f.nvars - 1
    if m < 1:
        raise InputError("sphere substitution needs at least one variable besides x0")
    quadric = Poly(m, {tuple(2 if i == j else 0 for i in range(m)): 1 for j in range(m)})
    powers = {0: Poly.constant(m, 1)}
    out = Poly.zero(m)
    for mono, c in f.terms.items():
        e0 = mono[0]
        if e0 % 2:
            raise InputError(f"x0 appears with odd exponent {e0}")
        k = e0 // 2
        if k not in powers:
            powers[k] = quadric ** k
        out = out + powers[k].mul_monomial(mono[1:]).scale(c)
    return out


def odd_symmetrize(p: Poly) -> Poly:
    """(p(x) - p(-x)) / 2, the odd part of p."""
    return (p - p.negate_variables()).scale(Fraction(1, 2))


def build_odd_system(m: OddMap) -> HomSystem:
    """Odd-degree homogeneous forms in x1..x_{n+1} agreeing with ``m`` on the sphere.

    Zero components stay zero and are given degree 1.
    """
    forms, degrees = [], []
    for c in m.components:
        if c.is_zero():
            forms.append(c)
            degrees.append(1)
            continue
        h = homogenize_odd(c)
        # substitution can cancel everything when c vanishes on the sphere
        forms.append(sphere_substitute(h))
        degrees.append(h.total_degree)
    return HomSystem(tuple(forms), tuple(degrees))


def odd_map_from(components: Sequence[Poly]) -> OddMap:
    return OddMap(tuple(components))
