"""Polynomial expressions, system files and sample files.

Expression grammar (whitespace is free-form)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := [coeff ['*']] factor ('*' factor)*  |  coeff
    factor := 'x' INDEX ['^' POSINT]
    coeff  := INT | INT '/' INT | DECIMAL

Decimals convert exactly (``0.25`` is 1/4). Variable indices are 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError, ParseError
from .poly import Poly

_NUMBER = re.compile(r"\d+(?:\.\d*)?|\.\d+")
_INT = re.compile(r"\d+")


@dataclass(frozen=True)
class PolyExpr:
    source: str
    parsed: Poly
    variables: tuple      # indices that occur


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def match(self, pattern: re.Pattern) -> str | None:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def fail(self, what: str):
        ch = self.peek()
        found = repr(ch) if ch else "end of input"
        raise ParseError(f"expected {what}, found {found}", self.pos)


def _coefficient(sc: _Scanner) -> Fraction | None:
    start = sc.pos
    tok = sc.match(_NUMBER)
    if tok is None:
        return None
    value = Fraction(tok)
    if "." not in tok and sc.take("/"):
        den = sc.match(_INT)
        if den is None:
            sc.fail("denominator")
        if int(den) == 0:
            raise ParseError("zero denominator", start)
        value /= int(den)
    return value


def _factor(sc: _Scanner, exps: dict) -> bool:
    if sc.peek() != "x":
        return False
    sc.pos += 1
    idx = _INT.match(sc.text, sc.pos)   # no space inside a variable name
    if not idx:
        sc.fail("variable index after 'x'")
    sc.pos = idx.end()
    var = int(idx.group())
    power = 1
    if sc.take("^"):
        sc.skip()
        start = sc.pos
        tok = sc.match(_INT)
        if tok is None:
            sc.fail("positive integer exponent")
        if int(tok) == 0:
            raise ParseError("exponent must be positive", start)
        power = int(tok)
    exps[var] = exps.get(var, 0) + power
    return True


def _term(sc: _Scanner):
    coeff = _coefficient(sc)
    exps: dict = {}
    if coeff is None:
        if not _factor(sc, exps):
            sc.fail("coefficient or variable")
        coeff = Fraction(1)
    else:
        if sc.take("*"):
            if not _factor(sc, exps):
                sc.fail("variable after '*'")
        else:
            _factor(sc, exps)
    while sc.take("*"):
        if not _factor(sc, exps):
            sc.fail("variable after '*'")
    return coeff, exps


def parse_poly(text: str, nvars: int | None = None) -> PolyExpr:
    """Parse ``text`` into an exact polynomial.

    With ``nvars=None`` the variable count is one more than the largest index.
    """
    sc = _Scanner(text)
    terms = []
    sign = 1
    if sc.take("-"):
        sign = -1
    else:
        sc.take("+")
    while True:
        coeff, exps = _term(sc)
        terms.append((sign * coeff, exps))
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        elif sc.peek() == "":
            break
        else:
            sc.fail("'+', '-' or end of input")
    used = sorted({v for _, e in terms for v in e})
    if nvars is None:
        nvars = used[-1] + 1 if used else 1
    if used and used[-1] >= nvars:
        raise ParseError(f"variable x{used[-1]} out of range for {nvars} variables")
    acc: dict = {}
    for c, e in terms:
        mono = tuple(e.get(i, 0) for i in range(nvars))
        acc[mono] = acc.get(mono, 0) + c
    return PolyExpr(text, Poly(nvars, acc), tuple(used))


# -- files -----------------------------------------------------------------------------

def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _header(line: str, keys: tuple, lineno: int) -> dict:
    fields = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep or key not in keys or not _INT.fullmatch(val):
            raise ParseError(f"line {lineno}: bad header field {tok!r}")
        fields[key] = int(val)
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ParseError(f"line {lineno}: header lacks {', '.join(missing)}")
    return fields


def parse_system_text(text: str) -> tuple[int, list[Poly]]:
    """``nvars=<k> forms=<m>`` followed by one expression per line."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty system file")
    head = _header(lines[0][1], ("nvars", "forms"), lines[0][0])
    body = lines[1:]
    if len(body) != head["forms"]:
        raise ParseError(f"header announces {head['forms']} forms, file has {len(body)}")
    polys = []
    for no, line in body:
        try:
            polys.append(parse_poly(line, head["nvars"]).parsed)
        except ParseError as exc:
            raise ParseError(f"line {no}: {exc}") from exc
    return head["nvars"], polys


def read_system(path: str | Path) -> tuple[int, list[Poly]]:
    return parse_system_text(_read(path))


def format_system(polys) -> str:
    polys = list(polys)
    nvars = polys[0].nvars if polys else 0
    lines = [f"nvars={nvars} forms={len(polys)}"] + [p.to_string() for p in polys]
    return "\n".join(lines) + "\n"


def parse_samples_text(text: str):
    """``n=<n> degree_cap=<d>`` then lines ``y1 ... y_{n+1} | v1 ... vn``."""
    from .borsuk_ulam import SampleSet

    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty sample file")
    head = _header(lines[0][1], ("n", "degree_cap"), lines[0][0])
    n = head["n"]
    pts, vals = [], []
    for no, line in lines[1:]:
        left, sep, right = line.partition("|")
        if not sep:
            raise ParseError(f"line {no}: missing '|' between point and values")
        try:
            y = [float(t) for t in left.split()]
            v = [float(t) for t in right.split()]
        except ValueError as exc:
            raise ParseError(f"line {no}: {exc}") from exc
        if len(y) != n + 1 or len(v) != n:
            raise ParseError(f"line {no}: expected {n + 1} coordinates and {n} values")
        pts.append(y)
        vals.append(v)
    if not pts:
        raise ParseError("sample file has no samples")
    return SampleSet(np.array(pts), np.array(vals), head["degree_cap"])


def read_samples(path: str | Path):
    return parse_samples_text(_read(path))


def format_samples(points, values, degree_cap: int) -> str:
    points = np.asarray(points, float)
    values = np.asarray(values, float).reshape(len(points), -1)
    lines = [f"n={points.shape[1] - 1} degree_cap={degree_cap}"]
    for y, v in zip(points, values):
        lines.append(" ".join(repr(float(t)) for t in y) + " | "
                     + " ".join(repr(float(t)) for t in v))
    return "\n".join(lines) + "\n"


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
