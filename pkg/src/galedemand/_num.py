"""Small-vector arithmetic shared by the exact and floating-point code paths.

Vectors are plain tuples of Python numbers.  Operations are written generically
so that Fraction/int inputs stay exact while float inputs take the fast path;
nothing here touches numpy.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

Num = Union[int, float, Fraction]
Vec = tuple[Num, ...]
Mat = tuple[Vec, ...]


def as_vec(values: Sequence) -> Vec:
    out = []
    for v in values:
        if isinstance(v, (int, float, Fraction)):
            out.append(v)
        elif isinstance(v, Rational):
            out.append(Fraction(v))
        else:
            # numpy scalars and anything float-like
            out.append(float(v))
    return tuple(out)


def is_exact(*vecs: Sequence[Num]) -> bool:
    return all(isinstance(v, Rational) for vec in vecs for v in vec)


def dot(a: Sequence[Num], b: Sequence[Num]) -> Num:
    return sum(x * y for x, y in zip(a, b))


def vadd(a: Sequence[Num], b: Sequence[Num]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[Num], b: Sequence[Num]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: Num, a: Sequence[Num]) -> Vec:
    return tuple(c * x for x in a)


def norm(a: Sequence[Num]) -> float:
    return math.sqrt(sum(float(x) * float(x) for x in a))


def matvec(m: Sequence[Sequence[Num]], a: Sequence[Num]) -> Vec:
    return tuple(dot(row, a) for row in m)


def mat_t(m: Sequence[Sequence[Num]]) -> Mat:
    return tuple(zip(*m))


def as_mat(rows: Sequence[Sequence]) -> Mat:
    m = tuple(as_vec(r) for r in rows)
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    return m


def det3(m: Sequence[Sequence[Num]]) -> Num:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det(m: Sequence[Sequence[Num]]) -> Num:
    """Laplace-expansion determinant; exact, meant for n <= 4."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return det3(m)
    total = 0
    sign = 1
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in m[1:]]
        total += sign * m[0][j] * det(minor)
        sign = -sign
    return total


def inv3(m: Sequence[Sequence[Num]]) -> Mat:
    """Exact 3x3 inverse via the adjugate; entries become Fractions."""
    d = Fraction(det3(m))
    if d == 0:
        raise ValueError("matrix is singular")
    (a, b, c), (e, f, g), (h, i, j) = m
    cof = (
        (f * j - g * i, c * i - b * j, b * g - c * f),
        (g * h - e * j, a * j - c * h, c * e - a * g),
        (e * i - f * h, b * h - a * i, a * f - b * e),
    )
    return tuple(tuple(Fraction(x) / d for x in row) for row in cof)


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def parse_number(text: str) -> Fraction:
    """Parse an `a/b`, integer, decimal, or scientific literal exactly."""
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number literal: {text!r}") from exc


def fmt_number(x: Num) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return repr(x)


def close(a: Sequence[Num], b: Sequence[Num], tol: float = 1e-9) -> bool:
    return all(abs(float(x) - float(y)) <= tol for x, y in zip(a, b))
