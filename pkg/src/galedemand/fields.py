"""Vector fields with point values and Jacobians.

The integrability diagnostics all consume an "inverse demand" viewed as a
smooth vector field on the positive orthant.  Three concrete kinds cover the
package: the quadratic-form field g(x) = Bx/(x'Bx) of a demand family, linear
fields h(x) = Mx (the denominator-cleared companions used for curvature
certificates), and ad-hoc callables differentiated by central differences.
Analytic Jacobians are written over generic number arithmetic, so rational
inputs produce exact rational output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Protocol, Sequence

from ._num import Mat, Num, Vec, as_mat, as_vec, dot, matvec

__all__ = [
    "VectorField",
    "QuadraticInverseDemand",
    "LinearField",
    "ScaledField",
    "NumericField",
    "fd_jacobian",
]


class VectorField(Protocol):
    def value(self, x: Sequence[Num]) -> Vec: ...

    def jacobian(self, x: Sequence[Num]) -> Mat: ...


def fd_jacobian(fn: Callable[[Vec], Vec], x: Sequence[Num], rel_step: float = 1e-6) -> Mat:
    """Central-difference Jacobian with per-coordinate step h*max(1, |x_j|)."""
    x = tuple(float(v) for v in as_vec(x))
    n = len(x)
    cols = []
    for j in range(n):
        h = rel_step * max(1.0, abs(x[j]))
        xp = list(x)
        xm = list(x)
        xp[j] += h
        xm[j] -= h
        fp = fn(tuple(xp))
        fm = fn(tuple(xm))
        cols.append(tuple((a - b) / (2 * h) for a, b in zip(fp, fm)))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(len(cols[0])))


class QuadraticInverseDemand:
    """g(x) = B x / (x' B x) for a fixed square matrix B."""

    def __init__(self, B: Sequence[Sequence[Num]]):
        self.B = as_mat(B)
        self.n = len(self.B)

    @classmethod
    def from_spec(cls, spec) -> "QuadraticInverseDemand":
        return cls(spec.B)

    def value(self, x: Sequence[Num]) -> Vec:
        x = as_vec(x)
        u = matvec(self.B, x)
        s = dot(x, u)
        if s <= 0:
            raise ValueError(f"quadratic form x'Bx = {s} not positive at {x}")
        return tuple(v / s for v in u)

    def jacobian(self, x: Sequence[Num]) -> Mat:
        """dg_i/dx_j = B_ij/s - (Bx)_i ((B+B')x)_j / s^2 with s = x'Bx."""
        x = as_vec(x)
        u = matvec(self.B, x)
        s = dot(x, u)
        if s <= 0:
            raise ValueError(f"quadratic form x'Bx = {s} not positive at {x}")
        q = tuple(
            sum((self.B[i][j] + self.B[j][i]) * x[i] for i in range(self.n))
            for j in range(self.n)
        )
        return tuple(
            tuple(self.B[i][j] / s - u[i] * q[j] / (s * s) for j in range(self.n))
            for i in range(self.n)
        )

    def companion_matrix(self) -> Mat:
        """Denominator-cleared integer multiple of B (exact linear companion).

        The scaled field M x with M = lcm-of-denominators * B agrees with g up
        to the positive factor lcm * (x'Bx), which preserves every sign-based
        curvature and integrability verdict while keeping arithmetic exact.
        """
        fracs = [Fraction(v) if not isinstance(v, float) else None for row in self.B for v in row]
        if any(f is None for f in fracs):
            return self.B
        scale = math.lcm(*(f.denominator for f in fracs))
        return tuple(tuple(Fraction(v) * scale for v in row) for row in self.B)


class LinearField:
    """h(x) = M x; the Jacobian is the constant matrix M."""

    def __init__(self, M: Sequence[Sequence[Num]]):
        self.M = as_mat(M)

    def value(self, x: Sequence[Num]) -> Vec:
        return matvec(self.M, as_vec(x))

    def jacobian(self, x: Sequence[Num]) -> Mat:
        return self.M


class ScaledField:
    """lam(x) * base(x) for a positive scalar function lam.

    The Jacobian is finite-differenced from the scaled values, deliberately
    independent of the base field's analytic Jacobian, so scale-invariance
    checks compare two genuinely different computations.
    """

    def __init__(self, base: VectorField, lam: Callable[[Vec], Num], rel_step: float = 1e-6):
        self.base = base
        self.lam = lam
        self.rel_step = rel_step

    def value(self, x: Sequence[Num]) -> Vec:
        x = as_vec(x)
        c = self.lam(x)
        return tuple(c * v for v in self.base.value(x))

    def jacobian(self, x: Sequence[Num]) -> Mat:
        return fd_jacobian(self.value, x, self.rel_step)


class NumericField:
    """Wrap a plain callable; Jacobian by central differences."""

    def __init__(self, fn: Callable[[Vec], Sequence[Num]], rel_step: float = 1e-6):
        self.fn = fn
        self.rel_step = rel_step

    def value(self, x: Sequence[Num]) -> Vec:
        return as_vec(self.fn(as_vec(x)))

    def jacobian(self, x: Sequence[Num]) -> Mat:
        return fd_jacobian(self.value, x, self.rel_step)
