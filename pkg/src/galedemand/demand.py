"""Gale's three-good demand family and its quadratic-form relatives.

The central object is the candidate demand

    f(p, m) = A p̄ / (p̄' A p̄) * m,

where ``A`` is a fixed 3x3 matrix and ``p̄`` is the price vector normalized
into the cone C = {p >> 0 : A p >= 0}.  With Gale's (1960) matrix

    A = [[-3, 4, 0], [0, -3, 4], [4, 0, -3]]

this is a continuous, homogeneous-of-degree-zero demand that satisfies
Walras' law and the weak axiom, yet is not generated by any preference
relation.  The symmetric control family (``symmetric_spec``) replaces A by a
symmetric matrix and *is* rationalizable; every diagnostic in this package is
meant to be run against both so the failure is attributable to asymmetry
rather than to the construction.

All operations in this module accept Fractions/ints and then compute exactly;
float inputs take the same code path at float speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._num import Mat, Num, Vec, as_vec, dot, inv3, is_exact, matvec

__all__ = [
    "DemandSpec",
    "gale_spec",
    "symmetric_spec",
    "spec_from_matrix",
    "as_price",
    "as_bundle",
    "cone_contains",
    "normalize_price",
    "gale_demand",
    "inverse_demand",
    "family_demand",
]

GALE_A: Mat = (
    (Fraction(-3), Fraction(4), Fraction(0)),
    (Fraction(0), Fraction(-3), Fraction(4)),
    (Fraction(4), Fraction(0), Fraction(-3)),
)

# Symmetric control: the symmetrized Gale matrix, scaled so rows of B sum to 1.
SYMMETRIC_B: Mat = tuple(
    tuple(Fraction(v, 37) for v in row)
    for row in ((9, 14, 14), (14, 9, 14), (14, 14, 9))
)

_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class DemandSpec:
    """A demand family determined by an invertible 3x3 matrix.

    Attributes
    ----------
    name:
        "gale", "symmetric", or "custom"; echoed in reports.
    A:
        The matrix defining the direct demand ``h_A(p) = Ap/(p'Ap)``.
    B:
        Its inverse, defining the inverse demand ``g(x) = Bx/(x'Bx)``.
    symmetric:
        True iff A equals its transpose; symmetric families satisfy the
        integrability conditions, asymmetric ones are the counterexamples.
    """

    name: str
    A: Mat
    B: Mat
    symmetric: bool

    @property
    def is_gale(self) -> bool:
        return self.A == GALE_A

    @property
    def positive_inverse(self) -> bool:
        """True when every entry of B is positive (so g(x) >> 0 for x > 0)."""
        return all(v > 0 for row in self.B for v in row)


def _make_spec(name: str, A: Mat) -> DemandSpec:
    B = inv3(A)
    symmetric = all(A[i][j] == A[j][i] for i in range(3) for j in range(3))
    return DemandSpec(name=name, A=A, B=B, symmetric=symmetric)


def gale_spec() -> DemandSpec:
    """Gale's asymmetric family; B = [[9,12,16],[16,9,12],[12,16,9]]/37."""
    return _make_spec("gale", GALE_A)


def symmetric_spec() -> DemandSpec:
    """Rationalizable control family with B = [[9,14,14],[14,9,14],[14,14,9]]/37."""
    A = inv3(SYMMETRIC_B)
    return DemandSpec(name="symmetric", A=A, B=SYMMETRIC_B, symmetric=True)


def spec_from_matrix(rows: Sequence[Sequence[Num]], name: str = "custom") -> DemandSpec:
    """Build a spec from a user-supplied A matrix (must be invertible)."""
    A = tuple(tuple(Fraction(v) if not isinstance(v, float) else v for v in r) for r in rows)
    if len(A) != 3 or any(len(r) != 3 for r in A):
        raise ValueError("demand matrix must be 3x3")
    return _make_spec(name, A)


def as_price(values: Sequence) -> Vec:
    p = as_vec(values)
    if len(p) != 3:
        raise ValueError(f"price must have 3 components, got {len(p)}")
    if any(v <= 0 for v in p):
        raise ValueError(f"price must be strictly positive, got {p}")
    return p


def as_bundle(values: Sequence) -> Vec:
    x = as_vec(values)
    if len(x) != 3:
        raise ValueError(f"bundle must have 3 components, got {len(x)}")
    if any(v < 0 for v in x):
        raise ValueError(f"bundle must be nonnegative, got {x}")
    return x


def cone_contains(spec: DemandSpec, price: Sequence) -> bool:
    """Whether ``A p >= 0`` componentwise (p itself must be strictly positive)."""
    p = as_price(price)
    return all(v >= 0 for v in matvec(spec.A, p))


def _in_cone_interior(spec: DemandSpec, p: Vec) -> bool:
    return all(v > 0 for v in matvec(spec.A, p))


def normalize_price(spec: DemandSpec, price: Sequence) -> Vec:
    """Project a strictly positive price into the cone C of Gale's matrix.

    The map is the identity on C, piecewise linear, continuous, homogeneous of
    degree one, and satisfies ``p̄ <= p`` componentwise.  Components lowered by
    the projection end up with zero demand, which is how Walras' law survives
    in the original price.  Only defined for the Gale matrix; the case split
    below is specific to its cyclic structure.

    Cases, over the cyclic index triples (i,j,k):

    * I:   p already in C: return p.
    * II:  rows i and j of Ap are nonpositive: p̄ = ((16/9)p_k, (4/3)p_k, p_k)
           placed at positions (i, j, k).
    * III: row i nonpositive, rows j,k nonnegative; subcase on 16 p_j - 9 p_k:
           nonnegative: p̄_i = (4/3)p_j, rest unchanged; nonpositive:
           additionally p̄_k = (16/9)p_j.

    Overlapping cases agree, which makes the dispatch order immaterial; the
    test suite checks agreement exactly on the boundary manifolds.
    """
    if not spec.is_gale:
        raise ValueError("price normalization is specific to the Gale matrix")
    p = as_price(price)
    if is_exact(p):
        c43, c169 = Fraction(4, 3), Fraction(16, 9)
    else:
        c43, c169 = 4.0 / 3.0, 16.0 / 9.0

    rows = matvec(spec.A, p)  # rows[i] = -3 p_i + 4 p_j for cyclic (i, j)

    if all(v >= 0 for v in rows):
        return p

    for i, j, k in _CYCLIC:
        if rows[i] <= 0 and rows[j] <= 0:
            out = [p[0]] * 3
            out[i] = c169 * p[k]
            out[j] = c43 * p[k]
            out[k] = p[k]
            return tuple(out)

    for i, j, k in _CYCLIC:
        if rows[i] <= 0 and rows[j] >= 0 and rows[k] >= 0:
            if 16 * p[j] - 9 * p[k] >= 0:
                out = [p[0]] * 3
                out[i] = c43 * p[j]
                out[j] = p[j]
                out[k] = p[k]
                return tuple(out)
            out = [p[0]] * 3
            out[i] = c43 * p[j]
            out[j] = p[j]
            out[k] = c169 * p[j]
            return tuple(out)

    raise RuntimeError(f"normalization case split missed price {p}")  # pragma: no cover


def gale_demand(spec: DemandSpec, price: Sequence, income: Num) -> Vec:
    """Demand of the Gale family at any strictly positive price.

    Normalizes the price into the cone, then evaluates A p̄ / (p̄' A p̄) * m.
    Satisfies Walras' law in both the normalized and the original price.
    """
    if income <= 0:
        raise ValueError(f"income must be positive, got {income}")
    pbar = normalize_price(spec, price)
    u = matvec(spec.A, pbar)
    if not is_exact(u):
        # A pbar >= 0 holds exactly after normalization; a negative float
        # residue on an active boundary row is rounding noise, not demand
        scale = max(abs(v) for v in u)
        u = tuple(0.0 if -1e-12 * scale < v < 0 else v for v in u)
    s = dot(pbar, u)
    if s <= 0:
        raise RuntimeError(f"quadratic form not positive at normalized price {pbar}")
    return tuple(v * income / s for v in u)


def family_demand(spec: DemandSpec, price: Sequence, income: Num) -> Vec:
    """Demand ``h_A(p) * m`` for any family, with no price normalization.

    The price must lie in the family's cone (componentwise ``A p >= 0``) and
    the form ``p' A p`` must be positive there.
    """
    if income <= 0:
        raise ValueError(f"income must be positive, got {income}")
    p = as_price(price)
    u = matvec(spec.A, p)
    if any(v < 0 for v in u):
        raise ValueError(f"price {p} is outside the cone of spec {spec.name!r}")
    s = dot(p, u)
    if s <= 0:
        raise ValueError(f"quadratic form p'Ap = {s} is not positive at {p}")
    return tuple(v * income / s for v in u)


def inverse_demand(spec: DemandSpec, bundle: Sequence) -> Vec:
    """Inverse demand ``g(x) = B x / (x' B x)``; satisfies g(x)·x = 1.

    Defined for nonnegative nonzero bundles.  For the built-in families B has
    strictly positive entries, so g(x) is strictly positive.
    """
    x = as_bundle(bundle)
    if all(v == 0 for v in x):
        raise ValueError("bundle must be nonzero")
    u = matvec(spec.B, x)
    s = dot(x, u)
    if s <= 0:
        raise ValueError(f"quadratic form x'Bx = {s} is not positive at {x}")
    g = tuple(v / s for v in u)
    if any(v <= 0 for v in g):
        raise ValueError(f"inverse demand is not strictly positive at {x}")
    return g
