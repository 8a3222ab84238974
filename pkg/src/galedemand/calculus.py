"""Differential integrability diagnostics: Slutsky, Antonelli, Jacobi, curvature.

The classical necessary conditions for a demand to come from preference
maximization all live here:

* the Slutsky matrix S(p, m), whose symmetry fails for Gale's family
  (s_01 = 11/3 against s_10 = -1/3 at p = (1,1,1), m = 3);
* the Jacobi integrability residual of the inverse-demand field, which is the
  differential-form obstruction to the existence of indifference surfaces;
* the Antonelli matrix of the normalized field (last component scaled to 1),
  whose symmetry is equivalent to the Jacobi condition vanishing, and whose
  inverse equals the truncated Slutsky matrix at the matching budget;
* bordered-determinant curvature certificates on the tangent space of the
  field, which hold for Gale's family even though integrability fails - the
  counterexample is not a degenerate one;
* numeric expenditure minimization and a Shephard's-lemma check for the
  symmetric control family.

Analytic routines run over generic number arithmetic (exact for rational
inputs).  Finite-difference variants exist where the point is to corroborate
an analytic value by an independent route; they are never collapsed into one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ._num import Mat, Num, Vec, as_vec, det, dot, is_exact, matvec
from .demand import DemandSpec, as_price, cone_contains, family_demand, gale_demand
from .fields import QuadraticInverseDemand, ScaledField, VectorField

__all__ = [
    "SlutskyMatrix",
    "AntonelliMatrix",
    "DefinitenessResult",
    "ScalingCheck",
    "InversePairResult",
    "ShephardResult",
    "ConvergenceError",
    "slutsky",
    "antonelli",
    "jacobi_residual",
    "tangent_definiteness",
    "scaling_invariance_check",
    "inverse_pair_gap",
    "expenditure_numeric",
    "shephard_check",
]


@dataclass(frozen=True)
class SlutskyMatrix:
    matrix: Mat
    price: Vec
    income: Num
    mode: str

    def asymmetry(self) -> float:
        """max_ij |s_ij - s_ji|; zero iff the matrix is symmetric."""
        m = self.matrix
        n = len(m)
        return max(abs(float(m[i][j] - m[j][i])) for i in range(n) for j in range(n))

    def residual_price(self) -> Vec:
        """S p, which is 0 for demands that are homogeneous plus Walrasian."""
        return matvec(self.matrix, self.price)

    def truncated(self) -> Mat:
        """Top-left (n-1)x(n-1) block, the partner of the Antonelli matrix."""
        n = len(self.matrix)
        return tuple(tuple(self.matrix[i][j] for j in range(n - 1)) for i in range(n - 1))


def _demand_fn(spec: DemandSpec) -> Callable[[Vec, Num], Vec]:
    if spec.is_gale:
        return lambda p, m: gale_demand(spec, p, m)
    return lambda p, m: family_demand(spec, p, m)


def slutsky(
    spec: DemandSpec,
    price: Sequence,
    income: Num,
    mode: str = "analytic",
    rel_step: float = 1e-5,
) -> SlutskyMatrix:
    """Slutsky matrix s_ij = df_i/dp_j + (df_i/dm) f_j of a family's demand.

    Analytic mode differentiates h_A(p)·m in closed form and requires the
    price to lie strictly inside the cone (where the Gale normalization is
    locally the identity).  Finite-difference mode recomputes the same matrix
    from demand evaluations with central differences of relative step
    ``rel_step`` and refuses stencils that would leave the cone.
    """
    p = as_price(price)
    if income <= 0:
        raise ValueError(f"income must be positive, got {income}")
    if mode == "analytic":
        rows = matvec(spec.A, p)
        if any(v <= 0 for v in rows):
            raise ValueError(
                f"price {p} is not strictly inside the cone; analytic derivatives undefined"
            )
        s = dot(p, rows)
        q = matvec(tuple(zip(*spec.A)), p)  # A' p
        qq = tuple(a + b for a, b in zip(rows, q))  # (A + A') p
        m = income
        mat = tuple(
            tuple(
                m * (spec.A[i][j] * s - rows[i] * qq[j]) / (s * s)
                + m * rows[i] * rows[j] / (s * s)
                for j in range(3)
            )
            for i in range(3)
        )
        return SlutskyMatrix(matrix=mat, price=p, income=income, mode=mode)
    if mode != "fd":
        raise ValueError(f"unknown mode {mode!r}")

    f = _demand_fn(spec)
    pf = tuple(float(v) for v in p)
    mf = float(income)
    fx = f(pf, mf)
    dfdp = []
    for j in range(3):
        h = rel_step * max(1.0, abs(pf[j]))
        pp = list(pf)
        pm = list(pf)
        pp[j] += h
        pm[j] -= h
        if not (cone_contains(spec, pp) and cone_contains(spec, pm)):
            raise ValueError(
                f"finite-difference stencil leaves the cone at coordinate {j}; "
                f"reduce rel_step (currently {rel_step})"
            )
        fp = f(tuple(pp), mf)
        fm = f(tuple(pm), mf)
        dfdp.append(tuple((a - b) / (2 * h) for a, b in zip(fp, fm)))
    hm = rel_step * max(1.0, abs(mf))
    fmp = f(pf, mf + hm)
    fmm = f(pf, mf - hm)
    dfdm = tuple((a - b) / (2 * hm) for a, b in zip(fmp, fmm))
    mat = tuple(
        tuple(dfdp[j][i] + dfdm[i] * fx[j] for j in range(3)) for i in range(3)
    )
    return SlutskyMatrix(matrix=mat, price=pf, income=mf, mode=mode)


@dataclass(frozen=True)
class AntonelliMatrix:
    """Antonelli block a_ij = dk_i/dx_j - (dk_i/dx_n) k_j of the unit-normalized field."""

    matrix: Mat
    point: Vec
    normalized_price: Vec  # k(x) = g(x)/g_n(x), the budget paired by duality
    income: Num  # k(x) · x

    def asymmetry(self) -> float:
        m = self.matrix
        n = len(m)
        return max(abs(float(m[i][j] - m[j][i])) for i in range(n) for j in range(n))

    def inverse(self) -> Mat:
        (a, b), (c, d) = self.matrix
        dt = a * d - b * c
        if dt == 0:
            raise ValueError("Antonelli matrix is singular")
        return ((d / dt, -b / dt), (-c / dt, a / dt))


def antonelli(field: VectorField, x: Sequence) -> AntonelliMatrix:
    x = as_vec(x)
    g = field.value(x)
    J = field.jacobian(x)
    n = len(g)
    gn = g[n - 1]
    if gn == 0:
        raise ValueError("last field component vanishes; cannot normalize")
    k = tuple(v / gn for v in g)
    # dk_i/dx_j = (dg_i/dx_j * g_n - g_i * dg_n/dx_j) / g_n^2
    dk = tuple(
        tuple((J[i][j] * gn - g[i] * J[n - 1][j]) / (gn * gn) for j in range(n))
        for i in range(n)
    )
    mat = tuple(
        tuple(dk[i][j] - dk[i][n - 1] * k[j] for j in range(n - 1)) for i in range(n - 1)
    )
    return AntonelliMatrix(matrix=mat, point=x, normalized_price=k, income=dot(k, x))


def jacobi_residual(field: VectorField, x: Sequence, indices: tuple[int, int, int] = (0, 1, 2)) -> Num:
    """g_i (J_jk - J_kj) + g_j (J_ki - J_ik) + g_k (J_ij - J_ji) at x.

    Zero for all triples exactly when the field admits integrating surfaces.
    Antisymmetric in the indices; repeated indices give zero.
    """
    i, j, k = indices
    g = field.value(as_vec(x))
    J = field.jacobian(as_vec(x))
    n = len(g)
    if not all(0 <= t < n for t in indices):
        raise ValueError(f"indices {indices} out of range for dimension {n}")
    return (
        g[i] * (J[j][k] - J[k][j])
        + g[j] * (J[k][i] - J[i][k])
        + g[k] * (J[i][j] - J[j][i])
    )


@dataclass(frozen=True)
class DefinitenessResult:
    classification: str  # "negative-definite" | "indefinite" | "degenerate"
    bordered2: Num
    bordered3: Num
    tangent_max: float  # max of w'Jw over sampled unit tangents
    cross_check_agrees: bool


def tangent_definiteness(
    field: VectorField,
    x: Sequence,
    samples: int = 64,
    seed: int = 0,
    degenerate_tol: float = 1e-10,
) -> DefinitenessResult:
    """Classify w' Dg(x) w on the tangent space {w : g(x)·w = 0}.

    Uses the bordered determinants of the symmetrized Jacobian with the field
    value as border: for n = 3 the sign pattern (+, -) of the 3x3 and 4x4
    bordered determinants certifies negative definiteness on the tangent
    space.  For quadratic-form fields the denominator-cleared linear companion
    is used, so rational points classify exactly.  A sampled quadratic-form
    cross-check on random tangent vectors corroborates the verdict.
    """
    x = as_vec(x)
    if isinstance(field, QuadraticInverseDemand):
        M = field.companion_matrix()
        h = matvec(M, x)
        exact = is_exact(h) and is_exact(*M)
    else:
        M = field.jacobian(x)
        h = field.value(x)
        exact = False
    half = Fraction(1, 2) if exact else 0.5
    Msym = tuple(
        tuple((M[i][j] + M[j][i]) * half for j in range(3)) for i in range(3)
    )
    d2 = (
        2 * Msym[0][1] * h[0] * h[1]
        - Msym[1][1] * h[0] * h[0]
        - Msym[0][0] * h[1] * h[1]
    )
    bord = [
        [Msym[0][0], Msym[0][1], Msym[0][2], h[0]],
        [Msym[1][0], Msym[1][1], Msym[1][2], h[1]],
        [Msym[2][0], Msym[2][1], Msym[2][2], h[2]],
        [h[0], h[1], h[2], 0],
    ]
    d3 = det(bord)

    if exact:
        degenerate = d2 == 0 or d3 == 0
    else:
        scale = max(abs(float(v)) for row in Msym for v in row)
        scale = max(scale, max(abs(float(v)) for v in h), 1e-300)
        degenerate = abs(float(d2)) <= degenerate_tol * scale**3 or abs(
            float(d3)
        ) <= degenerate_tol * scale**4
    if degenerate:
        classification = "degenerate"
    elif d2 > 0 and d3 < 0:
        classification = "negative-definite"
    else:
        classification = "indefinite"

    # independent route: random tangent vectors against the actual Jacobian
    rng = np.random.default_rng(seed)
    g = np.array([float(v) for v in field.value(x)])
    J = np.array([[float(v) for v in row] for row in field.jacobian(x)])
    ghat = g / np.linalg.norm(g)
    tangent_max = -math.inf
    for _ in range(samples):
        w = rng.normal(size=3)
        w -= (w @ ghat) * ghat
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            continue
        w /= nw
        tangent_max = max(tangent_max, float(w @ J @ w))
    agrees = (classification == "negative-definite") == (tangent_max < 0)
    return DefinitenessResult(
        classification=classification,
        bordered2=d2,
        bordered3=d3,
        tangent_max=tangent_max,
        cross_check_agrees=agrees,
    )


@dataclass(frozen=True)
class ScalingCheck:
    residual_base: float
    residual_scaled: float
    lam_value: float
    predicted_scaled: float  # lam^2 * residual_base

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.residual_scaled), abs(self.predicted_scaled), 1e-300)
        return abs(self.residual_scaled - self.predicted_scaled) / scale

    def consistent(self, tol: float = 1e-4) -> bool:
        return self.relative_gap <= tol


def scaling_invariance_check(
    field: VectorField,
    lam: Callable[[Vec], Num],
    x: Sequence,
    indices: tuple[int, int, int] = (0, 1, 2),
    rel_step: float = 1e-6,
) -> ScalingCheck:
    """Jacobi residual of lam(x)·g against lam(x)^2 times the residual of g.

    The scaled field is differentiated by finite differences on purpose, so
    the quadratic transformation law is corroborated by an independent route
    rather than by algebra on the same Jacobian.
    """
    x = tuple(float(v) for v in as_vec(x))
    base = float(jacobi_residual(field, x, indices))
    scaled_field = ScaledField(field, lam, rel_step=rel_step)
    scaled = float(jacobi_residual(scaled_field, x, indices))
    lv = float(lam(x))
    return ScalingCheck(
        residual_base=base,
        residual_scaled=scaled,
        lam_value=lv,
        predicted_scaled=lv * lv * base,
    )


@dataclass(frozen=True)
class InversePairResult:
    """Antonelli inverse against the truncated Slutsky block at the dual budget."""

    antonelli_matrix: Mat
    antonelli_inverse: Mat
    slutsky_truncated: Mat
    price: Vec
    income: Num
    gap: float

    @property
    def ok(self) -> bool:
        return self.gap <= 1e-6


def inverse_pair_gap(spec: DemandSpec, x: Sequence) -> InversePairResult:
    """Check (Antonelli matrix)^{-1} = truncated Slutsky at (k(x), k(x)·x).

    Both sides are computed by fully separate analytic routes: the Antonelli
    block from the inverse-demand field, the Slutsky block from the direct
    demand at the budget where the consumer would choose x.  Exact inputs make
    the identity exact.
    """
    field = QuadraticInverseDemand.from_spec(spec)
    a = antonelli(field, x)
    p = a.normalized_price
    m = a.income
    s = slutsky(spec, p, m, mode="analytic")
    inv = a.inverse()
    st = s.truncated()
    gap = max(
        abs(float(inv[i][j] - st[i][j])) for i in range(2) for j in range(2)
    )
    return InversePairResult(
        antonelli_matrix=a.matrix,
        antonelli_inverse=inv,
        slutsky_truncated=st,
        price=p,
        income=m,
        gap=gap,
    )


class ConvergenceError(RuntimeError):
    """Optimizer failed to converge; carries the best value found."""

    def __init__(self, message: str, best: float):
        super().__init__(message)
        self.best = best


def expenditure_numeric(
    spec: DemandSpec,
    x: Sequence,
    price: Sequence,
    restarts: int = 16,
    max_iters: int = 2000,
    grad_tol: float = 1e-11,
    seed: int = 0,
) -> float:
    """min p·y over the indifference quadric {y >> 0 : y'By = x'Bx}.

    Multiplicative projected descent: iterates live in log coordinates so they
    stay strictly positive, and rescaling y -> t·y projects exactly back onto
    the level set (the form is homogeneous of degree two).  Runs ``restarts``
    descents from x and from random multiplicative perturbations of it, and
    returns the best minimum.  Requires a symmetric (rationalizable) family.
    """
    if not spec.symmetric:
        raise ValueError("expenditure minimization needs the symmetric control family")
    xf = np.array([float(v) for v in as_vec(x)], dtype=float)
    pf = np.array([float(v) for v in as_price(price)], dtype=float)
    if np.any(xf <= 0):
        raise ValueError("bundle must be strictly positive")
    if not cone_contains(spec, tuple(pf)):
        # outside {Ap >= 0} the minimum sits on the orthant boundary and the
        # expenditure function of the family is no longer differentiable there
        raise ValueError("price is outside the admissible cone of the family")
    B = np.array([[float(v) for v in row] for row in spec.B])
    Bs = (B + B.T) / 2.0
    c = float(xf @ Bs @ xf)
    if c <= 0:
        raise ValueError("bundle is outside the positive-form region")

    def project(y: np.ndarray) -> np.ndarray:
        return y * math.sqrt(c / float(y @ Bs @ y))

    # stationary candidate: p = 2*lambda*Bs*y at an interior optimum, so the
    # ray Bs^{-1} p holds the minimizer whenever that ray is strictly positive.
    # Used as a warm start only; the gradient test below still validates it.
    stationary = None
    y0 = np.linalg.solve(Bs, pf)
    if np.all(y0 > 0) and float(y0 @ Bs @ y0) > 0:
        stationary = project(y0)

    rng = np.random.default_rng(seed)
    best = math.inf
    converged_any = False
    for r in range(restarts):
        if r == 0:
            y = project(xf.copy())
        elif r == 1 and stationary is not None:
            y = stationary.copy()
        else:
            y = project(xf * np.exp(rng.uniform(-0.8, 0.8, size=3)))
        fy = float(pf @ y)
        step = 1.0
        ok = False
        stagnant = 0
        for _ in range(max_iters):
            grad_f = pf * y  # d(p·e^xi)/dxi
            grad_g = 2.0 * (Bs @ y) * y  # d(y'By)/dxi
            gg = float(grad_g @ grad_g)
            d = grad_f - (float(grad_f @ grad_g) / gg) * grad_g
            dn = float(np.linalg.norm(d))
            if dn <= grad_tol * max(1.0, float(np.linalg.norm(grad_f))):
                ok = True
                break
            # backtracking along -d in log coordinates, re-projecting each trial
            step = min(step * 2.0, 1.0)
            while step > 1e-18:
                y_try = project(y * np.exp(-step * d))
                f_try = float(pf @ y_try)
                if f_try <= fy - 1e-4 * step * dn * dn:
                    break
                step *= 0.5
            else:
                ok = True  # step underflow: no further improvement possible
                break
            if fy - f_try <= 1e-14 * max(1.0, abs(fy)):
                stagnant += 1
                if stagnant >= 5:  # float-level improvements only: done
                    ok = True
                    y, fy = y_try, f_try
                    break
            else:
                stagnant = 0
            y, fy = y_try, f_try
        if ok:
            converged_any = True
        best = min(best, fy)
    if not converged_any:
        raise ConvergenceError(
            f"projected descent did not converge in {max_iters} iterations", best
        )
    return best


@dataclass(frozen=True)
class ShephardResult:
    expenditure: float
    gradient: Vec  # central-difference dE/dp
    demand: Vec  # f(p, E)
    residual: float  # max |gradient - demand|
    concavity_margin: float  # min over sampled midpoints of E((p+q)/2) - (E(p)+E(q))/2

    @property
    def ok(self) -> bool:
        return self.residual <= 1e-4 and self.concavity_margin >= -1e-7


def shephard_check(
    spec: DemandSpec,
    x: Sequence,
    price: Sequence,
    rel_step: float = 1e-4,
    concavity_samples: int = 8,
    restarts: int = 8,
    seed: int = 0,
) -> ShephardResult:
    """Shephard's lemma for the control family: grad E^x(p) = f(p, E^x(p)).

    The expenditure function is differentiated by central differences of the
    numeric minimizer; the demand side is evaluated in closed form.  Also
    samples random price pairs to spot-check midpoint concavity of E.
    """
    pf = tuple(float(v) for v in as_price(price))
    E0 = expenditure_numeric(spec, x, pf, restarts=restarts, seed=seed)
    grad = []
    for j in range(3):
        h = rel_step * max(1.0, abs(pf[j]))
        pp = list(pf)
        pm = list(pf)
        pp[j] += h
        pm[j] -= h
        Ep = expenditure_numeric(spec, x, pp, restarts=restarts, seed=seed)
        Em = expenditure_numeric(spec, x, pm, restarts=restarts, seed=seed)
        grad.append((Ep - Em) / (2 * h))
    f = family_demand(spec, pf, E0)
    residual = max(abs(a - float(b)) for a, b in zip(grad, f))

    rng = np.random.default_rng(seed + 1)
    margin = math.inf
    for _ in range(concavity_samples):
        # second price drawn inside the admissible cone (it is convex, so the
        # midpoint is admissible too)
        for _ in range(200):
            q = tuple(v * math.exp(u) for v, u in zip(pf, rng.uniform(-0.06, 0.06, size=3)))
            if cone_contains(spec, q):
                break
        else:
            raise RuntimeError("could not sample an admissible second price")
        mid = tuple((a + b) / 2 for a, b in zip(pf, q))
        Emid = expenditure_numeric(spec, x, mid, restarts=restarts, seed=seed)
        Eq = expenditure_numeric(spec, x, q, restarts=restarts, seed=seed)
        margin = min(margin, Emid - (E0 + Eq) / 2)
    return ShephardResult(
        expenditure=E0,
        gradient=tuple(grad),
        demand=f,
        residual=residual,
        concavity_margin=margin,
    )
