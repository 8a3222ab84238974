"""Differential diagnostics on the two families.

The Gale family passes every pairwise consistency test yet fails every
symmetry-based integrability test; the symmetric control family passes them
all.  This script prints both sides of each test.
"""

import numpy as np

from galedemand import (
    LinearField,
    QuadraticInverseDemand,
    antonelli,
    gale_spec,
    inverse_pair_gap,
    jacobi_residual,
    shephard_check,
    slutsky,
    symmetric_spec,
    tangent_definiteness,
)

gale = gale_spec()
sym = symmetric_spec()
P, M = (1, 1, 1), 3


def show_matrix(label, m):
    print(label)
    for row in m:
        print("   ", "  ".join(f"{str(v):>6}" for v in row))


# --- Slutsky substitution matrix ------------------------------------------

s = slutsky(gale, P, M)
show_matrix("Gale Slutsky matrix at p = (1,1,1), m = 3 (exact):", s.matrix)
print("   s01 =", s.matrix[0][1], " s10 =", s.matrix[1][0], " -> not symmetric")
print("   S p =", tuple(str(v) for v in s.residual_price()), "(singularity in p is intact)")

t = slutsky(sym, P, M)
show_matrix("control family at the same point:", t.matrix)
print("   asymmetry:", t.asymmetry(), "\n")

# --- Antonelli matrix: the inverse-side derivative ------------------------

a = antonelli(QuadraticInverseDemand.from_spec(gale), (1, 1, 1))
show_matrix("Gale Antonelli block at x = (1,1,1):", a.matrix)
s_block = tuple(tuple(row[:2]) for row in s.matrix[:2])
print("   its inverse equals the truncated Slutsky block:", a.inverse() == s_block)
gap = inverse_pair_gap(gale, (1, 1, 1))
print(f"   consistency gap between the two derivative routes: {gap.gap:.2e}\n")

# --- Jacobi bracket residual: a coordinate-free asymmetry detector --------

companion = tuple(tuple(37 * v for v in row) for row in gale.B)
r_gale = jacobi_residual(LinearField(companion), (1, 1, 1), (0, 1, 2))
r_sym = jacobi_residual(QuadraticInverseDemand.from_spec(sym), (1, 1, 1))
print(f"Jacobi residual at (1,1,1): gale {r_gale}, control {r_sym}")
print("   nonzero means no utility function generates the inverse demand\n")

# --- Definiteness on the budget tangent -----------------------------------

field = QuadraticInverseDemand.from_spec(gale)
rng = np.random.default_rng(7)
worst = None
for _ in range(200):
    x = tuple(rng.uniform(0.1, 5.0, size=3))
    res = tangent_definiteness(field, x)
    assert res.classification == "negative-definite" and res.cross_check_agrees
    if worst is None or res.tangent_max > worst.tangent_max:
        worst = res
at_ones = tangent_definiteness(field, (1, 1, 1))
print("definiteness sweep: 200 random bundles, all negative-definite")
print(f"   bordered determinants at (1,1,1): {at_ones.bordered2}, {at_ones.bordered3}\n")

# --- Expenditure and Shephard's lemma on the control family ---------------

sh = shephard_check(sym, (1, 1, 1), (1, 1, 1))
print("Shephard check, control family at x = p = (1,1,1):")
print(f"   E = {sh.expenditure:.12f}")
print(f"   grad E      = {tuple(round(v, 9) for v in sh.gradient)}")
print(f"   demand      = {tuple(float(v) for v in sh.demand)}")
print(f"   residual    = {sh.residual:.2e}, concavity margin = {sh.concavity_margin:.2e}")
print(f"   ok: {sh.ok}")
