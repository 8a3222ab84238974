"""Tour of the demand family: exact rational demand, boundary handling,
and the closed-form inverse.

Run from the repo root after `pip install -e .`:

    python3 demos/demand_walkthrough.py
"""

from fractions import Fraction

from galedemand import (
    cone_contains,
    family_demand,
    gale_demand,
    gale_spec,
    inverse_demand,
    normalize_price,
    spec_from_matrix,
    symmetric_spec,
)

def show(vec):
    return "(" + ", ".join(str(v) for v in vec) + ")"


gale = gale_spec()

print("demand matrix A:")
for row in gale.A:
    print("   ", show(row))
print("inverse B = A^-1 (rows scaled by 37):")
for row in gale.B:
    print("   ", show(37 * v for v in row))
print()

# Rational prices in, rational bundles out. No floats anywhere.
for price, income in [((8, 4, 2), 5), ((1, 2, 3), 6), ((4, 3, 3), 10)]:
    x = gale_demand(gale, price, income)
    pbar = normalize_price(gale, price)
    spent = sum(p * xi for p, xi in zip(price, x))
    print(f"p = {price}, m = {income}")
    print(f"   normalized price {show(pbar)}")
    print(f"   demand {show(x)}   (p.x = {spent}, inside cone: {cone_contains(gale, price)})")
print()

# The inverse side: g(x) gives the unique normalized cone price with g.x = 1,
# and demand at that price recovers x exactly.
x = (Fraction(3), Fraction(1), Fraction(2))
g = inverse_demand(gale, x)
print(f"x = {show(x)}")
print(f"g(x) = {show(g)}")
print(f"g.x  = {sum(a * b for a, b in zip(g, x))}")
print(f"f(g(x), 1) = {show(gale_demand(gale, g, 1))}")
print()

# Other families skip the normalization step: family_demand evaluates the
# same formula but insists the price already sits in the cone.
sym = symmetric_spec()
print("control family demand at p = (1,1,1), m = 3:", show(family_demand(sym, (1, 1, 1), 3)))

# Any invertible 3x3 matrix defines a family.
custom = spec_from_matrix(((2, 0, 0), (0, 3, 0), (0, 0, 4)), name="diag")
print("diagonal family demand at p = (1,1,1), m = 12:", show(family_demand(custom, (1, 1, 1), 12)))
