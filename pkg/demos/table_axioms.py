# Walk the bundled ten-observation table through the revealed preference
# machinery: pairwise (WARP) consistency holds, yet the full table carries a
# revealed-preference cycle through every observation, so no utility function
# rationalizes it.
#
#     python3 demos/table_axioms.py

from galedemand import (
    check_sarp,
    check_warp,
    direct_revealed,
    extend_to_total_order,
    gale_table,
    transitive_closure,
)
from galedemand.axioms import Dataset, SarpViolation

table = gale_table()
print(f"{len(table)} observations, {table[0].n_goods} goods, exact: {table.exact}")
print(f"{'i':>2}  {'price':<16} {'income':>6}  bundle")
for i, obs in enumerate(table):
    p = ",".join(str(v) for v in obs.price)
    x = ",".join(str(v) for v in obs.bundle)
    print(f"{i:>2}  {p:<16} {str(obs.income):>6}  {x}")
print()

rel = direct_revealed(table)
print("directly revealed preferences (i beats j):")
for i in range(rel.n):
    succ = rel.successors(i)
    if succ:
        print(f"   {i} > {succ}")
print()

warp = check_warp(table)
print(f"WARP: {'passes' if warp.passed else f'fails at pair {warp.violation}'}")

sarp = check_sarp(table)
print(f"SARP: {'passes' if sarp.passed else 'fails'}")
print(f"   cycle: {' > '.join(map(str, sarp.cycle))} > {sarp.cycle[0]}")
print()

closure = transitive_closure(rel)
extra = sorted(set(closure.edges) - set(rel.edges))
print(f"transitive closure adds {len(extra)} indirect comparisons, e.g. {extra[:4]}")
print("closure contains (0,0):", (0, 0) in closure.edges, " <- every row beats itself via the loop")
print()

# Any cycle-free prefix still admits a compatible ranking of the observations.
prefix = Dataset(tuple(table[i] for i in range(4)))
order = extend_to_total_order(prefix)
print("rows 0..3 alone are acyclic; a compatible ranking:", order)
try:
    extend_to_total_order(table)
except SarpViolation as exc:
    print(f"full table refuses a ranking: {exc}")
