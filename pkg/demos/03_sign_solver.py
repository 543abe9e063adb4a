"""
Solving for the unknown roots of unity
======================================

For each unipotent class the multiplicities m((u)_a, w) are linear in a
handful of unknown roots of unity, one per character of the component group
A(u).  They must be non-negative reals, and that alone pins most unknowns.
"""

# %%
from e8good.signsolver import find_case, build_case_table, run_case, solve_all

rec, bucket = find_case("2A4", 7)
table = build_case_table(rec, "2A4", bucket)
print(table.format())

# %%
rep = run_case("2A4", 7)
print(rep.format())

# %%
# For the dihedral component group of D8(a1) in characteristic 2 one unknown
# stays free, but either choice gives exactly one positive row.
print(run_case("D8(a1)", 2).format())

# %%
# D8(a3) depends on q mod 3: when q = 1 mod 3 the identity row is positive,
# otherwise only a non-central row is.
print(run_case("D8(a3)", 2).format())

# %%
# The full verdict table for one characteristic.
results, exceptions = solve_all(3)
for cls, r in results:
    print(f"{cls:14s} {r.verdict}")
print("exceptions:", exceptions)
