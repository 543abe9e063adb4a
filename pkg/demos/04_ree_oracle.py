"""
Checking the Hecke-algebra formula on small groups
==================================================

For SL_2(q) and SL_3(2) everything can be enumerated: Bruhat cells,
unipotent classes and the principal-series unipotent characters.  The two
sides of the formula relating cell intersections to character values are
compared exactly.
"""

# %%
from e8good.reeoracle import build_model, check_all, check_ree

for type_, q in [("A1", 2), ("A1", 3), ("A1", 4), ("A1", 5), ("A2", 2)]:
    m = build_model(type_, q)
    res = check_all(m)
    print(f"{type_} q={q}: |G|={m.order}, {len(res)} pairs, all equal: {all(r[-1] for r in res)}")

# %%
# Looking at one model in detail.
m = build_model("A2", 2)
for i, cl in enumerate(m.unipotent_classes):
    print(f"class {i}: size {len(cl.elements)}, centralizer order {cl.centralizer_order}")
for w in m.weyl_elements():
    lhs, rhs, ok = check_ree(m, 1, w)
    print(w, lhs, rhs, ok)
