"""
Roots, Weyl group elements and the Lusztig map
==============================================

A tour of the E8 root system and of how a Weyl group element is matched
to a unipotent class.
"""

# %%
# The root system is generated from the Cartan matrix.  Roots are ordered by
# height, so index j-1 is the simple root alpha_j and the last positive root
# is the highest one.
from e8good.rootsystem import root_system

rs = root_system("E8")
print(len(rs.roots), "roots,", rs.positive_count, "positive")
print("highest root:", rs.highest_root.coeffs, "height", rs.highest_root.height)

# %%
# Structure constants come from extraspecial pairs and are all +-1 in E8.
a, b = rs.simple(2), rs.simple(4)
print("N(alpha_2, alpha_4) =", rs.N(a, b), "-> root", rs.roots[rs.sum_table(a, b)].coeffs)

# %%
# Weyl group elements are permutations of the 240 roots.  Length is the
# number of positive roots sent negative.
from e8good.weyl import word_to_element, reduced_word, longest_element

cox = word_to_element("E8", [1, 3, 4, 2, 5, 6, 7, 8])
print("Coxeter element length:", cox.length)
print("w0 length:", longest_element("E8").length)
print("reduced form of 1 2 1 2 1 2 3:", reduced_word(word_to_element("E8", [1, 2, 1, 2, 1, 2, 3])))

# %%
# Classes are identified by minimizing length along cyclic shifts and then
# comparing characteristic polynomials with a shipped catalog.
from e8good.weyl import load_catalog, identify_class, hooks_into

cat = load_catalog("E8")
w = word_to_element("E8", [1, 4, 2, 3, 4, 3, 5, 6, 7, 8])
cls = identify_class(w, cat)
print("class:", cls.name, "min length", cls.min_length, "char poly", cls.char_poly)

# %%
# w "hooks into" O when it has minimal length among all Weyl classes mapped
# to O.  This is the condition a certificate must satisfy.
for O in ("E8(a1)", "E8"):
    print(f"w hooks into {O} at p = 2:", hooks_into(w, O, 2))
