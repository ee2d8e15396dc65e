"""
Weil algebras as rewrite systems
================================

Each infinitesimal object is a quotient of a polynomial ring by monomial
rules.  The basis that survives the rules is what a "jet" along that
object can see.
"""

from synthdiff.weil import dual_numbers, first_order, from_text, kth_order, laplace_algebra, weil_tensor

# d^2 = 0: one nilpotent direction
D = dual_numbers()
print("D       ", D.monomial_names(["d"]), "depth", D.depth)

# two directions whose pairwise products vanish
print("D(2)    ", first_order(2).monomial_names(["d1", "d2"]))

# the second-order neighbourhood keeps the quadratic terms
print("D_2(2)  ", kth_order(2, 2).monomial_names(["d1", "d2"]))

# the Laplace object identifies d1^2 with d2^2 and kills the rest of degree two
L = laplace_algebra()
print("D_L     ", L.monomial_names(["d1", "d2"]))

# D x D is not D(2): the mixed product d1*d2 survives
print("D ⊗ D   ", weil_tensor(D, D).monomial_names(["d1", "d2"]))

# arithmetic: (1 + d1)(1 + d2) in D(2)
W = from_text("D(2)")
d1, d2 = W.generators()
print("(1+d1)(1+d2) =", ((W.one() + d1) * (W.one() + d2)).as_dict(["d1", "d2"]))
