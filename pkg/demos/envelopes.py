"""
Envelopes of plane curve families
=================================

A family F(x, y, t) = 0 has characteristics where F = ∂F/∂t = 0.  Taking
the resultant in t eliminates the parameter and leaves the locus.
"""

from fractions import Fraction

from synthdiff import envelope as env

# tangent lines to the parabola y = x^2
lines = env.Family.parse("y - 2*t*x + t^2")
locus = env.envelope_eliminate(lines)
print("tangent lines   ->", locus.eliminant_text())
for t in (Fraction(-1), Fraction(1, 2), Fraction(3)):
    print(f"  touches at t = {t}:", env.touching_check(lines, t, (t, t * t), locus))

# Courant's cubics y = (x - t)^3: the locus is the x-axis, yet no two
# members meet, so "touched by every member" fails there
cubics = env.Family.parse("y - (x - t)^3")
locus = env.envelope_eliminate(cubics)
print("Courant cubics  ->", locus.eliminant_text(), "| squarefree:",
      env.envelope_eliminate(cubics, squarefree=True).eliminant_text())
print("  (2, 0) on the characteristic at t = 2:", env.synthetic_characteristic_check(cubics, 2, (2, 0)))
print("  t = 0 and t = 1 meet on the grid:", env.grid_intersections(cubics, 0, 1, bound=3))

# a family that is not polynomial in t is sampled by Newton's method
curved = env.Family.parse("y - exp(t)*x + t")
sampled = env.envelope_eliminate(curved, t_range=(-1, 1, 5))
for t, x, y in sampled.samples:
    print(f"  t = {t:+.2f}: ({float(x):.6f}, {float(y):.6f})")
