"""
Huygens propagation of plane wave fronts
========================================

A front is a polyline of contact elements (focus plus unit normal).
Moving every focus a distance s along its normal gives the front at time
s; where the offset folds over itself the front has cusps.
"""

import numpy as np

from synthdiff import wavefront as wf

# a circle of radius 2 moves to the concentric circles of radius 2 ± s
circle = wf.OrientedFront.circle((0, 0), 2, 256)
for side in ("outer", "inner"):
    r = np.hypot(*wf.offset_front(circle, 0.5, side).front.vertices.T)
    print(f"{side}: radius {r.min():.12f} .. {r.max():.12f}")

# an ellipse develops cusps once s passes its smallest radius of curvature
a, b = 2.0, 1.0
ellipse = wf.OrientedFront.ellipse(a, b, 512)
print("b^2/a =", wf.ellipse_min_radius(a, b))
for s in (0.3, 0.45, 0.55, 0.8):
    rep = wf.offset_front(ellipse, s, "inner")
    print(f"  s = {s}: {len(rep.indices)} cusp vertices")

# spheres touching externally meet at one point; moving along the first
# sphere changes the distance to the second only to second order
A, C = wf.Sphere((0, 0), 1), wf.Sphere((3, 0), 2)
print("touch point:", wf.external_touch_point(A, C))
for h in (1e-2, 1e-3):
    print(f"  h = {h}: defect {wf.touch_defect(A, C, h)[1]:.3e}, K h^2 = {wf.touch_constant(A, C) * h * h:.3e}")

# three samples of a sphere recover it
print("fit:", wf.fit_sphere(wf.Sphere((1, -2), 3).sample(3, 0.4)))
