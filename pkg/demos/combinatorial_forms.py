"""
Group-valued forms and connections on finite neighbour spaces
=============================================================

Points are neighbours or not; a 1-form assigns a group element to each
neighbour pair, a connection does the same with a transport.  Closedness,
curvature and the Bianchi identity become finite table lookups.
"""

import itertools
import random

from synthdiff import combinat as cb
from synthdiff.groups import named_group

S3 = named_group("S3")

# the Maurer-Cartan form of Z3 is d of the identity map: (a, b) -> b - a
Z3 = named_group("Z3")
mc = cb.maurer_cartan(Z3)
print("Maurer-Cartan on Z3:", {(a, b): mc(a, b) for a, b in itertools.product(range(3), repeat=2)})

# d(df) is trivial even for a nonabelian group
M = cb.NeighbourSpace.complete(4)
df = cb.coboundary0(cb.zero_form(M, S3, [0, 3, 5, 1]))
print("df closed:", cb.is_closed(df))

# the distribution of a closed form is involutive; its fibres are integral
dist = cb.distribution_from_form(df)
print("involutive:", cb.is_involutive(dist), "| integral {0}:", cb.is_integral_subset(dist, [0]))

# a random S3 connection on the complete 4-point space is curved, yet the
# Bianchi identity holds at every one of its 256 ordered 3-simplices
rng = random.Random(1)
pairs = [(x, y) for x in range(4) for y in range(x + 1, 4)]
conn = cb.GroupoidConnection.from_values(M, S3, {p: rng.randrange(6) for p in pairs})
print("R(0,1,2) =", S3.label(cb.curvature(conn, (0, 1, 2))))
print("Bianchi failures:", len(cb.bianchi_failures(conn)), "of", len(cb.simplices(M, 3)))

# affine connection of a group: z x^-1 y is flat
lam = cb.AffineConnection.group_translation(S3)
print("translation flat:", all(cb.affine_curvature(lam, s).is_identity for s in cb.simplices(lam.space, 2)))
