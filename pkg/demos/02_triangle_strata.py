# Spherical triangles and the boundary of their angle space
#
# A triple of angles x is a spherical triangle when all dual angles
# x*_i = (pi + x_i - x_j - x_k)/2 are positive and the angle sum exceeds
# pi.  In dual coordinates that is an open simplex, and the faces of its
# closure sort degenerate triangles into six types.

import math

import numpy as np

from sphpoly.capacity import segment_derivative
from sphpoly.trig import (
    angles_to_lengths,
    classify,
    dual_angles,
    length_jacobian,
    lengths_to_angles,
)

pi = math.pi

# The equilateral triangle with angles 0.4 pi has side arccos(1/sqrt(5)).

x = np.full(3, 0.4 * pi)
y = angles_to_lengths(x)
print("sides:", y, " arccos(1/sqrt 5) =", math.acos(1 / math.sqrt(5)))
print("back to angles:", lengths_to_angles(y))

# How the sides move with the angles.

print("dy/dx:\n", length_jacobian(x))

# Degenerate triangles.  Each sample point lands in a different stratum.

samples = {
    "interior": (0.5 * pi, 0.5 * pi, 0.5 * pi),
    "I": (pi / 3, pi / 3, pi / 3),
    "II": (pi / 3, 2 * pi / 3, 2 * pi / 3),
    "III": (0.0, pi / 3, 2 * pi / 3),
    "IV": (pi, pi / 2, pi / 2),
    "V": (pi, pi, pi),
    "VI": (pi, 0.0, 0.0),
    "outside": (1.0, 1.0, 1.0),
}
for name, x in samples.items():
    print(f"{name:>8}: class={classify(x).value:<9} duals={np.round(dual_angles(x), 4)}")

# Approaching the boundary along a straight segment from the octant
# triangle, the capacity derivative blows up toward -inf for the first
# four types and settles to a finite value for the last two.

p = np.full(3, pi / 2)
ts = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
for name in ("I", "II", "III", "IV", "V", "VI"):
    vals = [segment_derivative(samples[name], p, t) for t in ts]
    print(f"{name:>3}: " + "  ".join(f"{v:9.4f}" for v in vals))
