# Lobachevsky function and triangle capacities
#
# The Lobachevsky function L(t) = -int_0^t ln|2 sin u| du is odd, has
# period pi, and vanishes at multiples of pi/2.  Everything else in the
# package is built from it.

import math

import numpy as np

from sphpoly.capacity import (
    LobachevskyEvaluator,
    capacity_theta,
    capacity_theta_tilde,
    capacity_V,
    grad_theta,
    hessian_theta,
    lobachevsky,
)

# The default evaluator uses a Clausen series; quadrature is available
# for comparison.

t = np.linspace(-math.pi, 2 * math.pi, 7)
quad = LobachevskyEvaluator("quadrature")
for v in t:
    print(f"L({v:+.4f}) series={lobachevsky(v):+.15f}  quad={quad(v):+.15f}")

# Its maximum sits at pi/6; the value at pi/4 shows up as a constant below.

print("L(pi/6) =", lobachevsky(math.pi / 6))
print("L(pi/4) =", lobachevsky(math.pi / 4))

# The capacity of a spherical triangle with angles x.  It vanishes at the
# octant triangle (all right angles), which is also its minimum on the
# symmetric line x = (a, a, a).

for a in np.linspace(0.34, 0.99, 8) * math.pi:
    x = (a, a, a)
    print(f"a = {a / math.pi:.3f} pi   theta = {capacity_theta(x):+.10f}")

# The gradient is ln tan(y_i / 2) where y are the side lengths, so it is
# zero exactly at the octant triangle.  The Hessian there is the identity.

x = np.array([math.pi / 2] * 3)
print("grad at octant:", grad_theta(x))
print("hessian at octant:\n", hessian_theta(x))

# Off the symmetric point the Hessian stays positive definite.

x = np.array([1.2, 1.5, 2.0])
print("eigenvalues at", x, ":", np.linalg.eigvalsh(hessian_theta(x)))

# On Euclidean triangles (angle sum pi) the shifted capacity is minus half
# the ideal tetrahedron volume.

x = np.array([0.5, 1.1, math.pi - 1.6])
print("theta_tilde =", capacity_theta_tilde(x), "  -V/2 =", -capacity_V(x) / 2)
