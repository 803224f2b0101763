# Recovering a spherical metric from its edge invariant
#
# Minimizing the total capacity over all angle structures with a given
# edge invariant lands on the angle structure of a spherical metric.  The
# minimizer is unique, so the metric can be read off its corners.

import math
import time

import numpy as np

from sphpoly.angles import feasibility
from sphpoly.mesh import EdgeFunction, load_corpus
from sphpoly.solver import minimize_capacity, random_feasible_start, roundtrip

pi = math.pi

# The regular octahedron on the unit sphere: every face is the octant
# triangle, every edge has length pi/2 and D = pi.

p = load_corpus("octahedron_pi")
sol = minimize_capacity(p.mesh, p.invariant)
print(sol.status.value, "after", sol.iterations, "iterations")
print("lengths:", np.unique(np.round(sol.lengths.as_array(p.mesh), 12)))

# A less symmetric tetrahedron.  The objective decreases every step.

p = load_corpus("tetrahedron_generic")
sol = minimize_capacity(p.mesh, p.invariant)
print("objective:", ["%.12f" % v for v in sol.objective_trace])
print("max residual:", sol.max_residual)

# Starting elsewhere gives the same answer.

rng = np.random.default_rng(1)
w = feasibility(p.mesh, p.invariant).witness
other = minimize_capacity(p.mesh, p.invariant, start=random_feasible_start(p.mesh, w, rng, 0.9))
print("difference between starts:", np.abs(other.x_final - sol.x_final).max())

# Round trip: pick edge lengths, compute the angles and invariant, solve,
# and compare.

mesh = load_corpus("octahedron").mesh
worst = 0.0
t0 = time.perf_counter()
for _ in range(20):
    l = EdgeFunction.from_array(mesh, pi / 2 + rng.uniform(-0.15, 0.15, mesh.n_edges))
    worst = max(worst, roundtrip(mesh, l).max_length_error)
print(f"20 perturbed octahedra: worst length error {worst:.2e} in {time.perf_counter() - t0:.2f} s")
