# Which edge invariants can be realized?
#
# An angle structure puts an angle on every corner of every face so each
# face is a spherical triangle.  Its edge invariant D(e) is the sum of the
# two angles facing edge e.  We ask which D are possible.

import math

import numpy as np

from sphpoly.angles import edge_invariant, feasibility, guo_condition_bruteforce
from sphpoly.mesh import EdgeFunction, load_corpus

pi = math.pi

# Two triangles glued along their three edges.  D = 0.8 pi on every edge
# works (0.4 pi in every corner does it).  The witness returned is a
# different point, the one furthest from the boundary.

dt = load_corpus("double_triangle").mesh
D = EdgeFunction.constant(dt, 0.8 * pi)
res = feasibility(dt, D)
print(res.status.value, " slack", res.slack)
print("witness:", res.witness)
print("its invariant:", edge_invariant(dt, res.witness).values)

# With 0.3 pi on every edge the angle sums are too small.  The result
# carries a face subset that certifies it.

res = feasibility(dt, EdgeFunction.constant(dt, 0.3 * pi))
print(res.status.value, "|", res.certificate)

# For invariants below pi the linear program agrees with the subset
# condition pi |X| < sum of D over the edges touched by X.

rng = np.random.default_rng(0)
for name in ("double_triangle", "tetrahedron", "octahedron"):
    mesh = load_corpus(name).mesh
    agree = feasible = 0
    for _ in range(50):
        D = EdgeFunction.from_array(mesh, rng.uniform(0.5 * pi, pi, mesh.n_edges))
        lp = feasibility(mesh, D).feasible
        agree += lp == guo_condition_bruteforce(mesh, D)
        feasible += lp
    print(f"{name:>16}: {agree}/50 agree, {feasible} feasible")

# Above pi the subset condition alone is not enough.

D = EdgeFunction.from_array(dt, [0.1, 3.2, 3.2])
print("subset condition:", guo_condition_bruteforce(dt, D), "  LP:", feasibility(dt, D).status.value)
