"""
Searching for triorthogonal matrices
====================================

Rebuild the 4 x 15 matrix of the [[15,1,3]] code from its multiplicity
vector, then let the search find matrices on its own.
"""

import numpy as np

from triortho import analysis, ilp

# every nonzero column of length 4 used once
inst = ilp.build_instance(k0=4, n=15, d_perp=3)
w = ilp.derive_witness(inst, np.ones(inst.num_types, dtype=int))
print("pair overlaps   ", [2 * z for z in w.z_p])
print("triple overlaps ", [2 * z for z in w.z_t])
print("weight counts   ", w.weight_counts())
print(ilp.verify_witness(inst, w).checks)

h = ilp.extract_matrix(inst, w)
print(h)

# the same instance, solved from scratch
res = ilp.solve(inst)
print(res.status, "after", res.nodes, "nodes")

# larger lengths need the cyclic-shift symmetry on the column types
for k0, n in [(6, 39), (6, 47), (7, 43)]:
    inst = ilp.build_instance(k0, n, 3)
    orbit = ilp.orbit_partition(k0, ilp.cyclic_shift(k0))
    res = ilp.solve(inst, orbit=orbit, time_limit=60)
    if not res.feasible:
        print(n, res.status)
        continue
    h = ilp.extract_matrix(inst, res.witness)
    code = analysis.assemble_css(h).with_distances()
    d = code.distances
    print(f"[[{code.n},{code.k},{min(d.d_x, d.d_z)}]]  orbits={len(orbit.orbits)}  triply-even={analysis.is_triply_even(h)}")
