"""
Counting decoder operations
===========================

Binary-operation estimates for BP, OSD-0, the combination sweep, and
qGRAND syndrome checks.
"""

import numpy as np

from triortho import cost

# length 95, 384 ones in H_X, 100 iterations of 8-bit messages
bp = cost.CostParams(n=95, r=25, k_0=70, n_e=384, q=8, n_iter=100)
print("C(BP)    ", cost.cost_bp(bp))
print("C(OSD-0) ", cost.cost_osd0(bp))

cs = cost.CostParams(n=15, r=4, k_0=11, n_e=32, osd_depth=10)
print("C(CS-10) ", cost.cost_cs_lambda(cs))

# OSD runs only on frames where BP fails, so the average sits between
# the BP cost and BP plus a full post-processing pass
for n_osd in (0, 10, 100):
    c = cost.CostParams(n=15, r=4, k_0=11, n_e=32, osd_depth=10, n_mc=100, n_osd=n_osd)
    print(n_osd, cost.cost_bp_osd_avg(c))

# qGRAND pays 2rn per guess
g = cost.CostParams(n=49, r=14, k_0=35, n_e=0, n_mc=100, n_g=1000)
print("C(qGRAND)", cost.cost_qgrand_avg(g))

# parameters can come straight from a matrix
h = np.array([[1, 1, 1, 1, 0, 0, 0], [0, 0, 1, 1, 1, 1, 0]], dtype=np.uint8)
print(cost.CostParams.from_matrix(h))
