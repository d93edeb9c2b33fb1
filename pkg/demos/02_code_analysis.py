"""
Distances of a triorthogonal CSS code
=====================================

Weight enumerators, their MacWilliams duals, and the four distances of the
[[15,1,3]] code.
"""

from importlib import resources

from triortho import analysis, matrix_io

text = resources.files("triortho").joinpath("data/hx_15.txt").read_text()
h_x = matrix_io.parse_matrix(text)

a = analysis.weight_distribution(h_x)
b = analysis.macwilliams(a, h_x.shape[0])
print("A:", a.coeffs)  # every nonzero combination has weight 8
print("B:", b.coeffs)
print("dual distance", b.min_nonzero_weight())

# Krawtchouk values are exact integers
print(analysis.krawtchouk(3, 8, 15), analysis.krawtchouk(1, 8, 15))

code = analysis.assemble_css(h_x).with_distances()
print(code.distances)

# the direct route walks C_X and C_Z and must agree
print(analysis.quantum_distances(code, method="enumerate") == code.distances)

# a matrix that is not triorthogonal is rejected with the failing rows
report = analysis.is_triorthogonal([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
print(report)
