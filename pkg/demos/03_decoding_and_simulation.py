"""
Decoding phase-flip errors
==========================

qGRAND and BP+OSD on the [[15,1,3]] code: single errors, an exhaustive
logical error rate, and a seeded Monte Carlo run against it.
"""

import math
from importlib import resources

import numpy as np

from triortho import analysis, channel, matrix_io
from triortho.decoders import BpOsdDecoder, DecoderConfig, QGrandDecoder, bdd_ler
from triortho.simulate import SimPlan, exact_ler, run_montecarlo, to_csv_rows

h_x = matrix_io.parse_matrix(resources.files("triortho").joinpath("data/hx_15.txt").read_text())
code = analysis.assemble_css(h_x).with_distances()

cfg = DecoderConfig(p=0.01, max_query=2**15, osd_depth=10)
grand = QGrandDecoder(h_x, cfg)

e = np.zeros(15, dtype=np.uint8)
e[6] = 1
s = channel.syndrome(h_x, e)
out = grand.decode(s)
print("syndrome", s, "->", np.flatnonzero(out.correction), "after", out.guesses, "guesses")

out = BpOsdDecoder(h_x, cfg).decode(s)
print("bp+osd  ", np.flatnonzero(out.correction), "osd used:", out.osd_invoked)

# frames are keyed by (seed, index): the same frame always has the same error
print(channel.sample_errors(0.2, seed=1, frame_indices=[0, 1], n=15))

exact = exact_ler(code, "qgrand", cfg, 0.01)
plan = SimPlan(code, "qgrand", cfg, (0.01,), target_errors=10**5, max_frames=10**5, seed=1)
pt = run_montecarlo(plan).points[0]
sigma = math.sqrt(exact * (1 - exact) / pt.frames)
print(f"exact {exact:.6g}  monte carlo {pt.ler:.6g}  ({(pt.ler - exact) / sigma:+.2f} sigma)")
print(f"average binary operations per frame: {pt.avg_cost:.1f}")

# bounded-distance reference for a length-49 code correcting two errors
for p in (0.001, 0.01, 0.1):
    print(p, bdd_ler(49, 2, p))

for row in to_csv_rows(run_montecarlo(SimPlan(code, "bp_osd", cfg, (0.02, 0.05), max_frames=5000))):
    print(",".join(row))
