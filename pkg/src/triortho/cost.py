"""Binary-operation counts for the BP+OSD-CS and qGRAND decoders.

``r`` is the GF(2) rank of ``H_X`` and ``k_0 = n - r`` the dimension of the
classical code it defines (not the number of rows of ``H_X``). ``n_e`` is the
number of ones in ``H_X``. Integer-valued formulas return ``int``; the
sorting term uses a real-valued ``log2`` and returns ``float``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2


@dataclass(frozen=True)
class CostParams:
    n: int
    r: int
    k_0: int
    n_e: int
    q: int = 8
    n_iter: int = 100
    osd_depth: int = 0
    n_mc: int = 1
    n_osd: int = 0
    n_g: int = 0

    def __post_init__(self):
        if self.r + self.k_0 != self.n:
            raise ValueError(f"r + k_0 must equal n ({self.r} + {self.k_0} != {self.n})")
        if self.n_osd > self.n_mc:
            raise ValueError("n_osd cannot exceed n_mc")
        if min(self.n, self.r, self.k_0, self.n_e, self.q, self.n_iter, self.osd_depth, self.n_osd, self.n_g) < 0:
            raise ValueError("cost parameters must be nonnegative")

    @classmethod
    def from_matrix(cls, h_x, **kwargs) -> CostParams:
        h_x = gf2.as_bits(h_x, 2)
        n = h_x.shape[1]
        r = gf2.rank(h_x)
        return cls(n=n, r=r, k_0=n - r, n_e=int(np.count_nonzero(h_x)), **kwargs)


def cost_bp(c: CostParams) -> int:
    return c.n_iter * (4 * c.q * c.n_e + c.n_e + c.n)


def cost_sort_osd(c: CostParams) -> float:
    log_n = math.log2(c.n) if c.n > 0 else 0.0
    return c.q * (c.n * log_n) + c.n


def cost_ge(c: CostParams) -> int:
    return c.r * (c.r - 1) * (3 * c.n - c.r + 2) // 6


def cost_inv(c: CostParams) -> int:
    return c.r * (c.r - 1) * (3 * c.r + 1) // 2


def cost_prod_osd(c: CostParams) -> int:
    return c.r * (2 * c.r - 1)


def cost_osd0(c: CostParams) -> float:
    return cost_sort_osd(c) + cost_ge(c) + cost_inv(c) + cost_prod_osd(c)


def n_conf(c: CostParams) -> int:
    return c.k_0 + math.comb(c.osd_depth, 2)


def cost_sorting_cs(c: CostParams) -> int:
    return c.k_0


def cost_precomp_cs(c: CostParams) -> int:
    return c.r * c.k_0 * (2 * c.r - 1)


def cost_operations(c: CostParams) -> int:
    return cost_precomp_cs(c) + n_conf(c) * (c.r * c.k_0 + c.r * (c.k_0 - 1) + c.r)


def cost_comparisons(c: CostParams) -> int:
    nc = n_conf(c)
    return nc * (c.n - 1) + (nc - 1)


def cost_cs_lambda(c: CostParams) -> int:
    return cost_sorting_cs(c) + cost_operations(c) + cost_comparisons(c)


def cost_postprocessing(c: CostParams) -> float:
    """Cost of one post-processing call: OSD-0, plus CS when ``osd_depth > 0``."""
    return cost_osd0(c) + (cost_cs_lambda(c) if c.osd_depth > 0 else 0)


def cost_bp_osd_avg(c: CostParams) -> float:
    """Average per frame, charging every frame the full ``n_iter`` BP iterations."""
    if c.n_mc < 1:
        raise ValueError("n_mc must be at least 1")
    return (c.n_mc * cost_bp(c) + c.n_osd * cost_postprocessing(c)) / c.n_mc


def cost_syndrome(c: CostParams) -> int:
    return c.r * c.n + c.r * (c.n - 1) + c.r


def cost_qgrand_avg(c: CostParams) -> float:
    if c.n_mc < 1:
        raise ValueError("n_mc must be at least 1")
    return c.n_g * cost_syndrome(c) / c.n_mc
