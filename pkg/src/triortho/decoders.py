"""Syndrome decoders for Z errors: bounded-distance, BP+OSD and qGRAND.

Every decoder maps an X-syndrome ``s = H_X e`` to an estimate ``e_hat``.
Success is judged on the residual ``e + e_hat`` (see
:func:`residual_is_logical`), so a decoder may return any member of the
right stabilizer coset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .analysis import CssCode

P_FLOOR = 1e-12


@dataclass(frozen=True)
class DecoderConfig:
    p: float
    n_iter: int = 100
    alpha: float = 0.05
    osd_depth: int = 0
    max_query: int = 10**6
    llr_clamp: float = 50.0

    def __post_init__(self):
        if self.n_iter < 1:
            raise ValueError("n_iter must be at least 1")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.osd_depth < 0:
            raise ValueError("osd_depth must be nonnegative")
        if self.max_query < 1:
            raise ValueError("max_query must be at least 1")


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    correction: np.ndarray
    converged: bool
    bp_iterations: int = 0
    osd_invoked: bool = False
    guesses: int = 0


def bdd_ler(n: int, t_x: int, p: float) -> float:
    """Logical error rate of a decoder correcting exactly the errors of weight <= ``t_x``."""
    if not 0 <= p < 0.5:
        raise ValueError(f"p must lie in [0, 1/2), got {p}")
    if not 0 <= t_x <= n:
        raise ValueError(f"t_x must lie in [0, n], got {t_x}")
    return math.fsum(math.comb(n, w) * p**w * (1 - p) ** (n - w) for w in range(t_x + 1, n + 1))


@dataclass(frozen=True, eq=False)
class BpResult:
    hard_decision: np.ndarray
    posteriors: np.ndarray
    converged: bool
    iterations: int


def bp_minsum(h_x, s, cfg: DecoderConfig) -> BpResult:
    """Scaled min-sum belief propagation on the syndrome, flooding schedule."""
    h = gf2.as_bits(h_x, 2).astype(bool)
    s = gf2.as_bits(s, 1)
    m, n = h.shape
    p = max(cfg.p, P_FLOOR)
    prior = float(np.clip(math.log((1 - p) / p), -cfg.llr_clamp, cfg.llr_clamp))
    posterior = np.full(n, prior)
    hard = np.zeros(n, dtype=np.uint8)
    if not s.any():
        return BpResult(hard, posterior, True, 0)

    rows = np.arange(m)
    syn_sign = np.where(s == 1, -1.0, 1.0)[:, None]
    v2c = np.where(h, prior, 0.0)
    for it in range(1, cfg.n_iter + 1):
        neg = h & (v2c < 0)
        row_sign = syn_sign * np.where(neg.sum(axis=1, keepdims=True) % 2, -1.0, 1.0)
        own_sign = np.where(neg, -1.0, 1.0)
        mag = np.where(h, np.abs(v2c), np.inf)
        first = mag.argmin(axis=1)
        min1 = mag[rows, first]
        mag[rows, first] = np.inf
        min2 = mag.min(axis=1)
        extrinsic = np.where(np.arange(n)[None, :] == first[:, None], min2[:, None], min1[:, None])
        extrinsic = np.minimum(extrinsic, cfg.llr_clamp)  # degree-1 checks have no other inputs
        c2v = np.where(h, row_sign * own_sign * cfg.alpha * extrinsic, 0.0)
        posterior = prior + c2v.sum(axis=0)
        hard = (posterior < 0).astype(np.uint8)
        if np.array_equal(gf2.matvec(h_x, hard), s):
            return BpResult(hard, posterior, True, it)
        v2c = np.where(h, posterior[None, :] - c2v, 0.0)
    return BpResult(hard, posterior, False, cfg.n_iter)


def osd_postprocess(h_x, s, posteriors, osd_depth: int) -> np.ndarray:
    """Ordered-statistics post-processing: OSD-0, then CS-``osd_depth`` when positive.

    Columns are ranked by decreasing error probability (increasing posterior
    LLR, ties by index). The first ``r`` independent ranked columns carry the
    information set; the remaining ``n - r`` columns form the remainder.
    Candidates are the zero remainder, then (when ``osd_depth > 0``) every
    weight-1 remainder and every weight-2 remainder within the first
    ``osd_depth`` remainder positions. The lightest completed error wins,
    earlier candidates winning ties.
    """
    h = gf2.as_bits(h_x, 2)
    s = gf2.as_bits(s, 1)
    n = h.shape[1]
    order = np.argsort(np.asarray(posteriors, dtype=float), kind="stable")
    hs = h[:, order]
    pivots, _ = gf2.first_independent_columns(hs)
    prow = gf2.independent_rows(hs)
    rest = [j for j in range(n) if j not in set(pivots)]
    inv = gf2.invert(hs[np.ix_(prow, pivots)])

    base = gf2.matvec(inv, s[prow])
    best_pivot = base
    best_rem = np.zeros(len(rest), dtype=np.uint8)
    if osd_depth > 0 and rest:
        proj = gf2.matmul(inv, hs[np.ix_(prow, rest)])  # r x (n - r)
        cands = [(j,) for j in range(len(rest))]
        cands += list(itertools.combinations(range(min(osd_depth, len(rest))), 2))
        rem = np.zeros((len(cands), len(rest)), dtype=np.uint8)
        for c, support in enumerate(cands):
            rem[c, list(support)] = 1
        pivot_parts = base[None, :] ^ gf2.matmul(rem, proj.T)
        weights = pivot_parts.sum(axis=1, dtype=np.int64) + rem.sum(axis=1, dtype=np.int64)
        c = int(np.argmin(weights))
        if weights[c] < int(base.sum()):
            best_pivot, best_rem = pivot_parts[c], rem[c]

    e_sorted = np.zeros(n, dtype=np.uint8)
    e_sorted[pivots] = best_pivot
    e_sorted[rest] = best_rem
    e = np.zeros(n, dtype=np.uint8)
    e[order] = e_sorted
    return e


class BpOsdDecoder:
    """BP followed by OSD whenever BP fails to match the syndrome."""

    def __init__(self, h_x, cfg: DecoderConfig):
        self.h_x = gf2.as_bits(h_x, 2)
        self.cfg = cfg

    def decode(self, s) -> DecodeOutcome:
        bp = bp_minsum(self.h_x, s, self.cfg)
        if bp.converged:
            return DecodeOutcome(bp.hard_decision, True, bp_iterations=bp.iterations)
        e = osd_postprocess(self.h_x, s, bp.posteriors, self.cfg.osd_depth)
        converged = np.array_equal(gf2.matvec(self.h_x, e), gf2.as_bits(s, 1))
        return DecodeOutcome(e, converged, bp_iterations=bp.iterations, osd_invoked=True)


class QGrandDecoder:
    """Guess error patterns in order of increasing weight until the syndrome matches.

    Within a weight, supports are tried in lexicographic order of their sorted
    position tuples. Guesses are checked in vectorized blocks; the reported
    guess count is the exact position of the match in the sequential order.
    """

    block = 1 << 14

    def __init__(self, h_x, cfg: DecoderConfig):
        self.h_x = gf2.as_bits(h_x, 2)
        self.cfg = cfg
        self.columns = gf2.pack_rows(self.h_x.T)  # (n, words)

    def decode(self, s) -> DecodeOutcome:
        s = gf2.as_bits(s, 1)
        n = self.h_x.shape[1]
        target = gf2.pack_rows(s[None, :])[0]
        budget = self.cfg.max_query
        used = 1
        if not target.any():
            return DecodeOutcome(np.zeros(n, dtype=np.uint8), True, guesses=1)
        for w in range(1, n + 1):
            combos = itertools.combinations(range(n), w)
            while used < budget:
                chunk = list(itertools.islice(combos, min(self.block, budget - used)))
                if not chunk:
                    break
                idx = np.array(chunk, dtype=np.intp)
                synd = np.bitwise_xor.reduce(self.columns[idx], axis=1)
                hits = np.flatnonzero((synd == target).all(axis=1))
                if hits.size:
                    h = int(hits[0])
                    e = np.zeros(n, dtype=np.uint8)
                    e[list(chunk[h])] = 1
                    return DecodeOutcome(e, True, guesses=used + h + 1)
                used += len(chunk)
            if used >= budget:
                break
        return DecodeOutcome(np.zeros(n, dtype=np.uint8), False, guesses=used)


def qgrand(h_x, s, cfg: DecoderConfig) -> DecodeOutcome:
    return QGrandDecoder(h_x, cfg).decode(s)


def bp_osd(h_x, s, cfg: DecoderConfig) -> DecodeOutcome:
    return BpOsdDecoder(h_x, cfg).decode(s)


def residual_is_logical(code: CssCode, e, e_hat) -> bool:
    """True when ``e + e_hat`` is a nontrivial logical Z operator.

    Both vectors must have the same syndrome, so the residual lies in ``C_X``
    and is trivial exactly when it is orthogonal to the logical rows ``G_1``.
    """
    e = gf2.as_bits(e, 1)
    e_hat = gf2.as_bits(e_hat, 1)
    if not np.array_equal(gf2.matvec(code.h_x, e), gf2.matvec(code.h_x, e_hat)):
        raise ValueError("error and estimate have different syndromes")
    return bool(gf2.matvec(code.g_1, e ^ e_hat).any())
