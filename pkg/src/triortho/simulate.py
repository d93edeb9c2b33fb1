"""Monte Carlo logical-error-rate estimation and an exhaustive exact oracle."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel, cost, gf2
from .analysis import CssCode
from .decoders import BpOsdDecoder, DecodeOutcome, DecoderConfig, QGrandDecoder, bdd_ler

DECODERS = ("qgrand", "bp_osd", "bdd")
MAX_EXACT_N = 20
_CACHE_LIMIT = 1 << 20


def make_decoder(name: str, h_x, cfg: DecoderConfig):
    if name == "qgrand":
        return QGrandDecoder(h_x, cfg)
    if name == "bp_osd":
        return BpOsdDecoder(h_x, cfg)
    raise ValueError(f"unknown decoder {name!r}; choose from {', '.join(DECODERS)}")


class _SyndromeCache:
    """Memoizes a deterministic decoder by syndrome."""

    def __init__(self, decoder):
        self.decoder = decoder
        self.table: dict[bytes, DecodeOutcome] = {}

    def __call__(self, s: np.ndarray) -> DecodeOutcome:
        key = s.tobytes()
        out = self.table.get(key)
        if out is None:
            out = self.decoder.decode(s)
            if len(self.table) < _CACHE_LIMIT:
                self.table[key] = out
        return out


@dataclass(frozen=True, eq=False)
class SimPlan:
    code: CssCode
    decoder: str
    cfg: DecoderConfig
    p_grid: tuple[float, ...]
    target_errors: int = 100
    max_frames: int = 10**6
    seed: int = 0
    count_abstain_as_error: bool = True
    q: int = 8

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {', '.join(DECODERS)}")
        if self.target_errors < 1:
            raise ValueError("target_errors must be at least 1")
        if any(not 0 < p < 0.5 for p in self.p_grid):
            raise ValueError("every p in the grid must lie in (0, 1/2)")


@dataclass
class SimPoint:
    p: float
    frames: int
    logical_errors: int
    ler: float
    avg_cost: float
    wall_seconds: float
    n_osd: int = 0
    n_g: int = 0


@dataclass
class SimResult:
    decoder: str
    seed: int
    points: list[SimPoint] = field(default_factory=list)


def cost_params(plan: SimPlan, frames: int, n_osd: int = 0, n_g: int = 0) -> cost.CostParams:
    return cost.CostParams.from_matrix(
        plan.code.h_x,
        q=plan.q,
        n_iter=plan.cfg.n_iter,
        osd_depth=plan.cfg.osd_depth,
        n_mc=max(frames, 1),
        n_osd=n_osd,
        n_g=n_g,
    )


def _frame_failures(code, decode, errors, count_abstain) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-frame failure flags, OSD flags and guess counts."""
    synd = channel.syndrome(code.h_x, errors)
    fails = np.zeros(len(errors), dtype=bool)
    osd = np.zeros(len(errors), dtype=bool)
    guesses = np.zeros(len(errors), dtype=np.int64)
    g1 = code.g_1.astype(np.int64)
    for i, s in enumerate(synd):
        out = decode(s)
        osd[i] = out.osd_invoked
        guesses[i] = out.guesses
        if out.converged:
            fails[i] = bool(((g1 @ (errors[i] ^ out.correction)) & 1).any())
        else:
            fails[i] = count_abstain
    return fails, osd, guesses


def _run_point(plan: SimPlan, p: float, batch: int) -> SimPoint:
    start = time.perf_counter()
    code = plan.code
    if plan.decoder == "bdd":
        t_x = code.t_x()
        if t_x is None:
            t_x = code.with_distances().t_x()
        if t_x is None:
            raise ValueError("bdd needs a known d_X")
        return SimPoint(p, 0, 0, bdd_ler(code.n, t_x, p), math.nan, time.perf_counter() - start)

    cfg = DecoderConfig(
        p=p,
        n_iter=plan.cfg.n_iter,
        alpha=plan.cfg.alpha,
        osd_depth=plan.cfg.osd_depth,
        max_query=plan.cfg.max_query,
        llr_clamp=plan.cfg.llr_clamp,
    )
    decode = _SyndromeCache(make_decoder(plan.decoder, code.h_x, cfg))
    frames = errors_seen = n_osd = n_g = 0
    while frames < plan.max_frames and errors_seen < plan.target_errors:
        size = min(batch, plan.max_frames - frames)
        errs = channel.sample_errors(p, plan.seed, np.arange(frames, frames + size), code.n)
        fails, osd, guesses = _frame_failures(code, decode, errs, plan.count_abstain_as_error)
        cum = np.cumsum(fails)
        if errors_seen + (int(cum[-1]) if size else 0) >= plan.target_errors:
            # stop exactly at the frame that reaches the target
            size = int(np.searchsorted(cum, plan.target_errors - errors_seen)) + 1
        frames += size
        errors_seen += int(fails[:size].sum())
        n_osd += int(osd[:size].sum())
        n_g += int(guesses[:size].sum())

    params = cost_params(plan, frames, n_osd, n_g)
    avg = cost.cost_qgrand_avg(params) if plan.decoder == "qgrand" else cost.cost_bp_osd_avg(params)
    ler = errors_seen / frames if frames else 0.0
    return SimPoint(p, frames, errors_seen, ler, avg, time.perf_counter() - start, n_osd, n_g)


def run_montecarlo(plan: SimPlan, batch: int = 4096, threads: int = 1) -> SimResult:
    """Estimate the LER at every ``p`` of the plan.

    Frame ``i`` at every ``p`` uses the channel stream ``(seed, i)``. Frames are
    drawn in index order until ``target_errors`` failures or ``max_frames``.
    A frame fails when the residual is a logical operator, or when the decoder
    gives up and ``count_abstain_as_error`` is set. Results do not depend on
    ``batch`` or ``threads``.
    """
    if threads > 1 and len(plan.p_grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(lambda p: _run_point(plan, p, batch), plan.p_grid))
    else:
        points = [_run_point(plan, p, batch) for p in plan.p_grid]
    return SimResult(plan.decoder, plan.seed, points)


def failure_counts(code: CssCode, decoder: str, cfg: DecoderConfig, count_abstain_as_error: bool = True) -> list[int]:
    """Number of failing error patterns of each weight ``0..n``, by full enumeration."""
    n = code.n
    if n > MAX_EXACT_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_EXACT_N}, got n={n}")
    decode = _SyndromeCache(make_decoder(decoder, code.h_x, cfg))
    counts = [0] * (n + 1)
    idx = np.arange(1 << n, dtype=np.int64)
    for lo in range(0, 1 << n, 1 << 14):
        block = idx[lo : lo + (1 << 14)]
        errs = ((block[:, None] >> np.arange(n)) & 1).astype(np.uint8)
        fails, _, _ = _frame_failures(code, decode, errs, count_abstain_as_error)
        for w, c in enumerate(np.bincount(errs.sum(axis=1)[fails], minlength=n + 1)):
            counts[w] += int(c)
    return counts


def exact_ler(code: CssCode, decoder: str, cfg: DecoderConfig, p: float, count_abstain_as_error: bool = True) -> float:
    """Exact probability that a frame fails, summing over all ``2**n`` errors."""
    counts = failure_counts(code, decoder, cfg, count_abstain_as_error)
    n = code.n
    return math.fsum(c * p**w * (1 - p) ** (n - w) for w, c in enumerate(counts) if c)


def to_csv_rows(result: SimResult) -> list[list[str]]:
    rows = [["p", "frames", "logical_errors", "ler", "avg_ops", "decoder", "seed"]]
    for pt in result.points:
        rows.append(
            [_fmt(pt.p), str(pt.frames), str(pt.logical_errors), _fmt(pt.ler), _fmt(pt.avg_cost), result.decoder, str(result.seed)]
        )
    return rows


def _fmt(x: float) -> str:
    return f"{x:.15g}"
