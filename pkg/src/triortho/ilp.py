"""Existence search for even-weight triorthogonal matrices with a dual-distance target.

A ``k0 x n`` matrix is described by its multiplicity vector ``x``: ``x[i]`` is
how many times the nonzero column type ``v_i`` appears. Types are ordered by
binary value with the first row as the most significant bit, so for
``k0 = 4`` they run ``0001, 0010, ..., 1111``.

Given ``x`` everything else in the integer program is forced: the pair and
triple overlap counts ``P x`` and ``T x`` fix ``z_P`` and ``z_T``, and the
weight of the codeword ``u_i^T H`` is ``n - [M x]_i``, which fixes the
one-hot weight indicators ``delta``. :func:`solve` therefore searches over
``x`` alone (optionally constant on the orbits of a cyclic column-type
symmetry) and hands every complete candidate to :func:`derive_witness`.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .analysis import krawtchouk_table

MAX_K0 = 12


class InfeasibleAtX(Exception):
    """The multiplicity vector violates a constraint family."""

    reason = "infeasible"


class ParityViolation(InfeasibleAtX):
    reason = "parity"


class RankDeficient(InfeasibleAtX):
    reason = "rank"


class DualDistanceViolation(InfeasibleAtX):
    reason = "dual-distance"


def column_types(k0: int) -> np.ndarray:
    """All nonzero vectors of F_2^k0 as rows of an ``(N, k0)`` array."""
    values = np.arange(1, 1 << k0)
    shifts = np.arange(k0 - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def type_index(v) -> int:
    """0-based index of a nonzero column type."""
    value = 0
    for bit in v:
        value = (value << 1) | int(bit)
    if value == 0:
        raise ValueError("the zero vector is not a column type")
    return value - 1


@dataclass(frozen=True, eq=False)
class IlpInstance:
    k0: int
    n: int
    d_perp: int
    types: np.ndarray
    m_mat: np.ndarray
    p_mat: np.ndarray
    t_mat: np.ndarray
    p_index: tuple[tuple[int, int], ...]
    t_index: tuple[tuple[int, int, int], ...]
    kraw: tuple[tuple[int, ...], ...]

    @property
    def num_types(self) -> int:
        return self.types.shape[0]


def build_instance(k0: int, n: int, d_perp: int) -> IlpInstance:
    if not 1 <= k0 <= MAX_K0:
        raise ValueError(f"k0 must be in [1, {MAX_K0}], got {k0}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 1 <= d_perp <= n:
        raise ValueError(f"d_perp must be in [1, n={n}], got {d_perp}")
    types = column_types(k0)
    t = types.astype(np.int64)
    m_mat = (((t @ t.T) & 1) == 0).astype(np.uint8)
    # 1-based row labels, lexicographic
    p_index = tuple((a + 1, b + 1) for a, b in itertools.combinations_with_replacement(range(k0), 2))
    t_index = tuple((a + 1, b + 1, c + 1) for a, b, c in itertools.combinations(range(k0), 3))
    p_mat = np.array([types[:, a - 1] & types[:, b - 1] for a, b in p_index], dtype=np.uint8).reshape(
        len(p_index), len(types)
    )
    t_mat = np.array(
        [types[:, a - 1] & types[:, b - 1] & types[:, c - 1] for a, b, c in t_index], dtype=np.uint8
    ).reshape(len(t_index), len(types))
    return IlpInstance(
        k0=k0,
        n=n,
        d_perp=d_perp,
        types=types,
        m_mat=m_mat,
        p_mat=p_mat,
        t_mat=t_mat,
        p_index=p_index,
        t_index=t_index,
        kraw=krawtchouk_table(n),
    )


@dataclass(frozen=True, eq=False)
class Witness:
    x: tuple[int, ...]
    z_p: tuple[int, ...]
    z_t: tuple[int, ...]
    delta: np.ndarray  # (N, n); column j - 1 flags weight j

    def weight_counts(self) -> list[int]:
        """``A_0 .. A_n`` of the code spanned by the extracted matrix."""
        return [1] + [int(c) for c in self.delta.sum(axis=0)]


@dataclass
class WitnessReport:
    checks: dict[str, bool]
    detail: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self) -> bool:
        return self.ok


def _dual_counts(inst: IlpInstance, counts) -> list[int]:
    """``sum_{i,j} K_ell(j; n) delta_ij`` for every ``ell``; ``counts[j]`` = sum_i delta_ij."""
    return [sum(row[j] * counts[j] for j in range(1, inst.n + 1)) for row in inst.kraw]


def verify_witness(inst: IlpInstance, w: Witness) -> WitnessReport:
    """Check every constraint family of the integer program for ``w``."""
    n_types = inst.num_types
    if (
        len(w.x) != n_types
        or len(w.z_p) != inst.p_mat.shape[0]
        or len(w.z_t) != inst.t_mat.shape[0]
        or w.delta.shape != (n_types, inst.n)
    ):
        raise ValueError("witness shape does not match the instance")
    x = np.array(w.x, dtype=np.int64)
    delta = np.asarray(w.delta, dtype=np.int64)
    checks: dict[str, bool] = {}
    detail: dict[str, str] = {}

    checks["L1"] = int(x.sum()) == inst.n and bool(((x >= 0) & (x <= inst.n)).all())
    checks["O1"] = np.array_equal(inst.p_mat.astype(np.int64) @ x, 2 * np.array(w.z_p, dtype=np.int64))
    checks["O2"] = np.array_equal(inst.t_mat.astype(np.int64) @ x, 2 * np.array(w.z_t, dtype=np.int64))
    checks["W1"] = bool((delta.sum(axis=1) == 1).all()) and bool(np.isin(delta, (0, 1)).all())
    weights = delta @ np.arange(1, inst.n + 1)
    checks["W2"] = np.array_equal(weights + inst.m_mat.astype(np.int64) @ x, np.full(n_types, inst.n))

    sums = _dual_counts(inst, [0] + [int(c) for c in delta.sum(axis=0)])
    eq_ok, ge_ok = True, True
    for ell in range(1, inst.n + 1):
        target = -math.comb(inst.n, ell)
        if ell < inst.d_perp and sums[ell] != target:
            if eq_ok:
                detail["D="] = f"fails at ell={ell}"
            eq_ok = False
        elif ell >= inst.d_perp and sums[ell] < target:
            if ge_ok:
                detail["D>="] = f"fails at ell={ell}"
            ge_ok = False
    checks["D="] = eq_ok
    checks["D>="] = ge_ok
    return WitnessReport(checks, detail)


def derive_witness(inst: IlpInstance, x) -> Witness:
    """Complete a multiplicity vector into a witness, or raise :class:`InfeasibleAtX`."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (inst.num_types,) or (x < 0).any() or int(x.sum()) != inst.n:
        raise ValueError("x must be a nonnegative vector over the column types summing to n")
    px = inst.p_mat.astype(np.int64) @ x
    tx = inst.t_mat.astype(np.int64) @ x
    if (px % 2).any() or (tx % 2).any():
        raise ParityViolation("an overlap count is odd")
    weights = inst.n - inst.m_mat.astype(np.int64) @ x
    zero = np.flatnonzero(weights == 0)
    if zero.size:
        raise RankDeficient(f"row combination {inst.types[zero[0]].tolist()} gives the zero word")
    delta = np.zeros((inst.num_types, inst.n), dtype=np.uint8)
    delta[np.arange(inst.num_types), weights - 1] = 1
    counts = [0] + [int(c) for c in np.bincount(weights, minlength=inst.n + 1)[1:]]
    sums = _dual_counts(inst, counts)
    for ell in range(1, inst.d_perp):
        if sums[ell] != -math.comb(inst.n, ell):
            raise DualDistanceViolation(f"dual code has words of weight {ell}")
    return Witness(
        x=tuple(int(v) for v in x),
        z_p=tuple(int(v) for v in px // 2),
        z_t=tuple(int(v) for v in tx // 2),
        delta=delta,
    )


def extract_matrix(inst: IlpInstance, w: Witness) -> np.ndarray:
    """Columns ``v_i`` repeated ``x_i`` times, in type order."""
    report = verify_witness(inst, w)
    if not report:
        failed = [k for k, ok in report.checks.items() if not ok]
        raise ValueError(f"witness fails constraints {failed}")
    cols = np.repeat(np.arange(inst.num_types), w.x)
    return inst.types[cols].T.copy()


@dataclass(frozen=True, eq=False)
class OrbitSpec:
    generator: np.ndarray
    orbits: tuple[tuple[int, ...], ...]


def cyclic_shift(k0: int) -> np.ndarray:
    """Permutation matrix sending ``(v_1, ..., v_k0)`` to ``(v_k0, v_1, ..., v_{k0-1})``."""
    return np.roll(np.eye(k0, dtype=np.uint8), 1, axis=0)


def orbit_partition(k0: int, generator) -> OrbitSpec:
    """Cycles of ``v -> generator v`` on the nonzero column types."""
    g = gf2.as_bits(generator, 2)
    if g.shape != (k0, k0):
        raise ValueError(f"generator must be {k0}x{k0}, got {g.shape}")
    if gf2.rank(g) != k0:
        raise ValueError("orbit generator must be invertible over GF(2)")
    types = column_types(k0)
    images = gf2.matmul(g, types.T).T
    perm = [type_index(v) for v in images]
    seen = [False] * len(types)
    orbits = []
    for start in range(len(types)):
        if seen[start]:
            continue
        orbit = []
        i = start
        while not seen[i]:
            seen[i] = True
            orbit.append(i)
            i = perm[i]
        orbits.append(tuple(sorted(orbit)))
    return OrbitSpec(generator=g.copy(), orbits=tuple(orbits))


@dataclass
class SolveResult:
    status: str  # "feasible" | "infeasible" | "budget-exhausted"
    witness: Witness | None = None
    nodes: int = 0
    leaves: int = 0
    rejected: dict[str, int] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _span_contains(basis: dict[int, int], v: int) -> bool:
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


def solve(
    inst: IlpInstance,
    orbit: OrbitSpec | None = None,
    cap: int | None = None,
    max_nodes: int | None = None,
    time_limit: float | None = None,
) -> SolveResult:
    """Depth-first search for a feasible multiplicity vector.

    One variable per orbit (per type when ``orbit`` is None); ``x`` is constant
    on each orbit. Variables are branched in order of decreasing orbit size,
    values from 0 upward. Subtrees are cut when

    * the remaining variables cannot bring ``sum(x)`` to exactly ``n``;
    * the odd overlap counts accumulated so far cannot be cancelled by the
      remaining variables (overlaps are linear in ``x`` mod 2);
    * a type would repeat although ``d_perp >= 3`` (two equal columns are a
      weight-2 dual codeword).

    ``cap`` bounds each per-orbit value. ``max_nodes`` counts visited search
    nodes and is deterministic; ``time_limit`` (seconds) is not.
    """
    n = inst.n
    groups = [list(o) for o in orbit.orbits] if orbit else [[i] for i in range(inst.num_types)]
    order = sorted(range(len(groups)), key=lambda g: -len(groups[g]))
    groups = [groups[g] for g in order]
    sizes = [len(g) for g in groups]

    value_cap = n if cap is None else cap
    if inst.d_perp >= 3:
        value_cap = min(value_cap, 1)
    caps = [min(value_cap, n // s) for s in sizes]

    overlap = np.vstack([inst.p_mat, inst.t_mat]).astype(np.int64)
    parity_cols = []
    for g in groups:
        col = overlap[:, g].sum(axis=1) % 2
        parity_cols.append(sum(1 << i for i, b in enumerate(col) if b))

    depth = len(groups)
    # reach[d]: bitset of sums attainable by variables d..end
    reach = [0] * (depth + 1)
    reach[depth] = 1
    full = (1 << (n + 1)) - 1
    for d in range(depth - 1, -1, -1):
        acc = 0
        for v in range(caps[d] + 1):
            acc |= reach[d + 1] << (v * sizes[d])
        reach[d] = acc & full
    # span[d]: xor basis of parity columns of variables d..end that can be odd
    span: list[dict[int, int]] = [dict() for _ in range(depth + 1)]
    for d in range(depth - 1, -1, -1):
        basis = dict(span[d + 1])
        v = parity_cols[d] if caps[d] >= 1 else 0
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
        span[d] = basis

    result = SolveResult(status="infeasible")
    values = [0] * depth
    deadline = None if time_limit is None else time.monotonic() + time_limit

    class _Budget(Exception):
        pass

    def leaf() -> Witness | None:
        x = np.zeros(inst.num_types, dtype=np.int64)
        for g, v in zip(groups, values):
            x[g] = v
        result.leaves += 1
        try:
            return derive_witness(inst, x)
        except InfeasibleAtX as exc:
            result.rejected[exc.reason] = result.rejected.get(exc.reason, 0) + 1
            return None

    def visit(d: int, total: int, parity: int) -> Witness | None:
        result.nodes += 1
        if max_nodes is not None and result.nodes > max_nodes:
            raise _Budget
        if deadline is not None and result.nodes % 1024 == 0 and time.monotonic() > deadline:
            raise _Budget
        if d == depth:
            return leaf() if total == n and parity == 0 else None
        for v in range(caps[d] + 1):
            t = total + v * sizes[d]
            if t > n:
                break
            if not (reach[d + 1] >> (n - t)) & 1:
                continue
            p = parity ^ parity_cols[d] if v & 1 else parity
            if not _span_contains(span[d + 1], p):
                continue
            values[d] = v
            found = visit(d + 1, t, p)
            if found is not None:
                return found
        values[d] = 0
        return None

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, depth + 200))
    try:
        w = visit(0, 0, 0)
    except _Budget:
        result.status = "budget-exhausted"
        return result
    finally:
        sys.setrecursionlimit(limit)
    if w is not None:
        result.status = "feasible"
        result.witness = w
    return result
