"""Weight enumerators, the MacWilliams transform, and triorthogonal CSS codes."""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from . import gf2

#: Largest generator dimension enumerated exhaustively (2**28 codewords).
MAX_ENUM_DIM = 28

# Codewords are produced in blocks of 2**_LOW_BITS, one XOR per block.
_LOW_BITS = 16


class EnumerationTooLarge(ValueError):
    """Raised when exhaustive enumeration exceeds :data:`MAX_ENUM_DIM`."""


class RankDeficientGenerator(ValueError):
    pass


class InconsistentDistribution(ValueError):
    """The MacWilliams transform produced a negative or fractional count."""


class CodeConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coefficients, got {len(self.coeffs)}")

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j]

    @property
    def size(self) -> int:
        return sum(self.coeffs)

    def min_nonzero_weight(self) -> int:
        """Smallest ``j >= 1`` with a codeword of weight ``j``; ``n + 1`` if none."""
        return next((j for j in range(1, self.n + 1) if self.coeffs[j]), self.n + 1)


def krawtchouk(ell: int, j: int, n: int) -> int:
    """Binary Krawtchouk polynomial K_ell(j; n), evaluated exactly."""
    if not (0 <= ell <= n and 0 <= j <= n):
        raise ValueError(f"krawtchouk arguments out of range: ell={ell}, j={j}, n={n}")
    return sum((-1) ** s * math.comb(j, s) * math.comb(n - j, ell - s) for s in range(ell + 1))


@functools.lru_cache(maxsize=64)
def krawtchouk_table(n: int) -> tuple[tuple[int, ...], ...]:
    """``table[ell][j] = K_ell(j; n)`` for ``0 <= ell, j <= n``.

    Uses the generating function (1 - z)^j (1 + z)^(n - j) = sum_ell K_ell(j) z^ell.
    """
    cols = []
    for j in range(n + 1):
        poly = [1]
        for factor in [(1, -1)] * j + [(1, 1)] * (n - j):
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i] += c * factor[0]
                nxt[i + 1] += c * factor[1]
            poly = nxt
        cols.append(poly)
    return tuple(tuple(cols[j][ell] for j in range(n + 1)) for ell in range(n + 1))


def iter_codewords(gen, chunk_bits: int = _LOW_BITS) -> Iterator[np.ndarray]:
    """Yield every codeword of ``rowspace(gen)`` as packed ``uint64`` blocks.

    Each block has shape ``(2**min(rows, chunk_bits), words)``; the first block
    starts with the zero codeword. The generator is assumed independent.
    """
    gen = gf2.as_bits(gen, 2)
    rows = gf2.pack_rows(gen)
    k = gen.shape[0]
    lo = min(k, chunk_bits)
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for r in rows[:lo]:
        table = np.concatenate([table, table ^ r])
    high = rows[lo:]
    offset = np.zeros(rows.shape[1], dtype=np.uint64)
    yield table
    # Gray code over the high rows: one XOR per block.
    for i in range(1, 1 << len(high)):
        offset = offset ^ high[(i & -i).bit_length() - 1]
        yield table ^ offset


def _check_generator(gen) -> np.ndarray:
    gen = gf2.as_bits(gen, 2)
    if gen.shape[0] > MAX_ENUM_DIM:
        raise EnumerationTooLarge(f"{gen.shape[0]} generator rows exceed the enumeration limit of {MAX_ENUM_DIM}")
    if gf2.rank(gen) != gen.shape[0]:
        raise RankDeficientGenerator("generator rows are linearly dependent")
    return gen


def weight_distribution(gen) -> WeightDistribution:
    """Exact weight distribution of the code spanned by ``gen`` (full row rank)."""
    gen = _check_generator(gen)
    n = gen.shape[1]
    counts = np.zeros(n + 1, dtype=np.int64)
    for block in iter_codewords(gen):
        counts += np.bincount(gf2.popcount_words(block), minlength=n + 1)
    return WeightDistribution(n, tuple(int(c) for c in counts))


def macwilliams(a: WeightDistribution, k: int) -> WeightDistribution:
    """Weight distribution of the dual code of a dimension-``k`` code."""
    if a.size != 1 << k:
        raise InconsistentDistribution(f"distribution sums to {a.size}, not 2**{k}")
    n = a.n
    table = krawtchouk_table(n)
    out = []
    for ell in range(n + 1):
        total = sum(aj * kj for aj, kj in zip(a.coeffs, table[ell]))
        b, rem = divmod(total, 1 << k)
        if rem or b < 0:
            raise InconsistentDistribution(f"B_{ell} = {total}/2**{k} is not a nonnegative integer")
        out.append(b)
    return WeightDistribution(n, tuple(out))


def dual_distance(gen) -> int:
    """Minimum nonzero weight of the dual code; ``n + 1`` when the dual is trivial."""
    gen = gf2.as_bits(gen, 2)
    return macwilliams(weight_distribution(gen), gen.shape[0]).min_nonzero_weight()


@dataclass(frozen=True)
class TriorthogonalityReport:
    ok: bool
    violation: tuple[int, ...] | None = None
    overlap: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_triorthogonal(m) -> TriorthogonalityReport:
    """Check that every pair and every triple of rows overlaps evenly.

    Overlaps are integer counts. Pairs are scanned before triples, each in
    lexicographic row order; the first violation is reported.
    """
    m = gf2.as_bits(m, 2).astype(np.int64)
    r = m.shape[0]
    gram = m @ m.T
    for b, c in itertools.combinations(range(r), 2):
        if gram[b, c] % 2:
            return TriorthogonalityReport(False, (b, c), int(gram[b, c]))
    for b, c in itertools.combinations(range(r), 2):
        if r - c < 2:
            continue
        triple = (m[b] * m[c]) @ m[c + 1 :].T
        odd = np.flatnonzero(triple % 2)
        if odd.size:
            d = c + 1 + int(odd[0])
            return TriorthogonalityReport(False, (b, c, d), int(triple[odd[0]]))
    return TriorthogonalityReport(True)


def is_triply_even(gen) -> bool:
    wd = weight_distribution(gen)
    return all(c == 0 for j, c in enumerate(wd.coeffs) if j % 8)


@dataclass(frozen=True)
class QuantumDistances:
    """Classical and quantum distances of a CSS code; ``None`` means unknown."""

    d_0: int | None
    d_1: int | None
    d_x: int | None
    d_z: int | None

    @property
    def degenerate_x(self) -> bool | None:
        if self.d_x is None or self.d_0 is None:
            return None
        return self.d_x > self.d_0

    @property
    def degenerate_z(self) -> bool | None:
        if self.d_z is None or self.d_1 is None:
            return None
        return self.d_z > self.d_1


@dataclass(frozen=True, eq=False)
class CssCode:
    """Triorthogonal CSS code with ``G_Z = [G_1; H_X]``.

    ``h_z`` spans the null space of ``g_z`` (i.e. ``C_Z^perp``), so the
    Z-stabilizers are exactly the vectors invisible to both check types.
    """

    h_x: np.ndarray
    g_1: np.ndarray
    g_z: np.ndarray
    h_z: np.ndarray
    distances: QuantumDistances | None = None

    @property
    def n(self) -> int:
        return self.g_z.shape[1]

    @property
    def k(self) -> int:
        return self.g_1.shape[0]

    @property
    def k_0(self) -> int:
        return self.h_x.shape[0]

    def t_x(self) -> int | None:
        d = self.distances.d_x if self.distances else None
        return None if d is None else (d - 1) // 2

    def with_distances(self, method: str = "macwilliams") -> CssCode:
        return dataclasses.replace(self, distances=quantum_distances(self, method))


def assemble_css(h_x) -> CssCode:
    """Append the all-ones row to an even-weight triorthogonal ``h_x``.

    ``h_x`` must be 2-d even when it has no rows, so that the length is known.
    """
    h_x = gf2.as_bits(h_x, 2)
    n = h_x.shape[1]
    if n % 2 == 0:
        raise CodeConstructionError(f"parity check failed: length n={n} must be odd")
    odd = np.flatnonzero(h_x.sum(axis=1) % 2)
    if odd.size:
        raise CodeConstructionError(f"parity check failed: row {odd[0]} of h_x has odd weight")
    if gf2.rank(h_x) != h_x.shape[0]:
        raise CodeConstructionError("rank check failed: h_x rows are linearly dependent")
    g_1 = np.ones((1, n), dtype=np.uint8)
    g_z = np.vstack([g_1, h_x])
    report = is_triorthogonal(g_z)
    if not report:
        raise CodeConstructionError(
            f"triorthogonality check failed: rows {report.violation} of [1; h_x] overlap in {report.overlap} positions"
        )
    return CssCode(h_x=h_x.copy(), g_1=g_1, g_z=g_z, h_z=gf2.nullspace_basis(g_z))


def _first_excess(big: WeightDistribution, small: WeightDistribution) -> int | None:
    """Minimum weight of ``big \\ small`` for nested codes ``small <= big``."""
    return next((j for j in range(1, big.n + 1) if big[j] > small[j]), None)


def _distances_macwilliams(code: CssCode) -> QuantumDistances:
    if code.g_z.shape[0] > MAX_ENUM_DIM:
        return QuantumDistances(None, None, None, None)
    a_hx = weight_distribution(code.h_x)  # C_X^perp
    a_gz = weight_distribution(code.g_z)  # C_Z
    a_cx = macwilliams(a_hx, code.k_0)  # C_X
    a_gz_dual = macwilliams(a_gz, code.g_z.shape[0])  # C_Z^perp, inside C_X
    d_0 = a_cx.min_nonzero_weight()
    d_1 = a_gz.min_nonzero_weight()
    return QuantumDistances(
        d_0=d_0 if d_0 <= code.n else None,
        d_1=d_1 if d_1 <= code.n else None,
        d_x=_first_excess(a_cx, a_gz_dual),
        d_z=_first_excess(a_gz, a_hx),
    )


def _min_weights_outside(gen, exclude_checks) -> tuple[int | None, int | None]:
    """(min nonzero weight of rowspace(gen), min weight of words ``u`` with
    ``exclude_checks u != 0``), by direct enumeration."""
    checks = gf2.pack_rows(exclude_checks) if exclude_checks.shape[0] else None
    best_all = best_out = None
    for block in iter_codewords(gen):
        w = gf2.popcount_words(block)
        nz = w > 0
        if nz.any():
            m = int(w[nz].min())
            best_all = m if best_all is None else min(best_all, m)
        if checks is not None:
            outside = np.zeros(len(block), dtype=bool)
            for row in checks:
                outside |= (gf2.popcount_words(block & row) & 1).astype(bool)
            if outside.any():
                m = int(w[outside].min())
                best_out = m if best_out is None else min(best_out, m)
    return best_all, best_out


def _distances_enumerate(code: CssCode) -> QuantumDistances:
    d_0 = d_x = d_1 = d_z = None
    c_x = gf2.nullspace_basis(code.h_x)
    if c_x.shape[0] <= MAX_ENUM_DIM:
        # u in C_Z^perp iff g_z u = 0
        d_0, d_x = _min_weights_outside(c_x, code.g_z)
    if code.g_z.shape[0] <= MAX_ENUM_DIM:
        # v in C_X^perp = rowspace(h_x) iff v is orthogonal to all of C_X
        d_1, d_z = _min_weights_outside(code.g_z, c_x)
    return QuantumDistances(d_0, d_1, d_x, d_z)


def quantum_distances(code: CssCode, method: str = "macwilliams") -> QuantumDistances:
    """Compute ``d_0, d_1, d_X, d_Z``.

    ``method="macwilliams"`` derives all four from the weight distributions of
    ``rowspace(h_x)`` and ``rowspace(g_z)`` and their MacWilliams duals, using
    the nesting ``C_Z^perp <= C_X`` and ``C_X^perp <= C_Z``. It only enumerates
    ``2**(k + k_0)`` words. ``method="enumerate"`` walks ``C_X`` and ``C_Z``
    directly and reports ``None`` for any space above the enumeration limit.
    """
    if method == "macwilliams":
        return _distances_macwilliams(code)
    if method == "enumerate":
        return _distances_enumerate(code)
    raise ValueError(f"unknown distance method {method!r}; expected 'macwilliams' or 'enumerate'")
