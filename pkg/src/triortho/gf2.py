"""Dense linear algebra over GF(2).

Matrices and vectors are numpy ``uint8`` arrays holding 0/1 entries. Row
reductions pack each row into a Python ``int`` bitset (bit ``j`` is column
``j``), so XOR and popcount act on whole words at once. Throughput-critical
enumeration uses :func:`pack_rows`, which packs rows into ``uint64`` words.

All functions are pure: inputs are never modified.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when a matrix that must be invertible is not."""


def as_bits(a, ndim: int | None = None) -> np.ndarray:
    """Return ``a`` as a 0/1 ``uint8`` array, validating its entries."""
    arr = np.asarray(a)
    if arr.dtype == bool:
        arr = arr.astype(np.uint8)
    elif arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("binary array entries must be 0 or 1")
    arr = arr.astype(np.uint8, copy=False)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d binary array, got shape {arr.shape}")
    return arr


def weight(v) -> int:
    return int(np.count_nonzero(v))


def rows_to_ints(m) -> list[int]:
    """Pack each row of ``m`` into an int with bit ``j`` = column ``j``."""
    m = as_bits(m, 2)
    if m.shape[1] == 0:
        return [0] * m.shape[0]
    packed = np.packbits(m, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def ints_to_rows(rows: list[int], cols: int) -> np.ndarray:
    out = np.zeros((len(rows), cols), dtype=np.uint8)
    nbytes = (cols + 7) // 8
    for i, r in enumerate(rows):
        buf = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8)
        out[i] = np.unpackbits(buf, bitorder="little")[:cols]
    return out


def pack_rows(m) -> np.ndarray:
    """Pack rows into a ``(rows, words)`` ``uint64`` array, little-endian bits."""
    m = as_bits(m, 2)
    rows, cols = m.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = m
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").reshape(rows, words)


def _reduce(rows: list[int]) -> list[int]:
    """XOR basis of ``rows`` keyed by leading bit (independent, possibly unsorted)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return list(basis.values())


def rank(m) -> int:
    m = as_bits(m, 2)
    if 0 in m.shape:
        return 0
    return len(_reduce(rows_to_ints(m)))


def matvec(m, v) -> np.ndarray:
    m = as_bits(m, 2)
    v = as_bits(v, 1)
    if v.shape[0] != m.shape[1]:
        raise ValueError(f"dimension mismatch: matrix has {m.shape[1]} columns, vector has {v.shape[0]} entries")
    return ((m.astype(np.int64) @ v) & 1).astype(np.uint8)


def matmul(a, b) -> np.ndarray:
    a = as_bits(a, 2)
    b = as_bits(b, 2)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return ((a.astype(np.int64) @ b) & 1).astype(np.uint8)


def _rref(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form with leftmost pivots.

    Returns the nonzero reduced rows and their pivot columns, pivots ascending.
    """
    work = list(rows)
    pivots: list[int] = []
    out: list[int] = []
    for col in range(cols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        work = [r ^ prow if r & bit else r for r in work]
        out = [r ^ prow if r & bit else r for r in out]
        out.append(prow)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def rref(m) -> tuple[np.ndarray, list[int]]:
    m = as_bits(m, 2)
    rows, pivots = _rref(rows_to_ints(m), m.shape[1])
    return ints_to_rows(rows, m.shape[1]), pivots


def invert(m) -> np.ndarray:
    """Inverse over GF(2) by Gauss-Jordan elimination."""
    m = as_bits(m, 2)
    size, cols = m.shape
    if size != cols:
        raise SingularMatrixError(f"cannot invert a non-square {size}x{cols} matrix")
    aug = [r | (1 << (size + i)) for i, r in enumerate(rows_to_ints(m))]
    for col in range(size):
        bit = 1 << col
        idx = next((i for i in range(col, size) if aug[i] & bit), None)
        if idx is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        aug[col], aug[idx] = aug[idx], aug[col]
        prow = aug[col]
        for i in range(size):
            if i != col and aug[i] & bit:
                aug[i] ^= prow
    return ints_to_rows([r >> size for r in aug], size)


def independent_rows(m) -> list[int]:
    """Indices of the first rows (top to bottom) forming a row-space basis."""
    m = as_bits(m, 2)
    basis: dict[int, int] = {}
    keep = []
    for i, r in enumerate(rows_to_ints(m)):
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                keep.append(i)
                break
            r ^= basis[top]
    return keep


def first_independent_columns(m) -> tuple[list[int], np.ndarray]:
    """Greedy left-to-right choice of ``rank(m)`` independent columns.

    Returns the column indices and the invertible ``r x r`` submatrix formed by
    those columns restricted to the first independent rows of ``m``.
    """
    m = as_bits(m, 2)
    cols = independent_rows(m.T)
    rows = independent_rows(m)
    return cols, m[np.ix_(rows, cols)].copy()


def nullspace_basis(m) -> np.ndarray:
    """Rows form a basis of ``{v : m v = 0}``, one per free column, ascending."""
    m = as_bits(m, 2)
    cols = m.shape[1]
    reduced, pivots = _rref(rows_to_ints(m), cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for r, pc in zip(reduced, pivots):
            if (r >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return ints_to_rows(basis, cols)


def in_rowspace(v, m) -> bool:
    m = as_bits(m, 2)
    v = as_bits(v, 1)
    if m.shape[0] == 0:
        return not v.any()
    basis = _reduce(rows_to_ints(m))
    (x,) = rows_to_ints(v[None, :])
    by_top = {b.bit_length() - 1: b for b in basis}
    while x:
        top = x.bit_length() - 1
        if top not in by_top:
            return False
        x ^= by_top[top]
    return True


def popcount_words(words: np.ndarray) -> np.ndarray:
    """Total set bits along the last axis of a packed ``uint64`` array."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)
