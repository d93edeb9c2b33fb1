"""Plain-text binary matrix files.

Format: a header line ``"rows cols"``, then one line per row of exactly
``cols`` characters from ``{0, 1}``. Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import gf2


class MatrixFileError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def parse_matrix(text: str) -> np.ndarray:
    lines = [(i, line.rstrip("\r")) for i, line in enumerate(text.split("\n"), start=1)]
    lines = [(i, line) for i, line in lines if line.strip() and not line.startswith("#")]
    if not lines:
        raise MatrixFileError("missing header line")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MatrixFileError(f"header must be two integers 'rows cols', got {header!r}", lineno)
    rows, cols = int(parts[0]), int(parts[1])
    body = lines[1:]
    if len(body) != rows:
        where = body[rows][0] if len(body) > rows else (body[-1][0] if body else lineno)
        raise MatrixFileError(f"header declares {rows} rows, found {len(body)}", where)
    out = np.zeros((rows, cols), dtype=np.uint8)
    for r, (i, line) in enumerate(body):
        line = line.strip()
        if len(line) != cols:
            raise MatrixFileError(f"expected {cols} characters, got {len(line)}", i)
        bad = next((c for c in line if c not in "01"), None)
        if bad is not None:
            raise MatrixFileError(f"invalid character {bad!r}", i)
        out[r] = np.frombuffer(line.encode(), dtype=np.uint8) - ord("0")
    return out


def format_matrix(m, comments: list[str] | None = None) -> str:
    m = gf2.as_bits(m, 2)
    lines = [f"# {c}" for c in comments or []]
    lines.append(f"{m.shape[0]} {m.shape[1]}")
    lines += ["".join("1" if b else "0" for b in row) for row in m]
    return "\n".join(lines) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, m, comments: list[str] | None = None) -> None:
    Path(path).write_text(format_matrix(m, comments), newline="\n")
