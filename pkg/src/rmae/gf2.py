"""Dense GF(2) matrix arithmetic on bit-packed rows.

Matrices are immutable; every operation returns a fresh object. Entries
are packed eight per byte, row-major, little bit order inside each byte,
so that the row XOR operations which dominate elimination and
multiplication run on contiguous vectorized numpy buffers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exceptions import DimensionOverflowError

# Largest supported number of xor-transform stages: dense work beyond
# 2^16 x 2^16 is outside the intended desk scale.
MAX_STAGES = 16


def _pack(unpacked: np.ndarray) -> np.ndarray:
    return np.packbits(unpacked, axis=1, bitorder="little")


class BitMatrix:
    """A rows x cols binary matrix stored as packed bytes.

    Use the classmethod constructors; the raw constructor expects an
    already-packed payload whose padding bits are zero.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        stride = (cols + 7) >> 3
        if words.shape != (rows, stride) or words.dtype != np.uint8:
            raise ValueError("payload does not match the declared shape")
        self.rows = rows
        self.cols = cols
        self.words = words
        words.flags.writeable = False

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array of 0/1 entries")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        a = a.astype(np.uint8)
        return cls(a.shape[0], a.shape[1], _pack(a))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, (cols + 7) >> 3), np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        words = np.zeros((n, (n + 7) >> 3), np.uint8)
        idx = np.arange(n)
        words[idx, idx >> 3] = np.uint8(1) << (idx & 7).astype(np.uint8)
        return cls(n, n, words)

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        """Parse the one-row-per-line '0'/'1' format written by to_text."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        width = len(lines[0])
        rows = []
        for ln in lines:
            if len(ln) != width or set(ln) - {"0", "1"}:
                raise ValueError(f"bad matrix row: {ln!r}")
            rows.append([1 if ch == "1" else 0 for ch in ln])
        return cls.from_array(rows)

    # ---- accessors ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_array(self) -> np.ndarray:
        if self.cols == 0:
            return np.zeros((self.rows, 0), np.uint8)
        return np.unpackbits(self.words, axis=1, count=self.cols, bitorder="little")

    def to_text(self) -> str:
        return "\n".join("".join("01"[b] for b in row) for row in self.to_array())

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError("entry out of range")
        return int((self.words[i, j >> 3] >> (j & 7)) & 1)

    def row(self, i: int) -> np.ndarray:
        return np.unpackbits(self.words[i], count=self.cols, bitorder="little")

    def column(self, j: int) -> np.ndarray:
        return (self.words[:, j >> 3] >> (j & 7)) & np.uint8(1)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_array(self.to_array().T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.words.tobytes() == other.words.tobytes()
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@lru_cache(maxsize=None)
def kron_power(n: int) -> BitMatrix:
    """The n-fold Kronecker power of [[1,0],[1,1]] (the xor transform).

    The result is involutive over GF(2). Sizes above 2^MAX_STAGES are
    rejected; the doubling below assembles the packed payload directly,
    so no full unpacked copy is ever materialized.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError("stage count must be a non-negative integer")
    if n > MAX_STAGES:
        raise DimensionOverflowError(
            f"transform with 2^{n} rows exceeds the 2^{MAX_STAGES} cap"
        )
    base = np.array([[1]], np.uint8)
    g2 = np.array([[1, 0], [1, 1]], np.uint8)
    for _ in range(min(n, 3)):
        base = np.kron(g2, base)
    words = _pack(base)
    size = base.shape[0]
    while size < (1 << n):
        stride = words.shape[1]
        grown = np.zeros((2 * size, 2 * stride), np.uint8)
        grown[:size, :stride] = words
        grown[size:, :stride] = words
        grown[size:, stride:] = words
        words, size = grown, 2 * size
    return BitMatrix(size, size, words)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.shape} x {b.shape}")
    out = np.zeros((a.rows, b.words.shape[1]), np.uint8)
    bw = b.words
    for i in range(a.rows):
        mask = a.row(i).view(bool)
        sel = bw[mask]
        if sel.shape[0]:
            out[i] = np.bitwise_xor.reduce(sel, axis=0)
    return BitMatrix(a.rows, b.cols, out)


def rref(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped.

    Returns the canonical form together with the pivot column indices;
    two matrices span the same row space iff their reduced forms are
    identical.
    """
    words = m.words.copy()
    r = 0
    pivots: list[int] = []
    for c in range(m.cols):
        if r == m.rows:
            break
        col = (words[r:, c >> 3] >> (c & 7)) & np.uint8(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        full = (words[:, c >> 3] >> (c & 7)) & np.uint8(1)
        full[r] = 0
        hit = np.nonzero(full)[0]
        if hit.size:
            words[hit] ^= words[r]
        pivots.append(c)
        r += 1
    return BitMatrix(r, m.cols, words[:r].copy()), tuple(pivots)


def rank(m: BitMatrix) -> int:
    return len(rref(m)[1])


def row_space_equal(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff the rows of a and b span the same subspace."""
    if a.cols != b.cols:
        raise ValueError("row spaces live in different ambient dimensions")
    return rref(a)[0] == rref(b)[0]


def invert(m: BitMatrix) -> BitMatrix | None:
    """Inverse of a square matrix, or None if it is singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    aug = np.concatenate([m.to_array(), np.eye(n, dtype=np.uint8)], axis=1)
    reduced, pivots = rref(BitMatrix.from_array(aug))
    # The identity block keeps the augmented rank at n, so m is invertible
    # exactly when all n pivots land in the left block.
    if pivots != tuple(range(n)):
        return None
    return BitMatrix.from_array(reduced.to_array()[:, n:])
