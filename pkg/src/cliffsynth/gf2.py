"""Dense bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python ints used as bitsets: bit
``j`` (LSB first) is column ``j + 1``.  Arbitrary-precision ints give
word-level XOR for free and keep every elimination loop allocation-light.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

Seed = Union[int, random.Random]


def _as_rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


@dataclass(frozen=True)
class BitVector:
    """Length-tagged bit vector; padding bits above `n` are zero."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits >> self.n:
            raise ValueError("set bits beyond declared length")

    def __getitem__(self, j: int) -> int:
        """Entry j, 1-based."""
        if not 1 <= j <= self.n:
            raise IndexError(j)
        return (self.bits >> (j - 1)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> j) & 1 else "0" for j in range(self.n))

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        if set(s) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {s!r}")
        bits = 0
        for j, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << j
        return cls(len(s), bits)


@dataclass(frozen=True)
class BitMatrix:
    """Row-major GF(2) matrix; each row is an int bitset of `cols` bits."""

    rows: int
    cols: int
    data: tuple

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.data:
            if r >> self.cols:
                raise ValueError("row has bits beyond declared width")

    @classmethod
    def from_rows(cls, rows: Sequence[int], cols: int) -> "BitMatrix":
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        vecs = [BitVector.from_string(s) for s in rows]
        if vecs and any(v.n != vecs[0].n for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), vecs[0].n if vecs else 0, tuple(v.bits for v in vecs))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    def __getitem__(self, rc) -> int:
        """Entry (i, j), 1-based."""
        i, j = rc
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(rc)
        return (self.data[i - 1] >> (j - 1)) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i - 1])

    def column(self, j: int) -> BitVector:
        if not 1 <= j <= self.cols:
            raise IndexError(j)
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> (j - 1)) & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                j = r & -r
                out[j.bit_length() - 1] |= 1 << i
                r ^= j
        return BitMatrix(self.cols, self.rows, tuple(out))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.data:
            acc = 0
            rr = r
            while rr:
                j = rr & -rr
                acc ^= other.data[j.bit_length() - 1]
                rr ^= j
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def mul_vec(self, v: BitVector) -> BitVector:
        if self.cols != v.n:
            raise ValueError("dimension mismatch")
        bits = 0
        for i, r in enumerate(self.data):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def to_strings(self) -> List[str]:
        return [self.row(i + 1).to_string() for i in range(self.rows)]


def rank(m: BitMatrix) -> int:
    """GF(2) row rank by Gaussian elimination; input is not modified."""
    return rank_ints(list(m.data))


def rank_ints(rows: List[int]) -> int:
    """Rank of int-bitset rows."""
    return len(_echelon_ints(rows))


def _echelon_ints(rows: List[int]):
    """In-place elimination; yields pivot rows in decreasing leading-bit order."""
    basis: List[int] = []  # kept sorted by bit_length descending
    for v in rows:
        for b in basis:
            if v.bit_length() == b.bit_length():
                v ^= b
        if v:
            basis.append(v)
            basis.sort(key=int.bit_length, reverse=True)
    return basis


def echelon_basis(rows: Sequence[int]) -> List[int]:
    """Echelon basis (distinct leading bits, sorted descending) of a span."""
    return _echelon_ints(list(rows))


def reduce_by_basis(v: int, basis: Sequence[int]) -> int:
    """Reduce v by an echelon basis; result has no leading bit in the basis."""
    for b in basis:
        if v.bit_length() == b.bit_length():
            v ^= b
    return v


def solve(a: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """A solution x of a·x = b over GF(2), or None when inconsistent.

    Any solution is acceptable when the system is underdetermined.
    """
    if a.rows != b.n:
        raise ValueError("dimension mismatch: a.rows != b.len")
    # Augmented elimination on rows [row | rhs-bit | unit-combination].
    # Track which combination of original variables... operate column-wise
    # instead: solve via elimination on the transpose-free augmented system.
    n_vars = a.cols
    aug = [(a.data[i] << 1) | ((b.bits >> i) & 1) for i in range(a.rows)]
    # Forward eliminate on variable columns (bits 1..n_vars of aug).
    pivots = {}  # var column -> row index
    used = set()
    for col in range(1, n_vars + 1):
        pr = None
        for i in range(a.rows):
            if i not in used and (aug[i] >> col) & 1:
                pr = i
                break
        if pr is None:
            continue
        pivots[col] = pr
        used.add(pr)
        for i in range(a.rows):
            if i != pr and (aug[i] >> col) & 1:
                aug[i] ^= aug[pr]
    for i in range(a.rows):
        if aug[i] == 1:  # 0 = 1 row
            return None
    x = 0
    for col, i in pivots.items():
        if aug[i] & 1:
            x |= 1 << (col - 1)
    return BitVector(n_vars, x)


def invert(m: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises ValueError on singular input."""
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    work = list(m.data)
    inv = [1 << i for i in range(n)]
    for col in range(n):
        pr = None
        for i in range(col, n):
            if (work[i] >> col) & 1:
                pr = i
                break
        if pr is None:
            raise ValueError("singular matrix")
        work[col], work[pr] = work[pr], work[col]
        inv[col], inv[pr] = inv[pr], inv[col]
        for i in range(n):
            if i != col and (work[i] >> col) & 1:
                work[i] ^= work[col]
                inv[i] ^= inv[col]
    return BitMatrix(n, n, tuple(inv))


def nullspace(m: BitMatrix) -> List[BitVector]:
    """Basis of {x : m·x = 0} over GF(2)."""
    n = m.cols
    work = list(m.data)
    pivots = {}  # column -> row
    row_used = set()
    for col in range(1, n + 1):
        pr = None
        for i in range(m.rows):
            if i not in row_used and (work[i] >> (col - 1)) & 1:
                pr = i
                break
        if pr is None:
            continue
        pivots[col] = pr
        row_used.add(pr)
        for i in range(m.rows):
            if i != pr and (work[i] >> (col - 1)) & 1:
                work[i] ^= work[pr]
    out = []
    free_cols = [c for c in range(1, n + 1) if c not in pivots]
    for fc in free_cols:
        x = 1 << (fc - 1)
        for col, i in pivots.items():
            if (work[i] >> (fc - 1)) & 1:
                x |= 1 << (col - 1)
        out.append(BitVector(n, x))
    return out


def random_invertible(n: int, seed: Seed) -> BitMatrix:
    """Uniform sample from GL(n, 2) by rejection of singular matrices.

    Acceptance probability is prod_{k>=1}(1 - 2^-k) > 0.288, so the
    expected number of draws is under 3.5 for every n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_rng(seed)
    while True:
        rows = [rng.getrandbits(n) for _ in range(n)]
        if rank_ints(list(rows)) == n:
            return BitMatrix(n, n, tuple(rows))


__all__ = [
    "BitVector",
    "BitMatrix",
    "rank",
    "rank_ints",
    "echelon_basis",
    "reduce_by_basis",
    "solve",
    "invert",
    "nullspace",
    "random_invertible",
]
