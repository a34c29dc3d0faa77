"""Dense linear algebra over GF(2) with bit-packed rows.

Each matrix row is stored as one Python int: bit j-1 holds the entry in
column j, so arbitrary-precision XOR gives word-parallel row operations.
All public indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class SingularMatrixError(ValueError):
    """Raised when a matrix that must be invertible is singular."""


@dataclass(frozen=True)
class IndexSet:
    """A sorted set of 1-based indices drawn from the universe [1..universe]."""

    universe: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.universe <= 0:
            raise ValueError("universe must be positive")
        prev = 0
        for m in self.members:
            if not prev < m <= self.universe:
                raise ValueError(
                    f"index {m} out of range or out of order (universe {self.universe})"
                )
            prev = m

    @classmethod
    def of(cls, members: Iterable[int], universe: int) -> "IndexSet":
        return cls(universe, tuple(sorted(set(members))))

    @classmethod
    def full(cls, universe: int) -> "IndexSet":
        return cls(universe, tuple(range(1, universe + 1)))

    def complement(self) -> "IndexSet":
        inside = set(self.members)
        return IndexSet(
            self.universe,
            tuple(i for i in range(1, self.universe + 1) if i not in inside),
        )

    def __contains__(self, index: object) -> bool:
        return index in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BitMatrix:
    """Immutable binary matrix; addition is XOR, products are over GF(2)."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match row data")
        limit = 1 << self.cols
        for mask in self.row_bits:
            if not 0 <= mask < limit:
                raise ValueError("row data wider than declared column count")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = len(entries)
        cols = len(entries[0])
        masks = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged row lengths")
            mask = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                mask |= v << j
            masks.append(mask)
        return cls(rows, cols, tuple(masks))

    @classmethod
    def from_bitstrings(cls, rows: Sequence[str]) -> "BitMatrix":
        """Rows of '0'/'1' characters, leftmost character is column 1."""
        cols = len(rows[0])
        masks = []
        for s in rows:
            if len(s) != cols or set(s) - {"0", "1"}:
                raise ValueError(f"bad row bitstring {s!r}")
            masks.append(int(s[::-1], 2))
        return cls(len(rows), cols, tuple(masks))

    @classmethod
    def from_blocks(cls, grid: Sequence[Sequence["BitMatrix"]]) -> "BitMatrix":
        """Assemble a block matrix from a 2-D grid of compatible blocks."""
        col_widths = [b.cols for b in grid[0]]
        masks = []
        for block_row in grid:
            if [b.cols for b in block_row] != col_widths:
                raise ValueError("inconsistent block widths")
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise ValueError("inconsistent block heights")
            for i in range(height):
                mask = 0
                shift = 0
                for b, width in zip(block_row, col_widths):
                    mask |= b.row_bits[i] << shift
                    shift += width
                masks.append(mask)
        return cls(len(masks), sum(col_widths), tuple(masks))

    # -- element access ----------------------------------------------------

    def get(self, i: int, j: int) -> int:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise ValueError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
        return (self.row_bits[i - 1] >> (j - 1)) & 1

    def to_rows(self) -> list[list[int]]:
        return [[(m >> j) & 1 for j in range(self.cols)] for m in self.row_bits]

    def to_bitstrings(self) -> list[str]:
        return [format(m, f"0{self.cols}b")[::-1] for m in self.row_bits]

    @property
    def is_zero(self) -> bool:
        return not any(self.row_bits)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(
                f"dimension mismatch: {self.rows}x{self.cols} + {other.rows}x{other.cols}"
            )
        return BitMatrix(
            self.rows,
            self.cols,
            tuple(a ^ b for a, b in zip(self.row_bits, other.row_bits)),
        )

    add = __add__

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"dimension mismatch: {self.rows}x{self.cols} * {other.rows}x{other.cols}"
            )
        out = []
        brows = other.row_bits
        for mask in self.row_bits:
            acc = 0
            cur = mask
            while cur:
                low = cur & -cur
                acc ^= brows[low.bit_length() - 1]
                cur ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    __matmul__ = mul

    def transpose(self) -> "BitMatrix":
        strings = self.to_bitstrings()
        return BitMatrix.from_bitstrings(["".join(t) for t in zip(*strings)])

    def rank(self) -> int:
        """Row rank via elimination with first-nonzero-column pivoting."""
        basis: dict[int, int] = {}
        count = 0
        for row in self.row_bits:
            cur = row
            while cur:
                pivot = (cur & -cur).bit_length() - 1
                hit = basis.get(pivot)
                if hit is None:
                    basis[pivot] = cur
                    count += 1
                    break
                cur ^= hit
        return count

    def is_nonsingular(self) -> bool:
        if self.rows != self.cols:
            raise ValueError("non-singularity is defined for square matrices only")
        return self.rank() == self.rows

    def invert(self) -> "BitMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        work = list(self.row_bits)
        aug = [1 << i for i in range(n)]
        done = 0
        for col in range(n):
            probe = 1 << col
            pivot = None
            for i in range(done, n):
                if work[i] & probe:
                    pivot = i
                    break
            if pivot is None:
                raise SingularMatrixError(f"matrix of rank < {n} has no inverse")
            work[done], work[pivot] = work[pivot], work[done]
            aug[done], aug[pivot] = aug[pivot], aug[done]
            for i in range(n):
                if i != done and work[i] & probe:
                    work[i] ^= work[done]
                    aug[i] ^= aug[done]
            done += 1
        return BitMatrix(n, n, tuple(aug))

    def submatrix(self, row_set: IndexSet, col_set: IndexSet) -> "BitMatrix":
        """Sub-matrix induced by the given rows and columns, order preserved."""
        if not row_set.members or not col_set.members:
            raise ValueError("index sets must be non-empty")
        if row_set.members[-1] > self.rows or col_set.members[-1] > self.cols:
            raise ValueError("index set exceeds matrix bounds")
        masks = []
        for i in row_set:
            bits = self.to_bitstring_row(i)
            picked = "".join(bits[j - 1] for j in col_set)
            masks.append(int(picked[::-1], 2) if picked else 0)
        return BitMatrix(len(row_set), len(col_set), tuple(masks))

    def to_bitstring_row(self, i: int) -> str:
        return format(self.row_bits[i - 1], f"0{self.cols}b")[::-1]

    def count_nonzero_columns(self) -> int:
        acc = 0
        for mask in self.row_bits:
            acc |= mask
        return acc.bit_count()
