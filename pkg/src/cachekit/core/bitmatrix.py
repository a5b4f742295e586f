"""GF(2) linear algebra on int bitmasks (bit j of a row = column j)."""

from __future__ import annotations

from typing import Iterable, List, Optional


class BitMatrix:
    """A matrix over GF(2). Rows are ints; column j is bit j (LSB first)."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int, rows: Iterable[int] = ()):
        if ncols < 0:
            raise ValueError("ncols must be >= 0")
        self.ncols = ncols
        self.rows: List[int] = []
        limit = 1 << ncols
        for r in rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r:#x} does not fit in {ncols} columns")
            self.rows.append(r)

    @classmethod
    def from_bitlists(cls, lists: Iterable[Iterable[int]], ncols: int) -> "BitMatrix":
        rows = []
        for bits in lists:
            mask = 0
            for j, b in enumerate(bits):
                if b not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                mask |= b << j
            rows.append(mask)
        return cls(ncols, rows)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.ncols, self.rows + other.rows)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"BitMatrix(ncols={self.ncols}, rows={len(self.rows)})"


def _eliminate(rows: List[int]) -> List[int]:
    """In-place forward elimination; returns the nonzero pivot rows."""
    basis: List[int] = []  # each with a distinct leading (lowest set) bit
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
    return basis


def rank(m: BitMatrix) -> int:
    """Rank over GF(2)."""
    return len(_eliminate(list(m.rows)))


def conditional_rank(target: BitMatrix, given: BitMatrix) -> int:
    """rank(target stacked on given) - rank(given).

    With rows read as linear functions of uniform bits this is the conditional
    entropy H(target | given) in bits.
    """
    if target.ncols != given.ncols:
        raise ValueError("column count mismatch")
    return rank(given.stack(target)) - rank(given)


def in_rowspan(vec: int, m: BitMatrix) -> bool:
    """Whether vec lies in the GF(2) rowspan of m."""
    residue = vec
    for b in _eliminate(list(m.rows)):
        low = b & -b
        if residue & low:
            residue ^= b
    return residue == 0


def solve_combination(target: int, m: BitMatrix) -> Optional[int]:
    """Coefficient mask c with XOR of {rows[i] : bit i of c set} == target.

    Returns None when target is outside the rowspan. Among solutions the one
    produced by greedy elimination is returned (deterministic).
    """
    n = len(m.rows)
    # Track provenance in bits [ncols, ncols+n).
    tagged = [m.rows[i] | (1 << (m.ncols + i)) for i in range(n)]
    basis: List[int] = []
    low_mask = (1 << m.ncols) - 1
    for row in tagged:
        for b in basis:
            low = (b & low_mask) & -(b & low_mask)
            if row & low:
                row ^= b
        if row & low_mask:
            basis.append(row)
    residue = target
    coeffs = 0
    for b in basis:
        low = (b & low_mask) & -(b & low_mask)
        if residue & low:
            residue ^= b & low_mask
            coeffs ^= b >> m.ncols
    if residue:
        return None
    return coeffs
