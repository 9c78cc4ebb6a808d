"""Dense linear algebra over F_2 using Python ints as bit rows."""

from __future__ import annotations


class RowEchelon:
    """Incrementally maintained reduced basis of a subspace of F_2^n.

    Vectors are ints; bit k is coordinate k. Each stored row carries a
    companion int recording which inserted vectors were combined into it,
    so solutions of linear systems can be read back.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, combo)
        self.count = 0

    def reduce(self, vec: int) -> tuple[int, int]:
        combo = 0
        while vec:
            top = vec.bit_length() - 1
            hit = self.rows.get(top)
            if hit is None:
                break
            vec ^= hit[0]
            combo ^= hit[1]
        return vec, combo

    def add(self, vec: int) -> bool:
        """Insert a vector; return True if it enlarged the span."""
        idx = self.count
        self.count += 1
        vec, combo = self.reduce(vec)
        if not vec:
            return False
        self.rows[vec.bit_length() - 1] = (vec, combo ^ (1 << idx))
        return True

    def solve(self, vec: int) -> int | None:
        """Return a bitmask of inserted vectors summing to vec, or None."""
        rem, combo = self.reduce(vec)
        return None if rem else combo

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors) -> int:
    ech = RowEchelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def kernel(columns: list[int]) -> list[int]:
    """Basis of the kernel of the matrix whose columns are given.

    Returned vectors are bitmasks over column indices.
    """
    ech = RowEchelon()
    out = []
    for j, col in enumerate(columns):
        if not ech.add(col):
            _, combo = ech.reduce(col)
            out.append(combo | (1 << j))
    return out
