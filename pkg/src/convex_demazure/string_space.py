"""String spaces: block decompositions of Q^d with integral forms l_i.

Blocks are indexed from 1 to r, as in the operator names D_1, ..., D_r.
Flat coordinates are 0-based; block i occupies flat indices
``offset(i) .. offset(i) + d_i - 1`` in declaration order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonZeroDiagonal,
    ShapeMismatch,
)


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and strings such as ``"-1/2"`` exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not value.is_integer():
            raise TypeError(f"refusing inexact float coordinate {value!r}")
        return Fraction(int(value))
    raise TypeError(f"cannot read {value!r} as a rational")


def to_point(values) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def fraction_json(x: Fraction):
    """Integers stay JSON ints; everything else becomes ``"p/q"``."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class StringSpace:
    dims: tuple[int, ...]
    l_matrix: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        rows = tuple(tuple(int(c) for c in row) for row in self.l_matrix)
        if not dims:
            raise ShapeMismatch("a string space needs at least one block")
        if any(d < 1 for d in dims):
            raise ShapeMismatch(f"block sizes must be positive, got {dims}")
        r = len(dims)
        if len(rows) != r or any(len(row) != r for row in rows):
            raise ShapeMismatch(f"l_matrix must be {r}x{r}")
        for i in range(r):
            if rows[i][i] != 0:
                raise NonZeroDiagonal(f"l_matrix[{i}][{i}] = {rows[i][i]}")
        offsets = []
        acc = 0
        for d in dims:
            offsets.append(acc)
            acc += d
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "l_matrix", rows)
        object.__setattr__(self, "offsets", tuple(offsets))

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def check_block(self, i: int) -> int:
        if not isinstance(i, int) or not 1 <= i <= self.rank:
            raise IndexOutOfRange(f"block index {i} outside 1..{self.rank}")
        return i

    def block_slice(self, i: int) -> range:
        """Flat indices of block ``i`` (1-based block index)."""
        self.check_block(i)
        start = self.offsets[i - 1]
        return range(start, start + self.dims[i - 1])

    def flat_index(self, i: int, j: int) -> int:
        """Flat position of coordinate x^i_j (both 1-based)."""
        self.check_block(i)
        if not 1 <= j <= self.dims[i - 1]:
            raise IndexOutOfRange(f"slot {j} outside 1..{self.dims[i - 1]}")
        return self.offsets[i - 1] + j - 1

    def block_of(self, flat: int) -> tuple[int, int]:
        """Inverse of :meth:`flat_index`."""
        for b, off in enumerate(self.offsets):
            if off <= flat < off + self.dims[b]:
                return b + 1, flat - off + 1
        raise IndexOutOfRange(f"flat index {flat} outside 0..{self.dim - 1}")

    def _check_point(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected a point of dimension {self.dim}, got {len(x)}")

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "l_matrix": [list(row) for row in self.l_matrix]}

    @classmethod
    def from_json(cls, data: dict) -> "StringSpace":
        return make_string_space(data["dims"], data["l_matrix"])


def make_string_space(dims: Sequence[int], l_matrix: Sequence[Sequence[int]]) -> StringSpace:
    for row in l_matrix:
        for c in row:
            if Fraction(c).denominator != 1:
                raise ShapeMismatch(f"l_matrix entries must be integers, got {c!r}")
    return StringSpace(tuple(dims), tuple(tuple(row) for row in l_matrix))


def sigma(space: StringSpace, x, i: int):
    """Sum of the block-``i`` coordinates of ``x``."""
    return sum(x[k] for k in space.block_slice(i))


def weight(space: StringSpace, x) -> tuple:
    """The weight p(x) = (sigma_1(x), ..., sigma_r(x)) in the alpha basis."""
    space._check_point(x)
    return tuple(sigma(space, x, i) for i in range(1, space.rank + 1))


def l_of_weight(space: StringSpace, i: int, y):
    """l_i evaluated on a weight vector y (alpha coordinates)."""
    space.check_block(i)
    row = space.l_matrix[i - 1]
    return sum(c * yk for c, yk in zip(row, y) if c)


def eval_l(space: StringSpace, i: int, x):
    space.check_block(i)
    return l_of_weight(space, i, weight(space, x))


def reflect(space: StringSpace, i: int, y) -> tuple:
    """The affine reflection s_i: replace y_i by l_i(y) - y_i."""
    space.check_block(i)
    if len(y) != space.rank:
        raise DimensionMismatch(f"weight of length {len(y)} in a rank-{space.rank} space")
    y = list(y)
    y[i - 1] = l_of_weight(space, i, y) - y[i - 1]
    return tuple(y)
