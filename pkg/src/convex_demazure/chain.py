"""Convex chains stored at lattice resolution.

A chain lives on the refined lattice (1/q)Z^d.  Each point is kept as the
integer vector ``q * x``.  A piece is a finite point set whose fibers in the
block directions an operator uses are full integer boxes; a chain is a signed
list of pieces, read as the pointwise sum of their indicator functions.

``shift`` records the offset of the character lattice ``shift + Z^d``; it is
kept reduced into [0, 1)^d.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, InconsistentHint, NotAParapolytope, SpaceMismatch
from .string_space import StringSpace, fraction_json, to_fraction, to_point

Point = tuple[int, ...]


def box_points(lo: Sequence[int], hi: Sequence[int]) -> Iterable[Point]:
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def box_size(lo, hi) -> int:
    n = 1
    for a, b in zip(lo, hi):
        if b < a:
            return 0
        n *= b - a + 1
    return n


def reduce_shift(shift) -> tuple[Fraction, ...]:
    return tuple(s - math.floor(s) for s in shift)


@dataclass(frozen=True)
class Piece:
    space: StringSpace
    q: int
    points: frozenset

    def __post_init__(self):
        if not self.points:
            raise ValueError("a piece must be nonempty")
        if not isinstance(self.points, frozenset):
            object.__setattr__(self, "points", frozenset(self.points))
        d = self.space.dim
        if any(len(p) != d for p in self.points):
            raise DimensionMismatch(f"piece points must have dimension {d}")

    def __len__(self):
        return len(self.points)

    def actual_points(self) -> list[tuple[Fraction, ...]]:
        return sorted(tuple(Fraction(c, self.q) for c in p) for p in self.points)


@dataclass(frozen=True)
class Chain:
    space: StringSpace
    q: int
    shift: tuple
    terms: tuple  # of (coeff, Piece)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("refinement q must be positive")
        shift = reduce_shift(to_point(self.shift))
        if len(shift) != self.space.dim:
            raise DimensionMismatch("shift has the wrong dimension")
        if any((s * self.q).denominator != 1 for s in shift):
            raise ValueError(f"shift {shift} is not on the (1/{self.q})-lattice")
        object.__setattr__(self, "shift", shift)
        terms = tuple((int(c), p) for c, p in self.terms if c != 0)
        for _, p in terms:
            if p.q != self.q or p.space != self.space:
                raise SpaceMismatch("all pieces must share the chain's space and q")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    @property
    def pieces(self) -> list[Piece]:
        return [p for _, p in self.terms]

    def pointwise(self) -> dict[Point, int]:
        """The chain as a function on the refined lattice (nonzero values only)."""
        acc: dict[Point, int] = defaultdict(int)
        for c, piece in self.terms:
            for p in piece.points:
                acc[p] += c
        return {p: v for p, v in acc.items() if v}

    def on_character_lattice(self, p: Point) -> bool:
        q = self.q
        return all((c - s * q) % q == 0 for c, s in zip(p, self.shift))

    def with_space(self, space: StringSpace) -> "Chain":
        """Reinterpret the same points in another block structure of equal dimension."""
        if space.dim != self.space.dim:
            raise SpaceMismatch("spaces differ in total dimension")
        terms = tuple((c, Piece(space, self.q, p.points)) for c, p in self.terms)
        return Chain(space, self.q, self.shift, terms)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "q": self.q,
            "shift": [fraction_json(s) for s in self.shift],
            "terms": [
                {"coeff": c, "points": [list(p) for p in sorted(piece.points)]}
                for c, piece in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Chain":
        space = StringSpace.from_json(data["space"])
        q = int(data["q"])
        terms = tuple(
            (int(t["coeff"]), Piece(space, q, frozenset(tuple(int(c) for c in p) for p in t["points"])))
            for t in data["terms"]
        )
        return cls(space, q, tuple(to_fraction(s) for s in data["shift"]), terms)


def lcm_denominator(values) -> int:
    q = 1
    for v in values:
        q = math.lcm(q, Fraction(v).denominator)
    return q


def indicator(space: StringSpace, point, q: int | None = None) -> Chain:
    """One-point chain at ``point``; q defaults to the lcm of its denominators."""
    x = to_point(point)
    if len(x) != space.dim:
        raise DimensionMismatch(f"seed of dimension {len(x)} in a {space.dim}-dimensional space")
    need = lcm_denominator(x)
    q = need if q is None else int(q)
    if q % need:
        raise ValueError(f"q={q} cannot represent {point}")
    scaled = tuple(int(c * q) for c in x)
    return Chain(space, q, reduce_shift(x), ((1, Piece(space, q, frozenset([scaled]))),))


def empty_chain(space: StringSpace, q: int = 1, shift=None) -> Chain:
    return Chain(space, q, shift if shift is not None else (0,) * space.dim, ())


def _scaled(chain: Chain, x) -> Point | None:
    x = to_point(x)
    if len(x) != chain.space.dim:
        raise DimensionMismatch("point has the wrong dimension")
    v = [c * chain.q for c in x]
    if any(c.denominator != 1 for c in v):
        return None
    return tuple(int(c) for c in v)


def evaluate(chain: Chain, x) -> int:
    v = _scaled(chain, x)
    if v is None:
        return 0
    return sum(c for c, piece in chain.terms if v in piece.points)


def refine(chain: Chain, q: int) -> Chain:
    """Re-express ``chain`` at resolution 1/q (q a multiple of chain.q).

    The pointwise function is kept on the old lattice and is zero on the new
    points; boxes are not filled in, so fibers of the result are in general
    not boxes any more.
    """
    if q == chain.q:
        return chain
    if q % chain.q:
        raise ValueError(f"cannot refine q={chain.q} to q={q}")
    k = q // chain.q
    terms = tuple(
        (c, Piece(chain.space, q, frozenset(tuple(v * k for v in p) for p in piece.points)))
        for c, piece in chain.terms
    )
    return Chain(chain.space, q, chain.shift, terms)


def _reconcile(a: Chain, b: Chain) -> tuple[Chain, Chain]:
    if a.space != b.space:
        raise SpaceMismatch("chains live in different string spaces")
    if a.shift != b.shift:
        raise SpaceMismatch(f"character lattices differ: shift {a.shift} vs {b.shift}")
    q = math.lcm(a.q, b.q)
    return refine(a, q), refine(b, q)


def add(*chains: Chain) -> Chain:
    if not chains:
        raise ValueError("add() needs at least one chain")
    out = chains[0]
    for other in chains[1:]:
        x, y = _reconcile(out, other)
        out = Chain(x.space, x.q, x.shift, x.terms + y.terms)
    return out


def scale(chain: Chain, k: int) -> Chain:
    return Chain(chain.space, chain.q, chain.shift, tuple((c * k, p) for c, p in chain.terms))


# -- fibers -----------------------------------------------------------------

def fiber_boxes(piece: Piece, i: int) -> dict[Point, tuple[Point, Point]]:
    """Scaled fiber boxes of ``piece`` in block ``i``, keyed by complement coordinates.

    Raises NotAParapolytope if some fiber is not a full lattice box.
    """
    block = piece.space.block_slice(i)
    lo_b, hi_b = block.start, block.stop
    groups: dict[Point, list[Point]] = defaultdict(list)
    for p in piece.points:
        groups[p[:lo_b] + p[hi_b:]].append(p[lo_b:hi_b])
    out = {}
    for base, members in groups.items():
        mu = tuple(map(min, zip(*members)))
        nu = tuple(map(max, zip(*members)))
        if box_size(mu, nu) != len(members):
            raise NotAParapolytope(i, base)
        out[base] = (mu, nu)
    return out


def fibers(piece: Piece, i: int):
    """``(base, mu, nu)`` triples with rational coordinates, sorted by base."""
    q = piece.q
    boxes = fiber_boxes(piece, i)
    return [
        (
            tuple(Fraction(c, q) for c in base),
            tuple(Fraction(c, q) for c in mu),
            tuple(Fraction(c, q) for c in nu),
        )
        for base, (mu, nu) in sorted(boxes.items())
    ]


def degenerate_direction(piece: Piece, i: int) -> int | None:
    """Smallest slot j (1-based) such that x^i_j is constant on the piece."""
    for j, k in enumerate(piece.space.block_slice(i), start=1):
        it = iter(piece.points)
        first = next(it)[k]
        if all(p[k] == first for p in it):
            return j
    return None


# -- regrouping -------------------------------------------------------------

@dataclass(frozen=True)
class HintGroup:
    tag: str
    coeff: int
    points: frozenset


def regroup(space: StringSpace, q: int, shift, raw: Mapping[Point, int], hint: Sequence[HintGroup]) -> Chain:
    """Turn tagged point groups into a chain, checking them against ``raw``."""
    acc: dict[Point, int] = defaultdict(int)
    terms = []
    for g in hint:
        if not g.points or g.coeff == 0:
            continue
        for p in g.points:
            acc[p] += g.coeff
        terms.append((g.coeff, Piece(space, q, frozenset(g.points))))
    support = set(raw) | set(acc)
    for p in support:
        if acc.get(p, 0) != raw.get(p, 0):
            raise InconsistentHint(f"hint gives {acc.get(p, 0)} at {p}, raw output is {raw.get(p, 0)}")
    return Chain(space, q, shift, tuple(terms))


def support_points(chain: Chain, on_standard_lattice: bool = False) -> set[tuple[Fraction, ...]]:
    q = chain.q
    out = set()
    for p, v in chain.pointwise().items():
        if on_standard_lattice and not chain.on_character_lattice(p):
            continue
        out.add(tuple(Fraction(c, q) for c in p))
    return out
