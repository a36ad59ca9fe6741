"""Convex-geometric divided difference operators D_i and translations E_u."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .chain import (
    Chain,
    HintGroup,
    Piece,
    box_points,
    degenerate_direction,
    fiber_boxes,
    indicator,
    lcm_denominator,
    refine,
    regroup,
)
from .errors import (
    DemazureError,
    IndexOutOfRange,
    NotDegenerate,
    OperatorUndefined,
    WordError,
)
from .string_space import StringSpace, fraction_json, to_fraction, to_point

D_PLUS = "D+"
D_MINUS = "D-"
FACET_P = "P"
FACET_P_PRIME = "P'"
FIXED = "fixed"
ANCHOR = "anchor"


@dataclass(frozen=True)
class D:
    block: int

    def __str__(self):
        return f"D{self.block}"


@dataclass(frozen=True)
class E:
    shift: tuple

    def __post_init__(self):
        object.__setattr__(self, "shift", to_point(self.shift))

    def __str__(self):
        return "E:" + ",".join(str(fraction_json(c)) for c in self.shift)


Token = Union[D, E]


def parse_token(text) -> Token:
    if isinstance(text, (D, E)):
        return text
    if isinstance(text, int):
        return D(text)
    s = str(text).strip()
    if s.startswith("E:") or s.startswith("E("):
        body = s[2:].strip("()")
        return E(tuple(to_fraction(c) for c in body.split(",")))
    if s[:1] == "D" and s[1:].isdigit():
        return D(int(s[1:]))
    raise ValueError(f"cannot parse operator token {text!r}")


def parse_word(word) -> tuple[Token, ...]:
    """Accept a list of tokens/strings/ints, or a whitespace-separated string."""
    if isinstance(word, str):
        word = word.replace("*", " ").split()
    return tuple(parse_token(t) for t in word)


def format_word(word: Sequence[Token]) -> list[str]:
    return [str(t) for t in word]


def validate_word(space: StringSpace, word: Sequence[Token]):
    for t in word:
        if isinstance(t, D):
            space.check_block(t.block)
        elif len(t.shift) != space.dim:
            raise IndexOutOfRange(f"translation {t} has the wrong dimension")


# -- fiber expansion --------------------------------------------------------

def _expand_scaled(mu: tuple, nu: tuple, j0: int, L) -> list:
    """Integer version of :func:`expand_box`; ``j0`` is 0-based."""
    if mu[j0] != nu[j0]:
        raise NotDegenerate(f"box is not degenerate in slot {j0 + 1}")
    new = L - sum(mu) - sum(nu) + nu[j0]
    if new >= nu[j0]:
        hi = nu[:j0] + (new,) + nu[j0 + 1:]
        return [(1, mu, hi, D_PLUS)]
    mu_p = mu[:j0] + (new,) + mu[j0 + 1:]
    nu_p = nu[:j0] + (new,) + nu[j0 + 1:]
    return [
        (-1, mu_p, nu, D_MINUS),
        (1, mu, nu, FACET_P),
        (1, mu_p, nu_p, FACET_P_PRIME),
    ]


def expand_box(mu, nu, j: int, L) -> list:
    """Expand the box [mu, nu] in slot ``j`` (1-based) against the level L.

    Returns ``(sign, lo, hi, tag)`` boxes. In the virtual case the three boxes
    sum to -1 on the open slab between the new bound and mu_j.
    """
    mu, nu = to_point(mu), to_point(nu)
    L = to_fraction(L)
    if len(mu) != len(nu) or not 1 <= j <= len(mu):
        raise IndexOutOfRange(f"slot {j} outside 1..{len(mu)}")
    if any(a > b for a, b in zip(mu, nu)):
        raise ValueError("need mu <= nu coordinatewise")
    return _expand_scaled(mu, nu, j - 1, L)


def _level(space: StringSpace, i: int, point) -> int:
    row = space.l_matrix[i - 1]
    total = 0
    for k, c in enumerate(row):
        if c:
            total += c * sum(point[m] for m in space.block_slice(k + 1))
    return total


def _direction_anchor(space: StringSpace, i: int, j: int, points: frozenset):
    """A box that keeps slot j the first degenerate direction of ``points``.

    A facet group inherits slot j as a degenerate direction, but a subset of
    fibers can also be flat in an earlier slot, and D_i would then expand it
    the wrong way on a second application.  The returned box sits over a
    fresh base, varies in those earlier slots and is constant in slot j; it
    is added to the group and subtracted again as its own piece, so the
    pointwise function is unchanged.  Returns None when no anchor is needed.
    """
    block = space.block_slice(i)
    lo_b, hi_b = block.start, block.stop
    first = next(iter(points))
    flat_before = [k for k in range(lo_b, lo_b + j - 1) if all(p[k] == first[k] for p in points)]
    if not flat_before:
        return None
    comp = [k for k in range(space.dim) if not lo_b <= k < hi_b]
    # with an empty complement the group is a single fiber of the input
    # piece, which already had slot j as its first degenerate direction
    assert comp
    rep = min(points)
    fiber = [p for p in points if all(p[k] == rep[k] for k in comp)]
    lo = [min(p[k] for p in fiber) for k in range(space.dim)]
    hi = [max(p[k] for p in fiber) for k in range(space.dim)]
    for k in flat_before:
        hi[k] = lo[k] + 1
    c0 = comp[0]
    lo[c0] = hi[c0] = max(p[c0] for p in points) + 1
    return frozenset(box_points(lo, hi))


def apply_D(i: int, chain: Chain) -> Chain:
    space = chain.space
    space.check_block(i)
    block = space.block_slice(i)
    lo_b = block.start
    raw: dict = defaultdict(int)
    hint: list[HintGroup] = []
    for coeff, piece in chain.terms:
        boxes = fiber_boxes(piece, i)
        j = degenerate_direction(piece, i)
        groups: dict[tuple, set] = defaultdict(set)
        signs: dict[str, int] = {}
        if j is None:
            # Pieces with every fiber symmetric about the reflection (sum of
            # mu + nu equal to the level) are fixed by D_i; anything else is
            # outside the operator's domain.
            for base, (mu, nu) in boxes.items():
                L = _level(space, i, base[:lo_b] + mu + base[lo_b:])
                if sum(mu) + sum(nu) != L:
                    raise OperatorUndefined(i, piece)
            hint.append(HintGroup(FIXED, coeff, piece.points))
            for p in piece.points:
                raw[p] += coeff
            continue
        for base, (mu, nu) in boxes.items():
            head, tail = base[:lo_b], base[lo_b:]
            L = _level(space, i, head + mu + tail)
            assert L == _level(space, i, head + nu + tail)
            for sign, lo, hi, tag in _expand_scaled(mu, nu, j - 1, L):
                signs[tag] = sign * coeff
                # P' slices are kept apart by their slot-j value so that each
                # stays degenerate in direction j.
                key = (tag, lo[j - 1]) if tag == FACET_P_PRIME else (tag, None)
                bucket = groups[key]
                for z in box_points(lo, hi):
                    p = head + z + tail
                    bucket.add(p)
                    raw[p] += sign * coeff
        order = {D_PLUS: 0, D_MINUS: 1, FACET_P: 2, FACET_P_PRIME: 3}
        for key in sorted(groups, key=lambda k: (order[k[0]], k[1] if k[1] is not None else 0)):
            tag, pts = key[0], frozenset(groups[key])
            sign = signs[tag]
            anchor = None
            if tag in (FACET_P, FACET_P_PRIME):
                anchor = _direction_anchor(space, i, j, pts)
            if anchor is None:
                hint.append(HintGroup(tag, sign, pts))
            else:
                hint.append(HintGroup(tag, sign, pts | anchor))
                hint.append(HintGroup(ANCHOR, -sign, anchor))
    raw = {p: v for p, v in raw.items() if v}
    return regroup(space, chain.q, chain.shift, raw, hint)


def apply_E(u, chain: Chain) -> Chain:
    """Translate the chain by ``u``."""
    u = to_point(u)
    if len(u) != chain.space.dim:
        raise IndexOutOfRange("translation vector has the wrong dimension")
    q = math.lcm(chain.q, lcm_denominator(u))
    chain = refine(chain, q)
    step = tuple(int(c * q) for c in u)
    terms = tuple(
        (c, Piece(chain.space, q, frozenset(tuple(a + b for a, b in zip(p, step)) for p in piece.points)))
        for c, piece in chain.terms
    )
    shift = tuple(s + c for s, c in zip(chain.shift, u))
    return Chain(chain.space, q, shift, terms)


def apply_token(token: Token, chain: Chain) -> Chain:
    if isinstance(token, D):
        return apply_D(token.block, chain)
    return apply_E(token.shift, chain)


def word_resolution(word: Sequence[Token], start) -> int:
    """Smallest q that represents the seed and every translation in ``word``."""
    values = list(to_point(start))
    for t in word:
        if isinstance(t, E):
            values.extend(t.shift)
    return lcm_denominator(values)


def apply_word(space: StringSpace, word, start, q: int | None = None, trace: bool = False):
    """Apply ``word`` right to left to the indicator of ``start``.

    The resolution q is fixed up front from the seed and translation vectors
    so that no re-refinement happens mid-pipeline.  With ``trace=True`` the
    return value is ``(final, intermediates)`` where ``intermediates`` lists
    the seed chain followed by the chain after each token.
    """
    word = parse_word(word)
    validate_word(space, word)
    if q is None:
        q = word_resolution(word, start)
    chain = indicator(space, start, q)
    steps = [chain]
    for pos in range(len(word) - 1, -1, -1):
        token = word[pos]
        try:
            chain = apply_token(token, chain)
        except DemazureError as exc:
            raise WordError(pos, str(token), exc) from exc
        if trace:
            steps.append(chain)
    return (chain, steps) if trace else chain
