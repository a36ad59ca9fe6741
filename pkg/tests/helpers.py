"""Independent oracles and random corpora shared by the test modules."""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from fractions import Fraction

from convex_demazure.chain import Chain, Piece
from convex_demazure.characters import LaurentPolynomial
from convex_demazure.errors import DemazureError
from convex_demazure.operators import apply_D, apply_word
from convex_demazure.string_space import make_string_space


# -- Gelfand-Zetlin patterns -------------------------------------------------

def gz_patterns(lam):
    """All integer interlacing patterns with top row ``lam``, rows below listed top-down.

    Returns flat tuples ordered like gz_space: row 1 entries, then row 2, ...
    """
    lam = tuple(int(v) for v in lam)
    out = []

    def rows_below(row, acc):
        if len(row) == 1:
            out.append(tuple(v for r in acc for v in r))
            return
        ranges = [range(row[l + 1], row[l] + 1) for l in range(len(row) - 1)]
        for nxt in itertools.product(*ranges):
            rows_below(nxt, acc + [nxt])

    rows_below(lam, [])
    return out


def weyl_dim_sl(lam):
    """prod_{i<j} (lam_i - lam_j + j - i) / (j - i)."""
    n = len(lam)
    num = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= Fraction(lam[i] - lam[j] + j - i, j - i)
    return int(num)


# -- the ring identity (1 - t_i) T_i f = f - t_i s_i f -----------------------

def reflect_poly(C, i, f: LaurentPolynomial) -> LaurentPolynomial:
    row = C[i - 1]
    terms = {}
    for e, c in f.terms().items():
        e = list(e)
        e[i - 1] = sum(a * b for a, b in zip(row, e)) - e[i - 1]
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return LaurentPolynomial.from_fraction_terms(f.nvars, terms)


def t_var(nvars, i, power=1):
    e = [0] * nvars
    e[i - 1] = power
    return LaurentPolynomial.monomial(e)


def satisfies_divided_difference(C, i, f, g) -> bool:
    """True iff (1 - t_i) g == f - t_i s_i(f)."""
    n = f.nvars
    one = LaurentPolynomial.monomial([0] * n)
    lhs = (one - t_var(n, i)) * g
    rhs = f - t_var(n, i) * reflect_poly(C, i, f)
    return lhs == rhs


# -- characters by brute force -------------------------------------------------

def brute_chi(space, pointwise_fractions):
    """Character of a {Fraction point: value} map over integer points only."""
    acc = defaultdict(int)
    for x, v in pointwise_fractions.items():
        if all(c.denominator == 1 for c in x):
            acc[tuple(sum(x[k] for k in space.block_slice(b)) for b in range(1, space.rank + 1))] += v
    return LaurentPolynomial.from_fraction_terms(space.rank, {k: v for k, v in acc.items() if v})


def pointwise_fractions(chain):
    q = chain.q
    return {tuple(Fraction(c, q) for c in p): v for p, v in chain.pointwise().items()}


# -- random corpora --------------------------------------------------------------

def random_space(rng: random.Random, max_rank=3, max_dim=3, max_entry=3, min_block=1):
    r = rng.randint(1, max_rank)
    dims = [rng.randint(min_block, max_dim) for _ in range(r)]
    C = [[0 if a == b else rng.randint(-max_entry, max_entry) for b in range(r)] for a in range(r)]
    return make_string_space(dims, C)


def _single(space, points):
    piece = Piece(space, 1, frozenset(points))
    return Chain(space, 1, (0,) * space.dim, ((1, piece),))


def random_box_piece(rng, space, i, lo=-5, hi=5, max_len=2):
    """A coordinate box with one block-i coordinate pinned."""
    block = list(space.block_slice(i))
    pin = rng.choice(block)
    ranges = []
    for k in range(space.dim):
        a = rng.randint(lo, hi)
        if k == pin:
            ranges.append(range(a, a + 1))
        else:
            b = min(hi, a + rng.randint(0, max_len))
            ranges.append(range(a, b + 1))
    return _single(space, itertools.product(*ranges))


def random_fiber_piece(rng, space, i, lo=-5, hi=5, max_len=2, max_bases=4):
    """Random block-i fiber boxes over a few random bases, all pinned in one slot."""
    block = list(space.block_slice(i))
    j = rng.randrange(len(block))
    pin_val = rng.randint(lo, hi)
    comp = [k for k in range(space.dim) if k not in block]
    bases = {tuple(rng.randint(lo, hi) for _ in comp) for _ in range(rng.randint(1, max_bases))}
    pts = set()
    for base in bases:
        ranges = []
        for s in range(len(block)):
            if s == j:
                ranges.append(range(pin_val, pin_val + 1))
            else:
                a = rng.randint(lo, hi)
                ranges.append(range(a, min(hi, a + rng.randint(0, max_len)) + 1))
        for z in itertools.product(*ranges):
            p = [0] * space.dim
            for k, v in zip(comp, base):
                p[k] = v
            for k, v in zip(block, z):
                p[k] = v
            pts.add(tuple(p))
    return _single(space, pts)


def random_word_chain(rng, space, lo=-3, hi=3, max_len=3, max_points=400):
    """Output of a short random D-word on a random integer seed, or None."""
    seed = [rng.randint(lo, hi) for _ in range(space.dim)]
    word = [f"D{rng.randint(1, space.rank)}" for _ in range(rng.randint(1, max_len))]
    try:
        chain = apply_word(space, word, seed)
    except DemazureError:
        return None
    if not chain.terms or sum(len(p) for p in chain.pieces) > max_points:
        return None
    return chain


def corpus(seed=12345, size=240):
    """(space, block, chain) triples where apply_D(block, chain) is defined."""
    rng = random.Random(seed)
    out = []
    kinds = (random_box_piece, random_fiber_piece, None)
    attempts = 0
    while len(out) < size:
        attempts += 1
        assert attempts < 50 * size, "corpus generation is stuck"
        space = random_space(rng)
        i = rng.randint(1, space.rank)
        kind = kinds[len(out) % 3]
        if kind is None:
            chain = random_word_chain(rng, space)
            if chain is None:
                continue
        else:
            chain = kind(rng, space, i)
        try:
            apply_D(i, chain)
        except DemazureError:
            continue
        out.append((space, i, chain))
    return out


def degeneration_corpus(seed=777, size=120):
    """(space, block, chain) with d_i >= 2 and the piece flat both in some slot j < d_i and in slot d_i."""
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        space = random_space(rng, min_block=1)
        big = [b for b in range(1, space.rank + 1) if space.dims[b - 1] >= 2]
        if not big:
            continue
        i = rng.choice(big)
        block = list(space.block_slice(i))
        pins = {rng.choice(block[:-1]): rng.randint(-5, 5), block[-1]: rng.randint(-5, 5)}
        comp = [k for k in range(space.dim) if k not in block]
        bases = {tuple(rng.randint(-5, 5) for _ in comp) for _ in range(rng.randint(1, 4))}
        pts = set()
        for base in bases:
            ranges = []
            for k in block:
                if k in pins:
                    ranges.append(range(pins[k], pins[k] + 1))
                else:
                    a = rng.randint(-5, 5)
                    ranges.append(range(a, min(5, a + rng.randint(0, 2)) + 1))
            for z in itertools.product(*ranges):
                p = [0] * space.dim
                for k, v in zip(comp, base):
                    p[k] = v
                for k, v in zip(block, z):
                    p[k] = v
                pts.add(tuple(p))
        out.append((space, i, _single(space, pts)))
    return out


# -- planar point-set predicates for the virtual trapezoid ----------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def in_triangle(p, a, b, c):
    d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def on_segment(p, a, b):
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def virtual_trapezoid_value(p):
    """I_OBC - I_ADO + I_OA + I_DO - I_O evaluated at p."""
    O, A, B, C, D = (0, 0), (-1, 0), (2, 0), (2, 2), (-1, -1)
    return (
        in_triangle(p, O, B, C)
        - in_triangle(p, A, D, O)
        + on_segment(p, O, A)
        + on_segment(p, D, O)
        - (tuple(p) == O)
    )


# -- acceptance bookkeeping ---------------------------------------------------------

# criterion number -> (title, passed, detail); filled by test_acceptance and
# printed by the terminal summary hook in conftest.py
ACCEPTANCE_RESULTS: dict = {}
