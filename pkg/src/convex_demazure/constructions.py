"""Named string spaces, words, seeds and inequality systems."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BlockTooSmall, EmptyWord, IndexOutOfRange, MultiplicityMismatch, NotDominant, NotNonIncreasing, ShapeMismatch
from .operators import D, E, apply_word, parse_word
from .polytope import HPolytope, Inequality, leq
from .roots import CartanData, cartan_type
from .string_space import StringSpace, make_string_space, to_fraction, to_point


# -- Gelfand-Zetlin ----------------------------------------------------------

def gz_space(n: int) -> StringSpace:
    if n < 2:
        raise ValueError("gz_space needs n >= 2")
    r = n - 1
    dims = tuple(range(n - 1, 0, -1))
    C = [[1 if abs(i - k) == 1 else 0 for k in range(r)] for i in range(r)]
    return make_string_space(dims, C)


def gz_word(n: int) -> tuple:
    """(D_1)(D_2 D_1)...(D_{n-1} ... D_1)."""
    word = []
    for k in range(1, n):
        word.extend(D(i) for i in range(k, 0, -1))
    return tuple(word)


def gz_seed(lam) -> tuple[Fraction, ...]:
    """(lam_2, ..., lam_n; lam_3, ..., lam_n; ...; lam_n)."""
    lam = to_point(lam)
    out = []
    for k in range(1, len(lam)):
        out.extend(lam[k:])
    return tuple(out)


def _check_non_increasing(lam):
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise NotNonIncreasing(f"{tuple(str(v) for v in lam)} is not non-increasing")


def gz_index(n: int, k: int, l: int) -> int:
    """Flat coordinate of x^k_l (row k = 1..n-1, entry l = 1..n-k) in gz_space(n)."""
    return sum(n - m for m in range(1, k)) + l - 1


def gz_direct(lam) -> HPolytope:
    """Interlacing inequalities x^{k-1}_l >= x^k_l >= x^{k-1}_{l+1}, row 0 = lam."""
    lam = to_point(lam)
    _check_non_increasing(lam)
    n = len(lam)
    d = n * (n - 1) // 2

    def entry(k, l):
        return {None: lam[l - 1]} if k == 0 else {gz_index(n, k, l): 1}

    ineqs = []
    for k in range(1, n):
        for l in range(1, n - k + 1):
            ineqs.append(leq(entry(k, l), entry(k - 1, l), d))
            ineqs.append(leq(entry(k - 1, l + 1), entry(k, l), d))
    return HPolytope(d, tuple(ineqs))


# -- spaces from Cartan data -------------------------------------------------

@dataclass(frozen=True)
class WordSpace:
    """String space attached to a word in simple roots.

    ``roots[b-1]`` is the simple root of block b; ``positions[m]`` is the
    (block, slot) of word letter m, the rightmost occurrence of a root
    getting slot 1.
    """

    space: StringSpace
    word: tuple
    roots: tuple[int, ...]
    positions: tuple[tuple[int, int], ...]


def space_from_word(cartan: CartanData, word: Sequence[int]) -> WordSpace:
    word = tuple(int(i) for i in word)
    if not word:
        raise EmptyWord("word is empty")
    for i in word:
        if not 1 <= i <= cartan.rank:
            raise IndexOutOfRange(f"root index {i} outside 1..{cartan.rank}")
    roots = tuple(sorted(set(word)))
    block = {k: b for b, k in enumerate(roots, start=1)}
    dims = tuple(word.count(k) for k in roots)
    A = cartan.matrix
    C = [[0 if a == b else -A[kb - 1][ka - 1] for b, kb in enumerate(roots)] for a, ka in enumerate(roots)]
    space = make_string_space(dims, C)
    seen: dict[int, int] = {}
    positions = [None] * len(word)
    for m in range(len(word) - 1, -1, -1):
        k = word[m]
        seen[k] = seen.get(k, 0) + 1
        positions[m] = (block[k], seen[k])
    return WordSpace(space, tuple(D(block[k]) for k in word), roots, tuple(positions))


def seed_for_weight(space: StringSpace, y) -> tuple[Fraction, ...]:
    """A point with weight ``y``, putting each sigma_i in the block's first slot."""
    y = to_point(y)
    if len(y) != space.rank:
        raise ShapeMismatch(f"weight of length {len(y)} for rank {space.rank}")
    x = [Fraction(0)] * space.dim
    for i, v in enumerate(y, start=1):
        x[space.flat_index(i, 1)] = v
    return tuple(x)


# -- Sp(4) -------------------------------------------------------------------

SP4_WORD = (D(2), D(1), D(2), D(1))


def sp4_space() -> StringSpace:
    return space_from_word(cartan_type("C2"), (2, 1, 2, 1)).space


def sp4_lambdas(a, b, c, d) -> tuple[Fraction, Fraction]:
    p1, p2 = to_fraction(a) + to_fraction(b), to_fraction(c) + to_fraction(d)
    return p2 - p1, p1 - 2 * p2


def sp4_polytope(a, b, c, d) -> HPolytope:
    """Inequality description of the C_2 string polytope in coordinates (x, y, z, t)."""
    a, b, c, d = (to_fraction(v) for v in (a, b, c, d))
    l1, l2 = sp4_lambdas(a, b, c, d)
    X, Y, Z, T = 0, 1, 2, 3
    n = 4
    ineqs = [
        leq({None: a}, {X: 1}, n),
        leq({X: 1}, {None: a + 2 * l1}, n),
        leq({Z: 1, None: -c}, {X: 1, None: -a + l2}, n),
        leq({Y: 1, None: -b}, {Z: 2, None: -2 * c}, n),
        leq({Y: 1, None: -b}, {Z: 1, None: -c + l2}, n),
        leq({None: d}, {T: 1}, n),
        leq({T: 1}, {None: d + l2}, n),
        leq({T: 2, None: -2 * d}, {Y: 1, None: -b}, n),
    ]
    return HPolytope(n, tuple(ineqs))


def sp4_example(a, b, c, d):
    """Chain D_2 D_1 D_2 D_1 (a, b, c, d) and the inequality description."""
    l1, l2 = sp4_lambdas(a, b, c, d)
    if l1 < 0 or l2 < 0:
        raise NotDominant(f"lambda_1={l1}, lambda_2={l2} must be nonnegative")
    chain = apply_word(sp4_space(), SP4_WORD, (a, b, c, d))
    return chain, sp4_polytope(a, b, c, d)


def sp4_seed(lam1, lam2):
    """A seed (a, 0, c, 0) with the given lambda_1, lambda_2."""
    lam1, lam2 = to_fraction(lam1), to_fraction(lam2)
    p1 = -(2 * lam1 + lam2)
    p2 = p1 + lam1
    return (p1, Fraction(0), p2, Fraction(0))


# -- degenerations -----------------------------------------------------------

def degenerate(space: StringSpace, i: int) -> StringSpace:
    """Split block i into (d_i - 1, 1) in place; the new rank-1 block is i + 1.

    The first part gets l_i - 2 sigma(new block), the rank-1 part gets
    l_i - 2 sigma(first part); other forms see sigma_i as the sum of the two.
    """
    space.check_block(i)
    if space.dims[i - 1] < 2:
        raise BlockTooSmall(f"block {i} has dimension {space.dims[i - 1]}")
    r = space.rank
    C = space.l_matrix
    dims = list(space.dims)
    dims[i - 1] -= 1
    dims.insert(i, 1)
    old = [k for k in range(r)]
    old.insert(i, i - 1)  # new index -> old index
    new_C = []
    for a in range(r + 1):
        row = []
        for b in range(r + 1):
            if a == b:
                row.append(0)
            elif {a, b} == {i - 1, i}:
                row.append(-2)
            else:
                row.append(C[old[a]][old[b]])
        new_C.append(row)
    return make_string_space(dims, new_C)


def full_degeneration(space: StringSpace):
    """Degenerate every block to rank-1 pieces.

    Returns ``(space, groups)``: block (k, slot) becomes block
    ``offset_k + slot`` and ``groups[k-1]`` lists the new blocks of old block k
    (for :func:`project_blocks`).
    """
    out = space
    groups = []
    pos = 1
    for k, dk in enumerate(space.dims, start=1):
        for _ in range(dk - 1):
            out = degenerate(out, pos)
        groups.append(tuple(range(pos, pos + dk)))
        pos += dk
    return out, tuple(groups)


def tilde_word(word, dims: Sequence[int]):
    """Replace the rightmost D_k by D^{(k)}_1, the next one by D^{(k)}_2, ...

    Returns ``(pairs, flat)``: the (k, slot) pairs in word order and the
    word over the blocks of :func:`full_degeneration`.
    """
    word = parse_word(word)
    ks = []
    for t in word:
        if not isinstance(t, D):
            raise ValueError("tilde_word takes a word of D letters only")
        ks.append(t.block)
    counts = {k: ks.count(k) for k in set(ks)}
    for k in range(1, len(dims) + 1):
        if counts.get(k, 0) != dims[k - 1]:
            raise MultiplicityMismatch(f"D_{k} occurs {counts.get(k, 0)} times, block has dimension {dims[k - 1]}")
    if set(counts) - set(range(1, len(dims) + 1)):
        raise MultiplicityMismatch("word uses a block the space does not have")
    offsets = [0]
    for dk in dims:
        offsets.append(offsets[-1] + dk)
    seen: dict[int, int] = {}
    pairs = [None] * len(ks)
    for m in range(len(ks) - 1, -1, -1):
        k = ks[m]
        seen[k] = seen.get(k, 0) + 1
        pairs[m] = (k, seen[k])
    flat = tuple(D(offsets[k - 1] + s) for k, s in pairs)
    return tuple(pairs), flat


# -- SL(3) twisted cube ------------------------------------------------------

def sl3_space() -> StringSpace:
    return make_string_space((2, 1), [[0, 1], [1, 0]])


def twisted_cube_polytopes(a, b, c):
    """P and Q in coordinates (x, y, z); Q carries the strict y bounds."""
    a, b, c = (to_fraction(v) for v in (a, b, c))
    X, Y, Z = 0, 1, 2
    n = 3
    common = [
        leq({None: a}, {X: 1}, n),
        leq({X: 1}, {None: c - 2 * b - a}, n),
        leq({None: c}, {Z: 1}, n),
        leq({Z: 1}, {X: 1, None: b - c}, n),
    ]
    P = HPolytope(n, tuple(common + [
        leq({None: b}, {Y: 1}, n),
        leq({Y: 1}, {X: -2, Z: 1, None: -b}, n),
    ]))
    Q = HPolytope(n, tuple(common + [
        leq({X: -2, Z: 1, None: -b}, {Y: 1}, n, strict=True),
        leq({Y: 1}, {None: b}, n, strict=True),
    ]))
    return P, Q


def twisted_cube(a, b, c):
    """Tilde pipeline for the SL(3) word D_1 D_2 D_1 from the seed (x, y, z) = (a, b, c).

    The degenerated space has blocks x, y, z in that order and the word
    becomes D_2 D_3 D_1.  Returns the chain and the pair (P, Q).
    """
    space, _ = full_degeneration(sl3_space())
    _, flat = tilde_word("D1 D2 D1", (2, 1))
    chain = apply_word(space, flat, (a, b, c))
    return chain, twisted_cube_polytopes(a, b, c)


# -- Bott towers and Bott-Samelson spaces ------------------------------------

def bott_tower_space(B) -> StringSpace:
    """Rank-1 blocks y_1..y_d with l_i = sum_{k>i} B[i][k] y_k for i < d and l_d = y_1.

    ``B`` is d x d strictly upper triangular (0-based ``B[i][k]``, k > i).
    """
    B = [list(row) for row in B]
    d = len(B)
    if d == 0 or any(len(row) != d for row in B):
        raise ShapeMismatch("B must be a nonempty square matrix")
    for i in range(d):
        for k in range(i + 1):
            if B[i][k]:
                raise ShapeMismatch(f"B[{i}][{k}] must be zero (strictly upper triangular)")
    C = [[int(v) for v in row] for row in B]
    if d > 1:
        C[d - 1][0] = 1
    return make_string_space((1,) * d, C)


def bott_tower_word(d: int) -> tuple:
    return tuple(D(i) for i in range(1, d + 1))


def bott_samelson(cartan: CartanData, word: Sequence[int], shifts=None):
    """Space for a word in simple roots and the word E_{u_1} D_{i_1} ... E_{u_l} D_{i_l}.

    ``shifts`` is an optional list of translation vectors (one per letter,
    None or zero meaning no translation).
    """
    ws = space_from_word(cartan, word)
    shifts = list(shifts) if shifts is not None else [None] * len(ws.word)
    if len(shifts) != len(ws.word):
        raise ShapeMismatch(f"{len(shifts)} translation vectors for a word of length {len(ws.word)}")
    tokens = []
    for u, letter in zip(shifts, ws.word):
        if u is not None:
            u = to_point(u)
            if len(u) != ws.space.dim:
                raise ShapeMismatch("translation vector has the wrong dimension")
            if any(u):
                tokens.append(E(u))
        tokens.append(letter)
    return ws.space, tuple(tokens)
