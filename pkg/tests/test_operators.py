import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from convex_demazure.chain import Chain, Piece, evaluate, indicator
from convex_demazure.characters import chi, demazure_T
from convex_demazure.errors import IndexOutOfRange, NotDegenerate, OperatorUndefined, WordError
from convex_demazure.operators import (
    D,
    E,
    apply_D,
    apply_E,
    apply_word,
    expand_box,
    format_word,
    parse_word,
)
from convex_demazure.constructions import gz_direct
from convex_demazure.string_space import make_string_space

from helpers import corpus, random_box_piece, random_space

SL3 = make_string_space((2, 1), [[0, 1], [1, 0]])
PLANE = make_string_space((1, 1), [[0, 1], [1, 0]])


def one_piece(space, pts, q=1):
    return Chain(space, q, (0,) * space.dim, ((1, Piece(space, q, frozenset(pts))),))


def box_value(boxes, x):
    return sum(s for s, lo, hi, _ in boxes if all(a <= c <= b for a, c, b in zip(lo, x, hi)))


# -- expand_box ------------------------------------------------------------------

def test_expand_box_plus_case():
    # the point (0, 1) with l_1 = y: D_1 gives the segment [0, 1] in x
    assert expand_box((0,), (0,), 1, 1) == [(1, (0,), (1,), "D+")]


def test_expand_box_virtual_point():
    boxes = expand_box((1,), (1,), 1, 1)
    assert [b[0] for b in boxes] == [-1, 1, 1]
    assert [b[3] for b in boxes] == ["D-", "P", "P'"]
    for x in range(-3, 5):
        assert box_value(boxes, (x,)) == 0
    assert box_value(boxes, (Fraction(1, 2),)) == -1


def test_expand_box_trapezoid_fiber():
    (sign, lo, hi, tag), = expand_box((-1, -1), (2, -1), 2, 3)
    assert (sign, lo, hi, tag) == (1, (-1, -1), (2, 3), "D+")
    assert (hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) == 20


def test_expand_box_boundary_is_plus():
    # nu'_j == nu_j: the output is the input box
    assert expand_box((0, 1), (2, 1), 2, 4) == [(1, (0, 1), (2, 1), "D+")]


def test_expand_box_errors():
    with pytest.raises(NotDegenerate):
        expand_box((0, 0), (1, 1), 1, 0)
    with pytest.raises(IndexOutOfRange):
        expand_box((0,), (0,), 2, 0)


# -- apply_D ---------------------------------------------------------------------

def test_trapezoid_from_segment():
    seg = one_piece(PLANE, [(x, -1) for x in range(-1, 3)])
    out = apply_D(2, seg)
    expected = {(x, y) for x in range(-1, 3) for y in range(-1, x + 2)}
    assert out.pointwise() == {p: 1 for p in expected}
    assert len(expected) == 14


def test_sl3_word_gives_gz():
    out = apply_word(SL3, "D1 D2 D1", (0, -3, -3))
    assert set(out.pointwise().values()) == {1}
    assert set(out.pointwise()) == gz_direct((3, 0, -3)).lattice_points()


def test_idempotent_on_gz():
    out = apply_word(SL3, "D2 D1", (0, -3, -3))
    assert apply_D(2, out).pointwise() == out.pointwise()


def test_undefined_without_degenerate_direction():
    box = one_piece(SL3, [(x, y, 0) for x in range(2) for y in range(2)])
    with pytest.raises(OperatorUndefined):
        apply_D(1, box)


def test_symmetric_full_box_is_fixed():
    # l_1 = z = 2 and every fiber has sum(mu + nu) = 2
    box = one_piece(SL3, [(x, y, 2) for x in range(2) for y in range(2)])
    assert apply_D(1, box).pointwise() == box.pointwise()


def test_word_error_carries_token_index():
    # tokens run right to left; the D2 at position 1 meets a piece with no flat slot
    with pytest.raises(WordError) as info:
        apply_word(SL3, "D1 D2 D1 D2", (0, -1, 2))
    assert info.value.token_index == 1
    assert isinstance(info.value.__cause__, OperatorUndefined)


def test_bad_block_index():
    with pytest.raises(IndexOutOfRange):
        apply_word(SL3, "D3", (0, 0, 0))


# -- E_u and words -------------------------------------------------------------------

def test_translation_identity_and_inverse():
    c = apply_word(SL3, "D2 D1", (0, -2, -2))
    assert apply_E((0, 0, 0), c).pointwise() == c.pointwise()
    u = (Fraction(1, 2), 0, -1)
    back = apply_E(tuple(-v for v in u), apply_E(u, c))
    assert back.q == 2
    for p, v in c.pointwise().items():
        assert evaluate(back, p) == v
    assert back.shift == c.shift


def test_shifted_bott_samelson_pipeline_runs():
    out = apply_word(SL3, ["D1", "E:0,-1/2,0", "D2", "D1"], (0, -1, -1))
    assert out.q == 2
    assert out.shift == (0, Fraction(1, 2), 0)
    assert chi(out).total() != 0


def test_empty_word_is_seed():
    assert apply_word(SL3, [], (1, 2, 3)).pointwise() == indicator(SL3, (1, 2, 3)).pointwise()


def test_word_parsing():
    w = parse_word("D1 E:0,-1/2,0 D2")
    assert w == (D(1), E((0, Fraction(-1, 2), 0)), D(2))
    assert format_word(w) == ["D1", "E:0,-1/2,0", "D2"]
    assert parse_word([1, "D2"]) == (D(1), D(2))
    with pytest.raises(ValueError):
        parse_word("X3")


def test_trace_records_every_step():
    final, steps = apply_word(SL3, "D1 D2 D1", (0, -1, -1), trace=True)
    assert len(steps) == 4
    assert steps[-1].pointwise() == final.pointwise()
    assert steps[0].pointwise() == {(0, -1, -1): 1}


# -- properties ----------------------------------------------------------------------

CORPUS = corpus(seed=2024, size=90)


@pytest.mark.parametrize("case", range(len(CORPUS)))
def test_intertwining_and_idempotence(case):
    space, i, c = CORPUS[case]
    out = apply_D(i, c)
    assert chi(out) == demazure_T(space, i, chi(c))
    assert apply_D(i, out).pointwise() == out.pointwise()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_translation_commutes_with_evaluation(seed):
    rng = random.Random(seed)
    space = random_space(rng)
    c = random_box_piece(rng, space, 1)
    u = tuple(Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3])) for _ in range(space.dim))
    moved = apply_E(u, c)
    for p, v in c.pointwise().items():
        assert evaluate(moved, tuple(a + b for a, b in zip(p, u))) == v


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_plus_case_contains_input_as_face(seed):
    rng = random.Random(seed)
    space = random_space(rng)
    i = rng.randint(1, space.rank)
    c = random_box_piece(rng, space, i)
    out = apply_D(i, c)
    if len(out.terms) == 1 and out.terms[0][0] == 1:
        assert set(c.pieces[0].points) <= set(out.pieces[0].points)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fiber_locality(seed):
    # D_i restricted to one fiber only sees that fiber
    rng = random.Random(seed)
    space = random_space(rng)
    i = rng.randint(1, space.rank)
    c = random_box_piece(rng, space, i)
    out = apply_D(i, c).pointwise()
    block = set(space.block_slice(i))
    p0 = next(iter(c.pieces[0].points))
    base = tuple(v for k, v in enumerate(p0) if k not in block)
    fiber = [p for p in c.pieces[0].points if tuple(v for k, v in enumerate(p) if k not in block) == base]
    alone = apply_D(i, one_piece(space, fiber)).pointwise()
    here = {p: v for p, v in out.items() if tuple(x for k, x in enumerate(p) if k not in block) == base}
    assert here == alone
