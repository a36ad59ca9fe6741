from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from convex_demazure.chain import support_points
from convex_demazure.characters import LaurentPolynomial, chi, project_blocks
from convex_demazure.constructions import (
    SP4_WORD,
    bott_samelson,
    bott_tower_space,
    bott_tower_word,
    degenerate,
    full_degeneration,
    gz_direct,
    gz_index,
    gz_seed,
    gz_space,
    gz_word,
    seed_for_weight,
    sl3_space,
    sp4_example,
    sp4_lambdas,
    sp4_seed,
    sp4_space,
    space_from_word,
    tilde_word,
    twisted_cube,
)
from convex_demazure.errors import (
    BlockTooSmall,
    EmptyWord,
    IndexOutOfRange,
    MultiplicityMismatch,
    NotDominant,
    NotNonIncreasing,
    ShapeMismatch,
)
from convex_demazure.operators import D, E, apply_word
from convex_demazure.polytope import hull_vertices
from convex_demazure.roots import cartan_type, dominant_conjugate, freudenthal_multiplicities, weyl_dimension
from convex_demazure.string_space import make_string_space, weight

from helpers import gz_patterns, weyl_dim_sl


def scaled(points, q):
    return {tuple(Fraction(v, q) for v in p) for p in points}


# -- Gelfand-Zetlin --------------------------------------------------------------

def test_gz_space_shape():
    s = gz_space(4)
    assert s.dims == (3, 2, 1)
    assert s.l_matrix == ((0, 1, 0), (1, 0, 1), (0, 1, 0))
    assert gz_word(3) == (D(1), D(2), D(1))
    assert gz_seed((3, 0, -3)) == (0, -3, -3)
    assert [gz_index(3, k, l) for k, l in [(1, 1), (1, 2), (2, 1)]] == [0, 1, 2]


# strictly dominant with zero sum
GZ_CASES = [(1, 0, -1), (3, 0, -3), (2, 1, -3), (2, 1, -1, -2), (3, 1, -1, -3)]


@pytest.mark.parametrize("lam", GZ_CASES)
def test_gz_chain_is_gz_polytope(lam):
    n = len(lam)
    out = apply_word(gz_space(n), gz_word(n), gz_seed(lam))
    vals = out.pointwise()
    assert set(vals.values()) == {1}
    assert set(vals) == gz_direct(lam).lattice_points() == set(gz_patterns(lam))
    assert len(vals) == weyl_dim_sl(lam)


def test_gz_not_non_increasing():
    with pytest.raises(NotNonIncreasing):
        gz_direct((0, 1, -1))


@pytest.mark.parametrize("lam", GZ_CASES)
def test_gz_intermediates_are_faces(lam):
    # every intermediate support is cut out of the next by extremal coordinate values
    n = len(lam)
    _, steps = apply_word(gz_space(n), gz_word(n), gz_seed(lam), trace=True)
    supports = []
    for c in steps:
        assert len(c.terms) == 1 and c.terms[0][0] == 1
        supports.append(set(c.pieces[0].points))
    for small, big in zip(supports, supports[1:]):
        assert small <= big
        first = next(iter(small))
        fixed = [k for k in range(len(first)) if all(p[k] == first[k] for p in small)]
        for k in fixed:
            values = [p[k] for p in big]
            assert first[k] in (min(values), max(values))
        assert small == {p for p in big if all(p[k] == first[k] for k in fixed)}


def test_gz_character_matches_freudenthal():
    c = cartan_type("A2")
    out = apply_word(gz_space(3), gz_word(3), gz_seed((2, 1, -3)))
    f = chi(out)
    lam = dominant_conjugate(c, weight(gz_space(3), gz_seed((2, 1, -3))))
    assert f.terms() == freudenthal_multiplicities(c, lam)


# -- spaces from words -----------------------------------------------------------

def test_space_from_word_c2():
    ws = space_from_word(cartan_type("C2"), (2, 1, 2, 1))
    assert ws.space.dims == (2, 2)
    assert ws.space.l_matrix == ((0, 2), (1, 0))
    assert ws.word == SP4_WORD
    assert ws.positions == ((2, 2), (1, 2), (2, 1), (1, 1))
    assert ws.space == sp4_space()


def test_space_from_word_a2_matches_gz():
    assert space_from_word(cartan_type("A2"), (1, 2, 1)).space == gz_space(3)


def test_space_from_word_errors():
    with pytest.raises(EmptyWord):
        space_from_word(cartan_type("A2"), ())
    with pytest.raises(IndexOutOfRange):
        space_from_word(cartan_type("A2"), (1, 3))


def test_seed_for_weight():
    s = sp4_space()
    x = seed_for_weight(s, (-3, -2))
    assert weight(s, x) == (-3, -2)
    with pytest.raises(ShapeMismatch):
        seed_for_weight(s, (1,))


# -- Sp(4) -------------------------------------------------------------------------

# regular weights only; the inequality list is stated for those
SP4_CASES = [((1, 1), 35), ((Fraction(1, 2), 1), 16), ((1, 2), 81), ((Fraction(1, 2), 2), 40)]


@pytest.mark.parametrize("lams, dim", SP4_CASES)
def test_sp4_chain_matches_inequalities(lams, dim):
    seed = sp4_seed(*lams)
    assert sp4_lambdas(*seed) == tuple(map(Fraction, lams))
    chain, P = sp4_example(*seed)
    vals = {p: v for p, v in chain.pointwise().items() if chain.on_character_lattice(p)}
    assert set(vals.values()) == {1}
    assert support_points(chain, on_standard_lattice=True) == scaled(P.lattice_points(chain.q, shift=seed), chain.q)
    assert len(vals) == dim
    c2 = cartan_type("C2")
    lam = c2.from_labels((2 * lams[0], lams[1]))
    assert weyl_dimension(c2, lam) == dim
    assert chi(chain).terms() == freudenthal_multiplicities(c2, lam)


@pytest.mark.parametrize("lams, dim", [((0, 1), 5), ((Fraction(1, 2), 0), 4)])
def test_sp4_singular_weights_keep_character(lams, dim):
    chain, _ = sp4_example(*sp4_seed(*lams))
    c2 = cartan_type("C2")
    assert chi(chain).terms() == freudenthal_multiplicities(c2, c2.from_labels((2 * lams[0], lams[1])))
    assert chi(chain).total() == dim


def test_sp4_eleven_vertices():
    chain, _ = sp4_example(*sp4_seed(1, 1))
    assert len(hull_vertices(chain.pieces[0].points)) == 11


def test_sp4_not_dominant():
    with pytest.raises(NotDominant):
        sp4_example(0, 0, 1, 0)


# -- degenerations ----------------------------------------------------------------

def test_degenerate_sl3():
    s = degenerate(sl3_space(), 1)
    assert s.dims == (1, 1, 1)
    assert s.l_matrix == ((0, -2, 1), (-2, 0, 1), (1, 1, 0))
    with pytest.raises(BlockTooSmall):
        degenerate(sl3_space(), 2)


def test_full_degeneration_groups():
    s, groups = full_degeneration(gz_space(4))
    assert s.dims == (1,) * 6
    assert list(groups) == [(1, 2, 3), (4, 5), (6,)]


def test_tilde_word():
    pairs, flat = tilde_word("D1 D2 D1", (2, 1))
    assert pairs == ((1, 2), (2, 1), (1, 1))
    assert flat == (D(2), D(3), D(1))
    with pytest.raises(MultiplicityMismatch):
        tilde_word("D1 D2", (2, 1))


def test_tilde_word_gz4():
    pairs, flat = tilde_word("D1 D2 D1 D3 D2 D1", (3, 2, 1))
    assert pairs == ((1, 3), (2, 2), (1, 2), (3, 1), (2, 1), (1, 1))
    assert flat == tuple(D(k) for k in (3, 5, 2, 6, 4, 1))
    assert tilde_word("D1", (1,)) == (((1, 1),), (D(1),))


@pytest.mark.parametrize("lam", [(1, 0, -1), (3, 0, -3), (2, 1, -1, -2)])
def test_tilde_projection_gz(lam):
    n = len(lam)
    space = gz_space(n)
    seed = gz_seed(lam)
    deg, groups = full_degeneration(space)
    _, flat = tilde_word(gz_word(n), space.dims)
    lhs = project_blocks(chi(apply_word(deg, flat, seed)), groups)
    assert lhs == chi(apply_word(space, gz_word(n), seed))


def test_tilde_projection_sp4():
    space = sp4_space()
    seed = sp4_seed(Fraction(1, 2), 1)
    deg, groups = full_degeneration(space)
    _, flat = tilde_word(SP4_WORD, space.dims)
    lhs = project_blocks(chi(apply_word(deg, flat, seed)), groups)
    assert lhs == chi(apply_word(space, SP4_WORD, seed))
    assert lhs.total() == 16


# -- twisted cube ----------------------------------------------------------------------

def test_twisted_cube_example():
    chain, (P, Q) = twisted_cube(0, -3, -3)
    LP, LQ = P.lattice_points(), Q.lattice_points()
    assert (len(LP), len(LQ)) == (67, 3)
    assert not LQ & LP
    expected = {**{p: 1 for p in LP}, **{p: -1 for p in LQ}}
    assert chain.pointwise() == expected
    orig = apply_word(sl3_space(), "D1 D2 D1", (0, -3, -3))
    assert project_blocks(chi(chain), [(1, 2), (3,)]) == chi(orig)
    assert chi(orig).total() == 64


@settings(max_examples=15, deadline=None)
@given(st.integers(-2, 2), st.integers(-3, 1), st.integers(-3, 1))
def test_twisted_cube_is_difference(a, b, c):
    # antidominant seed weight (a + b, c)
    assume(2 * (a + b) <= c and 2 * c <= a + b)
    chain, (P, Q) = twisted_cube(a, b, c)
    vals = chain.pointwise()
    LP, LQ = P.lattice_points(), Q.lattice_points()
    for p in LP | LQ | set(vals):
        assert vals.get(p, 0) == (p in LP) - (p in LQ)


# -- Bott towers --------------------------------------------------------------------------

def test_bott_tower_box():
    s = bott_tower_space([[0, 0], [0, 0]])
    out = apply_word(s, bott_tower_word(2), (-2, -3))
    assert set(out.pointwise()) == {(x, y) for x in range(-2, 3) for y in range(-3, 2)}
    assert set(out.pointwise().values()) == {1}


def test_bott_tower_twisted():
    s = bott_tower_space([[0, 1], [0, 0]])
    assert s.l_matrix == ((0, 1), (1, 0))
    # D_2 spreads y_2 over [-3, 1]; then y_1 runs from -2 to y_2 + 2
    out = apply_word(s, bott_tower_word(2), (-2, -3))
    assert out.pointwise() == {(x, y): 1 for y in range(-3, 2) for x in range(-2, y + 3)}
    # the empty segment over y_2 = -1 contributes nothing
    assert apply_word(s, bott_tower_word(2), (0, -1)).pointwise() == {(0, 0): 1, (0, 1): 1, (1, 1): 1}


def test_bott_tower_errors():
    with pytest.raises(ShapeMismatch):
        bott_tower_space([[0, 1], [1, 0]])
    with pytest.raises(ShapeMismatch):
        bott_tower_space([])


def test_bott_samelson_tokens():
    space, tokens = bott_samelson(cartan_type("A2"), (1, 2, 1), [None, (0, Fraction(-1, 2), 0), None])
    assert space == sl3_space()
    assert tokens == (D(1), E((0, Fraction(-1, 2), 0)), D(2), D(1))
    out = apply_word(space, tokens, (0, -1, -1))
    assert out.q == 2
    with pytest.raises(ShapeMismatch):
        bott_samelson(cartan_type("A2"), (1, 2, 1), [None])
