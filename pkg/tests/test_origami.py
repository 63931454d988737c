from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from sostar.origami import (
    DTooSmall,
    EvenD,
    GL2Word,
    NotConnected,
    Origami,
    act,
    automorphisms,
    canonical_form,
    corner_permutation,
    cycles_to_text,
    find_isomorphism,
    horizontal_cylinders,
    is_isomorphic,
    make_staircase,
    one_square_torus,
    orbit,
    perm_compose,
    perm_inverse,
    perm_power,
    reduction_word,
    shear_power,
    text_to_perm,
    vertex_structure,
)


def _connected_or_none(h, v):
    try:
        return Origami(h, v)
    except NotConnected:
        return None


@st.composite
def origamis(draw, max_n: int = 9):
    n = draw(st.integers(1, max_n))
    h = draw(st.permutations(range(n)))
    v = draw(st.permutations(range(n)))
    o = _connected_or_none(h, v)
    if o is None:
        # join the components by a cyclic h, which keeps v arbitrary
        o = Origami(tuple((x + 1) % n for x in range(n)), v)
    return o


words = st.text(alphabet="TtSs", max_size=8)


def test_staircase_small_example():
    o = make_staircase(5)
    assert cycles_to_text(o.h) == "(1,2)(3,4)(5)"
    assert cycles_to_text(o.v) == "(1)(2,3)(4,5)"


@pytest.mark.parametrize("d", [3, 5, 7, 9, 11, 19])
def test_staircase_stratum(d):
    s = vertex_structure(make_staircase(d))
    assert s.zeros == (d - 1,)
    assert s.genus == (d + 1) // 2


def test_staircase_rejects_bad_d():
    with pytest.raises(EvenD):
        make_staircase(6)
    with pytest.raises(DTooSmall):
        make_staircase(1)


def test_disconnected_rejected():
    with pytest.raises(NotConnected):
        Origami((1, 0, 2), (1, 0, 2))


def test_torus_is_genus_one():
    s = vertex_structure(one_square_torus())
    assert s.genus == 1 and s.zeros == ()


@given(origamis())
def test_text_round_trip(o):
    assert Origami.from_text(o.to_text()) == o


def test_text_to_perm_pads():
    assert text_to_perm("(1,3)", 4) == (2, 1, 0, 3)


@given(origamis(), words)
def test_word_and_inverse_cancel(o, w):
    g = GL2Word(w)
    assert act(act(o, g), g.inverse()) == o


@given(origamis(), words, words)
def test_action_composes(o, a, b):
    assert act(o, GL2Word(a) * GL2Word(b)) == act(act(o, b), a)


@given(words)
def test_words_have_determinant_one(w):
    (a, b), (c, d) = GL2Word(w).matrix()
    assert a * d - b * c == 1


def test_letter_matrices():
    assert GL2Word("T").matrix() == ((1, 1), (0, 1))
    assert GL2Word("S").matrix() == ((1, 0), (1, 1))


@given(origamis(), st.integers(-6, 6))
def test_shear_power_matches_repeated_letters(o, k):
    assert shear_power(o, k).v == act(o, GL2Word("T") ** k).v


@given(origamis(), words)
def test_action_preserves_stratum(o, w):
    assert vertex_structure(act(o, w)) == vertex_structure(o)


@given(origamis(), st.randoms(use_true_random=False))
def test_canonical_form_is_relabel_invariant(o, rng):
    sigma = list(range(o.n))
    rng.shuffle(sigma)
    other = o.relabel(sigma)
    assert canonical_form(other) == canonical_form(o)
    iso = find_isomorphism(o, other)
    assert iso is not None and o.relabel(iso) == other


def test_non_isomorphic_detected():
    assert not is_isomorphic(make_staircase(5), Origami((1, 2, 3, 4, 0), (0, 1, 2, 3, 4)))


@given(origamis())
def test_automorphisms_commute(o):
    auts = automorphisms(o)
    assert tuple(range(o.n)) in auts
    for a in auts:
        assert perm_compose(a, o.h) == perm_compose(o.h, a)
        assert perm_compose(a, o.v) == perm_compose(o.v, a)


@given(origamis(), st.integers(-5, 5))
def test_perm_power_inverse(o, k):
    assert perm_compose(perm_power(o.h, k), perm_power(o.h, -k)) == tuple(range(o.n))
    assert perm_power(o.h, -1) == perm_inverse(o.h)


@given(origamis())
def test_corner_permutation_is_a_commutator(o):
    u = corner_permutation(o)
    assert sorted(u) == list(range(o.n))


@pytest.mark.parametrize("d", [3, 5, 7, 11])
def test_staircase_orbit_has_three_elements(d):
    g = orbit(make_staircase(d))
    assert len(g) == 3
    assert len(g.edges) == 6


@pytest.mark.parametrize("d", [3, 5, 7, 11, 19])
def test_S_image_is_one_cylinder(d):
    cyl = horizontal_cylinders(act(make_staircase(d), "S"))
    assert len(cyl) == 1
    assert cyl[0].circumference == d and cyl[0].height == 1


def test_staircase_cylinders():
    cyl = horizontal_cylinders(make_staircase(3))
    assert sorted(c.circumference * c.height for c in cyl) == [1, 2]


@given(origamis())
@settings(max_examples=40)
def test_cylinders_cover_all_squares(o):
    squares = [x for c in horizontal_cylinders(o) for row in c.rows for x in row]
    assert sorted(squares) == list(range(o.n))


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_reduction_word(p, q):
    from math import gcd

    if gcd(p, q) != 1:
        with pytest.raises(ValueError):
            reduction_word(p, q)
        return
    x, y = reduction_word(p, q).apply_to((p, q))
    assert y == 0 and abs(x) == 1
