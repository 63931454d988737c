from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sostar.cover import build_Y_model, shear_Y_model
from sostar.geodesics import (
    Direction,
    DuplicateCore,
    IncompleteFamily,
    TangencyDetected,
    UnequalLengths,
    VertexHit,
    copy_sequence,
    crossing_cocycle,
    crossings_with_labels,
    cylinder_family,
    edge_chain,
    trace,
    trace_with_schedule,
    trajectory_intersection,
    trajectory_svg,
    trajectory_tsv,
)
from sostar.origami import make_staircase, one_square_torus
from sostar.quaternion import ALL, QElem, qinv, qmul

TORUS_PAIRS = [
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 1), (1, -1)),
    ((2, 1), (1, 3)),
    ((-1, 2), (3, 1)),
    ((1, 2), (2, 5)),
    ((3, -2), (-1, 4)),
    ((5, 3), (-2, 7)),
]


def torus_curve(p: int, q: int, offset: Fraction):
    side = "B" if q else "L"
    return trace(one_square_torus(), Direction(p, q), (0, side, offset))


OFFSETS = [Fraction(a, b) for b in (7, 11, 13, 17, 19, 23) for a in (1, 2, 3)]


def torus_pair(a, b):
    """Two transversal closed curves on the torus, moving basepoints past corners and tangencies."""
    for i, off1 in enumerate(OFFSETS):
        for off2 in OFFSETS[i + 1 :]:
            try:
                t1, t2 = torus_curve(*a, off1), torus_curve(*b, off2)
                return t1, t2, trajectory_intersection(t1, t2)
            except (VertexHit, TangencyDetected):
                continue
    raise AssertionError("no transversal pair found")


@pytest.mark.parametrize("a,b", TORUS_PAIRS)
def test_torus_intersection_by_crossings(a, b):
    _, _, value = torus_pair(a, b)
    assert value == a[0] * b[1] - a[1] * b[0]


@pytest.mark.parametrize("a,b", TORUS_PAIRS)
def test_torus_intersection_by_cochain(a, b):
    t1, t2, _ = torus_pair(a, b)
    assert int(crossing_cocycle(t1, 1) @ edge_chain(t2, 1)) == a[0] * b[1] - a[1] * b[0]


def test_torus_edge_chain_is_homology_class():
    t = torus_curve(2, 3, Fraction(1, 5))
    # bottom edge carries the horizontal part, left edge the vertical part
    assert list(edge_chain(t, 1)) == [2, 3]


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=60, deadline=None)
def test_torus_intersection_antisymmetric(p1, q1, p2, q2):
    from math import gcd

    if gcd(p1, q1) != 1 or gcd(p2, q2) != 1:
        return
    t1, t2, value = torus_pair((p1, q1), (p2, q2))
    assert value == p1 * q2 - q1 * p2
    assert trajectory_intersection(t2, t1) == -value


def test_vertex_hit_is_reported():
    # from offset 1/3 in direction (-1, 3) the line runs into a corner
    with pytest.raises(VertexHit):
        torus_curve(-1, 3, Fraction(1, 3))


def test_schedule_moves_past_vertex_hits():
    t = trace_with_schedule(one_square_torus(), Direction(-1, 3), 0, (Fraction(1, 3), Fraction(1, 5)))
    assert t.start[1] == 1 * 3  # offset 1/5 on the grid of size 5*1*3


def test_closed_curve_returns_to_start():
    o = make_staircase(7)
    t = trace(o, Direction(1, 2), (0, "B", Fraction(1, 3)))
    assert t.crossings[-1].entered == t.start[0]
    assert sum(c.kind == "h" for c in t.crossings) == 2 * t.holonomy_multiple


def test_parallel_curves_do_not_meet():
    t1 = torus_curve(1, 2, Fraction(1, 5))
    t2 = torus_curve(1, 2, Fraction(1, 7))
    assert trajectory_intersection(t1, t2) == 0


def test_tangency_detected():
    t1 = torus_curve(1, 1, Fraction(1, 2))
    t2 = torus_curve(1, -1, Fraction(1, 2))
    with pytest.raises(TangencyDetected):
        trajectory_intersection(t1, t2)


def test_incomplete_family_detected():
    o = make_staircase(5)
    with pytest.raises(IncompleteFamily):
        cylinder_family(o, Direction(0, 1), [1, 3], [Fraction(1, 2)])


def test_unequal_lengths_detected():
    # the vertical cylinders of the 5-square staircase have heights 1, 2, 2
    with pytest.raises(UnequalLengths):
        cylinder_family(make_staircase(5), Direction(0, 1), [0, 1, 3], [Fraction(1, 2)])


def test_duplicate_core_detected():
    o = one_square_torus()
    with pytest.raises(DuplicateCore):
        cylinder_family(o, Direction(1, 2), [0, 0], [Fraction(1, 3)])


def test_staircase_diagonal_family():
    # direction (1, 1) on the 3-square staircase is a single cylinder
    fam = cylinder_family(make_staircase(3), Direction(1, 1), [0], [Fraction(1, 2)])
    assert fam.cylinder_count == 1
    assert fam.horizontal_totals == (1, 1, 1) and fam.vertical_totals == (1, 1, 1)


# --- the row model ---------------------------------------------------------


def model_family(d: int, r: int = 0):
    m0 = build_Y_model(d)
    m = shear_Y_model(m0, r)
    starts = [m.square(g, 1) for g in ALL]
    return m, cylinder_family(m.origami, Direction(-1, 2), starts, (Fraction(1, 2), Fraction(1, 4)))


@pytest.mark.parametrize("d", [11, 19])
def test_core_family_on_unsheared_model(d):
    m, fam = model_family(d)
    assert len(fam.cores) == 8 and fam.cylinder_count == 8
    assert len({t.holonomy_multiple for t in fam.cores}) == 1
    eta_total = Counter()
    for t in fam.cores:
        etas = Counter({k: v for k, v in crossings_with_labels(t, m).items() if k.kind == "eta"})
        unsigned = Counter(m.bottom_label(c.edge) for c in t.crossings if c.kind == "h")
        assert sum(unsigned.values()) == 2 * d
        assert len(unsigned) == 2 * d
        assert set(etas) == set(unsigned)
        eta_total.update(unsigned)
    assert sum(eta_total.values()) == 16 * d
    assert set(eta_total.values()) == {2}
    assert len(eta_total) == 8 * d


@pytest.mark.parametrize("d", [11, 19])
def test_copy_sequence_closes(d):
    m, fam = model_family(d)
    for t in fam.cores:
        rows = copy_sequence(t, m)
        assert rows[0] == rows[-1]
        assert len(rows) == 2 * d + 2  # 2d eta sides and one zeta side


@pytest.mark.parametrize("d", [11, 19, 27])
def test_copy_sequence_multipliers(d):
    m = build_Y_model(d)
    mid = (d + 1) // 2
    t = trace(m.origami, Direction(-1, 2), (m.square(QElem.ONE, mid), "B", Fraction(3, 4)))
    rows = copy_sequence(t, m)
    mult = [qmul(qinv(a), b) for a, b in zip(rows, rows[1:])]
    assert len(mult) == 2 * d + 1
    assert mult == mult[::-1]
    assert mult[d] == QElem.NEG_ONE
    head = [QElem.J, QElem.NEG_I, QElem.K, QElem.NEG_J, QElem.NEG_ONE, QElem.I, QElem.NEG_K]
    assert mult[: len(head)] == head
    assert mult[d - 4 : d] == [QElem.J, QElem.ONE, QElem.NEG_I, QElem.K]
    prod = QElem.ONE
    for x in mult:
        prod = qmul(prod, x)
    assert prod == QElem.ONE


@pytest.mark.parametrize("r", [0, 1, 5])
def test_deck_maps_permute_cores(r):
    m, fam = model_family(11, r)
    pts = [frozenset((c.kind, c.edge, c.pos) for c in t.crossings) for t in fam.cores]
    for h in ALL:
        sigma = m.deck(h)
        for g in ALL:
            moved = frozenset((k, sigma[e], p) for k, e, p in pts[g])
            assert moved == pts[qmul(h, g)]


def test_cores_pairwise_disjoint():
    _, fam = model_family(11)
    for a in fam.cores:
        for b in fam.cores:
            assert trajectory_intersection(a, b) == 0


def test_cocycle_and_chain_agree_on_core_pairs():
    m, fam = model_family(11, 2)
    n = m.origami.n
    t = trace_with_schedule(m.origami, Direction(3, 2), m.square(QElem.I, 4), (Fraction(1, 8), Fraction(3, 8)))
    for c in fam.cores:
        geo = trajectory_intersection(c, t)
        assert int(crossing_cocycle(c, n) @ edge_chain(t, n)) == geo
        assert int(crossing_cocycle(t, n) @ edge_chain(c, n)) == -geo


def test_exports():
    _, fam = model_family(11)
    t = fam.cores[0]
    tsv = trajectory_tsv(t)
    assert tsv.splitlines()[0] == "square\tx0\ty0\tx1\ty1"
    assert len(tsv.splitlines()) == len(t.segments) + 1
    svg = trajectory_svg(t, 11)
    assert svg.startswith("<svg") and svg.count("<line") == len(t.segments)
