from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmirror import examples
from tropmirror.qgeom import constraint, satisfies
from tropmirror.tropics import (
    DimensionMismatchError,
    EmptyRegionError,
    Factor,
    MonomialSystem,
    NonTransverseError,
    NotEquivalentError,
    UnknownMonomialError,
    build_open_poset,
    build_stratification,
    open_box,
    saturate,
    trop_eval,
    tropical_distance,
    zigzag_connect,
)

PANTS = examples.pants_line()
SQUARE = examples.square_example()
CI2 = examples.ci_two_lines()


def brute_max(sys, i, x):
    """Direct evaluation over all monomials, the trivial oracle."""
    f = sys.factors[i]
    vals = [
        sum(Fraction(xi) * a for xi, a in zip(x, p)) - h
        for p, h in zip(f.points, f.heights)
    ]
    m = max(vals)
    return m, tuple(k for k, v in enumerate(vals) if v == m)


def test_trop_eval_total_tie():
    val, arg = trop_eval(PANTS, 0, (0, 0))
    assert val == 0 and arg == (0, 1, 2)


def test_trop_eval_single():
    assert trop_eval(PANTS, 0, (1, 0)) == brute_max(PANTS, 0, (1, 0)) == (1, (1,))


def test_trop_eval_two_way():
    val, arg = trop_eval(PANTS, 0, (Fraction(1, 2), Fraction(1, 2)))
    assert val == Fraction(1, 2) and arg == (1, 2)


def test_trop_eval_dim_mismatch():
    with pytest.raises(DimensionMismatchError):
        trop_eval(PANTS, 0, (1, 2, 3))


def test_tropical_distance():
    assert tropical_distance(PANTS, 0, (1, 0), (1, 0)) == 0
    assert tropical_distance(PANTS, 0, (1, 0), (0, 0)) == 1
    assert tropical_distance(PANTS, 0, (2, 2), (0, 1)) == 0
    with pytest.raises(UnknownMonomialError):
        tropical_distance(PANTS, 0, (1, 0), (5, 5))


def test_pants_counts():
    tc = build_stratification(PANTS)
    assert len(tc.vertices) == 1
    assert len(tc.edges) == 3
    regions = [s for s in tc.strata if s.dim == 2]
    assert len(regions) == 3
    assert all(s.unbounded for s in tc.strata if s.dim == 1)


def test_square_counts():
    # lower-hull oracle: heights (0,0,0,1) split the square along the
    # (1,0)-(0,1) diagonal; corner locus has 2 vertices, 1 bounded edge, 4 rays
    tc = build_stratification(SQUARE)
    assert len(tc.vertices) == 2
    bounded = [e for e in tc.edges if not tc.strata[e].unbounded]
    rays = [e for e in tc.edges if tc.strata[e].unbounded]
    assert len(bounded) == 1 and len(rays) == 4
    vs = sorted(tc.strata[v].witness for v in tc.vertices)
    assert vs == [(0, 0), (1, 1)]
    regions = [s for s in tc.strata if s.dim == 2]
    assert len(regions) == 4  # component count equals the monomial count


def test_ci_two_lines_ztrop():
    tc = build_stratification(CI2)
    flagged = tc.flagged()
    assert len(flagged) == 1
    s = tc.strata[flagged[0]]
    assert s.dim == 0
    assert s.witness == (1, 1)  # stable-intersection brute force: edge pairs meet here


def test_nontransverse_rejected():
    # identical factors overlap along the whole line: codim defect
    sys = MonomialSystem(
        n=2,
        factors=(
            Factor(points=((0, 0), (1, 0), (0, 1)), heights=(0, 0, 0)),
            Factor(points=((0, 0), (1, 0), (0, 1)), heights=(0, 0, 0)),
        ),
    )
    with pytest.raises(NonTransverseError):
        build_stratification(sys)


def test_closure_order_graded():
    for sys in (PANTS, SQUARE, CI2):
        tc = build_stratification(sys)
        for (i, j) in tc.closure:
            if i != j:
                assert tc.strata[i].dim <= tc.strata[j].dim
        # every non-maximal stratum lies in the closure of a higher one
        maxdim = max(s.dim for s in tc.strata)
        for i, s in enumerate(tc.strata):
            if s.dim < maxdim:
                assert any(
                    j != i and (i, j) in tc.closure and tc.strata[j].dim == s.dim + 1
                    for j in range(len(tc.strata))
                )


coords = st.fractions(min_value=-4, max_value=4, max_denominator=7)


@settings(max_examples=60, deadline=None)
@given(st.tuples(coords, coords))
def test_partition_property(x):
    tc = build_stratification(PANTS)
    hits = [
        i
        for i, s in enumerate(tc.strata)
        if all(satisfies(x, c) for c in s.cons)
    ]
    assert len(hits) == 1
    assert tc.strata[tc.stratum_at(x)] is tc.strata[hits[0]]


@settings(max_examples=40, deadline=None)
@given(st.tuples(coords, coords))
def test_partition_property_square(x):
    tc = build_stratification(SQUARE)
    hits = [i for i, s in enumerate(tc.strata) if all(satisfies(x, c) for c in s.cons)]
    assert len(hits) == 1


def test_witnesses_in_own_stratum():
    for sys in (PANTS, SQUARE, CI2):
        tc = build_stratification(sys)
        for s in tc.strata:
            for i in range(sys.r):
                assert trop_eval(sys, i, s.witness)[1] == s.active[i]


def test_open_poset_pants():
    tc = build_stratification(PANTS)
    poset = build_open_poset(tc)
    assert len(poset) == 1
    assert poset.opens[0] == frozenset(tc.flagged())


def test_open_poset_two_vertex():
    tc = build_stratification(SQUARE)
    poset = build_open_poset(tc)
    assert len(poset) == 3
    by_size = sorted(poset.opens, key=len)
    assert by_size[0] == by_size[1] & by_size[2]
    # adjacency brute force: U_e is contained in both vertex stars
    assert sum(1 for (i, j) in poset.order if i != j) == 2


def test_open_poset_three_chain():
    tc = build_stratification(examples.three_chain())
    assert len(tc.vertices) == 3
    poset = build_open_poset(tc)
    assert len(poset) == 5
    proper = [(i, j) for (i, j) in poset.order if i != j]
    assert len(proper) == 4  # U_e1 in U_v1, U_v2; U_e2 in U_v2, U_v3


def test_open_poset_intersection_closed():
    for sys in (PANTS, SQUARE, examples.three_chain()):
        tc = build_stratification(sys)
        poset = build_open_poset(tc)
        for a in poset.opens:
            for b in poset.opens:
                inter = a & b
                covered = frozenset().union(
                    *[
                        poset.opens[poset.open_of_stratum[s]]
                        for s in inter
                        if poset.opens[poset.open_of_stratum[s]] <= inter
                    ]
                ) if inter else frozenset()
                assert covered == inter


def test_saturate_vertex_star():
    tc = build_stratification(PANTS)
    ball = open_box((0, 0), Fraction(1, 10))
    assert saturate(ball, tc) == frozenset(tc.flagged())


def test_saturate_edge_only():
    tc = build_stratification(PANTS)
    ball = open_box((2, 2), Fraction(1, 10))  # inside the diagonal ray
    sat = saturate(ball, tc)
    assert len(sat) == 1
    (e,) = sat
    assert tc.strata[e].dim == 1 and tc.strata[e].active[0] == (1, 2)


def test_saturate_slab_both_vertices():
    tc = build_stratification(SQUARE)
    slab = open_box((Fraction(1, 2), Fraction(1, 2)), 2)
    assert saturate(slab, tc) == frozenset(tc.flagged())


def test_saturate_empty_region():
    tc = build_stratification(PANTS)
    bad = [constraint([1, 0], 0, "gt"), constraint([-1, 0], 0, "gt")]
    with pytest.raises(EmptyRegionError):
        saturate(bad, tc)


@settings(max_examples=30, deadline=None)
@given(st.tuples(coords, coords), st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8), st.fractions(min_value=1, max_value=2, max_denominator=4))
def test_saturate_monotone(center, r1, grow):
    tc = build_stratification(PANTS)
    small = open_box(center, r1)
    big = open_box(center, r1 * (1 + grow))
    assert saturate(small, tc) <= saturate(big, tc)


def test_zigzag_same_region():
    tc = build_stratification(PANTS)
    P = open_box((0, 0), Fraction(1, 4))
    chain = zigzag_connect(P, P, tc)
    assert len(chain) == 5
    target = saturate(P, tc)
    for region in chain:
        assert saturate(region, tc) == target


def test_zigzag_overlapping_balls():
    tc = build_stratification(PANTS)
    P1 = open_box((0, 0), Fraction(1, 2))
    P2 = open_box((Fraction(1, 8), Fraction(1, 8)), Fraction(1, 2))
    chain = zigzag_connect(P1, P2, tc)
    target = saturate(P1, tc)
    for region in chain:
        assert saturate(region, tc) == target
    assert len(chain) == 5


def test_zigzag_disjoint_balls_on_edge():
    tc = build_stratification(PANTS)
    P1 = open_box((1, 1), Fraction(1, 4))
    P2 = open_box((3, 3), Fraction(1, 4))
    chain = zigzag_connect(P1, P2, tc)
    for region in chain:
        assert saturate(region, tc) == saturate(P1, tc)


def test_zigzag_rejects_different_saturations():
    tc = build_stratification(PANTS)
    P1 = open_box((0, 0), Fraction(1, 4))
    P2 = open_box((2, 2), Fraction(1, 4))
    with pytest.raises(NotEquivalentError):
        zigzag_connect(P1, P2, tc)
