from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from tropmirror.qgeom import (
    affine_rank,
    constraint,
    convex_hull_facets,
    dot,
    feasible,
    fvec,
    hull_vertices,
    interpolate_affine,
    nullspace,
    satisfies,
    witness,
)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def test_witness_simple_box():
    cons = [
        constraint([1, 0], 0, "gt"),
        constraint([0, 1], 0, "gt"),
        constraint([-1, -1], -1, "gt"),
    ]
    w = witness(cons, 2)
    assert w is not None
    assert all(satisfies(w, c) for c in cons)


def test_witness_with_equalities():
    cons = [
        constraint([1, 1, 0], 2, "eq"),
        constraint([1, -1, 0], 0, "eq"),
        constraint([0, 0, 1], 5, "gt"),
    ]
    w = witness(cons, 3)
    assert w[0] == 1 and w[1] == 1 and w[2] > 5


def test_infeasible_strict():
    cons = [constraint([1], 0, "gt"), constraint([-1], 0, "ge")]
    assert not feasible(cons, 1)


def test_infeasible_equalities():
    cons = [constraint([1, 1], 0, "eq"), constraint([2, 2], 1, "eq")]
    assert not feasible(cons, 2)


def test_boundary_strictness():
    # x >= 1 and x <= 1 feasible; x > 1 and x <= 1 not
    assert feasible([constraint([1], 1, "ge"), constraint([-1], -1, "ge")], 1)
    assert not feasible([constraint([1], 1, "gt"), constraint([-1], -1, "ge")], 1)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.lists(fracs, min_size=2, max_size=2),
            fracs,
            st.sampled_from(["eq", "ge", "gt"]),
        ),
        min_size=1,
        max_size=6,
    )
)
def test_witness_satisfies_or_none(raw):
    cons = [constraint(a, b, rel) for a, b, rel in raw]
    w = witness(cons, 2)
    if w is not None:
        assert all(satisfies(w, c) for c in cons)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(fracs, min_size=2, max_size=2), min_size=1, max_size=5))
def test_witness_complete_on_point_systems(pts):
    # systems built from a known interior point must be feasible
    x0 = fvec(pts[0])
    cons = []
    for p in pts[1:]:
        a = fvec(p)
        if all(v == 0 for v in a):
            continue
        cons.append(constraint(a, dot(a, x0) - 1, "gt"))
    assert witness(cons, 2) is not None


def test_affine_rank():
    pts = [fvec([0, 0]), fvec([1, 0]), fvec([2, 0])]
    assert affine_rank(pts) == 1
    assert affine_rank([fvec([3, 4])]) == 0


def test_nullspace():
    ns = nullspace([[1, 1, 0]], 3)
    assert len(ns) == 2
    for v in ns:
        assert v[0] + v[1] == 0


def test_interpolate_affine():
    pts = [fvec([0, 0]), fvec([1, 0]), fvec([0, 1])]
    grad, c = interpolate_affine(pts, [Fraction(1), Fraction(2), Fraction(3)], 2)
    assert dot(grad, pts[1]) + c == 2
    assert dot(grad, pts[2]) + c == 3


def test_hull_facets_square():
    pts = [fvec(p) for p in [(0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2))]]
    facets = convex_hull_facets(pts)
    assert len(facets) == 4


def test_hull_vertices_square():
    pts = [fvec(p) for p in [(0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2))]]
    assert hull_vertices(pts) == [0, 1, 2, 3]
