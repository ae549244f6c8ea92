"""Builtin example systems used by tests, scripts, and the CLI demos."""

from __future__ import annotations

from fractions import Fraction

from .tropics import Factor, MonomialSystem


def pants_line(t=Fraction(20)) -> MonomialSystem:
    """1 + x1 + x2: the standard trivalent tropical line in the plane."""
    return MonomialSystem(
        n=2,
        factors=(Factor(points=((0, 0), (1, 0), (0, 1)), heights=(0, 0, 0)),),
        t=t,
    )


def square_example(t=Fraction(20)) -> MonomialSystem:
    """Unit-square monomials with one raised height: a two-vertex curve."""
    return MonomialSystem(
        n=2,
        factors=(
            Factor(points=((0, 0), (1, 0), (0, 1), (1, 1)), heights=(0, 0, 0, 1)),
        ),
        t=t,
    )


two_vertex_curve = square_example


def three_chain(t=Fraction(20)) -> MonomialSystem:
    """Three trivalent vertices in a row (collinear monomials plus one apex)."""
    return MonomialSystem(
        n=2,
        factors=(
            Factor(
                points=((0, 0), (1, 0), (2, 0), (3, 0), (0, 1)),
                heights=(0, 0, 1, 3, 0),
            ),
        ),
        t=t,
    )


def four_chain(t=Fraction(20)) -> MonomialSystem:
    """Four-vertex path, a small tree for layering tests."""
    return MonomialSystem(
        n=2,
        factors=(
            Factor(
                points=((0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1)),
                heights=(0, 0, 1, 3, 6, 0),
            ),
        ),
        t=t,
    )


def ci_two_lines(t=Fraction(20)) -> MonomialSystem:
    """Two transverse tropical lines in the plane meeting in one point."""
    return MonomialSystem(
        n=2,
        factors=(
            Factor(points=((0, 0), (1, 0), (0, 1)), heights=(0, 0, 0)),
            Factor(points=((0, 0), (1, 0), (0, 1)), heights=(0, 1, 2)),
        ),
        t=t,
    )


def ci_nonunimodular(t=Fraction(20)) -> MonomialSystem:
    """x1+x2+x3 and x1^2 x2 + x3: the doubled-volume simplex example."""
    return MonomialSystem(
        n=3,
        factors=(
            Factor(points=((1, 0, 0), (0, 1, 0), (0, 0, 1)), heights=(0, 0, 0)),
            Factor(points=((2, 1, 0), (0, 0, 1)), heights=(0, 0)),
        ),
        t=t,
    )


def half_plane(t=Fraction(20)) -> MonomialSystem:
    """Two monomials on a line: the smallest possible system."""
    return MonomialSystem(
        n=1,
        factors=(Factor(points=((0,), (1,)), heights=(0, 0)),),
        t=t,
    )


ALL = {
    "pants": pants_line,
    "square": square_example,
    "three-chain": three_chain,
    "four-chain": four_chain,
    "ci-two-lines": ci_two_lines,
    "ci-nonunimodular": ci_nonunimodular,
    "half-plane": half_plane,
}
