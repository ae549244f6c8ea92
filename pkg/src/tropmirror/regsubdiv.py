"""Regular subdivisions of lattice point configurations from height functions.

A subdivision is stored as the list of maximal cells, each cell being the full
set of configuration points lying on the corresponding lower-hull face (not
just its vertices).  Heights are exact rationals and all hull computations are
over Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exactlat import SimplicialCone, lattice_index
from . import qgeom
from .qgeom import dot, fvec


class DegeneratePolytopeError(ValueError):
    pass


class NotTriangulationError(ValueError):
    pass


class OriginMissingError(ValueError):
    pass


@dataclass(frozen=True)
class RegularSubdivision:
    """Lower-hull subdivision of a point configuration induced by heights."""

    points: tuple[tuple[int, ...], ...]
    heights: tuple[Fraction, ...]
    cells: tuple[tuple[int, ...], ...]  # index sets into points, sorted
    is_triangulation: bool
    degenerate: bool = False  # conv(points) not full-dimensional, accepted by opt-in

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def cell_points(self, cell) -> list[tuple[int, ...]]:
        return [self.points[i] for i in cell]

    def normalized_cell_volume(self, cell) -> int:
        """Lattice-normalized volume of a simplex cell."""
        pts = self.cell_points(cell)
        base = pts[0]
        edges = [tuple(p[i] - base[i] for i in range(self.dim)) for p in pts[1:]]
        return lattice_index(SimplicialCone(edges))


def regular_subdivision(points, heights, allow_degenerate: bool = False) -> RegularSubdivision:
    """Projection of the lower hull of the lifted configuration {(p, h(p))}.

    Maximal cells are found by brute force over spanning subsets: an affine
    function that matches the heights on a spanning subset and lies weakly
    below them everywhere supports a lower-hull cell, the cell being all
    points where it is exact.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("configuration points must be distinct")
    hts = [Fraction(h) for h in heights]
    if len(hts) != len(pts):
        raise ValueError("need one height per point")
    n = len(pts[0])
    qpts = [fvec(p) for p in pts]
    d = qgeom.affine_rank(qpts)
    if d < n and not allow_degenerate:
        raise DegeneratePolytopeError(
            f"convex hull has dimension {d} < {n}; pass allow_degenerate to accept"
        )
    cells: set[tuple[int, ...]] = set()
    for sub in combinations(range(len(pts)), d + 1):
        if qgeom.affine_rank([qpts[i] for i in sub]) != d:
            continue
        aff = qgeom.interpolate_affine([qpts[i] for i in sub], [hts[i] for i in sub], n)
        if aff is None:
            continue
        grad, const = aff
        vals = [dot(grad, q) + const for q in qpts]
        if any(v > h for v, h in zip(vals, hts)):
            continue
        cell = tuple(i for i in range(len(pts)) if vals[i] == hts[i])
        cells.add(cell)
    cell_list = sorted(cells)
    is_tri = all(
        len(c) == d + 1 and qgeom.affine_rank([qpts[i] for i in c]) == d for c in cell_list
    )
    return RegularSubdivision(
        points=tuple(pts),
        heights=tuple(hts),
        cells=tuple(cell_list),
        is_triangulation=is_tri,
        degenerate=d < n,
    )


def subdivision_faces(sub: RegularSubdivision) -> list[tuple[int, ...]]:
    """All faces of the subdivision as point-index sets, maximal cells included.

    Faces of a cell are its exposed subsets; the union over cells gives the
    face poset of the subdivision, ordered by inclusion.
    """
    faces: set[tuple[int, ...]] = set()
    for cell in sub.cells:
        faces.add(cell)
        faces |= _proper_faces_of_cell(sub, cell)
    return sorted(faces, key=lambda f: (len(f), f))


def _proper_faces_of_cell(sub, cell) -> set[tuple[int, ...]]:
    pts = {i: fvec(sub.points[i]) for i in cell}
    d = qgeom.affine_rank(list(pts.values()))
    out: set[tuple[int, ...]] = set()
    stack = [(cell, d)]
    seen = {cell}
    while stack:
        face, fdim = stack.pop()
        if fdim == 0:
            continue
        for bsub in combinations(face, fdim):
            bq = [pts[i] for i in bsub]
            if qgeom.affine_rank(bq) != fdim - 1:
                continue
            # hyperplane through bsub within aff(face): exposed side test
            base = bq[0]
            diffs = [[q[i] - base[i] for i in range(sub.dim)] for q in bq[1:]]
            normals = qgeom.nullspace(diffs, sub.dim)
            for a in normals:
                b = dot(a, base)
                vals = {i: dot(pts[i], a) for i in face}
                if all(vals[i] >= b for i in face):
                    sign = 1
                elif all(vals[i] <= b for i in face):
                    sign = -1
                else:
                    continue
                sub_face = tuple(i for i in face if vals[i] == b)
                if len(sub_face) == len(face):
                    continue
                if sub_face not in seen:
                    seen.add(sub_face)
                    out.add(sub_face)
                    stack.append((sub_face, qgeom.affine_rank([pts[i] for i in sub_face])))
    return out


def is_unimodular(sub: RegularSubdivision):
    """(flag, offending cells): every cell of normalized volume one?"""
    if not sub.is_triangulation:
        raise NotTriangulationError("unimodularity is defined for triangulations")
    offenders = [c for c in sub.cells if sub.normalized_cell_volume(c) != 1]
    return (len(offenders) == 0, offenders)


def is_star_shaped(sub: RegularSubdivision) -> bool:
    """Every maximal cell not lying in the boundary contains the origin."""
    try:
        origin = sub.points.index(tuple([0] * sub.dim))
    except ValueError:
        raise OriginMissingError("configuration does not contain the origin")
    if sub.degenerate:
        raise DegeneratePolytopeError("star-shape test needs a full-dimensional configuration")
    facets = qgeom.convex_hull_facets([fvec(p) for p in sub.points])
    for cell in sub.cells:
        if origin in cell:
            continue
        on_boundary = any(
            all(dot(fvec(sub.points[i]), a) == b for i in cell) for a, b in facets
        )
        if not on_boundary:
            return False
    return True


def ci_newton_polytope(sys) -> tuple[tuple[int, ...], ...]:
    """Vertices of Conv(0, -Delta_1 x e_1, ..., -Delta_r x e_r) in Z^(n+r)."""
    n, r = sys.n, sys.r
    verts: list[tuple[int, ...]] = [tuple([0] * (n + r))]
    for i, factor in enumerate(sys.factors):
        pts = [fvec(p) for p in factor.points]
        for vi in qgeom.hull_vertices(pts):
            a = factor.points[vi]
            unit = [0] * r
            unit[i] = 1
            verts.append(tuple([-x for x in a] + unit))
    return tuple(verts)


def lifted_configuration(sys):
    """Point configuration {0} u {(-a, e_i)} with heights 0 and rho_i(a).

    This is the configuration whose origin cells generate the dual fan; the
    heights are inherited from the factors so the subdivision is the one the
    tropical data induces.
    """
    n, r = sys.n, sys.r
    pts: list[tuple[int, ...]] = [tuple([0] * (n + r))]
    hts: list[Fraction] = [Fraction(0)]
    labels: list[tuple[int, tuple[int, ...] | None]] = [(-1, None)]
    for i, factor in enumerate(sys.factors):
        for a, h in zip(factor.points, factor.heights):
            unit = [0] * r
            unit[i] = 1
            pts.append(tuple([-x for x in a] + unit))
            hts.append(Fraction(h))
            labels.append((i, tuple(a)))
    return pts, hts, labels


def lifted_subdivision(sys) -> tuple[RegularSubdivision, list]:
    pts, hts, labels = lifted_configuration(sys)
    sub = regular_subdivision(pts, hts, allow_degenerate=True)
    return sub, labels
