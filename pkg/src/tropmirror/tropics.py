"""Piecewise-linear maxima of monomial families, their corner loci, and the
vertex-star topology on the corner-locus complex.

A MonomialSystem is r families of exponent points with rational heights; each
family defines a convex PL function max_a(<x,a> - rho(a)) whose tie locus is a
polyhedral complex.  build_stratification enumerates all strata of the common
refinement exactly (active sets, witnesses, H-descriptions, closure order) and
flags the sub-complex where every family ties.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import qgeom
from .qgeom import Constraint, Vec, constraint, dot, fvec, satisfies


class DimensionMismatchError(ValueError):
    pass


class UnknownMonomialError(KeyError):
    pass


class NonTransverseError(ValueError):
    pass


class EmptyRegionError(ValueError):
    pass


class NotEquivalentError(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    """One monomial family: exponent points, heights, complex coefficients."""

    points: tuple[tuple[int, ...], ...]
    heights: tuple[Fraction, ...]
    coeffs: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        hts = tuple(Fraction(h) for h in self.heights)
        if len(set(pts)) != len(pts):
            raise ValueError("points within a factor must be distinct")
        if len(pts) < 2:
            raise ValueError("each factor needs at least two monomials")
        if len(hts) != len(pts):
            raise ValueError("need one height per point")
        coeffs = self.coeffs or tuple((Fraction(1), Fraction(0)) for _ in pts)
        coeffs = tuple((Fraction(a), Fraction(b)) for a, b in coeffs)
        if len(coeffs) != len(pts):
            raise ValueError("need one coefficient per point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "heights", hts)
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class MonomialSystem:
    """Input data: r factors of monomials in n variables plus a parameter t > 1."""

    n: int
    factors: tuple[Factor, ...]
    t: Fraction = Fraction(20)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 1:
            raise ValueError("parameter t must exceed 1")
        for f in self.factors:
            if any(len(p) != self.n for p in f.points):
                raise DimensionMismatchError("exponent length != n")

    @property
    def r(self) -> int:
        return len(self.factors)


def trop_eval(sys: MonomialSystem, i: int, x) -> tuple[Fraction, tuple[int, ...]]:
    """Value and exact argmax indices of max_a(<x,a> - rho_i(a)) at x."""
    if len(x) != sys.n:
        raise DimensionMismatchError(f"point has length {len(x)}, expected {sys.n}")
    xq = fvec(x)
    f = sys.factors[i]
    vals = [dot(xq, fvec(a)) - h for a, h in zip(f.points, f.heights)]
    best = max(vals)
    return best, tuple(k for k, v in enumerate(vals) if v == best)


def tropical_distance(sys: MonomialSystem, i: int, x, a) -> Fraction:
    """Dominance gap of monomial a at x: max-value minus a's own value."""
    f = sys.factors[i]
    key = tuple(int(v) for v in a)
    try:
        k = f.points.index(key)
    except ValueError:
        raise UnknownMonomialError(f"{key} is not a monomial of factor {i}")
    best, _ = trop_eval(sys, i, x)
    xq = fvec(x)
    return best - (dot(xq, fvec(key)) - f.heights[k])


@dataclass(frozen=True)
class Stratum:
    """A cell of the refinement: per-factor active sets plus exact geometry."""

    active: tuple[tuple[int, ...], ...]  # per factor, sorted indices into A_i
    dim: int
    witness: Vec
    cons: tuple[Constraint, ...]
    unbounded: bool
    on_complex: bool  # every factor ties (active set size >= 2)
    direction: Vec | None = None  # line direction for 1-dimensional strata
    interval: tuple[Fraction | None, Fraction | None] | None = None


@dataclass(frozen=True)
class TropicalComplex:
    """All strata of the refinement with closure order and the tie sub-complex."""

    sys: MonomialSystem
    strata: tuple[Stratum, ...]
    closure: frozenset[tuple[int, int]]  # (i, j): stratum i lies in closure of j
    vertices: tuple[int, ...]  # flagged 0-dimensional strata
    edges: tuple[int, ...]  # flagged 1-dimensional strata
    edge_vertices: dict  # edge id -> tuple of adjacent vertex ids

    def flagged(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.strata) if s.on_complex)

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.closure

    def stratum_at(self, x) -> int:
        """Index of the unique stratum whose relative interior contains x."""
        active = tuple(trop_eval(self.sys, i, x)[1] for i in range(self.sys.r))
        for idx, s in enumerate(self.strata):
            if s.active == active:
                return idx
        raise ValueError(f"no stratum with active pattern {active}")


def _pmap(fn, items):
    threads = int(os.environ.get("TROPMIRROR_THREADS", "1"))
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _factor_constraints(factor: Factor, active: tuple[int, ...], n: int):
    """Equalities among active monomials and strict dominance over the rest."""
    cons = []
    a0 = active[0]
    p0, h0 = fvec(factor.points[a0]), factor.heights[a0]
    for a in active[1:]:
        pa, ha = fvec(factor.points[a]), factor.heights[a]
        cons.append((tuple(x - y for x, y in zip(pa, p0)), ha - h0, "eq"))
    for c in range(len(factor.points)):
        if c in active:
            continue
        pc, hc = fvec(factor.points[c]), factor.heights[c]
        cons.append((tuple(x - y for x, y in zip(p0, pc)), h0 - hc, "gt"))
    return cons


def _factor_active_sets(factor: Factor, n: int):
    """All realizable active sets of one factor, each with a witness.

    Candidates are lift-closures of affinely independent subsets; realizability
    is an exact feasibility test on the H-description.
    """
    pts = [fvec(p) for p in factor.points]
    hts = list(factor.heights)
    lifted = [tuple(list(p) + [h]) for p, h in zip(pts, hts)]
    d = qgeom.affine_rank(pts)
    candidates: set[tuple[int, ...]] = set()
    idxs = range(len(pts))
    for size in range(1, d + 2):
        for sub in combinations(idxs, size):
            if qgeom.affine_rank([lifted[i] for i in sub]) != size - 1:
                continue
            closure = tuple(
                i
                for i in idxs
                if qgeom.affine_rank([lifted[j] for j in sub] + [lifted[i]]) == size - 1
            )
            candidates.add(closure)
    out = []
    for active in sorted(candidates):
        cons = _factor_constraints(factor, active, n)
        w = qgeom.witness(cons, n)
        if w is not None:
            out.append((active, cons, w))
    return out


def build_stratification(sys: MonomialSystem) -> TropicalComplex:
    """Enumerate all strata of the common refinement of the factor tie loci.

    Raises NonTransverseError when some joint stratum is larger than the sum
    of the factor codimensions predicts.
    """
    n = sys.n
    per_factor = [_factor_active_sets(f, n) for f in sys.factors]

    def joint(combo):
        actives = tuple(c[0] for c in combo)
        cons = [con for c in combo for con in c[1]]
        w = qgeom.witness(cons, n)
        if w is None:
            return None
        eqrows = [list(a) for a, b, rel in cons if rel == "eq"]
        rank = qgeom._rank(eqrows) if eqrows else 0
        dim = n - rank
        expected_codim = sum(
            qgeom.affine_rank([fvec(sys.factors[i].points[k]) for k in act])
            for i, act in enumerate(actives)
        )
        if rank != expected_codim:
            raise NonTransverseError(
                f"stratum {actives} has codimension {rank}, expected {expected_codim}"
            )
        return actives, tuple(qgeom.constraint(a, b, rel) for a, b, rel in cons), w, dim

    results = [r for r in _pmap(joint, list(product(*per_factor))) if r is not None]
    results.sort(key=lambda r: r[0])

    strata = []
    for actives, cons, w, dim in results:
        on_complex = all(len(a) >= 2 for a in actives)
        unbounded = _is_unbounded(cons, n)
        direction = None
        interval = None
        if dim == 1:
            direction, interval = _edge_geometry(cons, w, n)
        strata.append(
            Stratum(
                active=actives,
                dim=dim,
                witness=w,
                cons=cons,
                unbounded=unbounded,
                on_complex=on_complex,
                direction=direction,
                interval=interval,
            )
        )

    closure = set()
    for i, si in enumerate(strata):
        for j, sj in enumerate(strata):
            if all(set(ai) >= set(aj) for ai, aj in zip(si.active, sj.active)):
                closure.add((i, j))
    vertices = tuple(i for i, s in enumerate(strata) if s.on_complex and s.dim == 0)
    edges = tuple(i for i, s in enumerate(strata) if s.on_complex and s.dim == 1)
    edge_vertices = {
        e: tuple(v for v in vertices if (v, e) in closure) for e in edges
    }
    return TropicalComplex(
        sys=sys,
        strata=tuple(strata),
        closure=frozenset(closure),
        vertices=vertices,
        edges=edges,
        edge_vertices=edge_vertices,
    )


def _is_unbounded(cons, n: int) -> bool:
    rec_eq = [(a, Fraction(0), "eq") for a, b, rel in cons if rel == "eq"]
    rec_ge = [(a, Fraction(0), "ge") for a, b, rel in cons if rel != "eq"]
    for k in range(n):
        for sign in (1, -1):
            e = [Fraction(0)] * n
            e[k] = Fraction(sign)
            probe = rec_eq + rec_ge + [(tuple(e), Fraction(1), "eq")]
            if qgeom.feasible(probe, n):
                return True
    return False


def _edge_geometry(cons, w, n: int):
    eqrows = [list(a) for a, b, rel in cons if rel == "eq"]
    ns = qgeom.nullspace(eqrows, n) if eqrows else [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
    if len(ns) != 1:
        return None, None
    d = ns[0]
    # canonical orientation: first nonzero component positive
    lead = next(x for x in d if x != 0)
    if lead < 0:
        d = tuple(-x for x in d)
    lo: Fraction | None = None
    hi: Fraction | None = None
    for a, b, rel in cons:
        if rel == "eq":
            continue
        ad = dot(a, d)
        aw = dot(a, w)
        if ad > 0:
            cand = (b - aw) / ad
            lo = cand if lo is None else max(lo, cand)
        elif ad < 0:
            cand = (b - aw) / ad
            hi = cand if hi is None else min(hi, cand)
    return d, (lo, hi)


@dataclass(frozen=True)
class OpenPoset:
    """Basis opens of the vertex-star topology on the tie sub-complex."""

    opens: tuple[frozenset[int], ...]  # each open is a set of stratum ids
    open_of_stratum: dict  # flagged stratum id -> index into opens
    order: frozenset[tuple[int, int]]  # (i, j): opens[i] subset of opens[j]

    def __len__(self) -> int:
        return len(self.opens)


def build_open_poset(tc: TropicalComplex) -> OpenPoset:
    """U_v = strata adjacent to v; U_S = intersection over vertices adjacent to S."""
    flagged = tc.flagged()
    star: dict[int, frozenset[int]] = {}
    for v in tc.vertices:
        star[v] = frozenset(s for s in flagged if tc.leq(v, s))
    opens_list: list[frozenset[int]] = []
    open_of: dict[int, int] = {}
    for s in flagged:
        adjacent = [v for v in tc.vertices if tc.leq(v, s)]
        if adjacent:
            u = frozenset.intersection(*(star[v] for v in adjacent))
        else:
            u = frozenset(flagged)
        if u not in opens_list:
            opens_list.append(u)
        open_of[s] = opens_list.index(u)
    order = frozenset(
        (i, j)
        for i in range(len(opens_list))
        for j in range(len(opens_list))
        if opens_list[i] <= opens_list[j]
    )
    return OpenPoset(opens=tuple(opens_list), open_of_stratum=open_of, order=order)


def open_box(center, radius) -> list[Constraint]:
    """Open axis-aligned box, the working stand-in for a small ball."""
    c = fvec(center)
    r = Fraction(radius)
    cons = []
    for k in range(len(c)):
        e = [Fraction(0)] * len(c)
        e[k] = Fraction(1)
        cons.append(constraint(e, c[k] - r, "gt"))
        e2 = [Fraction(0)] * len(c)
        e2[k] = Fraction(-1)
        cons.append(constraint(e2, -c[k] - r, "gt"))
    return cons


def saturate(P: list[Constraint], tc: TropicalComplex) -> frozenset[int]:
    """Ids of tie-complex strata whose relative interior meets the open region P."""
    n = tc.sys.n
    if not qgeom.feasible(list(P), n):
        raise EmptyRegionError("region is empty")
    hits = []
    for s in tc.flagged():
        cons = list(P) + list(tc.strata[s].cons)
        if qgeom.feasible(cons, n):
            hits.append(s)
    return frozenset(hits)


def _region_vertices(cons, n: int):
    """Vertices of the closed region described by cons (eq kept, gt -> ge)."""
    closed = [(a, b, "eq" if rel == "eq" else "ge") for a, b, rel in cons]
    eqs = [(a, b) for a, b, rel in closed if rel == "eq"]
    ineqs = [(a, b) for a, b, rel in closed if rel == "ge"]
    verts: set[Vec] = set()
    need = n - qgeom._rank([list(a) for a, b in eqs]) if eqs else n
    for sub in combinations(range(len(ineqs)), min(need, len(ineqs))):
        aug = [list(a) + [b] for a, b in eqs] + [list(ineqs[i][0]) + [ineqs[i][1]] for i in sub]
        if qgeom._rank([row[:-1] for row in aug]) != n:
            continue
        x = qgeom.solve_underdetermined(aug, n)
        if x is None:
            continue
        xt = tuple(x)
        if all(satisfies(xt, (a, b, "ge")) for a, b in ineqs) and all(
            dot(a, xt) == b for a, b in eqs
        ):
            verts.add(xt)
    return sorted(verts)


def _barycenter(points):
    n = len(points[0])
    k = len(points)
    return tuple(sum((p[i] for p in points), Fraction(0)) / k for i in range(n))


def _hull_region(points, r: Fraction, n: int):
    """Open L-infinity r-neighborhood of conv(points): strict facet constraints."""
    corners = list(product(*[(-r, r)] * n))
    cloud = [tuple(p[i] + c[i] for i in range(n)) for p in points for c in corners]
    facets = qgeom.convex_hull_facets(cloud)
    # facets give a.x <= b; the open region is a.x < b, i.e. (-a).x > -b
    cons = [constraint(tuple(-x for x in a), -b, "gt") for a, b in facets]
    return cons, cloud


def zigzag_connect(P1, P2, tc: TropicalComplex):
    """Chain P1 >= Q1 <= Q12 >= Q2 <= P2 of regions with a common saturation.

    Each Q follows the retraction recipe: barycenters of the closed pieces
    cut by the minimal strata, their convex hull, and a small box
    neighborhood, shrunk until the saturation matches.
    """
    n = tc.sys.n
    sat1 = saturate(P1, tc)
    sat2 = saturate(P2, tc)
    if sat1 != sat2:
        raise NotEquivalentError(f"saturations differ: {sorted(sat1)} vs {sorted(sat2)}")
    target = sat1
    for P in (P1, P2):
        if _is_unbounded(list(P), n):
            raise ValueError("zigzag regions must be bounded")

    minimal = [
        s
        for s in target
        if not any(t != s and tc.leq(t, s) for t in target)
    ]

    def delta_points(P):
        pts = []
        for s in minimal:
            cons = list(P) + list(tc.strata[s].cons)
            verts = _region_vertices(cons, n)
            if not verts:
                raise NotEquivalentError(f"minimal stratum {s} misses a region")
            pts.append(_barycenter(verts))
        return pts

    d1 = delta_points(P1)
    d2 = delta_points(P2)

    def admissible(points, inside_of=None):
        r = Fraction(1)
        for _ in range(80):
            cons, cloud = _hull_region(points, r, n)
            ok = True
            if inside_of is not None:
                ok = all(all(satisfies(p, c) for c in inside_of) for p in cloud)
            if ok and saturate(cons, tc) == target:
                return cons
            r /= 2
        raise RuntimeError("no admissible neighborhood radius found")

    Q1 = admissible(d1, inside_of=P1)
    Q2 = admissible(d2, inside_of=P2)
    Q12 = admissible(d1 + d2)
    chain = [list(P1), Q1, Q12, Q2, list(P2)]
    for region in chain:
        assert saturate(region, tc) == target
    return chain
