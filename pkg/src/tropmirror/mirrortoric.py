"""The toric side: fan from the induced subdivision, per-cone monomial charts
with transitions, the product/sum superpotential, the noncompact moment
polyhedron with its exact face lattice, and the duality and critical-locus
reports that cross-check the toric data against the tropical complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import qgeom
from .exactlat import (
    NotFullDimensionalError,
    SimplicialCone,
    cone_smooth,
    dual_basis,
    lattice_index,
    rational_dual_basis,
)
from .qgeom import Constraint, Vec, dot, fvec
from .regsubdiv import NotTriangulationError, RegularSubdivision, lifted_subdivision
from .tropics import MonomialSystem, TropicalComplex, trop_eval

RayLabel = tuple[int, tuple[int, ...]]  # (factor index, exponent point)


class NonSimplicialError(ValueError):
    pass


class NegativeExponentError(AssertionError):
    pass


class DualityFailureError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """Rational fan with labeled primitive rays; cones are ray-index sets."""

    ambient_dim: int
    rays: tuple[tuple[int, ...], ...]
    ray_labels: tuple[RayLabel, ...]
    cones: tuple[frozenset[int], ...]
    max_cones: tuple[int, ...]

    def cone_dim(self, c: int) -> int:
        from .exactlat import IntMatrix

        rays = [self.rays[i] for i in self.cones[c]]
        return IntMatrix(rays).rank() if rays else 0

    def cone_simplicial(self, c: int) -> bool:
        return self.cone_dim(c) == len(self.cones[c])

    def cone_smooth(self, c: int) -> bool:
        rays = [self.rays[i] for i in self.cones[c]]
        if not rays:
            return True
        return self.cone_simplicial(c) and cone_smooth(
            SimplicialCone(rays, self.ambient_dim)
        )

    def cone_index(self, c: int) -> int:
        """Lattice index for full-dimensional simplicial cones."""
        rays = [self.rays[i] for i in self.cones[c]]
        return lattice_index(SimplicialCone(rays, self.ambient_dim))

    def cone_factor_split(self, c: int) -> dict[int, tuple[int, ...]]:
        """Ray ids of the cone grouped by the factor their label carries."""
        out: dict[int, list[int]] = {}
        for rid in sorted(self.cones[c]):
            out.setdefault(self.ray_labels[rid][0], []).append(rid)
        return {k: tuple(v) for k, v in out.items()}


def build_fan(sub: RegularSubdivision, r: int, labels=None) -> Fan:
    """Fan generated by the origin cells of the lifted subdivision.

    `sub` must be the regular subdivision of the configuration
    {0} u {(-a, e_i)}; each cell through the origin spans a cone on its other
    points.  Labels default to reading the factor/point back off the rays.
    """
    if not sub.is_triangulation:
        raise NotTriangulationError("fan construction needs simplex cells")
    dim = sub.dim
    n = dim - r
    origin = tuple([0] * dim)
    if origin not in sub.points:
        raise ValueError("lifted configuration must contain the origin")
    o = sub.points.index(origin)

    ray_ids: dict[tuple[int, ...], int] = {}
    rays: list[tuple[int, ...]] = []
    ray_labels: list[RayLabel] = []

    def ray_id(pt: tuple[int, ...]) -> int:
        if pt not in ray_ids:
            ray_ids[pt] = len(rays)
            rays.append(pt)
            if labels is not None:
                ray_labels.append(labels[sub.points.index(pt)])
            else:
                unit = pt[n:]
                factor = unit.index(1)
                ray_labels.append((factor, tuple(-x for x in pt[:n])))
        return ray_ids[pt]

    cone_set: set[frozenset[int]] = set()
    max_cones: list[frozenset[int]] = []
    for cell in sub.cells:
        if o not in cell:
            continue
        ids = frozenset(ray_id(sub.points[i]) for i in cell if i != o)
        max_cones.append(ids)
        for size in range(0, len(ids) + 1):
            for face in combinations(sorted(ids), size):
                cone_set.add(frozenset(face))
    cones = sorted(cone_set, key=lambda c: (len(c), sorted(c)))
    cone_idx = {c: i for i, c in enumerate(cones)}
    return Fan(
        ambient_dim=dim,
        rays=tuple(rays),
        ray_labels=tuple(ray_labels),
        cones=tuple(cones),
        max_cones=tuple(sorted(cone_idx[c] for c in set(max_cones))),
    )


def fan_from_system(sys: MonomialSystem) -> Fan:
    sub, labels = lifted_subdivision(sys)
    lab = [labels[i] for i in range(len(sub.points))]
    return build_fan(sub, sys.r, labels=lab)


@dataclass(frozen=True)
class Chart:
    """Affine chart of a maximal cone: one monomial coordinate per ray.

    Coordinates are sorted by label; eta weights pair Kronecker-delta with the
    cone's rays.  Stacky charts (index > 1) carry the finite cover group data
    instead of integral weights.
    """

    cone: int
    labels: tuple[RayLabel, ...]
    weights: tuple[tuple[Fraction, ...], ...]
    stacky: bool
    index: int
    group_order: int


@dataclass(frozen=True)
class TransitionMap:
    """Target coordinates as monomials in source coordinates: integer exponents."""

    source: int  # chart index
    target: int
    exponents: tuple[tuple[int, ...], ...]  # rows: target coords, cols: source coords


def charts(fan: Fan) -> tuple[tuple[Chart, ...], tuple[TransitionMap, ...]]:
    """Charts for all maximal cones plus transitions for adjacent pairs."""
    out: list[Chart] = []
    for ci, c in enumerate(fan.max_cones):
        cone = fan.cones[c]
        if not fan.cone_simplicial(c):
            raise NonSimplicialError(f"cone {c} is not simplicial")
        ids = sorted(cone, key=lambda i: fan.ray_labels[i])
        rays = [fan.rays[i] for i in ids]
        if len(rays) != fan.ambient_dim:
            raise NotFullDimensionalError(
                "charts need full-dimensional maximal cones (no torus factor)"
            )
        sc = SimplicialCone(rays, fan.ambient_dim)
        index = lattice_index(sc)
        if index == 1:
            weights = tuple(tuple(Fraction(x) for x in eta) for eta in dual_basis(sc))
            stacky = False
        else:
            weights = rational_dual_basis(sc)
            stacky = True
        out.append(
            Chart(
                cone=c,
                labels=tuple(fan.ray_labels[i] for i in ids),
                weights=weights,
                stacky=stacky,
                index=index,
                group_order=index,
            )
        )

    transitions: list[TransitionMap] = []
    for i, ch_i in enumerate(out):
        rays_i = [fan.rays[r] for r in sorted(fan.cones[ch_i.cone], key=lambda k: fan.ray_labels[k])]
        for j, ch_j in enumerate(out):
            if ch_i.stacky or ch_j.stacky:
                continue
            shared = fan.cones[ch_i.cone] & fan.cones[ch_j.cone]
            if i != j and len(shared) != fan.ambient_dim - 1:
                continue  # transitions only for identical or facet-adjacent cones
            rows = []
            for eta in ch_j.weights:
                row = tuple(dot(eta, fvec(u)) for u in rays_i)
                if any(x.denominator != 1 for x in row):
                    raise NegativeExponentError("non-integral transition exponent")
                rows.append(tuple(int(x) for x in row))
            transitions.append(TransitionMap(source=i, target=j, exponents=tuple(rows)))
    return tuple(out), tuple(transitions)


def superpotential(chart: Chart) -> tuple[tuple[int, ...], ...]:
    """Exponent rows of the per-factor monomials v_i in chart coordinates.

    Row i gives v_i = prod_j y_j^(row[j]); the full function is their sum.
    Exponents are the pairings of the weight (0,...,0,e_i) with the rays and
    must come out nonnegative (0/1 on valid input).
    """
    if chart.stacky:
        raise NonSimplicialError("superpotential coordinates need a smooth chart")
    factors = sorted({lab[0] for lab in chart.labels})
    m = len(chart.labels)
    n = m - len(factors)
    rows = []
    for i in factors:
        # v_i carries the weight (0,...,0, e_i); expand it in the eta basis:
        # the coefficient of coordinate j is that weight paired with ray u_j,
        # but in the eta basis the expansion coefficients are exactly the
        # pairings with the rays, recovered through the inverse relation.
        target = [Fraction(0)] * m
        target[n + i] = Fraction(1)
        # solve sum_j c_j eta_j = target exactly
        aug = [[chart.weights[j][k] for j in range(m)] + [target[k]] for k in range(m)]
        sol = qgeom.solve_underdetermined(aug, m)
        if sol is None:
            raise NegativeExponentError("superpotential weight not in the chart lattice")
        row = []
        for c in sol:
            if c.denominator != 1 or c < 0:
                raise NegativeExponentError(f"bad superpotential exponent {c}")
            row.append(int(c))
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class Face:
    active: frozenset[int]  # indices of tight constraints
    dim: int
    witness: Vec


@dataclass(frozen=True)
class MomentPolytope:
    """H-polyhedron {(m,u) : u_i >= <m,a> - rho_i(a)} with its face lattice."""

    n: int
    r: int
    constraints: tuple[Constraint, ...]  # all "ge"
    con_labels: tuple[RayLabel, ...]
    faces: tuple[Face, ...]

    @property
    def dim(self) -> int:
        return self.n + self.r

    def facets(self) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.faces) if f.dim == self.dim - 1)

    def face_leq(self, i: int, j: int) -> bool:
        """Face i contained in face j."""
        return self.faces[i].active >= self.faces[j].active


def moment_polytope(sys: MonomialSystem) -> MomentPolytope:
    """Face lattice of the graph-above region of the PL maxima, exactly."""
    n, r = sys.n, sys.r
    dim = n + r
    cons: list[Constraint] = []
    labels: list[RayLabel] = []
    for i, f in enumerate(sys.factors):
        for a, h in zip(f.points, f.heights):
            row = [-Fraction(x) for x in a] + [Fraction(0)] * r
            row[n + i] = Fraction(1)
            cons.append((tuple(row), -Fraction(h), "ge"))
            labels.append((i, a))
    # drop redundant inequalities (monomials never uniquely dominant)
    keep: list[int] = []
    for k in range(len(cons)):
        others = [cons[j] for j in keep] + cons[k + 1 :]
        a, b, _ = cons[k]
        test = [(tuple(-x for x in a), -b, "gt")] + others
        if qgeom.feasible(test, dim):
            keep.append(k)
    cons = [cons[k] for k in keep]
    labels = [labels[k] for k in keep]

    faces: dict[frozenset[int], Face] = {}
    visited: set[frozenset[int]] = set()

    def explore(active: frozenset[int]):
        if active in visited:
            return
        visited.add(active)
        sysc = [
            (a, b, "eq") if k in active else (a, b, "gt")
            for k, (a, b, _) in enumerate(cons)
        ]
        w = qgeom.witness(sysc, dim)
        if w is None:
            # either empty, or some inactive constraint is forced tight
            relaxed = [
                (a, b, "eq") if k in active else (a, b, "ge")
                for k, (a, b, _) in enumerate(cons)
            ]
            if qgeom.witness(relaxed, dim) is None:
                return
            forced = None
            for k in range(len(cons)):
                if k in active:
                    continue
                probe = list(relaxed)
                a, b, _ = cons[k]
                probe[k] = (a, b, "gt")
                if qgeom.witness(probe, dim) is None:
                    forced = k
                    break
            if forced is not None:
                explore(active | {forced})
            return
        eqrows = [list(cons[k][0]) for k in active]
        rank = qgeom._rank(eqrows) if eqrows else 0
        faces[active] = Face(active=active, dim=dim - rank, witness=w)
        for k in range(len(cons)):
            if k not in active:
                explore(active | {k})

    explore(frozenset())
    # canonicalize: merge faces whose closures coincide (same witness geometry)
    ordered = sorted(faces.values(), key=lambda f: (f.dim, sorted(f.active)))
    return MomentPolytope(
        n=n,
        r=r,
        constraints=tuple(cons),
        con_labels=tuple(labels),
        faces=tuple(ordered),
    )


@dataclass(frozen=True)
class DualityReport:
    ok: bool
    component_pairs: tuple[tuple[int, int], ...]  # (face id, stratum id)
    stratum_pairs: tuple[tuple[int, int], ...]
    message: str = ""


def duality_check(mp: MomentPolytope, tc: TropicalComplex) -> DualityReport:
    """Graded order-preserving bijection between faces and strata.

    Faces with exactly one tight constraint per factor project onto complement
    components; faces with at least two tight constraints for every factor
    project onto tie-complex strata of equal dimension.  The projection of a
    relative-interior witness locates the stratum exactly.
    """
    sys = tc.sys
    n, r = mp.n, mp.r

    def factor_counts(face: Face) -> dict[int, int]:
        out: dict[int, int] = {}
        for k in face.active:
            out[mp.con_labels[k][0]] = out.get(mp.con_labels[k][0], 0) + 1
        return out

    strata_index = {s.active: i for i, s in enumerate(tc.strata)}

    def locate(face: Face) -> int:
        x = face.witness[:n]
        active = tuple(trop_eval(sys, i, x)[1] for i in range(r))
        return strata_index[active]

    component_pairs = []
    comp_seen = {}
    stratum_pairs = []
    strat_seen = {}
    for fid, face in enumerate(mp.faces):
        counts = factor_counts(face)
        if len(counts) == r and all(v == 1 for v in counts.values()):
            sid = locate(face)
            s = tc.strata[sid]
            if s.dim != n or sid in comp_seen:
                return DualityReport(False, (), (), f"component face {fid} mislocated")
            comp_seen[sid] = fid
            component_pairs.append((fid, sid))
        if len(counts) == r and all(v >= 2 for v in counts.values()):
            sid = locate(face)
            s = tc.strata[sid]
            if not s.on_complex or s.dim != face.dim or sid in strat_seen:
                return DualityReport(
                    False, (), (),
                    f"face {fid} (dim {face.dim}) vs stratum {sid} (dim {s.dim})",
                )
            strat_seen[sid] = fid
            stratum_pairs.append((fid, sid))

    n_components = sum(1 for s in tc.strata if s.dim == n)
    if len(component_pairs) != n_components:
        return DualityReport(
            False, (), (),
            f"{len(component_pairs)} component faces vs {n_components} components",
        )
    flagged = set(tc.flagged())
    if set(strat_seen) != flagged:
        return DualityReport(
            False, (), (),
            f"stratum faces cover {sorted(strat_seen)} != complex {sorted(flagged)}",
        )
    # order preservation: face containment must mirror closure order
    for fi, si in stratum_pairs:
        for fj, sj in stratum_pairs:
            if mp.face_leq(fi, fj) != tc.leq(si, sj):
                return DualityReport(
                    False, (), (), f"incidence mismatch at faces {fi}, {fj}"
                )
    return DualityReport(
        ok=True,
        component_pairs=tuple(sorted(component_pairs)),
        stratum_pairs=tuple(sorted(stratum_pairs)),
    )


@dataclass(frozen=True)
class CriticalStratum:
    cone: int
    fiber_rank: int


def critical_locus(fan: Fan, w_blocks=None) -> tuple[CriticalStratum, ...]:
    """Orbits where the superpotential is singular: cones with at least two
    rays from every factor.  Fiber rank over the dual tropical stratum equals
    ambient dim minus cone dim."""
    factors = sorted({lab[0] for lab in fan.ray_labels})
    out = []
    for c in range(len(fan.cones)):
        split = fan.cone_factor_split(c)
        if all(len(split.get(i, ())) >= 2 for i in factors):
            out.append(
                CriticalStratum(cone=c, fiber_rank=fan.ambient_dim - fan.cone_dim(c))
            )
    return tuple(out)


@dataclass(frozen=True)
class ASideCritical:
    """The vanishing system cutting the common zero locus inside the dual torus:
    auxiliary coordinates u_i = 0 plus every factor's monomial sum = 0."""

    u_equations: tuple[str, ...]
    w_equations: tuple[tuple[tuple[int, ...], ...], ...]  # per factor: exponent rows
    base_strata: tuple[int, ...]
    fiber_rank_top: int


def a_side_critical(sys: MonomialSystem, tc: TropicalComplex | None = None) -> ASideCritical:
    if tc is None:
        from .tropics import build_stratification

        tc = build_stratification(sys)
    return ASideCritical(
        u_equations=tuple(f"u{i + 1} = 0" for i in range(sys.r)),
        w_equations=tuple(tuple(f.points) for f in sys.factors),
        base_strata=tc.flagged(),
        fiber_rank_top=sys.n - sys.r,
    )


@dataclass(frozen=True)
class ToricMirror:
    """Bundle of the whole toric side for one monomial system."""

    sys: MonomialSystem
    subdivision: RegularSubdivision
    fan: Fan
    charts: tuple[Chart, ...]
    transitions: tuple[TransitionMap, ...]
    potentials: tuple[tuple[tuple[int, ...], ...], ...]  # per chart
    moment: MomentPolytope
    duality: DualityReport
    critical: tuple[CriticalStratum, ...]
    vertex_chart: dict  # tropical vertex stratum id -> chart index


def build_mirror(sys: MonomialSystem, tc: TropicalComplex | None = None) -> ToricMirror:
    from .tropics import build_stratification

    if tc is None:
        tc = build_stratification(sys)
    sub, labels = lifted_subdivision(sys)
    fan = build_fan(sub, sys.r, labels=[labels[i] for i in range(len(sub.points))])
    try:
        chs, trans = charts(fan)
    except NotFullDimensionalError:
        chs, trans = (), ()  # torus factor: no affine chart coordinates emitted
    pots = tuple(
        superpotential(ch) if not ch.stacky else () for ch in chs
    )
    mp = moment_polytope(sys)
    report = duality_check(mp, tc)
    crit = critical_locus(fan)
    # match tropical vertices to charts: the chart cone's label multiset equals
    # the vertex stratum's active points per factor
    vertex_chart = {}
    for v in tc.vertices:
        s = tc.strata[v]
        want = tuple(
            tuple(sorted(sys.factors[i].points[k] for k in s.active[i]))
            for i in range(sys.r)
        )
        for ci, ch in enumerate(chs):
            got: list[list[tuple[int, ...]]] = [[] for _ in range(sys.r)]
            for (fac, pt) in ch.labels:
                got[fac].append(pt)
            if tuple(tuple(sorted(g)) for g in got) == want:
                vertex_chart[v] = ci
                break
    return ToricMirror(
        sys=sys,
        subdivision=sub,
        fan=fan,
        charts=chs,
        transitions=trans,
        potentials=pots,
        moment=mp,
        duality=report,
        critical=crit,
        vertex_chart=vertex_chart,
    )
