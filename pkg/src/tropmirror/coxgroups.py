"""Divisor class groups, the dual quotient group with its character
conditions, irrelevant-ideal generators, and the finite groups attached to
nonunimodular simplicial cones.  Everything is presented through lattice data
computed by Smith normal form; no analytic groups appear.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlat import IntMatrix, NotFullDimensionalError, SimplicialCone, lattice_index, snf
from .mirrortoric import Fan


@dataclass(frozen=True)
class AbGroupPresentation:
    """Z^free_rank x prod Z/d_i with generator labels."""

    free_rank: int
    torsion: tuple[int, ...]  # invariant factors, each >= 2, divisibility chain
    generators: tuple[str, ...] = ()

    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def _ray_pairing_matrix(fan: Fan) -> IntMatrix:
    """Rows indexed by rays, columns by the ambient lattice basis."""
    return IntMatrix(fan.rays)


def class_group(fan: Fan) -> AbGroupPresentation:
    """Cokernel of the character-to-divisor map m -> (<m, u_rho>)_rho.

    Torus factors (rays spanning a proper subspace) are handled by the same
    cokernel: the quotient picks up one free rank per missing dimension of the
    ray span, which is the split-off torus factor.
    """
    mat = _ray_pairing_matrix(fan)
    res = snf(mat)
    free, torsion = res.cokernel()
    return AbGroupPresentation(
        free_rank=free,
        torsion=torsion,
        generators=tuple(f"D{r}" for r in range(len(fan.rays))),
    )


@dataclass(frozen=True)
class CoxGroup:
    """Dual of the class group with its defining monomial character conditions."""

    presentation: AbGroupPresentation
    conditions: tuple[tuple[int, ...], ...]  # exponent rows: prod t_rho^e = 1
    torus_weights: tuple[tuple[int, ...], ...]  # weight vector per free generator


def cox_group(fan: Fan) -> CoxGroup:
    """Hom(class group, C*): torus of the free rank times the same torsion."""
    mat = _ray_pairing_matrix(fan)
    res = snf(mat)
    free, torsion = res.cokernel()
    conditions = tuple(tuple(col) for col in zip(*mat.rows)) if mat.rows else ()
    # free generators of the cokernel read off the row transform: rows of U
    # beyond the rank present the free part, and each gives a weight vector
    weights = []
    for i in range(res.rank, mat.nrows):
        weights.append(tuple(res.U.rows[i]))
    pres = AbGroupPresentation(
        free_rank=free,
        torsion=torsion,
        generators=tuple(f"t{r}" for r in range(len(fan.rays))),
    )
    return CoxGroup(presentation=pres, conditions=conditions, torus_weights=tuple(weights))


@dataclass(frozen=True)
class IrrelevantData:
    generators: tuple[tuple[int, ...], ...]  # per max cone: rays NOT in the cone
    geometric_quotient: bool
    vanishing_locus_empty: bool


def irrelevant_data(fan: Fan) -> IrrelevantData:
    """Monomial generators prod_{rho not in sigma} y_rho per maximal cone."""
    gens = []
    for c in fan.max_cones:
        cone = fan.cones[c]
        gens.append(tuple(r for r in range(len(fan.rays)) if r not in cone))
    simplicial = all(fan.cone_simplicial(c) for c in fan.max_cones)
    empty = any(len(g) == 0 for g in gens)
    return IrrelevantData(
        generators=tuple(gens),
        geometric_quotient=simplicial,
        vanishing_locus_empty=empty,
    )


@dataclass(frozen=True)
class FiniteCoverGroup:
    order: int
    group: AbGroupPresentation  # the acting group
    character_group: AbGroupPresentation  # the quotient lattice presentation


def finite_cover_group(cone: SimplicialCone) -> FiniteCoverGroup:
    """Finite quotient data of a full-dimensional simplicial cone.

    The character group is the ambient lattice modulo the span of the rays;
    the acting group is its dual, which has the same invariant factors.  The
    common order is the lattice index.
    """
    if cone.dim != cone.ambient_dim:
        raise NotFullDimensionalError("finite cover groups need full-dimensional cones")
    order = lattice_index(cone)
    res = snf(cone.ray_matrix())
    free, torsion = res.cokernel()
    assert free == 0
    check = 1
    for d in torsion:
        check *= d
    assert check == order
    char = AbGroupPresentation(free_rank=0, torsion=torsion)
    grp = AbGroupPresentation(free_rank=0, torsion=torsion)
    return FiniteCoverGroup(order=order, group=grp, character_group=char)


def double_dual(pres: AbGroupPresentation) -> AbGroupPresentation:
    """Character-of-character presentation of the finite part: identical data."""
    return AbGroupPresentation(free_rank=0, torsion=pres.torsion)
