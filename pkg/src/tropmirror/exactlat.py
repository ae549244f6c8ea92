"""Exact integer/rational lattice kernel: matrices, Smith normal form, cones.

Everything here is arbitrary-precision integer or Fraction arithmetic; no
floating point.  All objects are immutable after construction and all
operations are pure, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class NotFullDimensionalError(ValueError):
    pass


class NotSmoothError(ValueError):
    pass


def _as_int_rows(rows) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix rows must have equal length")
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Rectangular matrix with exact integer entries."""

    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows):
        object.__setattr__(self, "rows", _as_int_rows(rows))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ot = other.transpose().rows
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.rows)
        )

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return 1
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def rank(self) -> int:
        return len(_row_echelon([list(map(Fraction, r)) for r in self.rows]))


def _row_echelon(m: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced nonzero rows of m (over Fraction); used for ranks and solving."""
    rows = [r[:] for r in m]
    out = []
    cols = len(rows[0]) if rows else 0
    lead = 0
    for col in range(cols):
        piv = next((i for i, r in enumerate(rows[lead:], lead) if r[col] != 0), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        pr = rows[lead]
        inv = Fraction(1, 1) / pr[col]
        rows[lead] = [x * inv for x in pr]
        for i, r in enumerate(rows):
            if i != lead and r[col] != 0:
                f = r[col]
                rows[i] = [a - f * b for a, b in zip(r, rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    for r in rows[:lead]:
        out.append(r)
    return out


@dataclass(frozen=True)
class SnfResult:
    """Smith decomposition U*M*V = D with unimodular U, V and divisibility chain."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    def invariant_factors(self) -> tuple[int, ...]:
        n = min(self.D.nrows, self.D.ncols)
        return tuple(self.D[i, i] for i in range(n) if self.D[i, i] != 0)

    def cokernel(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion factors > 1) of coker(M: Z^ncols -> Z^nrows)."""
        free = self.D.nrows - self.rank
        torsion = tuple(d for d in self.invariant_factors() if d > 1)
        return free, torsion


def snf(M: IntMatrix) -> SnfResult:
    """Smith normal form by row/column reduction.

    Pivot selection is by minimal absolute value (row-major tie break), so the
    transforms U, V are deterministic for a given input.
    """
    a = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nr, nc):
        # locate minimal-absolute-value nonzero pivot in the trailing block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        # clear row and column t; restart whenever a remainder shrinks the pivot
        while True:
            if a[t][t] < 0:
                negate_row(t)
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
                        break
            if not dirty:
                break
        # pivot must divide the rest of the block; merge offenders into column t
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1

    rank = sum(1 for i in range(min(nr, nc)) if a[i][i] != 0)
    res = SnfResult(IntMatrix(U), IntMatrix(a), IntMatrix(V), rank)
    assert res.U.mul(M).mul(res.V).rows == res.D.rows
    assert abs(res.U.det()) == 1 and abs(res.V.det()) == 1
    facs = res.invariant_factors()
    assert all(facs[i + 1] % facs[i] == 0 for i in range(len(facs) - 1))
    return res


def primitive(vec) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(int(x) for x in vec)
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class SimplicialCone:
    """Cone spanned by linearly independent primitive integer ray generators."""

    rays: tuple[tuple[int, ...], ...]
    ambient_dim: int

    def __init__(self, rays, ambient_dim: int | None = None):
        rays = tuple(primitive(r) for r in rays)
        if not rays:
            raise ValueError("cone needs at least one ray")
        dim = ambient_dim if ambient_dim is not None else len(rays[0])
        if any(len(r) != dim for r in rays):
            raise ValueError("ray length does not match ambient dimension")
        if IntMatrix(rays).rank() != len(rays):
            raise ValueError("rays of a simplicial cone must be linearly independent")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "ambient_dim", dim)

    @property
    def dim(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        """Matrix whose columns are the ray generators."""
        return IntMatrix(tuple(zip(*self.rays)))


def lattice_index(cone: SimplicialCone) -> int:
    """Index of the ray-generated sublattice; the normalized simplex volume.

    Requires the rays to span the ambient space.
    """
    if cone.dim != cone.ambient_dim:
        raise NotFullDimensionalError(
            f"rays span a {cone.dim}-dimensional subspace of rank-{cone.ambient_dim} ambient"
        )
    return abs(cone.ray_matrix().det())


def cone_smooth(cone: SimplicialCone) -> bool:
    """True when the rays extend to a basis of the ambient lattice."""
    if cone.dim == cone.ambient_dim:
        return lattice_index(cone) == 1
    facs = snf(cone.ray_matrix()).invariant_factors()
    return all(d == 1 for d in facs)


def dual_basis(cone: SimplicialCone) -> tuple[tuple[int, ...], ...]:
    """Weight vectors eta_j with <eta_j, u_k> = delta_jk against the rays.

    Only smooth full-dimensional cones admit an integral dual basis.
    """
    if cone.dim != cone.ambient_dim:
        raise NotFullDimensionalError("dual basis needs a full-dimensional cone")
    index = lattice_index(cone)
    if index != 1:
        raise NotSmoothError(f"cone has lattice index {index} > 1")
    etas = rational_dual_basis(cone)
    out = tuple(tuple(int(x) for x in eta) for eta in etas)
    for j, eta in enumerate(out):
        for k, ray in enumerate(cone.rays):
            assert sum(a * b for a, b in zip(eta, ray)) == (1 if j == k else 0)
    return out


def rational_dual_basis(cone: SimplicialCone) -> tuple[tuple[Fraction, ...], ...]:
    """Rows of the inverse of the ray matrix (exact rational arithmetic)."""
    if cone.dim != cone.ambient_dim:
        raise NotFullDimensionalError("dual basis needs a full-dimensional cone")
    n = cone.dim
    aug = [list(map(Fraction, col)) + [Fraction(int(i == k)) for k in range(n)]
           for i, col in enumerate(cone.ray_matrix().rows)]
    red = _row_echelon(aug)
    if len(red) != n:
        raise NotFullDimensionalError("singular ray matrix")
    # _row_echelon returns rows of [I | inv] up to row order; re-sort by pivot
    rows = sorted(red, key=lambda r: next(i for i, x in enumerate(r[:n]) if x != 0))
    inv = [r[n:] for r in rows]
    return tuple(tuple(row) for row in inv)
