"""Internal exact rational polyhedral helpers.

Constraints are triples (coeffs, rhs, rel) over Fraction, read as
coeffs . x  REL  rhs with rel one of "eq", "ge", "gt".  Feasibility and
witness extraction go through Gaussian elimination of the equalities followed
by Fourier-Motzkin elimination, so strict inequalities are handled exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

Vec = tuple[Fraction, ...]
Constraint = tuple[Vec, Fraction, str]


def fvec(xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def constraint(coeffs, rhs, rel: str) -> Constraint:
    if rel not in ("eq", "ge", "gt"):
        raise ValueError(f"bad relation {rel!r}")
    return (fvec(coeffs), Fraction(rhs), rel)


def satisfies(x, con: Constraint) -> bool:
    a, b, rel = con
    v = dot(a, x)
    if rel == "eq":
        return v == b
    if rel == "ge":
        return v >= b
    return v > b


def _normalize(a: Vec, b: Fraction) -> tuple[Vec, Fraction]:
    # scale so the first nonzero coefficient is +-1 (canonical for dedup)
    for x in a:
        if x != 0:
            s = abs(x)
            return tuple(y / s for y in a), b / s
    return a, b


class _Infeasible(Exception):
    pass


def _eliminate_equalities(cons, n: int):
    """Solve the equality part; returns (pivot substitutions, inequality rows).

    Each pivot is [var index, expr] with var = expr[:n] . x + expr[n], the
    expression referencing free variables only.
    """
    eqs = [[list(a), b] for a, b, rel in cons if rel == "eq"]
    ineqs = [[list(a), b, rel] for a, b, rel in cons if rel != "eq"]
    pivots: list[list] = []
    while True:
        row = next((e for e in eqs if any(x != 0 for x in e[0])), None)
        if row is None:
            break
        eqs.remove(row)
        a, b = row
        j = next(k for k, x in enumerate(a) if x != 0)
        inv = Fraction(1) / a[j]
        a = [x * inv for x in a]
        b = b * inv
        expr = [-x for x in a]
        expr[j] = Fraction(0)
        for other in eqs:
            f = other[0][j]
            if f != 0:
                other[0] = [u + f * v for u, v in zip(other[0], expr)]
                other[0][j] = Fraction(0)
                other[1] = other[1] - f * b
        for piv in pivots:
            f = piv[1][j]
            if f != 0:
                piv[1] = [u + f * v for u, v in zip(piv[1][:n], expr)] + [piv[1][n] + f * b]
                piv[1][j] = Fraction(0)
        for iq in ineqs:
            f = iq[0][j]
            if f != 0:
                iq[0] = [u + f * v for u, v in zip(iq[0], expr)]
                iq[0][j] = Fraction(0)
                iq[1] = iq[1] - f * b
        pivots.append([j, expr + [b]])
    for a, b in eqs:
        if b != 0:
            raise _Infeasible
    return pivots, ineqs


def witness(cons, n: int) -> Vec | None:
    """A point satisfying the system, or None.  Exact over Fraction."""
    try:
        pivots, ineqs = _eliminate_equalities(cons, n)
    except _Infeasible:
        return None
    bound = {p[0] for p in pivots}
    free = [j for j in range(n) if j not in bound]
    rows = [([a[j] for j in free], b, rel) for a, b, rel in ineqs]
    vals = _fm_witness(rows, len(free))
    if vals is None:
        return None
    x = [Fraction(0)] * n
    for j, v in zip(free, vals):
        x[j] = v
    for j, expr in pivots:
        x[j] = expr[n] + sum(expr[k] * x[k] for k in range(n))
    xt = tuple(x)
    assert all(satisfies(xt, c) for c in cons)
    return xt


def feasible(cons, n: int) -> bool:
    return witness(cons, n) is not None


def _dedup(rows):
    seen = {}
    for a, b, rel in rows:
        key = _normalize(tuple(a), b)
        prev = seen.get(key)
        if prev is None or (prev == "ge" and rel == "gt"):
            seen[key] = rel
    return [(list(k[0]), k[1], rel) for k, rel in seen.items()]


def _fm_witness(rows, m: int):
    """Fourier-Motzkin over the last variable repeatedly, then back-substitute."""
    levels = []
    cur = _dedup(rows)
    for k in range(m - 1, -1, -1):
        lowers, uppers, rest = [], [], []
        for a, b, rel in cur:
            c = a[k]
            if c == 0:
                rest.append((a[:k], b, rel))
            else:
                # x_k REL' b/c + sum_j (-a_j/c) x_j; REL' flips to upper for c < 0
                expr = ([-x / c for x in a[:k]], b / c, rel)
                (lowers if c > 0 else uppers).append(expr)
        combined = []
        for la, lb, lrel in lowers:
            for ua, ub, urel in uppers:
                rel = "gt" if (lrel == "gt" or urel == "gt") else "ge"
                combined.append(([u - l for u, l in zip(ua, la)], lb - ub, rel))
        levels.append((lowers, uppers))
        cur = _dedup(rest + combined)
    for a, b, rel in cur:
        v = Fraction(0)
        if (rel == "ge" and not v >= b) or (rel == "gt" and not v > b):
            return None
    vals: list[Fraction] = []
    for lowers, uppers in reversed(levels):
        lo, lo_strict = None, False
        hi, hi_strict = None, False
        for a, b, rel in lowers:
            v = b + dot(a, vals)
            if lo is None or v > lo or (v == lo and rel == "gt"):
                lo, lo_strict = v, rel == "gt"
        for a, b, rel in uppers:
            v = b + dot(a, vals)
            if hi is None or v < hi or (v == hi and rel == "gt"):
                hi, hi_strict = v, rel == "gt"
        if lo is None and hi is None:
            vals.append(Fraction(0))
        elif lo is None:
            vals.append(hi - 1)
        elif hi is None:
            vals.append(lo + 1)
        else:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                return None
            vals.append((lo + hi) / 2)
    return vals


def affine_rank(points) -> int:
    """Dimension of the affine hull of a point set (-1 when empty)."""
    if not points:
        return -1
    base = points[0]
    diffs = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return _rank(diffs)


def _rank(rows) -> int:
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def nullspace(rows, n: int):
    """Basis of {x : rows . x = 0} over Fraction."""
    mat = [list(map(Fraction, r)) for r in rows]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pr = mat[rank]
        mat[rank] = [x / pr[col] for x in pr]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    freecols = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in freecols:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -mat[r][fc]
        basis.append(tuple(v))
    return basis


def solve_underdetermined(aug, nvars: int):
    """One exact solution of the augmented linear system, or None."""
    mat = [list(map(Fraction, r)) for r in aug]
    pivots = []
    rank = 0
    for col in range(nvars):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pr = mat[rank]
        mat[rank] = [x / pr[col] for x in pr]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(mat)):
        if mat[i][nvars] != 0:
            return None
    x = [Fraction(0)] * nvars
    for r, pc in enumerate(pivots):
        x[pc] = mat[r][nvars]
    return x


def interpolate_affine(points, values, n: int):
    """Affine g with g(p_i) = v_i, returned as (gradient, constant), or None."""
    aug = [list(p) + [Fraction(1), v] for p, v in zip(points, values)]
    sol = solve_underdetermined(aug, n + 1)
    if sol is None:
        return None
    return tuple(sol[:n]), sol[n]


def convex_hull_facets(points):
    """Facets (a, b) with a.x <= b over the points, for a full-dim point set."""
    n = len(points[0])
    if affine_rank(points) != n:
        raise ValueError("convex_hull_facets needs a full-dimensional point set")
    facets = {}
    for sub in combinations(range(len(points)), n):
        pts = [points[i] for i in sub]
        if affine_rank(pts) != n - 1:
            continue
        diffs = [[p[i] - pts[0][i] for i in range(n)] for p in pts[1:]]
        ns = nullspace(diffs, n)
        if len(ns) != 1:
            continue
        a = ns[0]
        b = dot(a, pts[0])
        side_pos = any(dot(a, p) > b for p in points)
        side_neg = any(dot(a, p) < b for p in points)
        if side_pos and side_neg:
            continue
        if side_pos:
            a = tuple(-x for x in a)
            b = -b
        key = _normalize(a, b)
        facets[key] = (key[0], key[1])
    return sorted(facets.values())


def hull_vertices(points) -> list[int]:
    """Indices of the extreme points of conv(points)."""
    out = []
    for i, p in enumerate(points):
        others = [q for j, q in enumerate(points) if j != i]
        if not others:
            out.append(i)
            continue
        m = len(others)
        cons = [constraint([q[coord] for q in others], p[coord], "eq") for coord in range(len(p))]
        cons.append(constraint([1] * m, 1, "eq"))
        for k in range(m):
            e = [0] * m
            e[k] = 1
            cons.append(constraint(e, 0, "ge"))
        if witness(cons, m) is None:
            out.append(i)
    return out
