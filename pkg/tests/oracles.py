"""Brute-force reference implementations used only by the tests."""
from fractions import Fraction
from itertools import combinations

import numpy as np

from lfpoly.polytope.linalg import rank, solve


def basic_vertices(equalities, inequalities, dim):
    """Vertices as feasible points whose tight rows (with the equalities) have full rank.

    Rows are (offset, coeffs...) meaning offset + coeffs.p >= 0 (or == 0).
    """
    E = [list(r) for r in equalities]
    r_e = rank([r[1:] for r in E]) if E else 0
    need = dim - r_e
    found = set()
    for subset in combinations(range(len(inequalities)), need):
        rows = E + [list(inequalities[i]) for i in subset]
        M = [r[1:] for r in rows]
        if rank(M) != dim:
            continue
        # pick an invertible dim x dim subsystem
        basis = []
        for k in range(len(M)):
            if rank([M[j] for j in basis] + [M[k]]) > len(basis):
                basis.append(k)
        x = solve([M[k] for k in basis], [-rows[k][0] for k in basis])
        if x is None:
            continue
        if all(sum(c * v for c, v in zip(r[1:], x)) + r[0] == 0 for r in E) and all(
            sum(c * v for c, v in zip(r[1:], x)) + r[0] >= 0 for r in inequalities
        ):
            found.add(tuple(x))
    return sorted(found)


def ns_vertices_by_support(scenario, equality_rows):
    """NS vertices from supports of size rank(E) (positivity is the only inequality).

    Solves in floating point, then rounds and re-checks exactly.
    """
    E = np.array([[float(c) for c in r[1:]] for r in equality_rows])
    b = -np.array([float(r[0]) for r in equality_rows])
    r = np.linalg.matrix_rank(E)
    found = set()
    for support in combinations(range(scenario.dim), r):
        sub = E[:, support]
        if np.linalg.matrix_rank(sub) < r:
            continue
        x, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if np.abs(sub @ x - b).max() > 1e-9 or x.min() < -1e-9:
            continue
        point = [Fraction(0)] * scenario.dim
        for i, v in zip(support, x):
            point[i] = Fraction(v).limit_denominator(1000)
        ok = all(sum(c * v for c, v in zip(row[1:], point)) + row[0] == 0 for row in equality_rows)
        if ok and min(point) >= 0:
            found.add(tuple(point))
    return sorted(found)


def hyperplane_facets(points):
    """Facets of a full-dimensional point set by testing every hyperplane through dim points."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    d = len(pts[0])
    out = set()
    for subset in combinations(pts, d):
        M = [[Fraction(1), *p] for p in subset]
        if rank(M) != d:
            continue
        from lfpoly.polytope.linalg import nullspace
        (h,) = nullspace(M, d + 1)
        vals = [h[0] + sum(c * v for c, v in zip(h[1:], p)) for p in pts]
        if all(v >= 0 for v in vals):
            sign = 1
        elif all(v <= 0 for v in vals):
            sign = -1
        else:
            continue
        tight = [p for p, v in zip(pts, vals) if v == 0]
        if rank([[Fraction(1), *p] for p in tight]) != d:
            continue
        out.add(_normalize([sign * c for c in h]))
    return out


def _normalize(row):
    from math import gcd, lcm
    den = 1
    for c in row:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(c * den) for c in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)
