"""Vertex and facet enumeration, LP membership and polytope equality."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .dd import LinealityError, extreme_rays
from .linalg import AffineChart, nullspace, rank, rref
from .lp import Feasible, feasibility
from .types import (
    DimensionError,
    EmptyPolytopeError,
    HPolytope,
    Inequality,
    Inside,
    MembershipResult,
    Outside,
    UnboundedError,
    VPolytope,
)

log = logging.getLogger(__name__)


def _h_feasible(rows: Sequence[Sequence[Fraction]], k: int) -> bool:
    """Is {u in Q^k : b + a.u >= 0 for all rows} nonempty?"""
    # u = u+ - u-, slack s: a.u+ - a.u- - s = -b
    m = len(rows)
    A, rhs = [], []
    for i, (b, *a) in enumerate(rows):
        A.append(list(a) + [-v for v in a] + [-1 if j == i else 0 for j in range(m)])
        rhs.append(-b)
    return isinstance(feasibility(A, rhs), Feasible)


def vertex_enum(h: HPolytope, adjacency: str = "combinatorial") -> VPolytope:
    """Exact vertices of a bounded H-polytope, sorted lexicographically."""
    try:
        chart = AffineChart([e.row for e in h.equalities], h.dim)
    except ValueError as exc:
        raise EmptyPolytopeError("equalities are inconsistent") from exc
    k = chart.rank
    rows = []
    for r in h.inequalities:
        b, *a = chart.pull_back(r.row)
        if any(a):
            rows.append((b, *a))
        elif b < 0:
            raise EmptyPolytopeError("an inequality fails on the whole affine hull")
    if k == 0:
        return VPolytope(h.dim, (chart.base,))
    if not rows:
        raise UnboundedError("no inequalities bound the affine hull")
    A = [[Fraction(1)] + [Fraction(0)] * k] + [list(r) for r in rows]
    try:
        rays = extreme_rays(A, adjacency)
    except LinealityError:
        if _h_feasible(rows, k):
            raise UnboundedError("polytope contains a line") from None
        raise EmptyPolytopeError("no feasible point") from None
    verts, recession = [], False
    for t, *u in rays:
        if t > 0:
            verts.append(chart.lift([Fraction(c, t) for c in u]))
        else:
            recession = True
    if not verts:
        raise EmptyPolytopeError("no feasible point")
    if recession:
        raise UnboundedError("polytope has a recession direction")
    return VPolytope(h.dim, tuple(sorted(verts)))


@dataclass(frozen=True)
class AffineHull:
    """Affine hull of a point set with a coordinate projection onto it."""

    base: tuple[Fraction, ...]
    coordinates: tuple[int, ...]  # projecting onto these is injective on the hull
    equalities: tuple[Inequality, ...]

    @property
    def dim(self) -> int:
        return len(self.coordinates)


def affine_hull(points: Sequence[Sequence[Fraction]]) -> AffineHull:
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise EmptyPolytopeError("no points")
    dim = len(pts[0])
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    _, pivots = rref(diffs, dim) if diffs else ([], [])
    eq_basis = nullspace([[Fraction(1), *p] for p in pts], dim + 1)
    eqs = tuple(Inequality.from_row(v).normalized_equality() for v in eq_basis)
    return AffineHull(base, tuple(pivots), eqs)


def facet_enum(v: VPolytope, adjacency: str = "combinatorial") -> HPolytope:
    """Facets (normalized integer rows) plus equalities spanning the affine hull."""
    if not v.vertices:
        raise EmptyPolytopeError("no vertices")
    hull = affine_hull(v.vertices)
    if hull.dim == 0:
        return HPolytope(v.dim, (), hull.equalities)
    J = hull.coordinates
    A = [[Fraction(1)] + [p[j] for j in J] for p in v.vertices]
    facets = []
    for b, *a in extreme_rays(A, adjacency):
        if not any(a):
            continue
        coeffs = [Fraction(0)] * v.dim
        for j, c in zip(J, a):
            coeffs[j] = Fraction(c)
        facets.append(Inequality(Fraction(b), tuple(coeffs)).normalized())
    return HPolytope(v.dim, tuple(facets), hull.equalities)


def _farkas_separator(y: Sequence[Fraction], dim: int) -> Inequality:
    # y.(v_i, 1) <= 0 on vertices, > 0 at the query; flip to offset form
    return Inequality(-y[dim], tuple(-c for c in y[:dim])).normalized()


def membership(p, v: VPolytope, facets: Sequence[Inequality] | None = None) -> MembershipResult:
    """Decide ``p in conv(v)`` exactly, returning a checked certificate.

    When ``facets`` (valid rows of ``v``) are given and ``p`` is outside, the
    most violated of them replaces the raw Farkas separator.
    """
    point = tuple(Fraction(c) for c in getattr(p, "coords", p))
    if len(point) != v.dim:
        raise DimensionError(f"point has dimension {len(point)}, polytope {v.dim}")
    j = v.index(point)
    if j is not None:
        weights = [Fraction(0)] * len(v.vertices)
        weights[j] = Fraction(1)
        return Inside(tuple(weights))
    A = [[vert[d] for vert in v.vertices] for d in range(v.dim)] + [[Fraction(1)] * len(v.vertices)]
    res = feasibility(A, list(point) + [Fraction(1)])
    if isinstance(res, Feasible):
        result: MembershipResult = Inside(res.x)
    else:
        result = Outside(_farkas_separator(res.farkas, v.dim))
        if facets:
            worst = min(facets, key=lambda f: f.evaluate(point))
            if worst.evaluate(point) < 0:
                result = Outside(worst)
    if not result.check(point, v):
        raise AssertionError("membership certificate failed re-validation")
    return result


def is_extreme_in_hrep(point: Sequence[Fraction], h: HPolytope) -> bool:
    """True when ``point`` is a vertex of ``h`` (tight rows have full rank)."""
    tight = [e.coeffs for e in h.equalities]
    tight += [r.coeffs for r in h.inequalities if r.evaluate(point) == 0]
    return rank(tight) == h.dim


def remove_redundant(points: Sequence[Sequence[Fraction]], dim: int,
                     is_extreme: Callable[[tuple], bool] | None = None) -> VPolytope:
    """Keep only extreme points; ``is_extreme`` may certify vertices without an LP."""
    pts = list(VPolytope(dim, tuple(points)).vertices)
    keep = []
    for i, p in enumerate(pts):
        if is_extreme is not None and is_extreme(p):
            keep.append(p)
            continue
        others = VPolytope(dim, tuple(keep + pts[i + 1:]))
        if not others.vertices or not membership(p, others).inside:
            keep.append(p)
    return VPolytope(dim, tuple(keep))


@dataclass(frozen=True)
class PolytopeComparison:
    equal: bool
    forward: tuple[MembershipResult, ...]   # vertices of the first in the second
    backward: tuple[MembershipResult, ...]  # vertices of the second in the first

    def witness(self) -> tuple[str, int, Outside] | None:
        for side, results in (("first", self.forward), ("second", self.backward)):
            for i, r in enumerate(results):
                if not r.inside:
                    return side, i, r
        return None


def _member_task(args):
    p, v = args
    return membership(p, v)


def _all_memberships(src: VPolytope, dst: VPolytope, jobs: int) -> tuple[MembershipResult, ...]:
    if jobs > 1 and len(src.vertices) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return tuple(pool.map(_member_task, [(p, dst) for p in src.vertices]))
    return tuple(membership(p, dst) for p in src.vertices)


def compare_polytopes(v1: VPolytope, v2: VPolytope, jobs: int = 1) -> PolytopeComparison:
    if v1.dim != v2.dim:
        raise DimensionError("polytopes live in different dimensions")
    fwd = _all_memberships(v1, v2, jobs)
    bwd = _all_memberships(v2, v1, jobs)
    equal = all(r.inside for r in fwd) and all(r.inside for r in bwd)
    return PolytopeComparison(equal, fwd, bwd)


def polytope_equal(v1: VPolytope, v2: VPolytope, jobs: int = 1) -> bool:
    return compare_polytopes(v1, v2, jobs).equal


def is_facet(row: Inequality, v: VPolytope, hull_dim: int | None = None) -> bool:
    """Valid on every vertex and tight on an affinely (d-1)-dimensional subset."""
    if hull_dim is None:
        hull_dim = affine_hull(v.vertices).dim
    values = [row.evaluate(p) for p in v.vertices]
    if any(val < 0 for val in values):
        return False
    tight = [[Fraction(1), *p] for p, val in zip(v.vertices, values) if val == 0]
    if len(tight) == len(v.vertices):
        return False
    return rank(tight) == hull_dim
