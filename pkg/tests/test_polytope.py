from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfpoly import kernels
from lfpoly.bell import ld_vertices, ns_hrep, ns_vertices
from lfpoly.polytope import (
    EmptyPolytopeError,
    HPolytope,
    Inequality,
    Inside,
    Outside,
    UnboundedError,
    VPolytope,
    compare_polytopes,
    facet_enum,
    membership,
    polytope_equal,
    vertex_enum,
)
from lfpoly.polytope.dd import LinealityError, extreme_rays
from lfpoly.polytope.linalg import AffineChart, inverse, nullspace, rank, rref, solve
from lfpoly.polytope.lp import Feasible, Infeasible, feasibility
from lfpoly.polytope.ops import affine_hull, is_facet, remove_redundant
from lfpoly.polytope.types import DimensionError, PolytopeError
from lfpoly.scenario import Behaviour, Scenario, normalization_rows, no_signalling_rows

from oracles import basic_vertices, hyperplane_facets, ns_vertices_by_support, _normalize

F = Fraction
CHSH = Scenario.homogeneous(2, 2, 2, 2)


def ineq(*row):
    return Inequality.from_row([F(c) for c in row])


def box(d):
    rows = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rows.append(ineq(0, *e))
        rows.append(ineq(1, *[-c for c in e]))
    return HPolytope(d, tuple(rows))


# -- linear algebra -----------------------------------------------------------

def test_rank_and_rref():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0]]) == 0
    rows, piv = rref([[2, 4, 6], [1, 1, 1]], 3)
    assert piv == [0, 1]
    assert rows[0] == [1, 0, -1] and rows[1] == [0, 1, 2]


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_is_orthogonal(rows):
    ns = nullspace(rows, 4)
    assert len(ns) == 4 - rank(rows)
    for v in ns:
        assert all(sum(F(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_inverse_and_solve():
    M = [[2, 1], [1, 1]]
    assert inverse(M) == [[1, -1], [-1, 2]]
    assert solve(M, [3, 2]) == [1, 1]
    assert solve([[1, 1], [2, 2]], [1, 3]) is None


def test_affine_chart_roundtrip():
    eqs = [r for r in normalization_rows(CHSH) + no_signalling_rows(CHSH)]
    chart = AffineChart(eqs, CHSH.dim)
    assert chart.rank == 8
    u = Behaviour.uniform(CHSH).coords
    assert chart.lift(chart.project(u)) == u
    T = chart.transform_matrix()
    assert len(T) == 17 and len(T[0]) == 9


# -- exact LP -----------------------------------------------------------------

def test_lp_feasible_point():
    res = feasibility([[1, 1, 1]], [1])
    assert isinstance(res, Feasible)
    assert sum(res.x) == 1 and min(res.x) >= 0


def test_lp_farkas():
    # x1 + x2 = -1 with x >= 0 is infeasible
    res = feasibility([[1, 1]], [-1])
    assert isinstance(res, Infeasible)
    y = res.farkas
    assert all(y[0] * a <= 0 for a in (1, 1)) and y[0] * -1 > 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_lp_certificates(A, b):
    b = b[: len(A)]
    res = feasibility(A, b)
    if isinstance(res, Feasible):
        assert min(res.x) >= 0
        assert all(sum(F(a) * x for a, x in zip(row, res.x)) == bi for row, bi in zip(A, b))
    else:
        y = res.farkas
        assert all(sum(y[i] * A[i][j] for i in range(len(A))) <= 0 for j in range(3))
        assert sum(yi * bi for yi, bi in zip(y, b)) > 0


# -- double description -------------------------------------------------------

def test_extreme_rays_orthant():
    assert extreme_rays([[1, 0], [0, 1]]) == [(0, 1), (1, 0)]


def test_extreme_rays_lineality():
    with pytest.raises(LinealityError):
        extreme_rays([[1, 0, 0], [0, 1, 0]])


def test_box_vertices():
    v = vertex_enum(box(3))
    assert len(v) == 8
    assert set(v.vertices) == {tuple(F(c) for c in p) for p in product((0, 1), repeat=3)}


def test_unit_simplex():
    h = HPolytope(3, tuple(ineq(0, *e) for e in np.eye(3, dtype=int).tolist()), (ineq(-1, 1, 1, 1),))
    v = vertex_enum(h)
    assert v.vertices == ((0, 0, 1), (0, 1, 0), (1, 0, 0))


def test_empty_and_unbounded():
    with pytest.raises(EmptyPolytopeError):
        vertex_enum(HPolytope(1, (ineq(0, 1), ineq(-1, -1))))
    with pytest.raises(UnboundedError):
        vertex_enum(HPolytope(2, (ineq(0, 1, 0), ineq(0, 0, 1))))
    with pytest.raises(UnboundedError):
        vertex_enum(HPolytope(2, (ineq(0, 1, 0), ineq(1, -1, 0))))
    with pytest.raises(EmptyPolytopeError):
        vertex_enum(HPolytope(1, (ineq(0, 1),), (ineq(-1, 1), ineq(-2, 1))))


def test_single_point_polytope():
    h = HPolytope(2, (ineq(0, 1, 0),), (ineq(-1, 1, 0), ineq(-2, 0, 1)))
    assert vertex_enum(h).vertices == ((1, 2),)
    f = facet_enum(VPolytope(2, ((F(1), F(2)),)))
    assert f.inequalities == () and len(f.equalities) == 2


def test_ns_chsh_against_support_oracle():
    h = ns_hrep(CHSH)
    eq_rows = [e.row for e in h.equalities]
    oracle = ns_vertices_by_support(CHSH, eq_rows)
    v = vertex_enum(h)
    assert len(v) == 24
    assert list(v.vertices) == oracle


small_h = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=0, max_size=4)


@settings(max_examples=40, deadline=None)
@given(small_h)
def test_vertex_enum_matches_basic_solution_oracle(extra):
    # box-bounded, so every instance is bounded
    h = box(2)
    rows = [r.row for r in h.inequalities] + [tuple(F(c) for c in r) for r in extra if any(r[1:])]
    oracle = basic_vertices([], rows, 2)
    hp = HPolytope(2, tuple(Inequality.from_row(r) for r in rows))
    if not oracle:
        with pytest.raises(EmptyPolytopeError):
            vertex_enum(hp)
        return
    assert list(vertex_enum(hp).vertices) == oracle
    assert list(vertex_enum(hp, adjacency="algebraic").vertices) == oracle


def test_adjacency_modes_agree_on_ns():
    h = ns_hrep(Scenario.homogeneous(2, 2, 2, 3))
    assert vertex_enum(h).vertices == vertex_enum(h, adjacency="algebraic").vertices


points_3d = st.lists(st.tuples(*[st.integers(-4, 4)] * 3), min_size=5, max_size=9, unique=True)


@settings(max_examples=30, deadline=None)
@given(points_3d)
def test_facets_match_hyperplane_oracle(pts):
    pts = [tuple(F(c) for c in p) for p in pts]
    if rank([[1, *p] for p in pts]) < 4:
        return
    h = facet_enum(VPolytope(3, tuple(pts)))
    assert h.equalities == ()
    got = {_normalize(f.row) for f in h.inequalities}
    assert got == hyperplane_facets(pts)


def test_triangle_and_segment():
    tri = VPolytope(2, ((F(0), F(0)), (F(1), F(0)), (F(0), F(1))))
    assert len(facet_enum(tri).inequalities) == 3
    seg = VPolytope(2, ((F(0), F(0)), (F(2), F(2))))
    h = facet_enum(seg)
    assert len(h.inequalities) == 2 and len(h.equalities) == 1
    assert polytope_equal(vertex_enum(h), seg)


def test_chsh_ld_dual_roundtrip():
    ld = ld_vertices(CHSH)
    h = facet_enum(ld)
    assert len(h.inequalities) == 24
    assert rank([e.coeffs for e in h.equalities]) == 8
    assert vertex_enum(h).vertices == tuple(sorted(ld.vertices))
    hull = affine_hull(ld.vertices)
    assert hull.dim == 8
    assert all(is_facet(f, ld, hull.dim) for f in h.inequalities)


@settings(max_examples=20, deadline=None)
@given(points_3d)
def test_vertex_facet_roundtrip(pts):
    v = VPolytope(3, tuple(tuple(F(c) for c in p) for p in pts))
    back = vertex_enum(facet_enum(v))
    assert polytope_equal(back, v)
    assert set(back.vertices) <= set(v.vertices)


# -- membership ---------------------------------------------------------------

def test_membership_uniform_inside():
    ld = ld_vertices(CHSH)
    u = Behaviour.uniform(CHSH)
    res = membership(u, ld)
    assert isinstance(res, Inside) and res.check(u.coords, ld)


def test_membership_vertex_short_circuit():
    ld = ld_vertices(CHSH)
    for i, v in enumerate(ld.vertices):
        res = membership(v, ld)
        assert res.weights[i] == 1 and sum(res.weights) == 1


def test_pr_box_outside_with_certificate():
    ld, ns = ld_vertices(CHSH), ns_vertices(CHSH)
    outside = [v for v in ns.vertices if not membership(v, ld).inside]
    assert len(outside) == 8
    for v in outside:
        res = membership(v, ld)
        assert isinstance(res, Outside) and res.check(v, ld)
        assert res.separator.evaluate(v) < 0
    assert not polytope_equal(ld, ns)
    cmp = compare_polytopes(ld, ns)
    assert cmp.forward and not cmp.equal and cmp.witness()[0] == "second"


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionError):
        membership((F(0),) * 3, ld_vertices(CHSH))


def test_forged_certificates_rejected():
    ld = ld_vertices(CHSH)
    u = Behaviour.uniform(CHSH).coords
    assert not Inside(tuple([F(1)] + [F(0)] * 15)).check(u, ld)
    assert not Outside(Inequality(F(-1), (F(0),) * 16)).check(u, ld)


def test_compare_permuted_and_parallel():
    ld = ld_vertices(CHSH)
    perm = VPolytope(ld.dim, tuple(reversed(ld.vertices)))
    assert polytope_equal(ld, perm)
    assert compare_polytopes(ld, ns_vertices(CHSH), jobs=2).equal is False


def test_remove_redundant():
    pts = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1, 3), F(1, 3)), (F(1), F(0))]
    assert remove_redundant(pts, 2).vertices == ((0, 0), (1, 0), (0, 1))


def test_inequality_helpers():
    r = ineq(2, 4, -6)
    assert r.normalized().row == (1, 2, -3)
    assert ineq(-2, -4, 6).normalized_equality().row == (1, 2, -3)
    with pytest.raises(DimensionError):
        r.evaluate((1,))
    with pytest.raises(PolytopeError):
        HPolytope(2, (ineq(1, 0, 0),))


# -- kernels ------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(3, 40), st.integers(1, 130))
def test_adjacency_kernels_agree(seed, n_rays, n_rows):
    rng = np.random.default_rng(seed)
    width = kernels.bit_width(n_rows)
    zbits = rng.integers(0, 2**63, size=(n_rays, width), dtype=np.uint64)
    zbits &= rng.integers(0, 2**63, size=(n_rays, width), dtype=np.uint64)
    idx = rng.permutation(n_rays)
    pos, neg = np.sort(idx[: n_rays // 2]).astype(np.int64), np.sort(idx[n_rays // 2:]).astype(np.int64)
    a = kernels._adjacent_pairs_numba(zbits, pos, neg, 2)
    b = kernels._adjacent_pairs_numpy(zbits, pos, neg, 2)
    assert sorted(map(tuple, a.tolist())) == sorted(map(tuple, b.tolist()))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_orbit_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    dim = 6
    row = rng.integers(-5, 6, size=dim + 1).astype(np.int64)
    perms = np.array([rng.permutation(dim) for _ in range(8)], dtype=np.int64)
    T = rng.integers(-2, 3, size=(dim + 1, 4)).astype(np.int64)
    a = kernels._orbit_images_numba(row, perms, T)
    b = kernels._orbit_images_numpy(row, perms, T)
    c = kernels._orbit_images_numpy(row.astype(object), perms, T.astype(object))
    assert (a == b).all() and (b == c.astype(np.int64)).all()
