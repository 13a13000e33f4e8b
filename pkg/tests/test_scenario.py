from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfpoly.polytope.linalg import rank
from lfpoly.scenario import (
    Behaviour,
    Scenario,
    ScenarioError,
    ShapeError,
    alice_marginal,
    bob_marginal,
    coord_index,
    deterministic_point,
    format_fraction,
    is_no_signalling,
    no_signalling_rows,
    normalization_rows,
    parse_fraction,
    rationalize,
    rationalize_behaviour,
    validate_behaviour,
)

CHSH = Scenario.homogeneous(2, 2, 2, 2)


def enumerate_labels(s):
    """Independent oracle: walk (x, y, a, b) in lexicographic order."""
    out = []
    for x in range(len(s.alice_outcomes)):
        for y in range(len(s.bob_outcomes)):
            for a in range(s.alice_outcomes[x]):
                for b in range(s.bob_outcomes[y]):
                    out.append((x, y, a, b))
    return out


scenarios = st.builds(
    Scenario,
    st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple),
    st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple),
)


def test_chsh_corners():
    assert coord_index(CHSH, 0, 0, 0, 0) == 0
    assert coord_index(CHSH, 1, 1, 1, 1) == 15
    assert CHSH.dim == 16


def test_heterogeneous_index():
    s = Scenario((2, 3), (2, 2))
    # frozen from enumerate_labels: blocks of 4, 4, 6, 6
    assert coord_index(s, 1, 0, 2, 1) == 13
    assert enumerate_labels(s).index((1, 0, 2, 1)) == 13
    assert s.dim == 20


def test_out_of_range():
    with pytest.raises(ScenarioError):
        coord_index(CHSH, 2, 0, 0, 0)
    with pytest.raises(ScenarioError):
        coord_index(Scenario((2, 3), (2,)), 0, 0, 2, 0)


@given(scenarios)
def test_index_bijection(s):
    labels = enumerate_labels(s)
    assert [coord_index(s, *t) for t in labels] == list(range(s.dim))
    assert list(s.labels) == labels
    assert all(s.unindex(i) == t for i, t in enumerate(labels))


def test_parse_and_header():
    s = Scenario.parse("3,2,2,4")
    assert s.alice_outcomes == (2, 2, 2) and s.bob_outcomes == (4, 4)
    assert Scenario.from_header(s.header()) == s
    for bad in ("2,2,2", "a,b,c,d", "0,2,2,2"):
        with pytest.raises(ScenarioError):
            Scenario.parse(bad)


def test_validate():
    assert validate_behaviour(Behaviour.uniform(CHSH)) is None
    zero = Behaviour(CHSH, (Fraction(0),) * 16)
    v = validate_behaviour(zero)
    assert v is not None and v.block == (0, 0)
    with pytest.raises(ShapeError):
        Behaviour(CHSH, (Fraction(0),) * 15)
    neg = list(Behaviour.uniform(CHSH).coords)
    neg[0], neg[1] = Fraction(-1, 4), Fraction(3, 4)
    assert validate_behaviour(Behaviour(CHSH, tuple(neg))).coordinate == 0


def test_marginals():
    u = Behaviour.uniform(CHSH)
    for a, x, y in product(range(2), repeat=3):
        assert alice_marginal(u, a, x, y) == Fraction(1, 2)
        assert bob_marginal(u, a, x, y) == Fraction(1, 2)
    p = Behaviour(CHSH, deterministic_point(CHSH, (0, 0), (1, 0)))
    assert alice_marginal(p, 0, 1, 0) == 1
    assert bob_marginal(p, 1, 0, 0) == 1 and bob_marginal(p, 0, 0, 1) == 1


def test_signalling_counterexample():
    # Alice's outcome copies Bob's input
    p = Behaviour.from_function(CHSH, lambda x, y, a, b: Fraction(1, 2) if a == y else Fraction(0))
    assert validate_behaviour(p) is None
    assert not is_no_signalling(p)


def test_deterministic_points_are_ns():
    s = Scenario((2, 3), (3, 2))
    for am in product(range(2), range(3)):
        for bm in product(range(3), range(2)):
            assert is_no_signalling(Behaviour(s, deterministic_point(s, am, bm)))


def test_ns_rows_chsh():
    norm, ns = normalization_rows(CHSH), no_signalling_rows(CHSH)
    assert len(norm) == 4
    assert len(ns) == 8
    assert rank([r[1:] for r in norm + ns]) == 8


def test_ns_rows_single_input():
    assert no_signalling_rows(Scenario.homogeneous(1, 2, 1, 2)) == []


def test_ns_rows_heterogeneous_touch_right_coordinates():
    s = Scenario((2, 3), (2, 2))
    for row in no_signalling_rows(s):
        assert row[0] == 0
        touched = {s.labels[i] for i, c in enumerate(row[1:]) if c}
        # every touched label is a valid coordinate
        assert all(coord_index(s, *t) is not None for t in touched)
    u = Behaviour.uniform(s)
    assert all(sum(c * v for c, v in zip(r[1:], u.coords)) + r[0] == 0 for r in no_signalling_rows(s))


@st.composite
def local_behaviours(draw):
    s = draw(scenarios)
    k = draw(st.integers(1, 4))
    pts = []
    for _ in range(k):
        am = tuple(draw(st.integers(0, n - 1)) for n in s.alice_outcomes)
        bm = tuple(draw(st.integers(0, n - 1)) for n in s.bob_outcomes)
        pts.append(deterministic_point(s, am, bm))
    w = [Fraction(draw(st.integers(1, 9))) for _ in range(k)]
    tot = sum(w)
    coords = tuple(sum(wi * p[i] for wi, p in zip(w, pts)) / tot for i in range(s.dim))
    return Behaviour(s, coords)


@settings(max_examples=60)
@given(local_behaviours(), st.randoms(use_true_random=False))
def test_relabelling_preserves_validity_and_ns(p, rnd):
    s = p.scenario
    assert validate_behaviour(p) is None and is_no_signalling(p)
    xs = list(range(s.alice_inputs))
    rnd.shuffle(xs)
    # permute outcomes of every Alice input
    outs = [rnd.sample(range(n), n) for n in s.alice_outcomes]
    s2 = Scenario(tuple(s.alice_outcomes[x] for x in xs), s.bob_outcomes)
    q = Behaviour.from_function(s2, lambda x, y, a, b: p[xs[x], y, outs[xs[x]][a], b])
    assert validate_behaviour(q) is None and is_no_signalling(q)


def test_behaviour_text_roundtrip():
    s = Scenario((2, 3), (2,))
    p = Behaviour.from_function(s, lambda x, y, a, b: Fraction(1, s.alice_outcomes[x] * 2))
    text = p.to_text()
    assert Behaviour.from_text(text) == p
    assert text.splitlines()[:2] == ["behaviour", s.header()]
    with pytest.raises(ScenarioError):
        Behaviour.from_text("nope\n")


def test_fraction_text():
    assert format_fraction(Fraction(3, 1)) == "3"
    assert format_fraction(Fraction(-2, 6)) == "-1/3"
    assert parse_fraction("4/6") == Fraction(2, 3)
    with pytest.raises(ScenarioError):
        parse_fraction("1/0")


def test_rationalize_exactness():
    assert rationalize(0.25) == Fraction(1, 4)
    assert abs(float(rationalize(np.cos(np.pi / 8) ** 2 / 2)) - np.cos(np.pi / 8) ** 2 / 2) < 1e-10
    rng = np.random.default_rng(7)
    for _ in range(5):
        # a product behaviour is NS, so its rounding must stay exactly NS and normalized
        pa, pb = rng.dirichlet(np.ones(2), size=2), rng.dirichlet(np.ones(2), size=2)
        values = np.array([pa[x][a] * pb[y][b] for x, y, a, b in CHSH.labels])
        p = rationalize_behaviour(CHSH, values)
        assert validate_behaviour(p) is None and is_no_signalling(p)
        assert np.max(np.abs(np.array([float(c) for c in p.coords]) - values)) < 1e-10
