"""Vertex sets of the correlation polytopes LD, NS, PD, LF and SW, and the CH family.

Inputs and outcomes are 0-based: the friend input written x=1 in the
literature is input 0 here, and outcome "+1" is outcome 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

from .polytope import HPolytope, Inequality, VPolytope, remove_redundant, vertex_enum
from .polytope.linalg import rank
from .polytope.symmetry import Canonicalizer, SymmetryGroup
from .scenario import (
    Behaviour,
    Scenario,
    ScenarioError,
    all_outcome_maps,
    deterministic_point,
    no_signalling_rows,
    normalization_rows,
)

ONE, ZERO = Fraction(1), Fraction(0)


@dataclass(frozen=True)
class DeterministicStrategy:
    alice_map: tuple[int, ...]
    bob_map: tuple[int, ...]

    def point(self, s: Scenario) -> tuple[Fraction, ...]:
        if len(self.alice_map) != s.alice_inputs or len(self.bob_map) != s.bob_inputs:
            raise ScenarioError("strategy does not cover every input")
        if any(not 0 <= a < n for a, n in zip(self.alice_map, s.alice_outcomes)) or any(
            not 0 <= b < n for b, n in zip(self.bob_map, s.bob_outcomes)
        ):
            raise ScenarioError("strategy outcome outside the alphabet")
        return deterministic_point(s, self.alice_map, self.bob_map)


def deterministic_strategies(s: Scenario) -> Iterable[DeterministicStrategy]:
    for am in all_outcome_maps(s.alice_outcomes):
        for bm in all_outcome_maps(s.bob_outcomes):
            yield DeterministicStrategy(am, bm)


def ld_vertices(s: Scenario) -> VPolytope:
    return VPolytope(s.dim, tuple(st.point(s) for st in deterministic_strategies(s)))


def ns_hrep(s: Scenario) -> HPolytope:
    positivity = []
    for i in range(s.dim):
        coeffs = [ZERO] * s.dim
        coeffs[i] = ONE
        positivity.append(Inequality(ZERO, tuple(coeffs)))
    eqs = [Inequality.from_row(r) for r in normalization_rows(s) + no_signalling_rows(s)]
    return HPolytope(s.dim, tuple(positivity), tuple(eqs))


@lru_cache(maxsize=64)
def ns_vertices(s: Scenario) -> VPolytope:
    return vertex_enum(ns_hrep(s))


@lru_cache(maxsize=64)
def _equality_columns(s: Scenario) -> tuple[tuple[Fraction, ...], ...]:
    rows = normalization_rows(s) + no_signalling_rows(s)
    return tuple(tuple(r[1 + i] for r in rows) for i in range(s.dim))


def is_ns_vertex(point: Sequence[Fraction], s: Scenario) -> bool:
    """A feasible NS point is a vertex iff the equality columns on its support are independent."""
    cols = _equality_columns(s)
    support = [i for i, v in enumerate(point) if v != 0]
    return rank([cols[i] for i in support]) == len(support)


@dataclass(frozen=True)
class PDSpec:
    scenario: Scenario
    det_alice: frozenset[int] = frozenset()
    det_bob: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "det_alice", frozenset(self.det_alice))
        object.__setattr__(self, "det_bob", frozenset(self.det_bob))
        if any(not 0 <= x < self.scenario.alice_inputs for x in self.det_alice):
            raise ScenarioError("deterministic Alice input out of range")
        if any(not 0 <= y < self.scenario.bob_inputs for y in self.det_bob):
            raise ScenarioError("deterministic Bob input out of range")


class _Extreme:
    """One extreme point of the reduced scenario with its marginals."""

    def __init__(self, joint: Callable, alice: Callable, bob: Callable):
        self.joint, self.alice, self.bob = joint, alice, bob


def _delta(n: int, k: int) -> tuple[Fraction, ...]:
    return tuple(ONE if i == k else ZERO for i in range(n))


def _reduced_extremes(alice_outcomes: tuple[int, ...], bob_outcomes: tuple[int, ...]) -> list[_Extreme]:
    if alice_outcomes and bob_outcomes:
        sub = Scenario(alice_outcomes, bob_outcomes)
        out = []
        for v in ns_vertices(sub).vertices:
            q = Behaviour(sub, v)

            def joint(x, y, a, b, q=q):
                return q[x, y, a, b]

            def alice(x, a, q=q, sub=sub):
                return sum((q[x, 0, a, b] for b in range(sub.bob_outcomes[0])), ZERO)

            def bob(y, b, q=q, sub=sub):
                return sum((q[0, y, a, b] for a in range(sub.alice_outcomes[0])), ZERO)

            out.append(_Extreme(joint, alice, bob))
        return out
    # one side has no free inputs: vertices of the other side's marginal polytope
    out = []
    for am in all_outcome_maps(alice_outcomes):
        for bm in all_outcome_maps(bob_outcomes):
            out.append(_Extreme(
                lambda x, y, a, b, am=am, bm=bm: ONE if (a == am[x] and b == bm[y]) else ZERO,
                lambda x, a, am=am: ONE if a == am[x] else ZERO,
                lambda y, b, bm=bm: ONE if b == bm[y] else ZERO,
            ))
    return out


def pd_candidates(spec: PDSpec) -> list[tuple[Fraction, ...]]:
    s = spec.scenario
    free_x = [x for x in range(s.alice_inputs) if x not in spec.det_alice]
    free_y = [y for y in range(s.bob_inputs) if y not in spec.det_bob]
    det_x = sorted(spec.det_alice)
    det_y = sorted(spec.det_bob)
    rx = {x: i for i, x in enumerate(free_x)}
    ry = {y: i for i, y in enumerate(free_y)}
    extremes = _reduced_extremes(
        tuple(s.alice_outcomes[x] for x in free_x), tuple(s.bob_outcomes[y] for y in free_y)
    )
    points = []
    for q in extremes:
        for c in product(*(range(s.alice_outcomes[x]) for x in det_x)):
            cmap = dict(zip(det_x, c))
            for d in product(*(range(s.bob_outcomes[y]) for y in det_y)):
                dmap = dict(zip(det_y, d))
                coords = []
                for x, y, a, b in s.labels:
                    if x in cmap and y in dmap:
                        v = ONE if (a == cmap[x] and b == dmap[y]) else ZERO
                    elif x in cmap:
                        v = q.bob(ry[y], b) if a == cmap[x] else ZERO
                    elif y in dmap:
                        v = q.alice(rx[x], a) if b == dmap[y] else ZERO
                    else:
                        v = q.joint(rx[x], ry[y], a, b)
                    coords.append(v)
                points.append(tuple(coords))
    return points


def pd_vertices(spec: PDSpec) -> VPolytope:
    s = spec.scenario
    return remove_redundant(pd_candidates(spec), s.dim, lambda p: is_ns_vertex(p, s))


def lf_vertices(s: Scenario) -> VPolytope:
    """One friend per side, attached to input 0 of each party."""
    if s.alice_inputs < 2 or s.bob_inputs < 2:
        raise ScenarioError("local-friendliness scenario needs at least two inputs per party")
    return pd_vertices(PDSpec(s, frozenset({0}), frozenset({0})))


@dataclass(frozen=True)
class SWVertexLabel:
    friend_outcomes: tuple[int, ...]
    ns_extreme_index: int


def _friend_alphabets(rounds: int, friend_outcomes: int | Sequence[int]) -> tuple[int, ...]:
    if isinstance(friend_outcomes, int):
        return (friend_outcomes,) * rounds
    alph = tuple(friend_outcomes)
    if len(alph) != rounds:
        raise ScenarioError("one friend alphabet per round is required")
    return alph


def sw_scenario(rounds: int, friend_outcomes: int | Sequence[int] = 2, final_outcomes: int = 2,
                bob_outcomes: Sequence[int] = (2, 2)) -> Scenario:
    """Effective scenario: Alice inputs 0..R-1 are friend rounds, input R the final measurement."""
    if rounds < 1:
        raise ScenarioError("at least one round is required")
    return Scenario(_friend_alphabets(rounds, friend_outcomes) + (final_outcomes,), tuple(bob_outcomes))


def sw_labelled_points(rounds: int, friend_outcomes: int | Sequence[int] = 2, final_outcomes: int = 2,
                       bob_outcomes: Sequence[int] = (2, 2)) -> list[tuple[SWVertexLabel, tuple[Fraction, ...]]]:
    s = sw_scenario(rounds, friend_outcomes, final_outcomes, bob_outcomes)
    reduced = Scenario((final_outcomes,), tuple(bob_outcomes))
    extremes = [Behaviour(reduced, v) for v in ns_vertices(reduced).vertices]
    bob_marg = [
        [[sum((q[0, y, a, b] for a in range(final_outcomes)), ZERO) for b in range(nb)]
         for y, nb in enumerate(bob_outcomes)]
        for q in extremes
    ]
    out = []
    for cbar in all_outcome_maps(s.alice_outcomes[:rounds]):
        for j, q in enumerate(extremes):
            coords = []
            for x, y, a, b in s.labels:
                if x < rounds:
                    coords.append(bob_marg[j][y][b] if a == cbar[x] else ZERO)
                else:
                    coords.append(q[0, y, a, b])
            out.append((SWVertexLabel(tuple(cbar), j), tuple(coords)))
    return out


def sw_vertices(rounds: int, friend_outcomes: int | Sequence[int] = 2, final_outcomes: int = 2,
                bob_outcomes: Sequence[int] = (2, 2)) -> VPolytope:
    s = sw_scenario(rounds, friend_outcomes, final_outcomes, bob_outcomes)
    points = [p for _, p in sw_labelled_points(rounds, friend_outcomes, final_outcomes, bob_outcomes)]
    return remove_redundant(points, s.dim, lambda p: is_ns_vertex(p, s))


def ch_row(s: Scenario, alice_inputs: tuple[int, int] = (0, 1), bob_inputs: tuple[int, int] = (0, 1)) -> Inequality:
    """The CH expression on the given input pairs, outcome 0 playing "+".

    Oriented as a Bell expression: it is <= 0 on every local behaviour.
    The single-party terms use the other party's first listed input.
    """
    (x1, x2), (y1, y2) = alice_inputs, bob_inputs
    coeffs = [ZERO] * s.dim
    for x, y, sign in ((x1, y1, 1), (x1, y2, 1), (x2, y1, 1), (x2, y2, -1)):
        coeffs[s.index(x, y, 0, 0)] += sign
    for b in range(s.bob_outcomes[y1]):
        coeffs[s.index(x1, y1, 0, b)] -= 1
    for a in range(s.alice_outcomes[x1]):
        coeffs[s.index(x1, y1, a, 0)] -= 1
    return Inequality(ZERO, tuple(coeffs))


def ch_inequalities(s: Scenario) -> list[Inequality]:
    """The eight CH expressions of a two-input, two-outcome scenario (first one is the textbook row)."""
    if s.alice_outcomes != (2, 2) or s.bob_outcomes != (2, 2):
        raise ScenarioError("CH inequalities need two binary inputs per party")
    base = ch_row(s)
    group = SymmetryGroup.for_scenario(s)
    canon = Canonicalizer(group)
    rows, seen = [], set()
    for g in [None] + list(range(group.order)):
        row = base if g is None else group.act_on_row(g, base)
        key = canon.reduce(row)
        if key not in seen:
            seen.add(key)
            rows.append(row)
    return rows


def evaluate_inequality(row: Inequality, p: Behaviour | Sequence[Fraction]) -> Fraction:
    return row.evaluate(getattr(p, "coords", p))
