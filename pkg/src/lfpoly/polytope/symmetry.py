"""Relabeling symmetries of a scenario and canonical forms of inequalities.

Two rows are equivalent when one maps to a positive multiple of the other
under some relabeling, modulo the equalities defining the no-signalling
affine hull (normalization and marginal consistency).  The canonical form is
the lexicographically least gcd-normalized image, written in the coordinates
of a fixed affine chart of that hull.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial, prod
from typing import Sequence

import numpy as np

from .. import kernels
from ..scenario import Scenario, no_signalling_rows, normalization_rows
from .linalg import AffineChart, integer_row
from .types import Inequality

MAX_GROUP_ORDER = 200_000


def _input_perms(outcomes: Sequence[int]):
    """Input permutations that only exchange inputs with equal alphabets."""
    n = len(outcomes)
    for perm in permutations(range(n)):
        if all(outcomes[perm[i]] == outcomes[i] for i in range(n)):
            yield perm


def _outcome_perms(outcomes: Sequence[int]):
    return product(*(list(permutations(range(k))) for k in outcomes))


@dataclass(frozen=True)
class SymmetryGroup:
    """All relabelings of a scenario as coordinate permutations.

    Row ``g`` of ``perms`` sends a behaviour p to q with q[i] = p[perms[g, i]].
    """

    scenario: Scenario
    perms: np.ndarray = field(repr=False)
    party_swap: bool = False

    @property
    def order(self) -> int:
        return len(self.perms)

    @classmethod
    def for_scenario(cls, s: Scenario, party_swap: bool = True) -> "SymmetryGroup":
        sizes = [
            sum(1 for _ in _input_perms(s.alice_outcomes)),
            sum(1 for _ in _input_perms(s.bob_outcomes)),
        ]
        out_a = prod(factorial(k) for k in s.alice_outcomes)
        out_b = prod(factorial(k) for k in s.bob_outcomes)
        swap = party_swap and s.alice_outcomes == s.bob_outcomes
        order = sizes[0] * sizes[1] * out_a * out_b * (2 if swap else 1)
        if order > MAX_GROUP_ORDER:
            raise ValueError(f"symmetry group of order {order} exceeds {MAX_GROUP_ORDER}")
        labels = s.labels
        perms = []
        for pa in _input_perms(s.alice_outcomes):
            for pb in _input_perms(s.bob_outcomes):
                for ta in _outcome_perms(s.alice_outcomes):
                    for tb in _outcome_perms(s.bob_outcomes):
                        base = [s.index(pa[x], pb[y], ta[x][a], tb[y][b]) for x, y, a, b in labels]
                        perms.append(base)
                        if swap:
                            perms.append([base[s.index(y, x, b, a)] for x, y, a, b in labels])
        arr = np.array(perms, dtype=np.int64)
        arr = np.unique(arr, axis=0)
        return cls(s, arr, swap)

    def apply(self, g: int, coords: Sequence) -> tuple:
        return tuple(coords[j] for j in self.perms[g])

    def act_on_row(self, g: int, row: Inequality) -> Inequality:
        """The row r' with r'(g p) = r(p) for every behaviour p."""
        return Inequality(row.offset, tuple(row.coeffs[j] for j in self.perms[g]))


def ns_chart(s: Scenario) -> AffineChart:
    return AffineChart(normalization_rows(s) + no_signalling_rows(s), s.dim)


class Canonicalizer:
    """Caches the chart transform for one symmetry group."""

    def __init__(self, group: SymmetryGroup, chart: AffineChart | None = None):
        self.group = group
        self.chart = chart if chart is not None else ns_chart(group.scenario)
        self.transform = np.array(self.chart.transform_matrix(), dtype=object)

    def images(self, row: Inequality) -> np.ndarray:
        ints = np.array(integer_row(row.row), dtype=object)
        return kernels.orbit_images(ints, self.group.perms, self.transform)

    def reduce(self, row: Inequality) -> tuple[int, ...]:
        """Chart form of ``row`` itself (identity element only)."""
        ints = np.array(integer_row(row.row), dtype=object)
        ident = np.arange(self.group.scenario.dim, dtype=np.int64)[None, :]
        return tuple(int(v) for v in kernels.orbit_images(ints, ident, self.transform)[0])

    def canonical(self, row: Inequality) -> tuple[int, ...]:
        imgs = self.images(row)
        if imgs.dtype == object:
            return min(tuple(int(v) for v in r) for r in imgs)
        cand = np.arange(len(imgs))
        for j in range(imgs.shape[1]):
            col = imgs[cand, j]
            cand = cand[col == col.min()]
            if len(cand) == 1:
                break
        return tuple(int(v) for v in imgs[cand[0]])

    def orbit(self, row: Inequality) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in r) for r in self.images(row)}

    def stabilizer_order(self, row: Inequality) -> int:
        own = np.array(self.reduce(row), dtype=object)
        imgs = self.images(row)
        return int(sum(1 for r in imgs if tuple(r) == tuple(own)))


def canonicalize_inequality(row: Inequality, group: SymmetryGroup, chart: AffineChart | None = None) -> tuple[int, ...]:
    return Canonicalizer(group, chart).canonical(row)
