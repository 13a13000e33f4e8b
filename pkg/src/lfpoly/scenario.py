"""Scenarios, behaviours and the coordinate conventions shared by every module.

A behaviour is stored as a flat vector of exact rationals p(ab|xy) ordered
lexicographically by (x, y, a, b), all labels 0-based.  Outcome alphabets may
differ between inputs, which is what the sequential scenario needs (the final
Alice input can have a different alphabet from the friend rounds).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np


class ScenarioError(ValueError):
    """Label out of range or malformed scenario description."""


class ShapeError(ValueError):
    """Vector length does not match the scenario dimension."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats must be rationalized explicitly")
    return Fraction(value)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"bad rational {text!r}") from exc


@dataclass(frozen=True)
class Scenario:
    alice_outcomes: tuple[int, ...]
    bob_outcomes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alice_outcomes", tuple(int(n) for n in self.alice_outcomes))
        object.__setattr__(self, "bob_outcomes", tuple(int(n) for n in self.bob_outcomes))
        if not self.alice_outcomes or not self.bob_outcomes:
            raise ScenarioError("each party needs at least one input")
        if min(self.alice_outcomes + self.bob_outcomes) < 1:
            raise ScenarioError("outcome counts must be positive")

    @classmethod
    def homogeneous(cls, ma: int, na: int, mb: int, nb: int) -> "Scenario":
        if min(ma, mb) < 1:
            raise ScenarioError("input counts must be positive")
        return cls((na,) * ma, (nb,) * mb)

    @classmethod
    def parse(cls, spec: str) -> "Scenario":
        """Parse the compact ``MA,NA,MB,NB`` form."""
        try:
            ma, na, mb, nb = (int(t) for t in spec.split(","))
        except ValueError as exc:
            raise ScenarioError(f"scenario spec must be MA,NA,MB,NB, got {spec!r}") from exc
        return cls.homogeneous(ma, na, mb, nb)

    @property
    def alice_inputs(self) -> int:
        return len(self.alice_outcomes)

    @property
    def bob_inputs(self) -> int:
        return len(self.bob_outcomes)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.alice_outcomes)) == 1 and len(set(self.bob_outcomes)) == 1

    @cached_property
    def block_offsets(self) -> tuple[tuple[int, ...], ...]:
        offsets, pos = [], 0
        for na in self.alice_outcomes:
            row = []
            for nb in self.bob_outcomes:
                row.append(pos)
                pos += na * nb
            offsets.append(tuple(row))
        return tuple(offsets)

    @cached_property
    def dim(self) -> int:
        return sum(self.alice_outcomes) * sum(self.bob_outcomes)

    def index(self, x: int, y: int, a: int, b: int) -> int:
        if not (0 <= x < self.alice_inputs and 0 <= y < self.bob_inputs):
            raise ScenarioError(f"input pair ({x}, {y}) out of range")
        if not (0 <= a < self.alice_outcomes[x] and 0 <= b < self.bob_outcomes[y]):
            raise ScenarioError(f"outcome pair ({a}, {b}) out of range for inputs ({x}, {y})")
        return self.block_offsets[x][y] + a * self.bob_outcomes[y] + b

    @cached_property
    def labels(self) -> tuple[tuple[int, int, int, int], ...]:
        """All (x, y, a, b) tuples in coordinate order."""
        return tuple(
            (x, y, a, b)
            for x, na in enumerate(self.alice_outcomes)
            for y, nb in enumerate(self.bob_outcomes)
            for a in range(na)
            for b in range(nb)
        )

    def unindex(self, i: int) -> tuple[int, int, int, int]:
        if not 0 <= i < self.dim:
            raise ScenarioError(f"coordinate {i} out of range")
        return self.labels[i]

    def blocks(self) -> Iterator[tuple[int, int, range]]:
        for x, na in enumerate(self.alice_outcomes):
            for y, nb in enumerate(self.bob_outcomes):
                start = self.block_offsets[x][y]
                yield x, y, range(start, start + na * nb)

    def header(self) -> str:
        a = " ".join(map(str, self.alice_outcomes))
        b = " ".join(map(str, self.bob_outcomes))
        return f"{self.alice_inputs} {self.bob_inputs} | {a} | {b}"

    @classmethod
    def from_header(cls, line: str) -> "Scenario":
        try:
            head, a, b = line.split("|")
            ma, mb = (int(t) for t in head.split())
            alice = tuple(int(t) for t in a.split())
            bob = tuple(int(t) for t in b.split())
        except ValueError as exc:
            raise ScenarioError(f"bad scenario line {line!r}") from exc
        if len(alice) != ma or len(bob) != mb:
            raise ScenarioError(f"outcome lists do not match input counts in {line!r}")
        return cls(alice, bob)

    def swapped(self) -> "Scenario":
        return Scenario(self.bob_outcomes, self.alice_outcomes)


def coord_index(scenario: Scenario, x: int, y: int, a: int, b: int) -> int:
    return scenario.index(x, y, a, b)


@dataclass(frozen=True)
class Behaviour:
    """Exact behaviour.  ``numeric`` optionally keeps unrounded float values."""

    scenario: Scenario
    coords: tuple[Fraction, ...]
    numeric: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if len(coords) != self.scenario.dim:
            raise ShapeError(f"expected {self.scenario.dim} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def __getitem__(self, key: tuple[int, int, int, int]) -> Fraction:
        x, y, a, b = key
        return self.coords[self.scenario.index(x, y, a, b)]

    @classmethod
    def from_function(cls, scenario: Scenario, fn) -> "Behaviour":
        return cls(scenario, tuple(as_fraction(fn(*lab)) for lab in scenario.labels))

    @classmethod
    def uniform(cls, scenario: Scenario) -> "Behaviour":
        return cls.from_function(
            scenario, lambda x, y, a, b: Fraction(1, scenario.alice_outcomes[x] * scenario.bob_outcomes[y])
        )

    def to_text(self) -> str:
        lines = ["behaviour", self.scenario.header()]
        for (x, y, a, b), q in zip(self.scenario.labels, self.coords):
            lines.append(f"{x} {y} {a} {b} {format_fraction(q)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Behaviour":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0] != "behaviour":
            raise ScenarioError("behaviour file must start with 'behaviour'")
        scenario = Scenario.from_header(lines[1])
        coords: list[Fraction | None] = [None] * scenario.dim
        for ln in lines[2:]:
            parts = ln.split()
            if len(parts) != 5:
                raise ScenarioError(f"bad behaviour line {ln!r}")
            x, y, a, b = (int(t) for t in parts[:4])
            coords[scenario.index(x, y, a, b)] = parse_fraction(parts[4])
        if any(c is None for c in coords):
            raise ShapeError("behaviour file does not list every coordinate")
        return cls(scenario, tuple(coords))


@dataclass(frozen=True)
class Violation:
    block: tuple[int, int]
    coordinate: int | None
    message: str


def validate_behaviour(p: Behaviour) -> Violation | None:
    """Return ``None`` when ``p`` is normalized and nonnegative, else the first offence."""
    s = p.scenario
    for x, y, rng in s.blocks():
        for i in rng:
            if p.coords[i] < 0:
                return Violation((x, y), i, f"negative coordinate {p.coords[i]} at {s.labels[i]}")
        total = sum((p.coords[i] for i in rng), Fraction(0))
        if total != 1:
            return Violation((x, y), None, f"block ({x}, {y}) sums to {total}")
    return None


def alice_marginal(p: Behaviour, a: int, x: int, y: int) -> Fraction:
    s = p.scenario
    return sum((p.coords[s.index(x, y, a, b)] for b in range(s.bob_outcomes[y])), Fraction(0))


def bob_marginal(p: Behaviour, b: int, x: int, y: int) -> Fraction:
    s = p.scenario
    return sum((p.coords[s.index(x, y, a, b)] for a in range(s.alice_outcomes[x])), Fraction(0))


def is_no_signalling(p: Behaviour) -> bool:
    s = p.scenario
    for x, na in enumerate(s.alice_outcomes):
        for a in range(na):
            ref = alice_marginal(p, a, x, 0)
            if any(alice_marginal(p, a, x, y) != ref for y in range(1, s.bob_inputs)):
                return False
    for y, nb in enumerate(s.bob_outcomes):
        for b in range(nb):
            ref = bob_marginal(p, b, 0, y)
            if any(bob_marginal(p, b, x, y) != ref for x in range(1, s.alice_inputs)):
                return False
    return True


def _row(scenario: Scenario, terms: dict[int, int], offset: int = 0) -> tuple[Fraction, ...]:
    coeffs = [Fraction(0)] * scenario.dim
    for i, c in terms.items():
        coeffs[i] += c
    return (Fraction(offset), *coeffs)


def normalization_rows(scenario: Scenario) -> list[tuple[Fraction, ...]]:
    """``-1 + sum_ab p(ab|xy) = 0`` for every input pair, as (offset, coeffs...)."""
    return [_row(scenario, {i: 1 for i in rng}, -1) for _, _, rng in scenario.blocks()]


def no_signalling_rows(scenario: Scenario) -> list[tuple[Fraction, ...]]:
    """Marginal differences between consecutive inputs of the other party."""
    s = scenario
    rows = []
    for x, na in enumerate(s.alice_outcomes):
        for a in range(na):
            for y in range(s.bob_inputs - 1):
                terms: dict[int, int] = {}
                for b in range(s.bob_outcomes[y]):
                    terms[s.index(x, y, a, b)] = 1
                for b in range(s.bob_outcomes[y + 1]):
                    terms[s.index(x, y + 1, a, b)] = -1
                rows.append(_row(s, terms))
    for y, nb in enumerate(s.bob_outcomes):
        for b in range(nb):
            for x in range(s.alice_inputs - 1):
                terms = {}
                for a in range(s.alice_outcomes[x]):
                    terms[s.index(x, y, a, b)] = 1
                for a in range(s.alice_outcomes[x + 1]):
                    terms[s.index(x + 1, y, a, b)] = -1
                rows.append(_row(s, terms))
    return rows


def deterministic_point(scenario: Scenario, alice_map: Sequence[int], bob_map: Sequence[int]) -> tuple[Fraction, ...]:
    one, zero = Fraction(1), Fraction(0)
    return tuple(
        one if a == alice_map[x] and b == bob_map[y] else zero for x, y, a, b in scenario.labels
    )


def product_point(
    scenario: Scenario,
    alice: Sequence[Sequence[Fraction]],
    bob: Sequence[Sequence[Fraction]],
) -> tuple[Fraction, ...]:
    """p(ab|xy) = alice[x][a] * bob[y][b]."""
    return tuple(alice[x][a] * bob[y][b] for x, y, a, b in scenario.labels)


def all_outcome_maps(outcomes: Sequence[int]):
    return product(*(range(n) for n in outcomes))


def rationalize(value: float, max_denominator: int = 10**6, tol: float = 1e-12) -> Fraction:
    """Continued-fraction rounding; values within ``tol`` of an integer snap to it."""
    q = Fraction(value).limit_denominator(max_denominator)
    nearest = round(value)
    if abs(value - nearest) < tol:
        return Fraction(nearest)
    return q


def rationalize_behaviour(scenario: Scenario, values: np.ndarray, max_denominator: int = 10**6) -> Behaviour:
    """Round a numeric no-signalling behaviour to an exact one.

    Rounding happens on the marginals p(a|x), p(b|y) and on the joint terms
    with a, b below the last outcome; the remaining coordinates are rebuilt
    from those, so the result is exactly normalized and exactly no-signalling.
    """
    s = scenario
    values = np.asarray(values, dtype=float)
    if values.shape != (s.dim,):
        raise ShapeError(f"expected {s.dim} values, got shape {values.shape}")
    r = lambda v: rationalize(float(v), max_denominator)  # noqa: E731

    def val(x, y, a, b):
        return values[s.index(x, y, a, b)]

    pa = [[r(np.mean([sum(val(x, y, a, b) for b in range(s.bob_outcomes[y])) for y in range(s.bob_inputs)]))
           for a in range(na - 1)] for x, na in enumerate(s.alice_outcomes)]
    pb = [[r(np.mean([sum(val(x, y, a, b) for a in range(s.alice_outcomes[x])) for x in range(s.alice_inputs)]))
           for b in range(nb - 1)] for y, nb in enumerate(s.bob_outcomes)]
    coords = [Fraction(0)] * s.dim
    for x, y, rng in s.blocks():
        na, nb = s.alice_outcomes[x], s.bob_outcomes[y]
        joint = [[r(val(x, y, a, b)) for b in range(nb - 1)] for a in range(na - 1)]
        for a in range(na):
            for b in range(nb):
                if a < na - 1 and b < nb - 1:
                    q = joint[a][b]
                elif a < na - 1:
                    q = pa[x][a] - sum(joint[a], Fraction(0))
                elif b < nb - 1:
                    q = pb[y][b] - sum((joint[k][b] for k in range(na - 1)), Fraction(0))
                else:
                    q = (1 - sum((pa[x][k] for k in range(na - 1)), Fraction(0))
                         - sum((pb[y][k] for k in range(nb - 1)), Fraction(0))
                         + sum((joint[i][j] for i in range(na - 1) for j in range(nb - 1)), Fraction(0)))
                coords[s.index(x, y, a, b)] = q
    return Behaviour(s, tuple(coords), numeric=values.copy())
