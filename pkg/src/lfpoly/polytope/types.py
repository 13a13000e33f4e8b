from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import integer_row


class PolytopeError(ValueError):
    pass


class UnboundedError(PolytopeError):
    pass


class EmptyPolytopeError(PolytopeError):
    pass


class DimensionError(PolytopeError):
    pass


@dataclass(frozen=True)
class Inequality:
    """``offset + coeffs . p >= 0`` (or ``== 0`` when used as an equality)."""

    offset: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_row(cls, row: Sequence) -> "Inequality":
        return cls(row[0], tuple(row[1:]))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def row(self) -> tuple[Fraction, ...]:
        return (self.offset, *self.coeffs)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.dim:
            raise DimensionError(f"row has dimension {self.dim}, point has {len(point)}")
        return self.offset + sum((c * Fraction(v) for c, v in zip(self.coeffs, point) if c), Fraction(0))

    def evaluate_float(self, point: Sequence[float]) -> float:
        return float(self.offset) + sum(float(c) * float(v) for c, v in zip(self.coeffs, point) if c)

    def normalized(self) -> "Inequality":
        """Integer coefficients with gcd 1, orientation kept."""
        return Inequality.from_row(integer_row(self.row))

    def normalized_equality(self) -> "Inequality":
        """As ``normalized`` but with the leading nonzero entry made positive."""
        ints = integer_row(self.row)
        lead = next((v for v in ints if v), 0)
        if lead < 0:
            ints = tuple(-v for v in ints)
        return Inequality.from_row(ints)

    def negated(self) -> "Inequality":
        return Inequality(-self.offset, tuple(-c for c in self.coeffs))

    def is_zero(self) -> bool:
        return self.offset == 0 and not any(self.coeffs)


@dataclass(frozen=True)
class HPolytope:
    dim: int
    inequalities: tuple[Inequality, ...]
    equalities: tuple[Inequality, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "equalities", tuple(self.equalities))
        for r in self.inequalities + self.equalities:
            if r.dim != self.dim:
                raise DimensionError(f"row of dimension {r.dim} in a {self.dim}-dimensional polytope")
        if any(not any(r.coeffs) for r in self.inequalities):
            raise PolytopeError("inequality rows must have a nonzero coefficient")

    def contains(self, point: Sequence) -> bool:
        return (all(r.evaluate(point) >= 0 for r in self.inequalities)
                and all(r.evaluate(point) == 0 for r in self.equalities))


def _point(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in v)


@dataclass(frozen=True)
class VPolytope:
    """Vertex list; duplicates removed on construction, order preserved."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        seen, unique = set(), []
        for v in self.vertices:
            v = _point(v)
            if len(v) != self.dim:
                raise DimensionError(f"vertex of dimension {len(v)} in a {self.dim}-dimensional polytope")
            if v not in seen:
                seen.add(v)
                unique.append(v)
        object.__setattr__(self, "vertices", tuple(unique))

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, point: Sequence) -> int | None:
        try:
            return self.vertices.index(_point(point))
        except ValueError:
            return None


@dataclass(frozen=True)
class Inside:
    """Convex weights, one per vertex of the polytope tested against."""

    weights: tuple[Fraction, ...]

    def check(self, point: Sequence, poly: VPolytope) -> bool:
        if len(self.weights) != len(poly.vertices):
            return False
        if any(w < 0 for w in self.weights) or sum(self.weights, Fraction(0)) != 1:
            return False
        for i in range(poly.dim):
            s = sum((w * v[i] for w, v in zip(self.weights, poly.vertices) if w), Fraction(0))
            if s != Fraction(point[i]):
                return False
        return True

    @property
    def inside(self) -> bool:
        return True


@dataclass(frozen=True)
class Outside:
    """Separating inequality: nonnegative on every vertex, negative at the query."""

    separator: Inequality

    def check(self, point: Sequence, poly: VPolytope) -> bool:
        return (self.separator.evaluate(point) < 0
                and all(self.separator.evaluate(v) >= 0 for v in poly.vertices))

    @property
    def inside(self) -> bool:
        return False


MembershipResult = Inside | Outside
