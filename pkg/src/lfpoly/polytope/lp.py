"""Exact phase-one simplex for ``A x = b, x >= 0``.

The tableau is kept as Python integers over a common denominator (Edmonds'
integer-preserving pivoting), and pivots follow Bland's rule, so the method
terminates and every returned number is exact.  An infeasible system comes
back with a Farkas vector ``y`` satisfying ``y.A <= 0`` and ``y.b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


@dataclass(frozen=True)
class Feasible:
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]


def _scaled_rows(A, b):
    rows, scales = [], []
    for row, rhs in zip(A, b):
        den = Fraction(rhs).denominator
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        sign = -1 if rhs < 0 else 1
        s = sign * den
        rows.append(([int(Fraction(v) * s) for v in row], int(Fraction(rhs) * s)))
        scales.append(s)
    return rows, scales


def feasibility(A: Sequence[Sequence], b: Sequence, max_pivots: int | None = None) -> Feasible | Infeasible:
    m = len(A)
    n = len(A[0]) if m else 0
    rows, scales = _scaled_rows(A, b)
    width = n + m + 1
    rhs = width - 1
    T = []
    for i, (row, r) in enumerate(rows):
        t = row + [0] * m + [r]
        t[n + i] = 1
        T.append(t)
    # reduced costs of the phase-one objective: sum of artificials
    obj = [-sum(T[i][j] for i in range(m)) for j in range(n)] + [0] * m + [-sum(T[i][rhs] for i in range(m))]
    T.append(obj)
    basis = [n + i for i in range(m)]
    D = 1
    pivots = 0
    while True:
        cost = T[m]
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                key = (Fraction(T[i][rhs], a), basis[i])
                if best is None or key < best:
                    best, leave = key, i
        if leave is None:  # cannot happen: phase one is bounded below by 0
            raise RuntimeError("phase-one objective unbounded")
        p = T[leave][enter]
        prow = T[leave]
        for i in range(m + 1):
            if i == leave:
                continue
            f = T[i][enter]
            if f == 0:
                T[i] = [(p * v) // D for v in T[i]]
            else:
                T[i] = [(p * v - f * w) // D for v, w in zip(T[i], prow)]
        D = p
        basis[leave] = enter
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")
    value = Fraction(-T[m][rhs], D)
    if value == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = Fraction(T[i][rhs], D)
        return Feasible(tuple(x))
    # artificial column i has reduced cost 1 - y_i for the scaled rows
    y = tuple((1 - Fraction(T[m][n + i], D)) * scales[i] for i in range(m))
    return Infeasible(y)
