"""Double description method for pointed polyhedral cones ``{x : A x >= 0}``.

Rows are inserted in lexicographic order.  Rays are exact integer vectors
reduced by their gcd; their zero sets are packed into uint64 words so the
adjacency test runs in ``kernels.adjacent_pairs``.
"""
from __future__ import annotations

import logging
from math import gcd
from typing import Sequence

import numpy as np

from .. import kernels
from .linalg import inverse, rank, integer_row

log = logging.getLogger(__name__)


class LinealityError(ValueError):
    """The cone contains a line (constraint matrix is rank deficient)."""


def _normalize(vec) -> list[int]:
    g = 0
    for v in vec:
        g = gcd(g, int(v))
    if g > 1:
        return [int(v) // g for v in vec]
    return [int(v) for v in vec]


def _slacks(rays: list[list[int]], a: list[int]) -> np.ndarray:
    """Exact ``rays @ a``; int64 when no overflow is possible."""
    R = np.array(rays, dtype=object)
    bound = max(abs(int(v)) for v in R.flat) * max(max(abs(v) for v in a), 1) * len(a)
    if bound < kernels.INT64_SAFE:
        return R.astype(np.int64) @ np.array(a, dtype=np.int64)
    return R.dot(np.array(a, dtype=object))


def _initial_basis(A: list[list[int]], order: list[int], n: int) -> list[int]:
    chosen: list[int] = []
    for i in order:
        if rank([A[j] for j in chosen] + [A[i]]) > len(chosen):
            chosen.append(i)
            if len(chosen) == n:
                break
    return chosen


def extreme_rays(A: Sequence[Sequence], adjacency: str = "combinatorial") -> list[tuple[int, ...]]:
    """Extreme rays of ``{x : A x >= 0}`` as coprime integer vectors.

    ``adjacency`` selects the combinatorial test (default) or the algebraic
    rank test; both give the same answer on a minimal ray set.
    """
    A = [list(integer_row(r)) for r in A]
    if not A:
        raise LinealityError("no constraints")
    n = len(A[0])
    m = len(A)
    row_order = sorted(range(m), key=lambda i: A[i])
    basis = _initial_basis(A, row_order, n)
    if len(basis) < n:
        raise LinealityError(f"constraint matrix has rank {len(basis)} < {n}")
    inv = inverse([A[i] for i in basis])
    rays = [_normalize(integer_row([inv[r][j] for r in range(n)])) for j in range(n)]
    width = kernels.bit_width(m)
    zbits = np.zeros((n, width), dtype=np.uint64)
    # bit k <-> k-th processed row
    for j in range(n):
        for k in range(n):
            if k != j:
                zbits[j, k // 64] |= np.uint64(1) << np.uint64(k % 64)
    processed = list(basis)
    chosen = set(basis)
    rest = [i for i in row_order if i not in chosen]
    for step, i in enumerate(rest, start=n):
        if not rays:
            break
        a = A[i]
        s = _slacks(rays, a)
        pos = np.flatnonzero(s > 0)
        neg = np.flatnonzero(s < 0)
        zer = np.flatnonzero(s == 0)
        bit_word, bit = step // 64, np.uint64(1) << np.uint64(step % 64)
        if len(neg) == 0:
            zbits[zer, bit_word] |= bit
            processed.append(i)
            continue
        if adjacency == "combinatorial":
            pairs = kernels.adjacent_pairs(zbits, pos.astype(np.int64), neg.astype(np.int64), n - 2)
        else:
            pairs = _algebraic_pairs(A, processed, zbits, pos, neg, n)
        new_rays, new_bits = [], []
        for p, q in pairs:
            sp, sq = int(s[p]), int(s[q])
            new_rays.append(_normalize([sp * int(u) - sq * int(v) for u, v in zip(rays[q], rays[p])]))
            nb = zbits[p] & zbits[q]
            nb[bit_word] |= bit
            new_bits.append(nb)
        keep = np.concatenate([pos, zer])
        zbits_keep = zbits[keep]
        zbits_keep[len(pos):, bit_word] |= bit
        rays = [rays[k] for k in keep] + new_rays
        zbits = np.vstack([zbits_keep] + ([np.array(new_bits, dtype=np.uint64)] if new_bits else []))
        processed.append(i)
        log.debug("row %d/%d: %d rays", step + 1, m, len(rays))
    return sorted(tuple(r) for r in rays)


def _algebraic_pairs(A, processed, zbits, pos, neg, n):
    pairs = []
    for p in pos:
        for q in neg:
            common = zbits[p] & zbits[q]
            tight = [A[processed[k]] for k in range(len(processed))
                     if int(common[k // 64]) >> (k % 64) & 1]
            if len(tight) >= n - 2 and rank(tight) == n - 2:
                pairs.append((p, q))
    return pairs
