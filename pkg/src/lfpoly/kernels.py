"""Hot combinatorial kernels, each with a numba and a numpy implementation.

``adjacent_pairs`` is the combinatorial adjacency test of the double
description method; ``orbit_images`` maps one integer inequality row through
every element of a coordinate-permutation group and reduces the images to a
chart.  The module-level names dispatch on ``_accel.USE_NUMBA``.
"""
import numpy as np

from ._accel import USE_NUMBA, optional_njit

# Keeps |entries| of every intermediate below 2**62.
INT64_SAFE = 1 << 62


def bit_width(n_rows: int) -> int:
    return max(1, (n_rows + 63) // 64)


@optional_njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@optional_njit(cache=True)
def _adjacent_pairs_numba(zbits, pos, neg, min_common):
    n_rays, width = zbits.shape
    out = np.empty((max(16, len(pos) + len(neg)), 2), dtype=np.int64)
    inter = np.empty(width, dtype=np.uint64)
    count = 0
    for ip in range(len(pos)):
        p = pos[ip]
        for iq in range(len(neg)):
            q = neg[iq]
            common = 0
            for w in range(width):
                inter[w] = zbits[p, w] & zbits[q, w]
                common += _popcount64(inter[w])
            if common < min_common:
                continue
            adjacent = True
            for t in range(n_rays):
                if t == p or t == q:
                    continue
                inside = True
                for w in range(width):
                    if inter[w] & ~zbits[t, w]:
                        inside = False
                        break
                if inside:
                    adjacent = False
                    break
            if adjacent:
                if count == out.shape[0]:
                    grown = np.empty((2 * count, 2), dtype=np.int64)
                    grown[:count] = out
                    out = grown
                out[count, 0] = p
                out[count, 1] = q
                count += 1
    return out[:count]


def _adjacent_pairs_numpy(zbits, pos, neg, min_common, chunk=256):
    pairs = []
    if len(pos) == 0 or len(neg) == 0:
        return np.empty((0, 2), dtype=np.int64)
    for p in pos:
        inter = zbits[p] & zbits[neg]
        common = np.bitwise_count(inter).sum(axis=1)
        keep = common >= min_common
        cand, inter = neg[keep], inter[keep]
        for start in range(0, len(cand), chunk):
            block = inter[start:start + chunk]
            # rays whose zero set contains the common zero set; p and q always do
            contained = ((block[:, None, :] & ~zbits[None, :, :]) == 0).all(axis=2).sum(axis=1)
            for q in cand[start:start + chunk][contained == 2]:
                pairs.append((p, q))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


@optional_njit(cache=True)
def _orbit_images_numba(row, perms, transform):
    n_group, dim = perms.shape
    k = transform.shape[1]
    out = np.zeros((n_group, k), dtype=np.int64)
    permuted = np.empty(dim + 1, dtype=np.int64)
    for g in range(n_group):
        permuted[0] = row[0]
        for i in range(dim):
            permuted[i + 1] = row[perms[g, i] + 1]
        for j in range(k):
            acc = 0
            for i in range(dim + 1):
                acc += permuted[i] * transform[i, j]
            out[g, j] = acc
        d = 0
        for j in range(k):
            a = abs(out[g, j])
            while a:
                d, a = a, d % a
        if d > 1:
            for j in range(k):
                out[g, j] //= d
    return out


def _orbit_images_numpy(row, perms, transform):
    permuted = np.concatenate([np.full((len(perms), 1), row[0], dtype=row.dtype), row[1:][perms]], axis=1)
    images = permuted @ transform
    g = np.gcd.reduce(images, axis=1)
    g[g == 0] = 1
    if images.dtype == object:
        return images // g[:, None]
    return images // g[:, None].astype(images.dtype)


if USE_NUMBA:
    adjacent_pairs = _adjacent_pairs_numba
    _orbit_images_fast = _orbit_images_numba
else:
    adjacent_pairs = _adjacent_pairs_numpy
    _orbit_images_fast = _orbit_images_numpy


def orbit_images(row, perms, transform):
    """Images of ``row`` (offset first) under every permutation, reduced by ``transform``.

    Each image is divided by the gcd of its entries.  Falls back to exact
    Python integers when int64 could overflow.
    """
    row = np.asarray(row, dtype=object)
    transform = np.asarray(transform, dtype=object)
    bound = max(int(abs(row).max(initial=0)), 1) * max(int(abs(transform).max(initial=0)), 1) * len(row)
    perms = np.asarray(perms, dtype=np.int64)
    if bound < INT64_SAFE:
        return _orbit_images_fast(row.astype(np.int64), perms, transform.astype(np.int64))
    return _orbit_images_numpy(row, perms, transform)
