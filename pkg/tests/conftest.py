"""Shared test helpers: independent dense GF(2) oracles.

These oracles are deliberately naive (plain dense Gaussian elimination,
brute-force enumeration) and independent of the library code paths they
are used to check.
"""

from __future__ import annotations

import numpy as np


def dense_rank_oracle(dense) -> int:
    """GF(2) rank by textbook row elimination on a dense copy."""
    a = (np.asarray(dense, dtype=np.uint8) % 2).copy()
    m, n = a.shape
    r = 0
    for col in range(n):
        pivot = None
        for row in range(r, m):
            if a[row, col]:
                pivot = row
                break
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for row in range(m):
            if row != r and a[row, col]:
                a[row] ^= a[r]
        r += 1
        if r == m:
            break
    return r


def dense_solve_oracle(dense, s):
    """Any solution x of A x = s over GF(2), or None if unsolvable."""
    a = (np.asarray(dense, dtype=np.uint8) % 2).copy()
    s = (np.asarray(s, dtype=np.uint8) % 2).copy()
    m, n = a.shape
    aug = np.concatenate([a, s.reshape(-1, 1)], axis=1)
    pivots = []
    r = 0
    for col in range(n):
        hit = None
        for row in range(r, m):
            if aug[row, col]:
                hit = row
                break
        if hit is None:
            continue
        aug[[r, hit]] = aug[[hit, r]]
        for row in range(m):
            if row != r and aug[row, col]:
                aug[row] ^= aug[r]
        pivots.append(col)
        r += 1
    if np.any(aug[r:, n]):
        return None
    x = np.zeros(n, dtype=np.uint8)
    for k, col in enumerate(pivots):
        x[col] = aug[k, n]
    return x


def brute_force_min_metric(dense, s, llrs, max_cols=22):
    """Exhaustive maximum-likelihood search: min path metric over all
    patterns x with A x = s.  Returns (best_pm, best_x) with best_x None
    when no pattern satisfies the syndrome."""
    a = np.asarray(dense, dtype=np.uint8) % 2
    s = np.asarray(s, dtype=np.uint8) % 2
    m, n = a.shape
    assert n <= max_cols, "brute force limited to small instances"
    patterns = np.arange(1 << n, dtype=np.uint64)
    bits = ((patterns[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint8)
    syn = bits @ a.T % 2
    ok = np.all(syn == s, axis=1)
    if not ok.any():
        return np.inf, None
    pm = bits[ok] @ np.asarray(llrs, dtype=np.float64)
    k = int(np.argmin(pm))
    return float(pm[k]), bits[ok][k]


def random_sparse_dense(rng, m, n, density=0.3):
    return (rng.random((m, n)) < density).astype(np.uint8)
