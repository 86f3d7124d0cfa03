"""Slow, obviously-correct reference implementations used by the tests.

Pure Python on purpose: nothing here shares code with the package.  The one
exception is ``knn_pairwise``, a full-sort numpy version for matrix sizes the
pure loop is too slow for.
"""

import numpy as np

from itertools import combinations
from math import sqrt
from statistics import median, pstdev, stdev


def _cmp(a, b):
    return (a > b) - (a < b)


def kendall_tau_brute(x, y, variant="b"):
    """Enumerate all pairs; tau-b = (C - D) / sqrt((n0 - T_x) (n0 - T_y))."""
    assert len(x) == len(y)
    concordant = discordant = tied_x = tied_y = pairs = 0
    for i, j in combinations(range(len(x)), 2):
        pairs += 1
        a = _cmp(x[i], x[j])
        b = _cmp(y[i], y[j])
        if a == 0:
            tied_x += 1
        if b == 0:
            tied_y += 1
        if a * b > 0:
            concordant += 1
        elif a * b < 0:
            discordant += 1
    if tied_x == pairs or tied_y == pairs:
        return 0.0
    if variant == "a":
        return (concordant - discordant) / pairs
    return (concordant - discordant) / sqrt((pairs - tied_x) * (pairs - tied_y))


def knn_brute(rows, k):
    out = []
    for i, r in enumerate(rows):
        dists = sorted(
            sqrt(sum((a - b) ** 2 for a, b in zip(r, s))) for j, s in enumerate(rows) if j != i
        )
        out.append(dists[k - 1])
    return out


def knn_pairwise(values, k):
    """Materialise every pairwise distance, drop the diagonal, fully sort."""
    v = np.asarray(values, dtype=np.int64)
    n = v.shape[0]
    d2 = ((v[:, None, :] - v[None, :, :]) ** 2).sum(axis=2)
    off_diagonal = d2[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    return np.sqrt(np.sort(off_diagonal, axis=1)[:, k - 1].astype(float))


def robust_brute(xs, sample=True):
    sd = stdev(xs) if sample else pstdev(xs)
    if sd == 0:
        return [0.0] * len(xs)
    m = median(xs)
    return [abs(v - m) / sd for v in xs]


def persistence_brute(xs):
    return [0.0] + [abs(xs[i] - xs[i - 1]) for i in range(1, len(xs))]
