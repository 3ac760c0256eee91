"""Slow, obviously-correct reference implementations used to check the library.

They share no code with the package: plain tuples, itertools and the
definitions written out directly.
"""

import itertools
import math


def traces(concepts, S):
    return {tuple(c[i] for i in S) for c in concepts}


def brute_vc(concepts, n):
    best = 0
    for size in range(n + 1):
        if any(len(traces(concepts, S)) == 2**size for S in itertools.combinations(range(n), size)):
            best = size
    return best


def brute_growth(concepts, n, m):
    return max(len(traces(concepts, S)) for S in itertools.combinations(range(n), m))


def _realises(rows, S, c, eps):
    for e in itertools.product((0, 1), repeat=len(S)):
        if not any(
            all((r[i] >= ci + eps) if ei else (r[i] <= ci - eps) for i, ci, ei in zip(S, c, e)) for r in rows
        ):
            return False
    return True


def brute_eps_shatters(rows, S, eps):
    """Try every witness built from midpoints of pairs of achieved values (and the values themselves)."""
    cands = []
    for i in S:
        vals = sorted({r[i] for r in rows})
        cs = {v for v in vals} | {(a + b) / 2 for a, b in itertools.combinations(vals, 2)}
        cands.append(sorted(c for c in cs if 0 <= c <= 1))
    return any(_realises(rows, S, c, eps) for c in itertools.product(*cands))


def brute_fat(rows, n, eps):
    best = 0
    for size in range(1, n + 1):
        if any(brute_eps_shatters(rows, S, eps) for S in itertools.combinations(range(n), size)):
            best = size
        else:
            break
    return best


def brute_cover(dist, eps):
    n = len(dist)
    for size in range(1, n + 1):
        for centres in itertools.combinations(range(n), size):
            if all(any(dist[p][c] < eps for c in centres) for p in range(n)):
                return size
    raise AssertionError("unreachable")


def euclid(points):
    return [[math.dist(p, q) for q in points] for p in points]
