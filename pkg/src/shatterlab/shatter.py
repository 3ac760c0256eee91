"""Exact shattering, growth function, VC dimension and fat-shattering dimension.

Subsets are searched level by level in ascending size. Both shattering and
eps-shattering are hereditary (a subset of a shattered set is shattered, with
the restricted witness in the eps case), so the candidates of size n+1 are
exactly the sets all of whose n-subsets survived the previous level. Within a
level candidates are generated in lexicographic order, which makes the
returned certificate the lexicographically first one of maximal size.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import ConceptClass, FunctionClass, PointSubset
from .errors import DomainError, EmptyClassError

# cap on |class| * |candidates| * |S| cells materialised per batch
_BATCH_CELLS = 1 << 24


@dataclass(frozen=True)
class DimensionResult:
    value: int
    certificate: PointSubset
    witness: tuple[float, ...] | None = None
    exhausted: bool = True

    def __post_init__(self):
        if len(self.certificate) != self.value:
            raise ValueError("certificate size must equal the dimension")
        if self.witness is not None and len(self.witness) != self.value:
            raise ValueError("witness length must equal the dimension")


@dataclass(frozen=True)
class GrowthTable:
    entries: dict[int, int] = field(default_factory=dict)

    def __getitem__(self, n: int) -> int:
        return self.entries[n]

    @property
    def n_max(self) -> int:
        return max(self.entries)


def _require_nonempty(cls) -> None:
    if len(cls) == 0:
        raise EmptyClassError("dimension queries need a non-empty class")


def _check_eps(eps: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise DomainError(f"scale must lie in (0, 1], got {eps!r}")


def _as_subset(S, n_points: int) -> PointSubset:
    S = S if isinstance(S, PointSubset) else PointSubset(S)
    S.check(n_points)
    return S


def _trace_counts(matrix: np.ndarray, cands: np.ndarray) -> np.ndarray:
    """Number of distinct restricted patterns for each row of ``cands``.

    ``matrix`` is the boolean membership matrix (members x points) and
    ``cands`` an integer array (K x n) of point-index tuples.
    """
    k, n = cands.shape
    if n == 0:
        return np.ones(k, dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    m = matrix.shape[0]
    step = max(1, _BATCH_CELLS // max(1, m * n))
    out = np.empty(k, dtype=np.int64)
    for lo in range(0, k, step):
        block = cands[lo : lo + step]
        codes = matrix[:, block].astype(np.int64) @ weights  # m x b
        codes.sort(axis=0)
        out[lo : lo + step] = 1 + np.count_nonzero(np.diff(codes, axis=0), axis=0)
    return out


def restricted_patterns(C: ConceptClass, S) -> set[tuple[int, ...]]:
    """The set {A cap S : A in C}, each trace written as a bit tuple over S."""
    S = _as_subset(S, len(C.space))
    idx = list(S.indices)
    return {tuple(int(b) for b in row[idx]) for row in C.matrix}


def shatters(C: ConceptClass, S) -> bool:
    _require_nonempty(C)
    S = _as_subset(S, len(C.space))
    if len(C) < 2 ** len(S):
        return False
    cand = np.array([S.indices], dtype=np.int64).reshape(1, len(S))
    return int(_trace_counts(C.matrix, cand)[0]) == 2 ** len(S)


def growth(C: ConceptClass, n_max: int) -> GrowthTable:
    """pi(n; C) for n = 0..n_max, by exhaustive enumeration of n-subsets."""
    _require_nonempty(C)
    npts = len(C.space)
    if not (0 <= n_max <= npts):
        raise DomainError(f"n_max must lie in [0, {npts}], got {n_max}")
    entries = {0: 1}
    for n in range(1, n_max + 1):
        ceiling = min(2**n, len(C))
        best = 0
        combos = itertools.combinations(range(npts), n)
        while True:
            chunk = list(itertools.islice(combos, 4096))
            if not chunk:
                break
            best = max(best, int(_trace_counts(C.matrix, np.array(chunk, dtype=np.int64)).max()))
            if best == ceiling:
                break
        entries[n] = best
    return GrowthTable(entries)


def _next_level(survivors: list[tuple[int, ...]], npts: int) -> list[tuple[int, ...]]:
    alive = set(survivors)
    out = []
    for S in survivors:
        start = S[-1] + 1 if S else 0
        for j in range(start, npts):
            T = S + (j,)
            # dropping the last element gives S itself
            if all(T[:i] + T[i + 1 :] in alive for i in range(len(T) - 1)):
                out.append(T)
    return out


def vc_dimension(C: ConceptClass) -> DimensionResult:
    _require_nonempty(C)
    npts = len(C.space)
    level: list[tuple[int, ...]] = [()]
    best: tuple[int, ...] = ()
    while True:
        cands = _next_level(level, npts)
        if not cands or len(C) < 2 ** len(cands[0]):
            break
        arr = np.array(cands, dtype=np.int64)
        counts = _trace_counts(C.matrix, arr)
        level = [c for c, k in zip(cands, counts) if k == 2 ** arr.shape[1]]
        if not level:
            break
        best = level[0]
    return DimensionResult(len(best), PointSubset(best), None, True)


def sauer_bound(n: int, d: int) -> float:
    """(e n / d)^d, valid for n >= d >= 1."""
    if d < 1 or n < d:
        raise DomainError(f"Sauer bound needs n >= d >= 1, got n={n}, d={d}")
    return (math.e * n / d) ** d


# -- eps-shattering ---------------------------------------------------------


def _column_cuts(col: np.ndarray, eps: float, tol: float) -> list[tuple[float, int, int]]:
    """Candidate witnesses for one point as (c, low_mask, high_mask).

    Any realising witness can be replaced by the midpoint of the largest value
    at or below c - eps and the smallest value at or above c + eps, so only
    midpoints of achieved values need trying. A midpoint acts on the class
    only through which members fall low (value <= c - eps) and which fall
    high (value >= c + eps); these are returned as member bitmasks, and cuts
    dominated on both sides by another cut are dropped.
    """
    u = sorted(set(float(v) for v in col))
    nu = len(u)
    cuts: dict[tuple[int, int], float] = {}
    for i, a in enumerate(u):
        j = max(i + 1, bisect.bisect_left(u, a + 2 * eps - tol) - 2)
        while j < nu:
            c = (a + u[j]) / 2.0
            if a <= c - eps + tol and u[j] >= c + eps - tol:
                n_lo = bisect.bisect_right(u, c - eps + tol)
                n_hi = nu - bisect.bisect_left(u, c + eps - tol)
                cuts.setdefault((n_lo, n_hi), c)
                break
            j += 1
    if not cuts:
        return []
    rank = {v: t for t, v in enumerate(u)}
    members = [0] * nu
    for f, v in enumerate(col):
        members[rank[float(v)]] |= 1 << f
    prefix = list(itertools.accumulate(members, lambda x, y: x | y))
    suffix = list(itertools.accumulate(reversed(members), lambda x, y: x | y))[::-1]
    out = []
    best_hi = -1
    for lo, hi in sorted(cuts, key=lambda t: (-t[0], -t[1])):
        if hi > best_hi:
            out.append((cuts[(lo, hi)], prefix[lo - 1], suffix[nu - hi]))
            best_hi = hi
    return out


def _search_witness(cuts: Sequence[list[tuple[float, int, int]]], m: int) -> tuple[float, ...] | None:
    """Depth-first choice of one cut per point.

    ``groups`` holds, for every pattern on the points fixed so far, the
    bitmask of members realising it; a branch dies as soon as one pattern
    has no member left.
    """
    n = len(cuts)
    if m < 2**n or any(not c for c in cuts):
        return None
    chosen: list[float] = []

    def dfs(j: int, groups: list[int]) -> bool:
        if j == n:
            return True
        for c, low, high in cuts[j]:
            nxt = []
            for g in groups:
                lo_part, hi_part = g & low, g & high
                if not lo_part or not hi_part:
                    break
                nxt.append(lo_part)
                nxt.append(hi_part)
            else:
                chosen.append(c)
                if dfs(j + 1, nxt):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if dfs(0, [(1 << m) - 1]) else None


def eps_shatters_with(F: FunctionClass, S, eps: float, witness: Sequence[float], tol: float = 0.0) -> bool:
    """Definitional check: does ``witness`` realise every pattern on S at margin eps?"""
    _require_nonempty(F)
    S = _as_subset(S, len(F.space))
    c = np.asarray(witness, dtype=float)
    if c.shape != (len(S),):
        raise DomainError("witness length must match the subset size")
    if np.any((c < 0) | (c > 1)):
        return False
    vals = F.matrix[:, list(S.indices)]
    high = vals >= c + eps - tol
    low = vals <= c - eps + tol
    realised = set()
    for e in itertools.product((0, 1), repeat=len(S)):
        e_arr = np.array(e, dtype=bool)
        ok = np.all(np.where(e_arr, high, low), axis=1)
        if not ok.any():
            return False
        realised.add(e)
    return len(realised) == 2 ** len(S)


def eps_shatters(F: FunctionClass, S, eps: float, tol: float = 0.0) -> tuple[bool, tuple[float, ...] | None]:
    """Is S eps-shattered by F? Returns the flag and a realising witness when there is one."""
    _check_eps(eps)
    _require_nonempty(F)
    S = _as_subset(S, len(F.space))
    cuts = [_column_cuts(F.matrix[:, j], eps, tol) for j in S.indices]
    w = _search_witness(cuts, len(F))
    return (w is not None), w


def fat_dimension(F: FunctionClass, eps: float, tol: float = 0.0) -> DimensionResult:
    _check_eps(eps)
    _require_nonempty(F)
    npts = len(F.space)
    m = len(F)
    col_cuts = [_column_cuts(F.matrix[:, j], eps, tol) for j in range(npts)]
    level: list[tuple[int, ...]] = [()]
    best: tuple[int, ...] = ()
    best_w: tuple[float, ...] = ()
    while True:
        cands = _next_level(level, npts)
        if not cands or m < 2 ** len(cands[0]):
            break
        survivors = []
        first_w = None
        for T in cands:
            w = _search_witness([col_cuts[j] for j in T], m)
            if w is not None:
                survivors.append(T)
                if first_w is None:
                    first_w = w
        if not survivors:
            break
        level = survivors
        best, best_w = survivors[0], first_w
    return DimensionResult(len(best), PointSubset(best), best_w, True)
