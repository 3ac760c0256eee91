"""Seeded instance generators used by the verification runs, the CLI and the tests."""

from __future__ import annotations

import itertools

import numpy as np

from .core import ConceptClass, FiniteSpace, FunctionClass
from .cover import FiniteMetric


def interval_traces(n: int) -> ConceptClass:
    """Traces of closed intervals [a,b] on the domain {1,...,n}: all runs plus the empty set."""
    space = FiniteSpace([str(i) for i in range(1, n + 1)])
    rows = [[0] * n]
    for lo in range(n):
        for hi in range(lo, n):
            rows.append([1 if lo <= i <= hi else 0 for i in range(n)])
    return ConceptClass(space, rows)


def hyperplane_domain(n: int, extra: int = 2, rng: np.random.Generator | None = None) -> np.ndarray:
    """Unit vectors e1..en, the origin and ``extra`` random integer points of R^n."""
    rng = rng or np.random.default_rng(0)
    pts = [np.eye(n)[i] for i in range(n)] + [np.zeros(n)]
    while len(pts) < n + 1 + extra:
        p = rng.integers(-5, 6, size=n).astype(float)
        if not any(np.array_equal(p, q) for q in pts):
            pts.append(p)
    return np.array(pts)


def _affine_rank(pts: np.ndarray) -> int:
    if len(pts) <= 1:
        return 0
    return int(np.linalg.matrix_rank(pts[1:] - pts[0]))


def hyperplane_traces(pts: np.ndarray) -> ConceptClass:
    """All traces {x in domain : x . a = b} of hyperplanes in R^n on a finite point set.

    A subset T is contained in some hyperplane iff its affine hull has
    dimension <= n-1; the hyperplane can then be tilted off every point outside
    that hull, so the traces are exactly the hull intersections, plus the
    empty trace.
    """
    m, n = pts.shape
    space = FiniteSpace([f"p{i}" for i in range(m)])
    traces = {tuple([0] * m)}
    for size in range(1, n + 1):
        for T in itertools.combinations(range(m), size):
            r = _affine_rank(pts[list(T)])
            if r > n - 1:
                continue
            trace = tuple(
                1 if i in T or _affine_rank(pts[list(T) + [i]]) == r else 0 for i in range(m)
            )
            traces.add(trace)
    return ConceptClass(space, sorted(traces))


def random_concept_class(rng: np.random.Generator, n_points: int, n_concepts: int, density: float = 0.5) -> ConceptClass:
    space = FiniteSpace.uniform(n_points)
    return ConceptClass(space, rng.random((n_concepts, n_points)) < density)


def random_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    w = rng.random(n) + 0.05
    return w / w.sum()


def random_function_class(
    rng: np.random.Generator, space: FiniteSpace, n_functions: int, levels: int | None = None
) -> FunctionClass:
    """Uniform tables; ``levels`` snaps values to a grid of that many steps."""
    vals = rng.random((n_functions, len(space)))
    if levels:
        vals = np.round(vals * levels) / levels
    return FunctionClass(space, vals)


def clustered_function_class(
    rng: np.random.Generator, space: FiniteSpace, n_functions: int, n_centres: int, jitter: float
) -> FunctionClass:
    """Tables scattered tightly around a few random centres."""
    centres = rng.random((n_centres, len(space)))
    pick = rng.integers(0, n_centres, n_functions)
    vals = np.clip(centres[pick] + rng.normal(scale=jitter, size=(n_functions, len(space))), 0.0, 1.0)
    return FunctionClass(space, vals)


def random_metric(rng: np.random.Generator, size: int, dim: int = 2, scale: float = 1.0) -> FiniteMetric:
    """Euclidean metric on ``size`` random points in [0, scale]^dim."""
    return FiniteMetric.from_points(rng.random((size, dim)) * scale)


def continuous_trace_family(n: int) -> FunctionClass:
    """Piecewise-linear continuous functions f_e restricted to {1, 1.5, 2, ..., n}.

    f_e is e_i at the integer i and interpolates linearly between integers, so
    half-integers carry 0, 0.5 or 1.
    """
    labels = []
    for i in range(1, n + 1):
        labels.append(str(i))
        if i < n:
            labels.append(f"{i}.5")
    space = FiniteSpace(labels)
    rows = []
    for e in itertools.product((0.0, 1.0), repeat=n):
        row = []
        for i in range(n):
            row.append(e[i])
            if i < n - 1:
                row.append((e[i] + e[i + 1]) / 2)
        rows.append(row)
    return FunctionClass(space, rows)
