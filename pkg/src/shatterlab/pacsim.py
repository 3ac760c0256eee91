"""Monte Carlo PAC experiments.

Two learners live here: the tightest-fit learner for axis-aligned rectangles
in the plane, and the one-point identification learner for the class f_A
that encodes each concept's index into its output values.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Concept, ConceptClass, FunctionClass, FunctionTable
from .errors import ConstructionError, DomainError, EmptyClassError, UnknownFunctionError, ValidationError
from .shatter import eps_shatters_with, fat_dimension, vc_dimension

MC_ERROR_SAMPLES = 100_000


@dataclass(frozen=True)
class Rectangle:
    """Closed rectangle [a,b] x [c,d], or the empty set."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    empty: bool = False

    def __post_init__(self):
        if not self.empty and not (self.a <= self.b and self.c <= self.d):
            raise ValidationError(f"need a <= b and c <= d, got {self}")

    @classmethod
    def Empty(cls) -> "Rectangle":
        return cls(empty=True)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if self.empty:
            return np.zeros(len(pts), dtype=bool)
        x, y = pts[:, 0], pts[:, 1]
        return (self.a <= x) & (x <= self.b) & (self.c <= y) & (y <= self.d)

    def intersect(self, other: "Rectangle") -> "Rectangle":
        if self.empty or other.empty:
            return Rectangle.Empty()
        a, b = max(self.a, other.a), min(self.b, other.b)
        c, d = max(self.c, other.c), min(self.d, other.d)
        if a > b or c > d:
            return Rectangle.Empty()
        return Rectangle(a, b, c, d)

    def within(self, other: "Rectangle") -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        return other.a <= self.a and self.b <= other.b and other.c <= self.c and self.d <= other.d

    def as_list(self) -> list[float] | None:
        return None if self.empty else [self.a, self.b, self.c, self.d]


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    weight: float


def _segment_mass(segs: Sequence[Segment], lo: float, hi: float) -> float:
    total = 0.0
    for s in segs:
        if s.hi == s.lo:
            total += s.weight if lo <= s.lo <= hi else 0.0
            continue
        overlap = min(hi, s.hi) - max(lo, s.lo)
        if overlap > 0:
            total += s.weight * overlap / (s.hi - s.lo)
    return total


@dataclass(frozen=True)
class PlaneDistribution:
    """Product measure on R^2 whose marginals are mixtures of uniform segments.

    ``uniform_box`` is the single-segment case on each axis.
    """

    x_segments: tuple[Segment, ...]
    y_segments: tuple[Segment, ...]
    kind: str = "segments"

    def __post_init__(self):
        for segs in (self.x_segments, self.y_segments):
            if not segs:
                raise ValidationError("each axis needs at least one segment")
            if any(s.hi < s.lo or s.weight < 0 for s in segs):
                raise ValidationError("segments need lo <= hi and non-negative weight")
            if abs(math.fsum(s.weight for s in segs) - 1.0) > 1e-12:
                raise ValidationError("segment weights on each axis must sum to 1")

    @classmethod
    def uniform_box(cls, x0: float = 0.0, x1: float = 1.0, y0: float = 0.0, y1: float = 1.0) -> "PlaneDistribution":
        return cls((Segment(x0, x1, 1.0),), (Segment(y0, y1, 1.0),), "uniform-box")

    @classmethod
    def segments(cls, xs: Sequence[Sequence[float]], ys: Sequence[Sequence[float]]) -> "PlaneDistribution":
        return cls(tuple(Segment(*map(float, s)) for s in xs), tuple(Segment(*map(float, s)) for s in ys))

    def _axis(self, rng, segs, m: int) -> np.ndarray:
        w = np.array([s.weight for s in segs])
        pick = rng.choice(len(segs), size=m, p=w / w.sum())
        lo = np.array([s.lo for s in segs])[pick]
        hi = np.array([s.hi for s in segs])[pick]
        return lo + (hi - lo) * rng.random(m)

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return np.column_stack([self._axis(rng, self.x_segments, m), self._axis(rng, self.y_segments, m)])

    def mass(self, r: Rectangle) -> float:
        if r.empty:
            return 0.0
        return _segment_mass(self.x_segments, r.a, r.b) * _segment_mass(self.y_segments, r.c, r.d)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "x": [[s.lo, s.hi, s.weight] for s in self.x_segments],
            "y": [[s.lo, s.hi, s.weight] for s in self.y_segments],
        }


def tightest_rectangle(sample) -> Rectangle:
    """Smallest closed rectangle containing every positively labelled point."""
    pos = [p for p, bit in sample if bit]
    if not pos:
        return Rectangle.Empty()
    xs = [float(p[0]) for p in pos]
    ys = [float(p[1]) for p in pos]
    return Rectangle(min(xs), max(xs), min(ys), max(ys))


def _fit(pts: np.ndarray, labels: np.ndarray) -> Rectangle:
    pos = pts[labels]
    if pos.shape[0] == 0:
        return Rectangle.Empty()
    return Rectangle(float(pos[:, 0].min()), float(pos[:, 0].max()), float(pos[:, 1].min()), float(pos[:, 1].max()))


def rect_sample_complexity(eps: float, delta: float) -> int:
    """ceil((4/eps) ln(4/delta))."""
    if not (0 < eps < 1) or not (0 < delta < 1):
        raise DomainError(f"eps and delta must lie in (0, 1), got {eps!r}, {delta!r}")
    return math.ceil((4.0 / eps) * math.log(4.0 / delta))


def exact_error(h: Rectangle, target: Rectangle, dist: PlaneDistribution) -> float:
    """mu(H symdiff A) = mu(A) + mu(H) - 2 mu(A cap H)."""
    err = dist.mass(target) + dist.mass(h) - 2.0 * dist.mass(h.intersect(target))
    return max(err, 0.0)


def mc_error(h: Rectangle, target: Rectangle, dist: PlaneDistribution, rng, n: int = MC_ERROR_SAMPLES) -> float:
    pts = dist.sample(rng, n)
    return float(np.count_nonzero(h.contains(pts) != target.contains(pts))) / n


@dataclass(frozen=True)
class TrialReport:
    trials: int
    failures: int
    empirical_failure_rate: float
    m_used: int
    error_estimator: str
    eps: float
    delta: float
    mean_error: float
    contained_every_trial: bool
    errors: tuple[float, ...] = field(repr=False, default=())

    def __post_init__(self):
        if self.failures > self.trials:
            raise ValueError("more failures than trials")


def run_rectangle_trials(
    target: Rectangle,
    dist: PlaneDistribution,
    eps: float,
    delta: float,
    m: int,
    trials: int,
    seed: int = 42,
    estimator: str = "exact",
    threads: int = 1,
) -> TrialReport:
    """Repeat: draw m labelled points, fit the tightest rectangle, measure its error.

    A trial fails when the error is >= eps. ``estimator="monte-carlo"`` swaps
    the exact mass computation for a fresh 10^5-point estimate per trial.
    Every trial draws from its own child seed, so results do not depend on
    ``threads``.
    """
    if m < 1 or trials < 1:
        raise DomainError("need m >= 1 and trials >= 1")
    if estimator not in ("exact", "monte-carlo"):
        raise DomainError(f"unknown error estimator {estimator!r}")
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(ss) -> tuple[float, bool]:
        rng = np.random.default_rng(ss)
        pts = dist.sample(rng, m)
        h = _fit(pts, target.contains(pts))
        inside = h.within(target)
        if estimator == "exact":
            err = exact_error(h, target, dist)
        else:
            err = mc_error(h, target, dist, rng)
        return err, inside

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, children))
    else:
        results = [one(ss) for ss in children]
    errors = tuple(r[0] for r in results)
    failures = sum(e >= eps for e in errors)
    return TrialReport(
        trials=trials,
        failures=failures,
        empirical_failure_rate=failures / trials,
        m_used=m,
        error_estimator=estimator,
        eps=eps,
        delta=delta,
        mean_error=math.fsum(errors) / trials,
        contained_every_trial=all(r[1] for r in results),
        errors=errors,
    )


# -- the f_A counterexample class ---------------------------------------------------


@dataclass(frozen=True)
class CounterexampleClass:
    concepts: ConceptClass
    functions: FunctionClass
    codes: tuple[float, ...]  # b(A_i) for the i-th concept


def encode_table(concept: Concept, b: float) -> FunctionTable:
    """f_A(x) = chi_A(x) + (-1)^chi_A(x) b: 1 - b on members, b elsewhere."""
    if not (0.0 <= b < 1.0 / 3.0):
        raise DomainError(f"code must lie in [0, 1/3), got {b!r}")
    return FunctionTable(1.0 - b if bit else b for bit in concept.bits)


def build_counterexample_class(C: ConceptClass, codes: Sequence[float] | None = None) -> CounterexampleClass:
    """Encode each concept's index into its values, with b(A_i) = i / (3|C|) unless ``codes`` is given."""
    if len(C) == 0:
        raise EmptyClassError("the construction needs at least one concept")
    n = len(C)
    if codes is None:
        b = np.arange(n, dtype=float) / (3.0 * n)
    else:
        b = np.asarray(codes, dtype=float)
        if b.shape != (n,):
            raise DomainError(f"need {n} codes, got {b.shape}")
        if np.any((b < 0) | (b >= 1.0 / 3.0)) or np.unique(b).size != n:
            raise ConstructionError("codes must be distinct and lie in [0, 1/3)")
    table = np.where(C.matrix, 1.0 - b[:, None], b[:, None])
    F = FunctionClass(C.space, table)
    if len(F) != n:
        raise ConstructionError("encoded tables collided")
    return CounterexampleClass(C, F, tuple(float(x) for x in b))


def identify_from_one_point(cx: CounterexampleClass, observation: tuple[int, float]) -> Concept:
    """Recover A from a single labelled point (x, f_A(x))."""
    x, value = observation
    x = int(x)
    if not (0 <= x < len(cx.concepts.space)):
        raise DomainError(f"point index {x} out of range")
    hits = np.flatnonzero(cx.functions.matrix[:, x] == float(value))
    if hits.size == 0:
        raise UnknownFunctionError(f"no member takes value {value!r} at point {x}")
    if hits.size > 1:
        raise ConstructionError(f"value {value!r} at point {x} matches {hits.size} members")
    return cx.concepts[int(hits[0])]


@dataclass(frozen=True)
class CounterexampleReport:
    eps: float
    vc: int
    fat: int
    certificate: tuple[int, ...]
    half_witness_ok: bool
    max_code: float
    holds: bool


def counterexample_fat_check(C: ConceptClass, eps: float) -> CounterexampleReport:
    """fat_eps(F_C) >= VC(C) for eps < 1/6, with the all-halves witness on a shattered set."""
    if not (0 < eps < 1.0 / 6.0):
        raise DomainError(f"the claim needs 0 < eps < 1/6, got {eps!r}")
    cx = build_counterexample_class(C)
    vc = vc_dimension(C)
    fat = fat_dimension(cx.functions, eps)
    half = [0.5] * vc.value
    ok = eps_shatters_with(cx.functions, vc.certificate, eps, half)
    max_code = max(cx.codes)
    # b < 1/3 puts member values >= 2/3 > 0.5 + eps and others <= 1/3 < 0.5 - eps
    return CounterexampleReport(
        eps, vc.value, fat.value, vc.certificate.indices, ok, max_code, ok and fat.value >= vc.value and max_code < 1 / 3
    )
