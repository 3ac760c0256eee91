"""Covering and packing numbers of finite metric spaces.

A point m is covered by a centre c when d(m, c) < eps (strict), and centres
are drawn from the space itself. The exact covering number is therefore the
minimum dominating set of the graph joining points at distance < eps, which
is found by branch and bound over Python-int bitsets.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .core import ConceptClass, FunctionClass, pairwise_abs, pairwise_l2
from .errors import CapacityError, DimensionError, DomainError, ValidationError

log = logging.getLogger(__name__)

EXACT_MAX_POINTS = 4096
PRODUCT_CAP = 100_000
TRIANGLE_TOL = 1e-9
# triangle inequality is O(n^3); above this size it is only checked on request
_TRIANGLE_AUTO_MAX = 400


@dataclass(frozen=True, eq=False)
class FiniteMetric:
    dist: np.ndarray = field(repr=False)

    def __init__(self, dist, validate: bool | None = None):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise DimensionError("distance matrix must be square and non-empty")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValidationError("distances must be finite and non-negative")
        if not np.array_equal(d, d.T):
            raise ValidationError("distance matrix must be exactly symmetric")
        if np.any(np.diag(d) != 0):
            raise ValidationError("distance matrix must have a zero diagonal")
        if validate or (validate is None and d.shape[0] <= _TRIANGLE_AUTO_MAX):
            for k in range(d.shape[0]):
                if np.any(d > d[:, k : k + 1] + d[k : k + 1, :] + TRIANGLE_TOL):
                    raise ValidationError("triangle inequality violated")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @classmethod
    def from_points(cls, coords) -> "FiniteMetric":
        """Euclidean metric on a set of points in R^p (rows of ``coords``)."""
        x = np.asarray(coords, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        diff = x[:, None, :] - x[None, :, :]
        d = np.sqrt((diff * diff).sum(axis=-1))
        d = np.minimum(d, d.T)
        np.fill_diagonal(d, 0.0)
        return cls(d)

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class CoverResult:
    number: int
    centers: tuple[int, ...]
    method: Literal["exact", "greedy"]
    lower_bound: int

    def __post_init__(self):
        if len(self.centers) != self.number:
            raise ValueError("centre count must equal the covering number")
        if self.lower_bound > self.number:
            raise ValueError("lower bound exceeds the cover size")


@dataclass(frozen=True)
class ConstantsConfig:
    """The unspecified absolute constants, supplied by the caller."""

    c: float = 1.0
    K: float = 1.0
    c_prime: float = 1.0
    K_prime: float = 1.0
    log_base: float | None = None  # None means natural log

    def __post_init__(self):
        for name in ("c", "K", "c_prime", "K_prime"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"constant {name} must be positive, got {v!r}")
        if self.log_base is not None and not (self.log_base > 0 and self.log_base != 1):
            raise ValidationError(f"invalid log base {self.log_base!r}")

    def log(self, x: float) -> float:
        if self.log_base is None:
            return math.log(x)
        return math.log(x, self.log_base)


# -- metrics from classes -------------------------------------------------------


def metric_from_class(F, which: str = "l2") -> FiniteMetric:
    """Pairwise-distance metric over the members of a class.

    ``which`` is ``"l2"``, ``"expected-abs"`` or ``"symdiff"``; the last one is
    only defined for bit-valued members.
    """
    if isinstance(F, ConceptClass):
        F = F.to_function_class()
    if not isinstance(F, FunctionClass):
        raise TypeError(f"expected a concept or function class, got {type(F).__name__}")
    if len(F) == 0:
        raise DomainError("metric of an empty class")
    if which == "l2":
        d = pairwise_l2(F.matrix, F.space)
    elif which == "expected-abs":
        d = pairwise_abs(F.matrix, F.space)
    elif which == "symdiff":
        if not F.is_binary:
            raise DomainError("symmetric-difference distance needs bit-valued members")
        d = pairwise_abs(F.matrix, F.space)
    else:
        raise DomainError(f"unknown distance {which!r}")
    # L2 distances between distinct tables are metric up to rounding
    return FiniteMetric(d, validate=False)


# -- covering -------------------------------------------------------------------


def _check_radius(eps: float) -> None:
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError(f"radius must be positive and finite, got {eps!r}")


def _ball_masks(within: np.ndarray) -> list[int]:
    n = within.shape[0]
    masks = []
    for i in range(n):
        packed = np.packbits(within[i], bitorder="little")
        masks.append(int.from_bytes(packed.tobytes(), "little"))
    return masks


def _popcount(x: int) -> int:
    return bin(x).count("1")


def packing_number(M: FiniteMetric, eps: float) -> int:
    """Size of a greedy maximal set whose pairwise distances are all >= eps."""
    _check_radius(eps)
    return len(_greedy_packing(M.dist, eps))


def _greedy_packing(dist: np.ndarray, sep: float) -> list[int]:
    chosen: list[int] = []
    for i in range(dist.shape[0]):
        if not chosen or np.all(dist[i, chosen] >= sep):
            chosen.append(i)
    return chosen


def _greedy_cover(balls: list[int], full: int) -> list[int]:
    uncovered = full
    centers = []
    while uncovered:
        best_i, best_gain = -1, 0
        for i, b in enumerate(balls):
            g = _popcount(b & uncovered)
            if g > best_gain:
                best_i, best_gain = i, g
        centers.append(best_i)
        uncovered &= ~balls[best_i]
    return centers


def _exact_cover(balls: list[int], n: int, upper: list[int], lower: int) -> list[int]:
    full = (1 << n) - 1
    # drop centres whose ball is contained in another's (ties keep the lower index)
    order = sorted(range(n), key=lambda i: (-_popcount(balls[i]), i))
    kept: list[int] = []
    for i in order:
        if not any((balls[i] | balls[j]) == balls[j] for j in kept):
            kept.append(i)
    kept.sort()
    cand_of = [[i for i in kept if (balls[i] >> j) & 1] for j in range(n)]
    slot = {i: s for s, i in enumerate(kept)}
    cand_mask = [sum(1 << slot[i] for i in cand_of[j]) for j in range(n)]

    best = list(upper)
    if len(best) <= lower:
        return best

    def bound(uncovered: int) -> int:
        if not uncovered:
            return 0
        count = _popcount(uncovered)
        widest = max(_popcount(balls[i] & uncovered) for i in kept)
        b1 = -(-count // widest)
        # points with pairwise disjoint candidate sets each need their own centre
        used = 0
        b2 = 0
        pts = [j for j in range(n) if (uncovered >> j) & 1]
        pts.sort(key=lambda j: len(cand_of[j]))
        for j in pts:
            if not (cand_mask[j] & used):
                used |= cand_mask[j]
                b2 += 1
        return max(b1, b2)

    def search(uncovered: int, chosen: list[int]) -> bool:
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return len(best) <= lower
        if len(chosen) + bound(uncovered) >= len(best):
            return False
        pivot = min(
            (j for j in range(n) if (uncovered >> j) & 1),
            key=lambda j: (len(cand_of[j]), j),
        )
        opts = sorted(cand_of[pivot], key=lambda i: (-_popcount(balls[i] & uncovered), i))
        for i in opts:
            chosen.append(i)
            done = search(uncovered & ~balls[i], chosen)
            chosen.pop()
            if done:
                return True
        return False

    search(full, [])
    return best


def covering_number(M: FiniteMetric, eps: float, mode: str = "exact") -> CoverResult:
    """eps-covering number with centres from M and strict radius."""
    _check_radius(eps)
    if mode not in ("exact", "greedy"):
        raise DomainError(f"unknown covering mode {mode!r}")
    n = M.size
    if mode == "exact" and n > EXACT_MAX_POINTS:
        log.warning("exact cover refused for %d points (> %d); using greedy", n, EXACT_MAX_POINTS)
        mode = "greedy"
    balls = _ball_masks(M.dist < eps)
    full = (1 << n) - 1
    lower = len(_greedy_packing(M.dist, 2 * eps))
    centers = _greedy_cover(balls, full)
    if mode == "exact":
        centers = _exact_cover(balls, n, centers, lower)
    centers = tuple(sorted(centers))
    return CoverResult(len(centers), centers, mode, lower)


def is_cover(M: FiniteMetric, eps: float, centers: Sequence[int]) -> bool:
    if not centers:
        return False
    return bool(np.all((M.dist[:, list(centers)] < eps).any(axis=1)))


# -- covering propositions -------------------------------------------------------


@dataclass(frozen=True)
class ProductCoverReport:
    eps: float
    product_size: int
    product_number: int
    product_method: str
    component_radius: float
    component_numbers: tuple[int, ...]
    bound: int
    holds: bool


def _product_grid(Ms: Sequence[FiniteMetric]) -> list[np.ndarray]:
    sizes = [m.size for m in Ms]
    return [g.ravel() for g in np.indices(sizes)]


def product_metric(Ms: Sequence[FiniteMetric], cap: int = EXACT_MAX_POINTS) -> FiniteMetric:
    """L2 product distance on the full product, materialised as a matrix."""
    if len(Ms) < 1:
        raise DimensionError("product of zero spaces")
    total = math.prod(m.size for m in Ms)
    if total > cap:
        raise CapacityError(f"product has {total} points, over the cap of {cap}")
    grid = _product_grid(Ms)
    sq = np.zeros((total, total))
    for m, g in zip(Ms, grid):
        sq += m.dist[np.ix_(g, g)] ** 2
    return FiniteMetric(np.sqrt(sq), validate=False)


def _scan_cover_product(Ms: Sequence[FiniteMetric], eps: float) -> int:
    """Cover count for products too large to hold as a matrix.

    Each still-uncovered point in index order becomes a centre; its row of
    product distances is computed on the fly.
    """
    grid = _product_grid(Ms)
    total = grid[0].size
    uncovered = np.ones(total, dtype=bool)
    count = 0
    for p in range(total):
        if not uncovered[p]:
            continue
        sq = np.zeros(total)
        for m, g in zip(Ms, grid):
            sq += m.dist[g[p], g] ** 2
        uncovered &= ~(np.sqrt(sq) < eps)
        count += 1
    return count


def check_product_cover(Ms: Sequence[FiniteMetric], eps: float, cap: int = PRODUCT_CAP) -> ProductCoverReport:
    """N(M1 x ... x Mk, eps, d2) against the product of N(Mi, eps/sqrt(k))."""
    _check_radius(eps)
    k = len(Ms)
    if k < 2:
        raise DimensionError("product check needs at least two spaces")
    total = math.prod(m.size for m in Ms)
    if total > cap:
        raise CapacityError(f"product has {total} points, over the cap of {cap}")
    radius = eps / math.sqrt(k)
    comps = tuple(covering_number(m, radius, "exact").number for m in Ms)
    bound = math.prod(comps)
    if total <= EXACT_MAX_POINTS:
        res = covering_number(product_metric(Ms), eps, "exact")
        num, method = res.number, res.method
    else:
        log.warning("product of %d points: reporting a greedy upper bound", total)
        num, method = _scan_cover_product(Ms, eps), "greedy"
    return ProductCoverReport(eps, total, num, method, radius, comps, bound, num <= bound)


@dataclass(frozen=True)
class ImageCoverReport:
    eps: float
    delta: float
    continuity_ok: bool
    continuity_violations: int
    image_number: int | None
    domain_number: int | None
    holds: bool | None


def check_image_cover(
    M: FiniteMetric,
    images: FiniteMetric,
    mapping: Sequence[int],
    delta: float,
    eps: float,
) -> ImageCoverReport:
    """N(u(M), eps) <= N(M, delta) for a map with verified modulus pair (delta, eps)."""
    _check_radius(eps)
    _check_radius(delta)
    mp = np.asarray(mapping, dtype=np.int64)
    if mp.shape != (M.size,):
        raise DimensionError("the map must assign an image to every point")
    if mp.min() < 0 or mp.max() >= images.size or np.unique(mp).size != images.size:
        raise ValidationError("the map must be onto the image space")
    close = M.dist < delta
    image_far = ~(images.dist[np.ix_(mp, mp)] < eps)
    violations = int(np.count_nonzero(np.triu(close & image_far, 1)))
    if violations:
        return ImageCoverReport(eps, delta, False, violations, None, None, None)
    n_img = covering_number(images, eps, "exact").number
    n_dom = covering_number(M, delta, "exact").number
    return ImageCoverReport(eps, delta, True, 0, n_img, n_dom, n_img <= n_dom)


# -- entropy bounds -------------------------------------------------------------


def mv_entropy_bound(fat_at_c_eps: int, eps: float, cfg: ConstantsConfig) -> float:
    """(2/eps)^(K * fat_{c eps}); the caller supplies the fat dimension at scale c*eps."""
    if not (0 < eps < 2):
        raise DomainError(f"scale must lie in (0, 2), got {eps!r}")
    if fat_at_c_eps < 0:
        raise DomainError("fat dimension cannot be negative")
    return (2.0 / eps) ** (cfg.K * fat_at_c_eps)


def talagrand_lower_bound(fat_at_cp_eps: int, cfg: ConstantsConfig) -> float:
    if fat_at_cp_eps < 0:
        raise DomainError("fat dimension cannot be negative")
    return 2.0 ** (cfg.K_prime * fat_at_cp_eps)


@dataclass(frozen=True)
class EntropyReport:
    rows: tuple[tuple[float, int], ...]  # (eps, exact N(C, eps, mu-symdiff))
    class_size: int


def metric_entropy_condition(C: ConceptClass, eps_list: Sequence[float]) -> EntropyReport:
    """Exact covering numbers of a concept class under d = mu(A symdiff B)."""
    if len(C) == 0:
        raise DomainError("entropy of an empty class")
    M = metric_from_class(C, "symdiff")
    rows = tuple((float(e), covering_number(M, e, "exact").number) for e in eps_list)
    return EntropyReport(rows, len(C))
