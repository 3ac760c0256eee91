"""Connectives, composition classes and the covering-chain checks behind the
fat-shattering bound for u(F1, ..., Fk).

Product spaces throughout carry the L2 product distance
d2 = sqrt(d1^2 + ... + dk^2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import ConceptClass, FunctionClass, l2_distance, l2_product_distance, pairwise_l2
from .cover import (
    EXACT_MAX_POINTS,
    ConstantsConfig,
    FiniteMetric,
    covering_number,
    metric_from_class,
    product_metric,
)
from .errors import CapacityError, DimensionError, DomainError, ValidationError
from .shatter import fat_dimension

COMPOSE_CAP = 10**6

Modulus = Callable[[float], float]


# -- connectives ----------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalConnective:
    """Boolean connective {0,1}^k -> {0,1}.

    ``truth_table[i]`` is the output for the input whose bits, first argument
    most significant, spell ``i``; so XOR is ``(0, 1, 1, 0)``.
    """

    arity: int
    truth_table: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if self.arity < 2:
            raise ValidationError("connectives need arity k >= 2")
        tt = tuple(int(b) for b in self.truth_table)
        if len(tt) != 2**self.arity or any(b not in (0, 1) for b in tt):
            raise ValidationError(f"truth table must have exactly {2 ** self.arity} bits")
        object.__setattr__(self, "truth_table", tt)

    @classmethod
    def from_bits(cls, bits: str, name: str = "") -> "ClassicalConnective":
        k = int(round(math.log2(len(bits)))) if bits else 0
        if 2**k != len(bits):
            raise ValidationError(f"truth table length {len(bits)} is not a power of two")
        return cls(k, tuple(int(ch) for ch in bits), name or bits)

    def __call__(self, *bits: int) -> int:
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        return self.truth_table[idx]


@dataclass(frozen=True)
class ContinuousConnective:
    """Map [0,1]^k -> [0,1] shipped with a declared modulus of uniform continuity.

    ``evaluator`` takes an array whose last axis has length k and reduces it.
    """

    name: str
    arity: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    modulus: Modulus

    def __post_init__(self):
        if self.arity < 2:
            raise ValidationError("connectives need arity k >= 2")
        rng = np.random.default_rng(0)
        probe = np.concatenate(
            [rng.random((256, self.arity)), np.array(list(itertools.product((0.0, 1.0), repeat=self.arity)))]
        )
        out = np.asarray(self.evaluator(probe), dtype=float)
        if out.shape != (probe.shape[0],) or np.any((out < 0) | (out > 1)) or not np.all(np.isfinite(out)):
            raise ValidationError(f"connective {self.name!r} leaves [0, 1] on sampled inputs")
        for e in np.linspace(0.01, 1.0, 100):
            d = self.modulus(float(e))
            if not (0 < d <= 1):
                raise ValidationError(f"modulus of {self.name!r} maps {e:.2f} to {d!r}, outside (0, 1]")

    def __call__(self, *values: float) -> float:
        return float(self.evaluator(np.array(values, dtype=float)))

    def restricts_to(self, classical: ClassicalConnective) -> bool:
        if classical.arity != self.arity:
            return False
        for bits in itertools.product((0, 1), repeat=self.arity):
            if self(*bits) != float(classical(*bits)):
                return False
        return True


def _mul(k: int) -> ContinuousConnective:
    # |prod x - prod y| <= sum |x_i - y_i| <= sqrt(k) * d2, so eps/k is safe for all k
    return ContinuousConnective("mul", k, lambda a: np.prod(a, axis=-1), lambda e: e / k)


def _lipschitz(name: str, k: int, fn) -> ContinuousConnective:
    return ContinuousConnective(name, k, fn, lambda e: e)


CLASSICAL = {
    "and": lambda k: ClassicalConnective(k, tuple([0] * (2**k - 1) + [1]), "and"),
    "or": lambda k: ClassicalConnective(k, tuple([0] + [1] * (2**k - 1)), "or"),
    "xor": lambda k: ClassicalConnective(k, tuple(bin(i).count("1") % 2 for i in range(2**k)), "xor"),
    "nand": lambda k: ClassicalConnective(k, tuple([1] * (2**k - 1) + [0]), "nand"),
}

CONTINUOUS = {
    "mul": _mul,
    "min": lambda k: _lipschitz("min", k, lambda a: np.min(a, axis=-1)),
    "max": lambda k: _lipschitz("max", k, lambda a: np.max(a, axis=-1)),
    "mean": lambda k: _lipschitz("mean", k, lambda a: np.mean(a, axis=-1)),
    "neg": lambda k: _lipschitz("neg", k, lambda a: 1.0 - a[..., 0]),
}


def connective(name: str, k: int = 2):
    """Look up a catalog connective by name, or parse a literal truth table like ``"0110"``."""
    if name in CONTINUOUS:
        return CONTINUOUS[name](k)
    if name in CLASSICAL:
        return CLASSICAL[name](k)
    if name and set(name) <= {"0", "1"}:
        return ClassicalConnective.from_bits(name)
    raise DomainError(f"unknown connective {name!r}")


# -- composition ----------------------------------------------------------------


def _product_indices(sizes: Sequence[int], cap: int) -> list[np.ndarray]:
    total = math.prod(sizes)
    if total > cap:
        raise CapacityError(f"composition would enumerate {total} tuples, over the cap of {cap}")
    return [g.ravel() for g in np.indices(sizes)]


def _same_space(classes) -> None:
    first = classes[0].space
    if any(c.space != first for c in classes[1:]):
        raise DimensionError("all classes must share one space and measure")


def compose_concepts(u: ClassicalConnective, Cs: Sequence[ConceptClass], cap: int = COMPOSE_CAP) -> ConceptClass:
    if len(Cs) != u.arity:
        raise DimensionError(f"connective has arity {u.arity} but {len(Cs)} classes were given")
    _same_space(Cs)
    if any(len(C) == 0 for C in Cs):
        return ConceptClass(Cs[0].space, [])
    grid = _product_indices([len(C) for C in Cs], cap)
    code = np.zeros((grid[0].size, len(Cs[0].space)), dtype=np.int64)
    for C, g in zip(Cs, grid):
        code = (code << 1) | C.matrix[g].astype(np.int64)
    table = np.array(u.truth_table, dtype=np.uint8)
    return ConceptClass.from_matrix(Cs[0].space, table[code])


def compose_functions(u: ContinuousConnective, Fs: Sequence[FunctionClass], cap: int = COMPOSE_CAP) -> FunctionClass:
    if len(Fs) != u.arity:
        raise DimensionError(f"connective has arity {u.arity} but {len(Fs)} classes were given")
    _same_space(Fs)
    if any(len(F) == 0 for F in Fs):
        return FunctionClass(Fs[0].space, [])
    grid = _product_indices([len(F) for F in Fs], cap)
    stacked = np.stack([F.matrix[g] for F, g in zip(Fs, grid)], axis=-1)
    return FunctionClass(Fs[0].space, np.clip(u.evaluator(stacked), 0.0, 1.0))


# -- classical bound ---------------------------------------------------------------


def alpha_k(k: int, log_base: float | None = None) -> int:
    """Smallest integer alpha with k < alpha / log(e * alpha)."""
    if k < 2:
        raise DomainError("alpha_k is defined for k >= 2")
    cfg = ConstantsConfig(log_base=log_base)
    alpha = 1
    while not (k < alpha / cfg.log(math.e * alpha)):
        alpha += 1
    return alpha


def vc_composition_bound(d: int, k: int, log_base: float | None = None) -> int:
    if d < 1 or k < 2:
        raise DomainError("need d >= 1 and k >= 2")
    return d * alpha_k(k, log_base)


# -- modulus transfer -------------------------------------------------------------


def modulus_transfer(delta: Modulus, k: int, eps: float) -> float:
    """Modulus for phi(f1..fk) = u(f1(.),..,fk(.)) on the product class: delta(eps/2) * eps / (2k)."""
    if not (0 < eps <= 1):
        raise DomainError(f"eps must lie in (0, 1], got {eps!r}")
    if k < 1:
        raise DomainError("k must be positive")
    inner = delta(eps / 2)
    if not (0 < inner <= 1):
        raise DomainError(f"modulus undefined at {eps / 2!r} (gave {inner!r})")
    return inner * eps / (2 * k)


@dataclass(frozen=True)
class ContinuityRow:
    eps: float
    delta: float
    samples: int
    violations: int
    max_gap: float  # largest |u(x) - u(y)| seen over in-threshold pairs


@dataclass(frozen=True)
class ContinuityReport:
    connective: str
    rows: tuple[ContinuityRow, ...]

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.rows)


def _pairs_within(rng, k: int, radius: float, n: int, boundary_fraction: float):
    """n pairs in [0,1]^k at d2 distance < radius; a share lands in [0.9 r, r)."""
    xs = np.empty((0, k))
    ys = np.empty((0, k))
    n_edge = int(round(n * boundary_fraction))
    while xs.shape[0] < n:
        need = n - xs.shape[0]
        batch = max(64, int(need * 1.5))
        x = rng.random((batch, k))
        direction = rng.normal(size=(batch, k))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        edge = (np.arange(batch) + xs.shape[0]) < n_edge
        r = np.where(edge, rng.uniform(0.9 * radius, radius, batch), rng.uniform(0.0, radius, batch))
        y = x + r[:, None] * direction
        ok = np.all((y >= 0) & (y <= 1), axis=1)
        ok &= np.sqrt(((x - y) ** 2).sum(axis=1)) < radius
        xs = np.vstack([xs, x[ok][:need]])
        ys = np.vstack([ys, y[ok][:need]])
    return xs, ys


def verify_uniform_continuity(
    u: ContinuousConnective,
    eps_list: Sequence[float],
    samples: int = 100_000,
    seed: int = 42,
    boundary_fraction: float = 0.5,
) -> ContinuityReport:
    """Sample pairs at distance < delta(eps) and count |u(x) - u(y)| >= eps."""
    if samples < 1:
        raise DomainError("need at least one sample")
    streams = np.random.SeedSequence(seed).spawn(len(eps_list))
    rows = []
    for eps, ss in zip(eps_list, streams):
        rng = np.random.default_rng(ss)
        delta = u.modulus(eps)
        x, y = _pairs_within(rng, u.arity, delta, samples, boundary_fraction)
        gap = np.abs(u.evaluator(x) - u.evaluator(y))
        rows.append(ContinuityRow(float(eps), float(delta), samples, int(np.count_nonzero(gap >= eps)), float(gap.max())))
    return ContinuityReport(u.name, tuple(rows))


@dataclass(frozen=True)
class PhiRow:
    eps: float
    threshold: float
    pairs_tested: int
    pairs_in_threshold: int
    violations: int


@dataclass(frozen=True)
class PhiReport:
    connective: str
    rows: tuple[PhiRow, ...]

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.rows)


def _nearest_other(d: np.ndarray) -> np.ndarray:
    if d.shape[0] == 1:
        return np.zeros(1, dtype=np.int64)
    masked = d + np.diag(np.full(d.shape[0], np.inf))
    return masked.argmin(axis=1)


def verify_phi_modulus(
    u: ContinuousConnective,
    Fs: Sequence[FunctionClass],
    eps_list: Sequence[float],
    trials: int = 10_000,
    seed: int = 42,
) -> PhiReport:
    """Check that tuples closer than delta(eps/2) eps/(2k) compose to tables closer than eps.

    Half of the sampled pairs are uniform over the product; the other half
    perturb a random tuple towards nearest neighbours so that the
    in-threshold region is actually visited.
    """
    k = u.arity
    if len(Fs) != k:
        raise DimensionError(f"connective has arity {k} but {len(Fs)} classes were given")
    _same_space(Fs)
    space = Fs[0].space
    dists = [pairwise_l2(F.matrix, space) for F in Fs]
    nearest = [_nearest_other(d) for d in dists]
    streams = np.random.SeedSequence(seed).spawn(len(eps_list))
    rows = []
    for eps, ss in zip(eps_list, streams):
        rng = np.random.default_rng(ss)
        thr = modulus_transfer(u.modulus, k, eps)
        a = np.stack([rng.integers(0, len(F), trials) for F in Fs], axis=1)
        b = np.stack([rng.integers(0, len(F), trials) for F in Fs], axis=1)
        near = np.arange(trials) >= trials // 2
        for i in range(k):
            move = rng.random(trials) < 0.5
            b[near, i] = np.where(move[near], nearest[i][a[near, i]], a[near, i])
        comp = np.sqrt(sum(dists[i][a[:, i], b[:, i]] ** 2 for i in range(k)))
        inside = comp < thr
        va = np.stack([Fs[i].matrix[a[inside, i]] for i in range(k)], axis=-1)
        vb = np.stack([Fs[i].matrix[b[inside, i]] for i in range(k)], axis=-1)
        diff = u.evaluator(va) - u.evaluator(vb)
        out = np.sqrt((diff * diff) @ space.weights)
        rows.append(PhiRow(float(eps), thr, trials, int(inside.sum()), int(np.count_nonzero(out >= eps))))
    return PhiReport(u.name, tuple(rows))


@dataclass(frozen=True)
class ChainReport:
    eps: float
    k: int
    delta_eps_k: float
    component_radius: float
    composed_size: int
    composed_number: int
    product_number: int | None  # N(F1 x..x Fk, delta_eps_k, d2) when small enough
    component_numbers: tuple[int, ...]
    bound: int
    holds: bool


def verify_covering_chain(u: ContinuousConnective, Fs: Sequence[FunctionClass], eps: float) -> ChainReport:
    """N(u(F1..Fk), eps, L2) <= N(F1x..xFk, d(eps,k), d2) <= prod N(Fi, d(eps,k)/sqrt k, L2).

    The measure is the one carried by the classes' shared space.
    """
    k = u.arity
    if len(Fs) != k:
        raise DimensionError(f"connective has arity {k} but {len(Fs)} classes were given")
    _same_space(Fs)
    d_ek = modulus_transfer(u.modulus, k, eps)
    radius = d_ek / math.sqrt(k)
    composed = compose_functions(u, Fs)
    n_comp = covering_number(metric_from_class(composed, "l2"), eps, "exact").number
    metrics = [metric_from_class(F, "l2") for F in Fs]
    comps = tuple(covering_number(m, radius, "exact").number for m in metrics)
    bound = math.prod(comps)
    n_prod = None
    if math.prod(m.size for m in metrics) <= EXACT_MAX_POINTS:
        n_prod = covering_number(product_metric(metrics), d_ek, "exact").number
    holds = n_comp <= bound and (n_prod is None or (n_comp <= n_prod <= bound))
    return ChainReport(eps, k, d_ek, radius, len(composed), n_comp, n_prod, comps, bound, holds)


# -- main bound -------------------------------------------------------------------


def main_bound_scale(eps: float, k: int, delta: Modulus, cfg: ConstantsConfig) -> float:
    """Scale c * delta(eps/(2c')) * eps / (k sqrt k) at which the Fi's fat dimensions enter."""
    if not (0 < eps <= 1):
        raise DomainError(f"eps must lie in (0, 1], got {eps!r}")
    arg = eps / (2 * cfg.c_prime)
    if not (0 < arg <= 1):
        raise DomainError(f"modulus argument {arg!r} is outside (0, 1]")
    inner = delta(arg)
    if not (0 < inner <= 1):
        raise DomainError(f"modulus gave {inner!r} at {arg!r}")
    scale = cfg.c * inner * eps / (k * math.sqrt(k))
    if not (0 < scale <= 1):
        raise DomainError(f"inner scale {scale!r} is outside (0, 1]; the bound is vacuous here")
    return scale


@dataclass(frozen=True)
class MainBoundInputs:
    eps: float
    k: int
    modulus: Modulus
    fat_values: tuple[int, ...]
    cfg: ConstantsConfig = ConstantsConfig()

    def __post_init__(self):
        object.__setattr__(self, "fat_values", tuple(int(v) for v in self.fat_values))
        if self.k < 2:
            raise DomainError("arity must be at least 2")
        if len(self.fat_values) != self.k:
            raise DimensionError(f"need {self.k} fat values, got {len(self.fat_values)}")
        if any(v < 0 for v in self.fat_values):
            raise DomainError("fat dimensions cannot be negative")
        main_bound_scale(self.eps, self.k, self.modulus, self.cfg)

    @property
    def scale(self) -> float:
        return main_bound_scale(self.eps, self.k, self.modulus, self.cfg)


def main_bound_multiplier(inputs: MainBoundInputs) -> float:
    cfg, k, eps = inputs.cfg, inputs.k, inputs.eps
    inner = inputs.modulus(eps / (2 * cfg.c_prime))
    arg = 4 * cfg.c_prime * k * math.sqrt(k) / (inner * eps)
    if not arg > 1:
        raise DomainError(f"log argument {arg!r} is not above 1")
    return cfg.K * cfg.log(arg) / (cfg.K_prime * cfg.log(2.0))


def main_bound_rhs(inputs: MainBoundInputs) -> float:
    """Right-hand side of the fat-dimension bound for u(F1..Fk); sum runs over i = 1..k."""
    return main_bound_multiplier(inputs) * sum(inputs.fat_values)


@dataclass(frozen=True)
class MainBoundCheck:
    eps: float
    scale: float
    fat_components: tuple[int, ...]
    fat_composed: int
    rhs: float
    holds: bool
    # the constants are unknown, so this is evidence about the chosen cfg only
    conditional: bool = True


def main_bound_check(
    u: ContinuousConnective, Fs: Sequence[FunctionClass], eps: float, cfg: ConstantsConfig
) -> MainBoundCheck:
    scale = main_bound_scale(eps, u.arity, u.modulus, cfg)
    fats = tuple(fat_dimension(F, scale).value for F in Fs)
    rhs = main_bound_rhs(MainBoundInputs(eps, u.arity, u.modulus, fats, cfg))
    fat_u = fat_dimension(compose_functions(u, Fs), eps).value
    return MainBoundCheck(eps, scale, fats, fat_u, rhs, fat_u <= rhs)


def product_distance(Fs: Sequence[FunctionClass], a: Sequence[int], b: Sequence[int]) -> float:
    """d2 between two member tuples of F1 x .. x Fk."""
    space = Fs[0].space
    return l2_product_distance([l2_distance(F.matrix[i], F.matrix[j], space) for F, i, j in zip(Fs, a, b)])
