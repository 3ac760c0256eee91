"""Finite domains, measures, concept/function classes and their metrics.

Everything here is immutable once built. Classes keep their members as a
read-only numpy matrix (one row per member, one column per point) so that the
combinatorial code in :mod:`shatterlab.shatter` and :mod:`shatterlab.cover`
can slice columns without copying member objects around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

WEIGHT_SUM_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A finite labelled domain carrying a discrete probability measure."""

    points: tuple[str, ...]
    weights: np.ndarray

    def __init__(self, points: Sequence, weights: Sequence[float] | None = None):
        pts = tuple(str(p) for p in points)
        if not pts:
            raise ValidationError("a space needs at least one point")
        if len(set(pts)) != len(pts):
            raise ValidationError("point identifiers must be unique")
        if weights is None:
            w = np.full(len(pts), 1.0 / len(pts))
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (len(pts),):
                raise DimensionError(f"expected {len(pts)} weights, got {w.shape}")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ValidationError("weights must be finite and non-negative")
            total = math.fsum(w)
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                raise ValidationError(f"weights sum to {total!r}, not 1")
            w = w / total
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def uniform(cls, n: int) -> "FiniteSpace":
        return cls([f"x{i + 1}" for i in range(n)])

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.points, self.weights.tobytes()))

    def index(self, label: str) -> int:
        return self.points.index(str(label))


@dataclass(frozen=True)
class Concept:
    """Indicator bit-vector of a subset of the domain."""

    bits: tuple[int, ...]

    def __init__(self, bits: Iterable):
        b = tuple(int(x) for x in bits)
        if any(x not in (0, 1) for x in b):
            raise ValidationError("concept bits must be 0 or 1")
        object.__setattr__(self, "bits", b)

    @classmethod
    def from_members(cls, members: Iterable[int], n: int) -> "Concept":
        members = set(members)
        return cls(1 if i in members else 0 for i in range(n))

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=bool)

    def to_table(self) -> "FunctionTable":
        return FunctionTable(float(b) for b in self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class FunctionTable:
    """Values of a [0,1]-valued function, one per domain point."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        v = tuple(float(x) for x in values)
        if any(not (0.0 <= x <= 1.0) for x in v):
            raise ValidationError("function values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    @property
    def is_binary(self) -> bool:
        return all(x in (0.0, 1.0) for x in self.values)


def _dedup_rows(matrix: np.ndarray) -> np.ndarray:
    # keeps first occurrences, in input order; -0.0 is folded into 0.0 first
    if matrix.shape[0] < 2:
        return matrix
    m = np.ascontiguousarray(matrix + 0.0 if matrix.dtype.kind == "f" else matrix)
    keys = m.view(np.dtype((np.void, m.dtype.itemsize * m.shape[1]))).ravel()
    _, first = np.unique(keys, return_index=True)
    return m[np.sort(first)]


@dataclass(frozen=True, eq=False)
class ConceptClass:
    """A deduplicated family of concepts over one space."""

    space: FiniteSpace
    matrix: np.ndarray = field(repr=False)

    def __init__(self, space: FiniteSpace, concepts: Iterable):
        n = len(space)
        if isinstance(concepts, np.ndarray):
            raw = concepts if concepts.size else concepts.reshape(0, n)
        else:
            rows = [c.bits if isinstance(c, Concept) else tuple(int(x) for x in c) for c in concepts]
            if any(len(r) != n for r in rows):
                raise DimensionError(f"every concept must have {n} bits")
            raw = np.array(rows, dtype=np.int64).reshape(len(rows), n)
        if raw.ndim != 2 or raw.shape[1] != n:
            raise DimensionError(f"every concept must have {n} bits")
        if raw.dtype != bool and not np.all((raw == 0) | (raw == 1)):
            raise ValidationError("concept bits must be 0 or 1")
        m = raw.astype(bool)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", _frozen(_dedup_rows(m)))

    @classmethod
    def from_matrix(cls, space: FiniteSpace, matrix: np.ndarray) -> "ConceptClass":
        return cls(space, np.asarray(matrix))

    @classmethod
    def powerset(cls, space: FiniteSpace) -> "ConceptClass":
        n = len(space)
        rows = [[(mask >> i) & 1 for i in range(n)] for mask in range(2**n)]
        return cls(space, rows)

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __iter__(self):
        return (Concept(row.astype(int)) for row in self.matrix)

    def __getitem__(self, i: int) -> Concept:
        return Concept(self.matrix[i].astype(int))

    def to_function_class(self) -> "FunctionClass":
        return FunctionClass(self.space, self.matrix.astype(float))


@dataclass(frozen=True, eq=False)
class FunctionClass:
    """A deduplicated family of [0,1]-valued tables over one space."""

    space: FiniteSpace
    matrix: np.ndarray = field(repr=False)

    def __init__(self, space: FiniteSpace, functions: Iterable):
        n = len(space)
        if isinstance(functions, np.ndarray):
            m = functions.astype(float)
        else:
            m = np.array([f.values if isinstance(f, FunctionTable) else f for f in functions], dtype=float)
        if m.size == 0:
            m = m.reshape(0, n)
        if m.ndim != 2 or m.shape[1] != n:
            raise DimensionError(f"every function needs {n} values")
        if not np.all((m >= 0.0) & (m <= 1.0)):
            raise ValidationError("function values must lie in [0, 1]")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", _frozen(_dedup_rows(m)))

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __iter__(self):
        return (FunctionTable(row) for row in self.matrix)

    def __getitem__(self, i: int) -> FunctionTable:
        return FunctionTable(self.matrix[i])

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.matrix == 0.0) | (self.matrix == 1.0)))

    def to_concept_class(self) -> ConceptClass:
        if not self.is_binary:
            raise ValidationError("only bit-valued function classes induce concept classes")
        return ConceptClass(self.space, self.matrix.astype(bool))


@dataclass(frozen=True)
class PointSubset:
    """Strictly increasing point indices."""

    indices: tuple[int, ...]

    def __init__(self, indices: Iterable[int] = ()):
        idx = tuple(int(i) for i in indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValidationError("subset indices must be strictly increasing")
        if idx and idx[0] < 0:
            raise ValidationError("subset indices must be non-negative")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def check(self, n_points: int) -> None:
        if self.indices and self.indices[-1] >= n_points:
            raise DimensionError(f"index {self.indices[-1]} out of range for {n_points} points")

    def labels(self, space: FiniteSpace) -> list[str]:
        return [space.points[i] for i in self.indices]


def _vec(x) -> np.ndarray:
    if isinstance(x, Concept):
        return np.array(x.bits, dtype=float)
    if isinstance(x, FunctionTable):
        return np.array(x.values, dtype=float)
    return np.asarray(x, dtype=float)


def _pair(a, b, space: FiniteSpace) -> tuple[np.ndarray, np.ndarray]:
    va, vb = _vec(a), _vec(b)
    n = len(space)
    if va.shape != (n,) or vb.shape != (n,):
        raise DimensionError(f"operands must have length {n}, got {va.shape} and {vb.shape}")
    return va, vb


def sym_diff_measure(a, b, space: FiniteSpace) -> float:
    """mu(A symmetric-difference B): total weight where the membership bits differ."""
    va, vb = _pair(a, b, space)
    return math.fsum(space.weights[va != vb])


def expected_abs_diff(f, g, space: FiniteSpace) -> float:
    va, vb = _pair(f, g, space)
    return math.fsum(space.weights * np.abs(va - vb))


def l2_distance(f, g, space: FiniteSpace) -> float:
    """L2(mu) distance between two tables."""
    va, vb = _pair(f, g, space)
    return math.sqrt(math.fsum(space.weights * (va - vb) ** 2))


def l2_product_distance(ds: Sequence[float]) -> float:
    ds = list(ds)
    if not ds:
        raise DimensionError("product distance needs at least one component")
    if any(d < 0 for d in ds):
        raise DimensionError("component distances must be non-negative")
    return math.sqrt(math.fsum(d * d for d in ds))


def pairwise_l2(matrix: np.ndarray, space: FiniteSpace) -> np.ndarray:
    """All-pairs L2(mu) distances between rows of ``matrix``; exactly symmetric."""
    diff = matrix[:, None, :] - matrix[None, :, :]
    d = np.sqrt(np.einsum("ijk,k->ij", diff * diff, space.weights))
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


def pairwise_abs(matrix: np.ndarray, space: FiniteSpace) -> np.ndarray:
    diff = np.abs(matrix[:, None, :] - matrix[None, :, :])
    d = np.einsum("ijk,k->ij", diff, space.weights)
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d
