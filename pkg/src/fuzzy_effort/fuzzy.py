"""Trapezoidal fuzzy sets, Ruspini partitions of [0, 1] and t-norms."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class TNormKind(enum.Enum):
    PRODUCT = "product"
    MINIMUM = "minimum"

    @classmethod
    def parse(cls, text: str) -> "TNormKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown t-norm {text!r}; expected 'product' or 'minimum'") from None


@dataclass(frozen=True)
class TrapezoidalSet:
    a: float
    b: float
    c: float
    d: float
    label: str = ""

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid needs a <= b <= c <= d, got {self.a, self.b, self.c, self.d}")

    def __call__(self, x: float) -> float:
        return membership(self, x)

    @property
    def centroid(self) -> float:
        """Center of gravity of the membership function."""
        a, b, c, d = self.a, self.b, self.c, self.d
        denom = 3.0 * (c + d - a - b)
        if denom == 0.0:
            # zero-area spike
            return b
        return (c * c + d * d + c * d - a * a - b * b - a * b) / denom


def membership(fset: TrapezoidalSet, x: float) -> float:
    x = min(max(float(x), 0.0), 1.0)
    if fset.b <= x <= fset.c:
        return 1.0
    if x <= fset.a or x >= fset.d:
        return 0.0
    if x < fset.b:
        return (x - fset.a) / (fset.b - fset.a)
    return (fset.d - x) / (fset.d - fset.c)


def tnorm(kind: TNormKind, a, b):
    """Fuzzy conjunction of two degrees (scalars or arrays)."""
    a_arr, b_arr = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    for v in (a_arr, b_arr):
        if np.any((v < 0.0) | (v > 1.0)) or np.any(np.isnan(v)):
            raise ValueError("t-norm arguments must lie in [0, 1]")
    if kind is TNormKind.PRODUCT:
        out = a_arr * b_arr
    elif kind is TNormKind.MINIMUM:
        out = np.minimum(a_arr, b_arr)
    else:
        raise ValueError(f"unsupported t-norm {kind!r}")
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FuzzyPartition:
    sets: tuple[TrapezoidalSet, ...]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("a partition needs at least one set")
        if self.sets[0].a != 0.0 or self.sets[0].b != 0.0:
            raise ValueError("first set must have a left shoulder at 0")
        if self.sets[-1].c != 1.0 or self.sets[-1].d != 1.0:
            raise ValueError("last set must have a right shoulder at 1")
        for left, right in zip(self.sets, self.sets[1:]):
            if not left.c < right.b:
                raise ValueError("set cores must be disjoint and ordered")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.sets)

    @property
    def centroids(self) -> np.ndarray:
        return np.array([s.centroid for s in self.sets])

    def dumps(self) -> str:
        """One line per set: label, a, b, c, d."""
        return "".join(
            f"{s.label},{s.a:.9f},{s.b:.9f},{s.c:.9f},{s.d:.9f}\n" for s in self.sets
        )


def build_uniform_partition(n: int, prefix: str = "F") -> FuzzyPartition:
    """Build ``n`` trapezoids with equal cores and equal ramps over [0, 1].

    Cores and ramps share the same width ``w = 1 / (2n - 1)``, so set ``i``
    has its core on ``[2iw, (2i+1)w]`` and adjacent ramps cross at 0.5.
    """
    if n < 1:
        raise ValueError(f"a partition needs n >= 1 sets, got {n}")
    w = 1.0 / (2 * n - 1)
    sets = []
    for i in range(n):
        b = 2 * i * w
        c = 1.0 if i == n - 1 else (2 * i + 1) * w
        a = 0.0 if i == 0 else (2 * i - 1) * w
        d = 1.0 if i == n - 1 else (2 * i + 2) * w
        sets.append(TrapezoidalSet(a, b, c, d, f"{prefix}{i}"))
    return FuzzyPartition(tuple(sets))


def fuzzify(partition: FuzzyPartition, x: float) -> np.ndarray:
    return np.array([membership(s, x) for s in partition.sets])


def fuzzify_many(partition: FuzzyPartition, xs: Sequence[float]) -> np.ndarray:
    """Membership matrix of shape (len(xs), len(partition))."""
    return np.array([fuzzify(partition, x) for x in xs]).reshape(len(xs), len(partition))
