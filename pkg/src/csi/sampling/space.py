from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Dimension:
    name: str
    lo: float
    hi: float


@dataclass(frozen=True)
class ParameterSpace:
    """Axis-aligned box of named scenario parameters."""

    dims: tuple[Dimension, ...]

    def __post_init__(self):
        dims = tuple(d if isinstance(d, Dimension) else Dimension(*d) for d in self.dims)
        names = [d.name for d in dims]
        if not dims:
            raise ValueError("a parameter space needs at least one dimension")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate dimension names: {names}")
        for d in dims:
            if not (np.isfinite(d.lo) and np.isfinite(d.hi) and d.lo < d.hi):
                raise ValueError(f"dimension {d.name!r} needs finite lo < hi, got [{d.lo}, {d.hi}]")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_bounds(cls, bounds: Iterable[tuple[str, float, float]]) -> "ParameterSpace":
        return cls(tuple(Dimension(n, float(lo), float(hi)) for n, lo, hi in bounds))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dims)

    @property
    def lo(self) -> np.ndarray:
        return np.array([d.lo for d in self.dims])

    @property
    def hi(self) -> np.ndarray:
        return np.array([d.hi for d in self.dims])

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def __len__(self) -> int:
        return len(self.dims)

    def to_unit(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.lo) / self.width

    def from_unit(self, u) -> np.ndarray:
        x = self.lo + np.asarray(u, dtype=float) * self.width
        return np.clip(x, self.lo, self.hi)

    def contains(self, x: Sequence[float]) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo) and np.all(x <= self.hi))

    def as_dict(self, x: Sequence[float]) -> dict[str, float]:
        return {d.name: float(v) for d, v in zip(self.dims, x)}
