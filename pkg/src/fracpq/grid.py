"""Bounded interval, its midpoint grid, and exact exterior kernel weights."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DivergenceError(ValueError):
    """Raised when a kernel integral is evaluated at a boundary point."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class FractionalParams:
    """Exponent pair (s, r) of one nonlocal operator."""

    s: float
    r: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"fractional order s must lie in (0, 1), got {self.s}")
        if not self.r > 1.0:
            raise ValueError(f"exponent r must exceed 1, got {self.r}")

    @property
    def sr(self) -> float:
        return self.s * self.r


@dataclass(frozen=True)
class PQConfig:
    """Problem data (interval, s1, p, s2, q) with 0 < s2 < s1 < 1 < q < p."""

    interval: Interval
    s1: float
    p: float
    s2: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.s2 < self.s1 < 1.0 < self.q < self.p < np.inf):
            raise ValueError(
                "need 0 < s2 < s1 < 1 < q < p, got "
                f"s1={self.s1}, p={self.p}, s2={self.s2}, q={self.q}"
            )

    @property
    def params_p(self) -> FractionalParams:
        return FractionalParams(self.s1, self.p)

    @property
    def params_q(self) -> FractionalParams:
        return FractionalParams(self.s2, self.q)


@dataclass(frozen=True, eq=False)
class Grid:
    interval: Interval
    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"number of cells must be a positive integer, got {self.n}")
        a, b = self.interval.a, self.interval.b
        h = (b - a) / self.n
        nodes = a + (np.arange(1, self.n + 1) - 0.5) * h
        nodes.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.interval == other.interval and self.n == other.n

    def __hash__(self):
        return hash((self.interval, self.n))


class GridFunction:
    """Nodal values on a grid; zero outside the interval by convention."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.array(values, dtype=float).reshape(-1)
        if values.shape[0] != grid.n:
            raise ValueError(f"expected {grid.n} values, got {values.shape[0]}")
        self.grid = grid
        self.values = values

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.grid.n

    def __repr__(self):
        return f"GridFunction(n={self.grid.n}, max={np.max(np.abs(self.values)):.6g})"


def values_on(grid: Grid, u) -> np.ndarray:
    """Return the value vector of ``u`` after checking it lives on ``grid``."""
    if isinstance(u, GridFunction):
        if u.grid != grid:
            raise ValueError("grid mismatch")
        return u.values
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] != grid.n:
        raise ValueError(f"grid mismatch: expected {grid.n} values, got shape {u.shape}")
    return u


def build_grid(interval: Interval, n: int) -> Grid:
    return Grid(interval, n)


def exterior_kernel_weight(grid: Grid, i: int, params: FractionalParams) -> float:
    """Integral of |x_i - y|^-(1+sr) over the complement of the interval.

    Closed form: ((x_i - a)^-sr + (b - x_i)^-sr) / sr.
    """
    x = float(grid.nodes[i])
    return float(_exterior_weights(grid.interval, np.array([x]), params.sr)[0])


def exterior_weights(grid: Grid, params: FractionalParams) -> np.ndarray:
    return _exterior_weights(grid.interval, grid.nodes, params.sr)


def _exterior_weights(interval: Interval, x: np.ndarray, sr: float) -> np.ndarray:
    left = x - interval.a
    right = interval.b - x
    if np.any(left <= 0) or np.any(right <= 0):
        raise DivergenceError("exterior kernel integral diverges at the boundary")
    return (left ** -sr + right ** -sr) / sr
