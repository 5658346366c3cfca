"""Discrete Gagliardo energies and the associated nonlinear operators.

For a grid function u (zero outside the interval) the r-th power of the
seminorm is approximated by

    E(u) = sum_{i != j} w_ij |u_i - u_j|^r + sum_i e_i |u_i|^r,

with w_ij = h^2 |x_i - x_j|^-(1+sr) and e_i = 2 h k_i, where k_i is the exact
exterior kernel integral.  The within-cell (i = j) contribution of a
cell-constant function is zero and is omitted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FractionalParams, Grid, exterior_weights, values_on


@dataclass(frozen=True, eq=False)
class EnergyAssembly:
    grid: Grid
    params: FractionalParams
    pair_weights: np.ndarray
    exterior_weights: np.ndarray

    @property
    def r(self) -> float:
        return self.params.r


def assemble(grid: Grid, params: FractionalParams) -> EnergyAssembly:
    x = grid.nodes
    dist = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(dist, 1.0)
    with np.errstate(over="raise", under="raise"):
        try:
            denom = dist ** (1.0 + params.sr)
        except FloatingPointError as exc:
            raise OverflowError("pair kernel under/overflow") from exc
    if not np.all(np.isfinite(denom)) or np.any(denom == 0):
        raise OverflowError("pair kernel under/overflow")
    w = grid.h**2 / denom
    np.fill_diagonal(w, 0.0)
    w = 0.5 * (w + w.T)
    e = 2.0 * grid.h * exterior_weights(grid, params)
    w.setflags(write=False)
    e.setflags(write=False)
    return EnergyAssembly(grid, params, w, e)


def spow(x, gamma: float):
    """Signed power |x|^(gamma-1) sign(x), with 0 mapped to 0."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** (gamma - 1.0)


def _energy(asm: EnergyAssembly, u: np.ndarray) -> float:
    r = asm.r
    d = np.abs(u[:, None] - u[None, :])
    return float(np.sum(asm.pair_weights * d**r) + np.dot(asm.exterior_weights, np.abs(u) ** r))


def _apply(asm: EnergyAssembly, u: np.ndarray) -> np.ndarray:
    r = asm.r
    d = u[:, None] - u[None, :]
    return 2.0 * np.sum(asm.pair_weights * spow(d, r), axis=1) + asm.exterior_weights * spow(u, r)


def _hessian(asm: EnergyAssembly, u: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """Hessian of E/r.

    For r < 2 the factor |t|^(r-2) is singular at t = 0; a positive ``eps``
    replaces it by (t^2 + eps^2)^((r-2)/2), which gives a positive definite
    preconditioner rather than the exact Hessian.
    """
    r = asm.r
    d = u[:, None] - u[None, :]
    if r < 2.0:
        if eps <= 0:
            eps = 1e-8 * max(1.0, float(np.max(np.abs(u))))
        kd = (d * d + eps * eps) ** ((r - 2.0) / 2.0)
        ku = (u * u + eps * eps) ** ((r - 2.0) / 2.0)
    else:
        kd = np.abs(d) ** (r - 2.0)
        ku = np.abs(u) ** (r - 2.0)
    off = 2.0 * (r - 1.0) * asm.pair_weights * kd
    hess = -off
    hess[np.diag_indices_from(hess)] = np.sum(off, axis=1) + (r - 1.0) * asm.exterior_weights * ku
    return hess


def energy(asm: EnergyAssembly, u) -> float:
    return _energy(asm, values_on(asm.grid, u))


def operator_apply(asm: EnergyAssembly, u) -> np.ndarray:
    """Gradient of E/r; satisfies <operator_apply(u), u> = E(u)."""
    return _apply(asm, values_on(asm.grid, u))


def hessian(asm: EnergyAssembly, u, eps: float = 0.0) -> np.ndarray:
    return _hessian(asm, values_on(asm.grid, u), eps)


def lp_norm_pow(grid: Grid, u, gamma: float) -> float:
    """Discrete sum_i |u_i|^gamma h."""
    if gamma < 1:
        raise ValueError("need gamma >= 1")
    u = values_on(grid, u)
    return float(np.sum(np.abs(u) ** gamma) * grid.h)


def linear_matrix(asm: EnergyAssembly) -> np.ndarray:
    """Stiffness matrix of the r = 2 energy: E(u) = u^T M u."""
    w = np.asarray(asm.pair_weights)
    m = -2.0 * w
    m[np.diag_indices_from(m)] = 2.0 * w.sum(axis=1) + asm.exterior_weights
    return m
