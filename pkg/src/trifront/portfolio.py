"""Feasible portfolios on the bounded simplex and the three objectives.

A portfolio is a weight vector on the simplex ``sum(w) = 1`` intersected with
per-asset box bounds. Objectives: variance ``w' Sigma w`` (minimize), expected
return ``w' mu`` (maximize) and carbon exposure ``w' c`` (minimize). Batch
variants operate on row-stacked weight matrices; the evolutionary engine uses
those directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market_data import AssetUniverse

SUM_TOL = 1e-9
BOUND_TOL = 1e-12

# w' Sigma w may come out a hair negative on a PSD-within-tolerance matrix;
# anything below this is a corrupt instance rather than rounding.
RISK_FLOOR = -1e-8


class InfeasibleBoundsError(ValueError):
    """Bounds whose box does not intersect the unit simplex."""


@dataclass(frozen=True)
class Bounds:
    """Per-asset weight box constraints, both vectors in [0, 1]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise InfeasibleBoundsError("lower and upper must be equal-length vectors")
        if lo.size == 0:
            raise InfeasibleBoundsError("bounds must cover at least one asset")
        if (lo < 0).any() or (hi > 1).any() or (lo > hi).any():
            raise InfeasibleBoundsError("need 0 <= lower <= upper <= 1 per asset")
        if lo.sum() > 1.0 + BOUND_TOL or hi.sum() < 1.0 - BOUND_TOL:
            raise InfeasibleBoundsError(
                f"simplex unreachable: sum(lower)={lo.sum():.6g}, sum(upper)={hi.sum():.6g}"
            )

    @classmethod
    def default(cls, n: int) -> "Bounds":
        """Long-only, uncapped: [0, 1] per asset."""
        return cls(np.zeros(n), np.ones(n))

    @classmethod
    def capped(cls, n: int, cap: float, lower: float = 0.0) -> "Bounds":
        """Uniform per-asset cap (e.g. 0.2 to replicate a 20% limit)."""
        return cls(np.full(n, lower), np.full(n, cap))

    @property
    def n_assets(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True)
class Portfolio:
    """Weight vector on the bounded simplex."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if not np.isfinite(w).all():
            raise ValueError("weights contain non-finite entries")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")


@dataclass(frozen=True)
class ObjectiveVector:
    """(risk, return, carbon) image of a portfolio."""

    risk: float
    ret: float
    carbon: float

    def __post_init__(self) -> None:
        for name, v in (("risk", self.risk), ("ret", self.ret), ("carbon", self.carbon)):
            if not np.isfinite(v):
                raise ValueError(f"non-finite objective {name}={v}")
        if self.risk < 0:
            raise ValueError(f"negative risk {self.risk}")


def is_feasible(w: np.ndarray, bounds: Bounds,
                sum_tol: float = SUM_TOL, bound_tol: float = BOUND_TOL) -> bool:
    w = np.asarray(w, dtype=float)
    if w.shape != bounds.lower.shape or not np.isfinite(w).all():
        return False
    if abs(w.sum() - 1.0) > sum_tol:
        return False
    return bool((w >= bounds.lower - bound_tol).all() and (w <= bounds.upper + bound_tol).all())


def repair_batch(raw: np.ndarray, bounds: Bounds, max_iter: int = 100) -> np.ndarray:
    """Project each row of ``raw`` onto the bounded simplex.

    Clip to the box, then push the residual ``1 - sum`` back proportionally to
    each coordinate's remaining headroom (deficit) or slack (excess). With a
    feasible box one pass lands on the simplex exactly, so the loop is only
    chasing float dust; the projection is deterministic and idempotent.
    """
    raw = np.asarray(raw, dtype=float)
    if not np.isfinite(raw).all():
        raise ValueError("repair input contains non-finite entries")
    w = np.clip(raw, bounds.lower, bounds.upper)
    for _ in range(max_iter):
        residual = 1.0 - w.sum(axis=1)
        active = np.abs(residual) > BOUND_TOL
        if not active.any():
            break
        room = np.where(residual[:, None] > 0, bounds.upper - w, w - bounds.lower)
        total = room.sum(axis=1)
        # Feasible bounds guarantee total >= |residual| on active rows.
        scale = np.zeros_like(residual)
        scale[active] = residual[active] / total[active]
        w = np.clip(w + scale[:, None] * room, bounds.lower, bounds.upper)
    return w


def repair(raw: np.ndarray, bounds: Bounds) -> Portfolio:
    """Repair a single weight vector; feasible input is returned unchanged."""
    raw = np.asarray(raw, dtype=float)
    if raw.shape != bounds.lower.shape:
        raise ValueError(f"raw has shape {raw.shape}, bounds cover {bounds.lower.shape}")
    if not np.isfinite(raw).all():
        raise ValueError("repair input contains non-finite entries")
    if is_feasible(raw, bounds):
        return Portfolio(raw.copy())
    return Portfolio(repair_batch(raw[None, :], bounds)[0])


def random_batch(bounds: Bounds, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` feasible portfolios: uniform on the simplex, then repaired."""
    w = rng.dirichlet(np.ones(bounds.n_assets), size=size)
    return repair_batch(w, bounds)


def random_portfolio(bounds: Bounds, rng: np.random.Generator) -> Portfolio:
    return Portfolio(random_batch(bounds, 1, rng)[0])


def evaluate_batch(w: np.ndarray, universe: AssetUniverse) -> np.ndarray:
    """Objective rows (risk, ret, carbon) for a stack of weight vectors."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[1] != universe.n_assets:
        raise ValueError(
            f"weights have {w.shape[-1]} columns, universe has {universe.n_assets} assets"
        )
    risk = np.einsum("ij,jk,ik->i", w, universe.sigma, w)
    ret = w @ universe.mu
    carbon = w @ universe.carbon
    out = np.column_stack([risk, ret, carbon])
    if not np.isfinite(out).all():
        raise ValueError("non-finite objective value: corrupt instance")
    if risk.min(initial=0.0) < RISK_FLOOR:
        raise ValueError(f"portfolio variance {risk.min()} below PSD tolerance")
    out[:, 0] = np.maximum(out[:, 0], 0.0)
    return out


def evaluate(p: Portfolio, universe: AssetUniverse) -> ObjectiveVector:
    """Evaluate risk = w'Sigma w, ret = w'mu, carbon = w'c."""
    row = evaluate_batch(p.weights[None, :], universe)[0]
    return ObjectiveVector(risk=float(row[0]), ret=float(row[1]), carbon=float(row[2]))
