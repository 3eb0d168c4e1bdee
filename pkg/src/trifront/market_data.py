"""Ingestion of return histories and carbon scores into a problem instance.

The optimizer consumes an :class:`AssetUniverse`: expected returns ``mu``
(percent per period), a sample covariance matrix ``sigma`` (percent^2) and a
carbon risk score per asset (dimensionless, lower is better). This module
loads the raw CSV inputs, estimates the moments and round-trips the canonical
instance JSON used by every downstream command.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_CARBON_RANGE = (0.0, 10.0)

SYMMETRY_TOL = 1e-9
PSD_EIGENVALUE_TOL = -1e-8

INSTANCE_SCHEMA_VERSION = "1"


class DataError(ValueError):
    """Raised when an input file or instance fails validation."""


@dataclass(frozen=True)
class ReturnsMatrix:
    """Panel of periodic returns: one column per asset, one row per period."""

    asset_ids: list[str]
    observations: np.ndarray  # T x N, percent per period
    period_label: str = "monthly"

    def __post_init__(self) -> None:
        obs = np.asarray(self.observations, dtype=float)
        object.__setattr__(self, "observations", obs)
        if obs.ndim != 2:
            raise DataError(f"observations must be 2-D, got shape {obs.shape}")
        t, n = obs.shape
        if t < 2:
            raise DataError(f"need at least 2 observation rows, got {t}")
        if n != len(self.asset_ids):
            raise DataError(f"{len(self.asset_ids)} asset ids but {n} columns")
        if len(set(self.asset_ids)) != len(self.asset_ids):
            raise DataError("asset ids must be unique")
        if not np.isfinite(obs).all():
            bad = np.argwhere(~np.isfinite(obs))[0]
            raise DataError(f"non-finite return at row {bad[0] + 1}, column {bad[1] + 1}")

    @property
    def n_assets(self) -> int:
        return self.observations.shape[1]

    @property
    def n_periods(self) -> int:
        return self.observations.shape[0]


@dataclass(frozen=True)
class AssetUniverse:
    """Problem instance: moments and carbon scores for N assets."""

    asset_ids: list[str]
    mu: np.ndarray
    sigma: np.ndarray
    carbon: np.ndarray
    carbon_range: tuple[float, float] = DEFAULT_CARBON_RANGE

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        carbon = np.asarray(self.carbon, dtype=float)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "carbon", carbon)

        n = len(self.asset_ids)
        if len(set(self.asset_ids)) != n:
            raise DataError("asset ids must be unique")
        if mu.shape != (n,):
            raise DataError(f"mu must have shape ({n},), got {mu.shape}")
        if carbon.shape != (n,):
            raise DataError(f"carbon must have shape ({n},), got {carbon.shape}")
        if sigma.shape != (n, n):
            raise DataError(f"sigma must have shape ({n},{n}), got {sigma.shape}")
        for name, arr in (("mu", mu), ("sigma", sigma), ("carbon", carbon)):
            if not np.isfinite(arr).all():
                raise DataError(f"{name} contains non-finite entries")
        if np.abs(sigma - sigma.T).max(initial=0.0) > SYMMETRY_TOL:
            raise DataError("sigma is not symmetric")
        if n > 0 and np.linalg.eigvalsh(sigma).min() < PSD_EIGENVALUE_TOL:
            raise DataError("sigma is not positive semidefinite")
        lo, hi = self.carbon_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
            raise DataError(f"invalid carbon range ({lo}, {hi})")
        if n > 0 and (carbon.min() < lo or carbon.max() > hi):
            bad = int(np.argmax((carbon < lo) | (carbon > hi)))
            raise DataError(
                f"carbon score {carbon[bad]} for asset '{self.asset_ids[bad]}' "
                f"outside range [{lo}, {hi}]"
            )

    @property
    def n_assets(self) -> int:
        return len(self.asset_ids)


def load_returns(path: str | Path, period_label: str = "monthly") -> ReturnsMatrix:
    """Load a returns CSV: header row of asset ids, one data row per period.

    Raises :class:`DataError` naming the offending row/column on ragged rows,
    blank or non-numeric cells.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"returns file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        asset_ids = [h.strip() for h in header]
        if any(not a for a in asset_ids):
            raise DataError(f"{path}: blank asset id in header")
        rows: list[list[float]] = []
        for lineno, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue  # skip fully blank lines
            if len(cells) != len(asset_ids):
                raise DataError(
                    f"{path}: row {lineno} has {len(cells)} cells, expected {len(asset_ids)}"
                )
            parsed = []
            for col, cell in enumerate(cells, start=1):
                text = cell.strip()
                if not text:
                    raise DataError(f"{path}: blank cell at row {lineno}, column {col}")
                try:
                    parsed.append(float(text))
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric cell '{text}' at row {lineno}, column {col}"
                    ) from None
            rows.append(parsed)
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(rows)}")
    return ReturnsMatrix(asset_ids=asset_ids, observations=np.array(rows, dtype=float),
                         period_label=period_label)


def load_carbon_scores(path: str | Path) -> dict[str, float]:
    """Load the two-column (asset_id, carbon_score) CSV into a mapping."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"carbon file not found: {path}")
    scores: dict[str, float] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        if [h.strip().lower() for h in header[:2]] != ["asset_id", "carbon_score"]:
            raise DataError(f"{path}: expected header 'asset_id,carbon_score'")
        for lineno, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != 2:
                raise DataError(f"{path}: row {lineno} has {len(cells)} cells, expected 2")
            asset_id = cells[0].strip()
            if asset_id in scores:
                raise DataError(f"{path}: duplicate asset id '{asset_id}' at row {lineno}")
            try:
                scores[asset_id] = float(cells[1])
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric carbon score '{cells[1].strip()}' at row {lineno}"
                ) from None
    if not scores:
        raise DataError(f"{path}: no carbon scores found")
    return scores


def align_carbon(returns: ReturnsMatrix, scores: dict[str, float]) -> np.ndarray:
    """Order carbon scores to match the returns columns, failing on id mismatch."""
    missing = [a for a in returns.asset_ids if a not in scores]
    extra = [a for a in scores if a not in returns.asset_ids]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing carbon scores for {missing}")
        if extra:
            parts.append(f"carbon scores for unknown assets {extra}")
        raise DataError("; ".join(parts))
    return np.array([scores[a] for a in returns.asset_ids], dtype=float)


def estimate_moments(
    returns: ReturnsMatrix,
    carbon: np.ndarray,
    carbon_range: tuple[float, float] = DEFAULT_CARBON_RANGE,
) -> AssetUniverse:
    """Estimate (mu, sigma) from the return panel and attach carbon scores.

    mu is the per-column sample mean; sigma the sample covariance with
    divisor T-1, symmetrized exactly so ``sigma == sigma.T`` holds bitwise.
    """
    carbon = np.asarray(carbon, dtype=float)
    if carbon.shape != (returns.n_assets,):
        raise DataError(
            f"carbon has {carbon.shape[0] if carbon.ndim == 1 else '?'} entries, "
            f"expected {returns.n_assets}"
        )
    obs = returns.observations
    mu = obs.mean(axis=0)
    centered = obs - mu
    sigma = centered.T @ centered / (returns.n_periods - 1)
    sigma = (sigma + sigma.T) / 2.0
    return AssetUniverse(
        asset_ids=list(returns.asset_ids),
        mu=mu,
        sigma=sigma,
        carbon=carbon,
        carbon_range=carbon_range,
    )


def universe_to_dict(u: AssetUniverse) -> dict:
    return {
        "schema_version": INSTANCE_SCHEMA_VERSION,
        "asset_ids": list(u.asset_ids),
        "mu": u.mu.tolist(),
        "sigma": u.sigma.tolist(),
        "carbon": u.carbon.tolist(),
        "carbon_range": list(u.carbon_range),
    }


def universe_from_dict(payload: dict) -> AssetUniverse:
    try:
        return AssetUniverse(
            asset_ids=list(payload["asset_ids"]),
            mu=np.array(payload["mu"], dtype=float),
            sigma=np.array(payload["sigma"], dtype=float),
            carbon=np.array(payload["carbon"], dtype=float),
            carbon_range=tuple(payload.get("carbon_range", DEFAULT_CARBON_RANGE)),
        )
    except KeyError as exc:
        raise DataError(f"instance file missing field {exc}") from None


def save_instance(u: AssetUniverse, path: str | Path) -> str:
    """Write the canonical instance JSON; returns its sha256 digest."""
    path = Path(path)
    data = json.dumps(universe_to_dict(u), indent=1).encode("utf-8")
    path.write_bytes(data)
    return "sha256:" + hashlib.sha256(data).hexdigest()


def load_instance(path: str | Path) -> tuple[AssetUniverse, str]:
    """Read an instance JSON; returns (universe, sha256 digest of the file)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"instance file not found: {path}")
    data = path.read_bytes()
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None
    digest = "sha256:" + hashlib.sha256(data).hexdigest()
    return universe_from_dict(payload), digest
