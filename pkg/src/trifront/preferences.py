"""A-posteriori investor preferences over a computed front.

Profiles map labels to percentiles of the front's own objective values:
the green dimension thresholds carbon exposure, the loss-aversion dimension
thresholds variance. Filtering keeps entries at or below both thresholds
(the region of interest); four representative portfolios are then extracted:
the per-objective extremes and a balanced "opt" compromise closest to the
region's ideal point in normalized Chebyshev distance.

Note the default mapping assigns weak the 25th carbon percentile, which
gives the *weak* profile the tightest carbon bound; that reads inverted, so
the mapping is kept configurable rather than silently reinterpreted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .archive import ArchiveEntry, EpsArchive

DEFAULT_GREEN_PERCENTILES = {"weak": 25.0, "moderate": 55.0, "strong": 75.0}
DEFAULT_RISK_PERCENTILES = {"conservative": 50.0, "cautious": 75.0, "aggressive": 100.0}


class EmptyRegionError(ValueError):
    """Raised when representatives are requested from an empty region."""


class UnknownProfileError(KeyError):
    """Raised for a profile label missing from the configuration."""


def percentile(values, q: float) -> float:
    """Linear-interpolation percentile: h = (q/100)(n-1) on the sorted list."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("percentile of an empty list")
    if not np.isfinite(arr).all():
        raise ValueError("percentile input contains non-finite values")
    if not 0.0 < q <= 100.0:
        raise ValueError(f"percentile q must lie in (0, 100], got {q}")
    return float(np.percentile(arr, q))


@dataclass(frozen=True)
class ProfileConfig:
    """Label -> percentile maps for the two preference dimensions."""

    green: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_GREEN_PERCENTILES))
    risk: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_RISK_PERCENTILES))

    def __post_init__(self) -> None:
        for side, table in (("green", self.green), ("risk", self.risk)):
            if not table:
                raise ValueError(f"{side} profile table is empty")
            for label, q in table.items():
                if not 0.0 < float(q) <= 100.0:
                    raise ValueError(f"{side} profile '{label}': percentile {q} outside (0, 100]")

    def green_percentile(self, label: str) -> float:
        try:
            return float(self.green[label])
        except KeyError:
            raise UnknownProfileError(f"unknown green profile '{label}' "
                                      f"(have {sorted(self.green)})") from None

    def risk_percentile(self, label: str) -> float:
        try:
            return float(self.risk[label])
        except KeyError:
            raise UnknownProfileError(f"unknown risk profile '{label}' "
                                      f"(have {sorted(self.risk)})") from None

    @classmethod
    def from_dict(cls, payload: dict) -> "ProfileConfig":
        return cls(green={k: float(v) for k, v in payload.get("green", DEFAULT_GREEN_PERCENTILES).items()},
                   risk={k: float(v) for k, v in payload.get("risk", DEFAULT_RISK_PERCENTILES).items()})

    def to_dict(self) -> dict:
        return {"green": dict(self.green), "risk": dict(self.risk)}


@dataclass(frozen=True)
class PreferenceFilter:
    """Aspiration thresholds: upper bounds on carbon (p_g) and risk (p_r)."""

    p_g: float
    p_r: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.p_g) and np.isfinite(self.p_r)):
            raise ValueError(f"aspiration thresholds must be finite, got ({self.p_g}, {self.p_r})")


@dataclass(frozen=True)
class RegionOfInterest:
    """Front entries satisfying the aspiration thresholds."""

    entries: list[ArchiveEntry]
    filter: PreferenceFilter

    @property
    def is_empty(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class Representatives:
    opt: ArchiveEntry
    min_var: ArchiveEntry
    min_emi: ArchiveEntry
    max_ret: ArchiveEntry

    def as_rows(self) -> list[tuple[str, ArchiveEntry]]:
        return [("opt", self.opt), ("min var", self.min_var),
                ("min emi", self.min_emi), ("max ret", self.max_ret)]


def reference_vectors(arch: EpsArchive, green_percentiles, risk_percentiles
                      ) -> tuple[list[float], list[float]]:
    """Percentiles of carbon (P_g) and risk (P_r) over the archive entries."""
    entries = arch.entries_sorted()
    if not entries:
        raise ValueError("reference vectors of an empty archive")
    carbons = [e.objectives.carbon for e in entries]
    risks = [e.objectives.risk for e in entries]
    p_g = [percentile(carbons, q) for q in green_percentiles]
    p_r = [percentile(risks, q) for q in risk_percentiles]
    return p_g, p_r


def thresholds_for_labels(arch: EpsArchive, profiles: ProfileConfig,
                          green_label: str, risk_label: str) -> PreferenceFilter:
    entries = arch.entries_sorted()
    if not entries:
        raise ValueError("cannot resolve profiles on an empty archive")
    p_g = percentile([e.objectives.carbon for e in entries],
                     profiles.green_percentile(green_label))
    p_r = percentile([e.objectives.risk for e in entries],
                     profiles.risk_percentile(risk_label))
    return PreferenceFilter(p_g=p_g, p_r=p_r)


def filter_region(arch: EpsArchive, f: PreferenceFilter) -> RegionOfInterest:
    """Entries with carbon <= p_g and risk <= p_r; empty is a valid result."""
    members = [e for e in arch.entries_sorted()
               if e.objectives.carbon <= f.p_g and e.objectives.risk <= f.p_r]
    return RegionOfInterest(entries=members, filter=f)


def _tie_key(entry: ArchiveEntry) -> tuple:
    # lowest risk, then lowest carbon, then highest return, then weights
    return (entry.objectives.risk, entry.objectives.carbon, -entry.objectives.ret,
            tuple(entry.weights))


def representatives(region: RegionOfInterest) -> Representatives:
    """Extract the four reported portfolios from a non-empty region.

    The extremes are plain scans; "opt" minimizes the Chebyshev distance
    max_i (g_i - ideal_i) / (nadir_i - ideal_i) to the region's ideal point in
    minimized space, skipping axes the region does not spread on.
    """
    if region.is_empty:
        raise EmptyRegionError("region of interest is empty")
    entries = region.entries
    min_var = min(entries, key=lambda e: (e.objectives.risk, _tie_key(e)))
    min_emi = min(entries, key=lambda e: (e.objectives.carbon, _tie_key(e)))
    max_ret = min(entries, key=lambda e: (-e.objectives.ret, _tie_key(e)))

    g = np.array([e.minimized for e in entries])
    ideal = g.min(axis=0)
    nadir = g.max(axis=0)
    spread = nadir - ideal
    live = spread > 0
    if live.any():
        scaled = (g[:, live] - ideal[live]) / spread[live]
        dist = scaled.max(axis=1)
    else:
        dist = np.zeros(len(entries))
    best = min(range(len(entries)), key=lambda i: (dist[i], _tie_key(entries[i])))
    return Representatives(opt=entries[best], min_var=min_var,
                           min_emi=min_emi, max_ret=max_ret)
