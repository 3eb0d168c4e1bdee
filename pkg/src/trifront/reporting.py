"""Human-readable report table and scatter data for a filtered front.

Rendering convention: per-asset weights in percent at one
decimal, objective values at three decimals, one row per representative in
the order opt / min var / min emi / max ret. Files keep full precision; only
the table rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frontio import FrontDocument
from .preferences import (
    PreferenceFilter,
    ProfileConfig,
    RegionOfInterest,
    Representatives,
    filter_region,
    representatives,
    thresholds_for_labels,
)


@dataclass(frozen=True)
class ReportResult:
    filter: PreferenceFilter
    region: RegionOfInterest
    representatives: Representatives | None  # None when the region is empty


def analyze(front: FrontDocument, profiles: ProfileConfig,
            green_label: str, risk_label: str) -> ReportResult:
    flt = thresholds_for_labels(front.archive, profiles, green_label, risk_label)
    region = filter_region(front.archive, flt)
    reps = None if region.is_empty else representatives(region)
    return ReportResult(filter=flt, region=region, representatives=reps)


def analyze_thresholds(front: FrontDocument, p_g: float, p_r: float) -> ReportResult:
    flt = PreferenceFilter(p_g=p_g, p_r=p_r)
    region = filter_region(front.archive, flt)
    reps = None if region.is_empty else representatives(region)
    return ReportResult(filter=flt, region=region, representatives=reps)


def render_table(asset_ids: list[str], reps: Representatives) -> str:
    """Fixed-width representatives table: weight columns, then objectives, then role."""
    headers = list(asset_ids) + ["Risk", "Ret.", "Emiss", ""]
    rows = []
    for label, entry in reps.as_rows():
        cells = [f"{w * 100:.1f}" for w in entry.weights]
        cells += [f"{entry.objectives.risk:.3f}", f"{entry.objectives.ret:.3f}",
                  f"{entry.objectives.carbon:.3f}", label]
        rows.append(cells)
    widths = [max(len(headers[c]), *(len(r[c]) for r in rows)) for c in range(len(headers))]
    lines = ["  ".join(h.rjust(widths[c]) for c, h in enumerate(headers)).rstrip()]
    for r in rows:
        lines.append("  ".join(r[c].rjust(widths[c]) if c < len(headers) - 1 else r[c]
                               for c in range(len(headers))).rstrip())
    return "\n".join(lines) + "\n"


def render_report(front: FrontDocument, result: ReportResult,
                  green_label: str | None, risk_label: str | None) -> str:
    profile = (f"green={green_label}, risk={risk_label}"
               if green_label and risk_label else "custom thresholds")
    head = (
        f"Region of interest ({profile}): carbon <= {result.filter.p_g:.3f}, "
        f"risk <= {result.filter.p_r:.3f}\n"
        f"Members: {len(result.region.entries)} of {len(front.entries)} front entries\n"
    )
    if result.representatives is None:
        return head + "Status: aspirations infeasible on this front (empty region)\n"
    return head + "\n" + render_table(front.asset_ids, result.representatives)


def plot_data(front: FrontDocument, result: ReportResult) -> dict:
    """Scatter rows for plotting: every entry with region/representative flags."""
    member_boxes = {e.box for e in result.region.entries}
    roles: dict[tuple, str] = {}
    if result.representatives is not None:
        # opt wins when one entry fills several roles, matching the table order
        for label, entry in reversed(result.representatives.as_rows()):
            roles[entry.box] = label
    points = []
    for i, e in enumerate(front.entries):
        points.append({
            "id": i,
            "risk": e.objectives.risk,
            "ret": e.objectives.ret,
            "carbon": e.objectives.carbon,
            "in_region": e.box in member_boxes,
            "role": roles.get(e.box),
        })
    return {
        "thresholds": {"p_g": result.filter.p_g, "p_r": result.filter.p_r},
        "points": points,
    }
