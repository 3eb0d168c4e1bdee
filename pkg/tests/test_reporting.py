from pathlib import Path

import numpy as np
import pytest

from trifront.archive import EpsArchive
from trifront.frontio import FrontDocument, entry_payload, front_from_payload
from trifront.preferences import ProfileConfig
from trifront.reporting import analyze, analyze_thresholds, plot_data, render_report, render_table

GOLDEN = Path(__file__).parent / "golden" / "report_table.txt"

# four mutually non-dominated portfolios with hand-checked representative
# roles: min var -> row 0, min emi -> row 1, max ret -> row 2, opt -> row 3
FIXTURE_ROWS = [
    ([0.20, 0.30, 0.50], 8.462, 1.079, 3.127),
    ([0.50, 0.30, 0.20], 9.559, 1.104, 2.591),
    ([0.00, 0.50, 0.50], 9.565, 1.202, 3.118),
    ([0.35, 0.40, 0.25], 9.122, 1.145, 2.871),
]


def fixture_front() -> FrontDocument:
    weights = np.array([w for w, *_ in FIXTURE_ROWS])
    objs = np.array([[r, t, c] for _, r, t, c in FIXTURE_ROWS])
    arch = EpsArchive.from_population(weights, objs, 32)
    assert len(arch) == 4
    payload = {
        "schema_version": "1",
        "instance_digest": "sha256:fixture",
        "asset_ids": ["FA", "FB", "FC"],
        "bounds": {"lower": [0.0, 0.0, 0.0], "upper": [1.0, 1.0, 1.0]},
        "grid": {
            "f_min": arch.grid.f_min.tolist(),
            "f_max": arch.grid.f_max.tolist(),
            "eps": arch.grid.eps.tolist(),
            "n_box": arch.grid.n_box,
        },
        "entries": [entry_payload(e) for e in arch.entries_sorted()],
        "run": {"seed": 0, "config": {}, "evaluations": 4, "iterations": 0,
                "wall_time_s": 0.0, "checkpoints": []},
    }
    return front_from_payload(payload)


class TestRenderTable:
    def test_golden_table(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=3.2, p_r=9.6)
        assert len(result.region.entries) == 4
        table = render_table(front.asset_ids, result.representatives)
        assert table == GOLDEN.read_text(encoding="utf-8")

    def test_weights_one_decimal_objectives_three(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=3.2, p_r=9.6)
        table = render_table(front.asset_ids, result.representatives)
        assert "20.0" in table and "8.462" in table
        assert "0.2000" not in table

    def test_row_order_opt_first(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=3.2, p_r=9.6)
        lines = render_table(front.asset_ids, result.representatives).splitlines()
        labels = [line.rsplit("  ", 1)[-1] for line in lines[1:]]
        assert labels == ["opt", "min var", "min emi", "max ret"]

    def test_report_head_and_empty_region(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=0.5, p_r=0.5)
        text = render_report(front, result, None, None)
        assert "aspirations infeasible" in text
        assert result.representatives is None

    def test_profile_labels_resolve(self):
        front = fixture_front()
        result = analyze(front, ProfileConfig(), "weak", "conservative")
        text = render_report(front, result, "weak", "conservative")
        assert "green=weak" in text and "risk=conservative" in text


class TestPlotData:
    def test_flags_and_roles(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=3.0, p_r=9.6)
        data = plot_data(front, result)
        assert len(data["points"]) == 4
        by_carbon = {round(p["carbon"], 3): p for p in data["points"]}
        assert by_carbon[2.591]["in_region"] is True
        assert by_carbon[2.871]["in_region"] is True
        assert by_carbon[3.127]["in_region"] is False  # carbon over threshold
        assert by_carbon[3.118]["in_region"] is False  # carbon over threshold
        roles = {p["role"] for p in data["points"] if p["role"]}
        assert roles <= {"opt", "min var", "min emi", "max ret"}
        assert data["thresholds"] == {"p_g": 3.0, "p_r": 9.6}

    def test_ids_match_entry_order(self):
        front = fixture_front()
        result = analyze_thresholds(front, p_g=3.2, p_r=9.6)
        data = plot_data(front, result)
        assert [p["id"] for p in data["points"]] == list(range(4))
