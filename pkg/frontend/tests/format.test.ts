import { describe, expect, it } from "vitest";

import {
  boxLabel,
  compositionRows,
  displayedWeightSum,
  fmtObjective,
  fmtWeightPct,
  repsTable,
} from "../src/format.js";
import type { ApiEntry, RepresentativesOk } from "../src/types.js";

function entry(id: number, weights: number[], risk: number, ret: number,
               carbon: number): ApiEntry {
  return { id, weights, risk, ret, carbon, box: [id, 0, 0] };
}

describe("number formatting", () => {
  it("weights render in percent at one decimal", () => {
    expect(fmtWeightPct(0.2)).toBe("20.0");
    expect(fmtWeightPct(0.196)).toBe("19.6");
  });

  it("zero weight renders as 0.0", () => {
    expect(fmtWeightPct(0)).toBe("0.0");
  });

  it("objectives render at three decimals", () => {
    expect(fmtObjective(8.4617)).toBe("8.462");
    expect(fmtObjective(1.079)).toBe("1.079");
    expect(fmtObjective(1.0796)).toBe("1.080");
  });
});

describe("composition panel", () => {
  const e = entry(3, [0.2, 0.305, 0.495], 8.462, 1.079, 3.127);

  it("one row per asset in served order", () => {
    expect(compositionRows(["A", "B", "C"], e)).toEqual([
      { asset: "A", pct: "20.0" },
      { asset: "B", pct: "30.5" },
      { asset: "C", pct: "49.5" },
    ]);
  });

  it("displayed weights sum to 100.0 within rounding", () => {
    const total = Number(displayedWeightSum(e));
    expect(Math.abs(total - 100.0)).toBeLessThanOrEqual(0.1);
  });

  it("box index is shown verbatim", () => {
    expect(boxLabel(e)).toBe("(3, 0, 0)");
  });
});

describe("representatives table", () => {
  const reps: RepresentativesOk = {
    status: "ok",
    thresholds: { p_g: 3.2, p_r: 9.6 },
    representatives: {
      opt: entry(0, [0.35, 0.4, 0.25], 9.122, 1.145, 2.871),
      min_var: entry(1, [0.2, 0.3, 0.5], 8.462, 1.079, 3.127),
      min_emi: entry(2, [0.5, 0.3, 0.2], 9.559, 1.104, 2.591),
      max_ret: entry(3, [0.0, 0.5, 0.5], 9.565, 1.202, 3.118),
    },
  };

  it("rows follow the fixed role order with the opt row bold", () => {
    const rows = repsTable(["FA", "FB", "FC"], reps);
    expect(rows.map((r) => r.label)).toEqual(["opt", "min var", "min emi", "max ret"]);
    expect(rows.map((r) => r.bold)).toEqual([true, false, false, false]);
  });

  it("cells carry weights then objectives, all formatted", () => {
    const rows = repsTable(["FA", "FB", "FC"], reps);
    expect(rows[1].cells).toEqual(["20.0", "30.0", "50.0", "8.462", "1.079", "3.127"]);
    expect(rows[3].cells[0]).toBe("0.0");
  });
});
