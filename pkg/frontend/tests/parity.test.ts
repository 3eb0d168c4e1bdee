/** UI/API parity (acceptance criterion for the explorer): for scripted
 * threshold settings, the membership set and representative table produced
 * through the UI's own data path must equal the raw /filter and
 * /representatives responses exactly. */

import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { fmtObjective, fmtWeightPct, repsTable } from "../src/format.js";
import { chooseCustom, frontRanges, initialState, resolveThresholds } from "../src/state.js";
import type {
  FilterResult,
  FrontDoc,
  ProfilesResponse,
  RepresentativesResult,
} from "../src/types.js";

const base = inject("baseUrl");
const client = new ApiClient(base);

let front: FrontDoc;
let profiles: ProfilesResponse;

beforeAll(async () => {
  front = await client.getFront();
  profiles = await client.getProfiles();
  expect(front.entries.length).toBeGreaterThan(10);
});

async function rawFilter(p_g: number, p_r: number): Promise<FilterResult> {
  const resp = await fetch(`${base}/filter`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ p_g, p_r }),
  });
  return (await resp.json()) as FilterResult;
}

async function rawReps(p_g: number, p_r: number): Promise<RepresentativesResult> {
  const params = new URLSearchParams({ p_g: String(p_g), p_r: String(p_r) });
  const resp = await fetch(`${base}/representatives?${params}`);
  return (await resp.json()) as RepresentativesResult;
}

function scriptedSettings(): Array<{ p_g: number; p_r: number }> {
  const ranges = frontRanges(front);
  const settings: Array<{ p_g: number; p_r: number }> = [];
  for (let gi = 0; gi < 5; gi++) {
    for (let ri = 0; ri < 4; ri++) {
      settings.push({
        p_g: ranges.carbon.min + ((gi + 0.5) / 5) * (ranges.carbon.max - ranges.carbon.min),
        p_r: ranges.risk.min + ((ri + 0.7) / 4) * (ranges.risk.max - ranges.risk.min),
      });
    }
  }
  return settings;
}

describe("UI/API parity on 20 scripted threshold settings", () => {
  it("membership sets and representative tables match exactly", async () => {
    const ranges = frontRanges(front);
    const settings = scriptedSettings();
    expect(settings.length).toBe(20);
    let nonEmpty = 0;
    for (const { p_g, p_r } of settings) {
      // the UI path: reducers -> resolved thresholds -> client
      let state = chooseCustom(initialState(), "green", p_g, ranges);
      state = chooseCustom(state, "risk", p_r, ranges);
      const thresholds = resolveThresholds(state, profiles);
      expect(thresholds).toEqual({ p_g, p_r }); // inside the clamp band

      const [uiFilter, uiReps] = await Promise.all([
        client.filter(thresholds.p_g, thresholds.p_r),
        client.representatives(thresholds.p_g, thresholds.p_r),
      ]);
      const [refFilter, refReps] = await Promise.all([
        rawFilter(p_g, p_r), rawReps(p_g, p_r),
      ]);

      expect(uiFilter.status).toBe(refFilter.status);
      expect(uiReps.status).toBe(refReps.status);
      if (refFilter.status === "empty_region" || refReps.status === "empty_region") {
        continue;
      }
      nonEmpty += 1;
      if (uiFilter.status !== "ok" || uiReps.status !== "ok") throw new Error("unreachable");

      // highlighted-set membership equals the /filter response exactly
      const uiMembers = new Set(uiFilter.entry_ids);
      expect([...uiMembers].sort((a, b) => a - b)).toEqual(refFilter.entry_ids);

      // the rendered table equals the /representatives payload exactly
      const rows = repsTable(front.asset_ids, uiReps);
      const order = ["opt", "min_var", "min_emi", "max_ret"] as const;
      order.forEach((role, i) => {
        const ref = refReps.representatives[role];
        expect(rows[i].id).toBe(ref.id);
        expect(rows[i].cells).toEqual([
          ...ref.weights.map(fmtWeightPct),
          fmtObjective(ref.risk),
          fmtObjective(ref.ret),
          fmtObjective(ref.carbon),
        ]);
        // representatives must be region members
        expect(uiMembers.has(ref.id)).toBe(true);
      });
    }
    expect(nonEmpty).toBeGreaterThan(5); // the scripted grid exercises real regions
  });

  it("nested thresholds produce nested highlighted sets", async () => {
    const ranges = frontRanges(front);
    const p_g = ranges.carbon.max;
    let previous: Set<number> | null = null;
    for (const frac of [0.3, 0.6, 1.0]) {
      const p_r = ranges.risk.min + frac * (ranges.risk.max - ranges.risk.min);
      const result = await client.filter(p_g, p_r);
      const members = result.status === "ok" ? new Set(result.entry_ids) : new Set<number>();
      if (previous !== null) {
        for (const id of previous) expect(members.has(id)).toBe(true);
      }
      previous = members;
    }
  });

  it("profile labels resolve to the service thresholds and agree with label queries", async () => {
    const resp = await fetch(
      `${base}/representatives?` + new URLSearchParams({ green: "moderate", risk: "aggressive" }));
    const byLabel = (await resp.json()) as RepresentativesResult;
    const viaResolved = await client.representatives(
      profiles.resolved.green["moderate"], profiles.resolved.risk["aggressive"]);
    expect(viaResolved.status).toBe(byLabel.status);
    if (byLabel.status === "ok" && viaResolved.status === "ok") {
      expect(viaResolved.representatives).toEqual(byLabel.representatives);
    }
  });

  it("malformed filter bodies surface as API errors, not silent states", async () => {
    const resp = await fetch(`${base}/filter`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ p_g: "green", p_r: 1 }),
    });
    expect(resp.status).toBe(400);
  });
});
