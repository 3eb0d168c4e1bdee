/** Rendering helpers for the report table conventions: weights in
 * percent at one decimal, objective values at three decimals. */

import type { ApiEntry, FrontEntry, RepresentativesOk, RepRole } from "./types.js";
import { REP_LABELS, REP_ROLES } from "./types.js";

export function fmtWeightPct(w: number): string {
  return (w * 100).toFixed(1);
}

export function fmtObjective(v: number): string {
  return v.toFixed(3);
}

export interface CompositionRow {
  asset: string;
  pct: string;
}

export function compositionRows(assetIds: string[], entry: FrontEntry): CompositionRow[] {
  return assetIds.map((asset, i) => ({ asset, pct: fmtWeightPct(entry.weights[i]) }));
}

/** Sum of the displayed (rounded) percentages; stays within 100.0 +/- 0.1. */
export function displayedWeightSum(entry: FrontEntry): string {
  const total = entry.weights.reduce((acc, w) => acc + Number(fmtWeightPct(w)), 0);
  return total.toFixed(1);
}

export interface RepsTableRow {
  role: RepRole;
  label: string;
  id: number;
  cells: string[]; // weights..., risk, ret, carbon
  bold: boolean;
}

/** Rows in the fixed order opt / min var / min emi / max ret; the opt
 * row is flagged for bold styling. */
export function repsTable(assetIds: string[], reps: RepresentativesOk): RepsTableRow[] {
  return REP_ROLES.map((role) => {
    const entry: ApiEntry = reps.representatives[role];
    return {
      role,
      label: REP_LABELS[role],
      id: entry.id,
      cells: [
        ...assetIds.map((_, i) => fmtWeightPct(entry.weights[i])),
        fmtObjective(entry.risk),
        fmtObjective(entry.ret),
        fmtObjective(entry.carbon),
      ],
      bold: role === "opt",
    };
  });
}

export function boxLabel(entry: FrontEntry): string {
  return `(${entry.box.join(", ")})`;
}
