/** Explorer wiring: load the front once, then every interaction resolves
 * thresholds, asks the service for the region and representatives, and
 * repaints. The stored front is never mutated; an infeasible aspiration
 * keeps the previous view and shows a banner. */

import { ApiClient } from "./api.js";
import { boxLabel, compositionRows, displayedWeightSum, fmtObjective, repsTable } from "./format.js";
import { drawPane, PANES } from "./panes2d.js";
import { drawScatter, pickPoint, ProjectedPoint, ScatterStyle } from "./scatter3d.js";
import {
  chooseCustom,
  chooseProfile,
  FrontRanges,
  frontRanges,
  initialState,
  orbit,
  resolveThresholds,
  selectEntry,
  ViewState,
  zoom,
} from "./state.js";
import type { FrontDoc, ProfilesResponse, RepRole, RepresentativesOk } from "./types.js";

const api = new ApiClient("");

interface AppModel {
  state: ViewState;
  front: FrontDoc | null;
  profiles: ProfilesResponse | null;
  ranges: FrontRanges | null;
  memberIds: Set<number>;
  reps: RepresentativesOk | null;
  requestToken: number;
}

const model: AppModel = {
  state: initialState(),
  front: null,
  profiles: null,
  ranges: null,
  memberIds: new Set(),
  reps: null,
  requestToken: 0,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function roleOf(id: number): RepRole | null {
  if (!model.reps) return null;
  const r = model.reps.representatives;
  // later roles win except opt, which outranks all (matches table emphasis)
  if (r.opt.id === id) return "opt";
  if (r.min_var.id === id) return "min_var";
  if (r.min_emi.id === id) return "min_emi";
  if (r.max_ret.id === id) return "max_ret";
  return null;
}

let projected: ProjectedPoint[] = [];

function repaint(): void {
  const front = model.front;
  if (!front) return;
  const styles: ScatterStyle[] = front.entries.map((_, id) => ({
    id,
    inRegion: model.memberIds.has(id),
    role: roleOf(id),
    selected: model.state.selected === id,
  }));
  projected = drawScatter(el<HTMLCanvasElement>("scatter"), front.entries, styles,
                          model.state.camera);
  for (let i = 0; i < PANES.length; i++) {
    drawPane(el<HTMLCanvasElement>(`pane${i}`), front.entries, styles, PANES[i]);
  }
  renderRepsTable();
  renderComposition();
  el<HTMLSpanElement>("member-count").textContent =
    `${model.memberIds.size} of ${front.entries.length} entries in region`;
}

function renderRepsTable(): void {
  const host = el<HTMLDivElement>("reps-table");
  if (!model.front || !model.reps) {
    host.innerHTML = "<p class='muted'>no representatives</p>";
    return;
  }
  const rows = repsTable(model.front.asset_ids, model.reps);
  const head = [...model.front.asset_ids, "Risk", "Ret.", "Emiss", ""];
  const thead = `<tr>${head.map((h) => `<th>${h}</th>`).join("")}</tr>`;
  const body = rows.map((row) => {
    const cells = row.cells.map((c) => `<td>${c}</td>`).join("");
    const cls = row.bold ? " class='opt-row'" : "";
    return `<tr${cls} data-entry="${row.id}">${cells}<td>${row.label}</td></tr>`;
  }).join("");
  host.innerHTML = `<table>${thead}${body}</table>`;
  host.querySelectorAll("tr[data-entry]").forEach((tr) => {
    tr.addEventListener("click", () => {
      model.state = selectEntry(model.state, Number((tr as HTMLElement).dataset.entry));
      repaint();
    });
  });
}

function renderComposition(): void {
  const host = el<HTMLDivElement>("composition");
  const front = model.front;
  const id = model.state.selected;
  if (!front || id === null || id >= front.entries.length) {
    host.innerHTML = "<p class='muted'>click a point or table row</p>";
    return;
  }
  const entry = front.entries[id];
  const role = roleOf(id);
  const rows = compositionRows(front.asset_ids, entry)
    .map((r) => `<tr><td>${r.asset}</td><td>${r.pct}</td></tr>`).join("");
  const title = role === "opt" ? `<strong>entry ${id} (opt)</strong>` :
    role ? `entry ${id} (${role.replace("_", " ")})` : `entry ${id}`;
  host.innerHTML = `
    <p>${title} &mdash; box ${boxLabel(entry)}</p>
    <table><tr><th>fund</th><th>weight %</th></tr>${rows}
    <tr><th>sum</th><th>${displayedWeightSum(entry)}</th></tr></table>
    <p>risk ${fmtObjective(entry.risk)} &middot; return ${fmtObjective(entry.ret)}
       &middot; carbon ${fmtObjective(entry.carbon)}</p>`;
}

function showBanner(text: string | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

async function refreshRegion(): Promise<void> {
  if (!model.front || !model.profiles) return;
  const token = ++model.requestToken;
  const thresholds = resolveThresholds(model.state, model.profiles);
  el<HTMLSpanElement>("thresholds").textContent =
    `carbon ≤ ${thresholds.p_g.toFixed(3)}, risk ≤ ${thresholds.p_r.toFixed(3)}`;
  try {
    const [flt, reps] = await Promise.all([
      api.filter(thresholds.p_g, thresholds.p_r),
      api.representatives(thresholds.p_g, thresholds.p_r),
    ]);
    if (token !== model.requestToken) return; // a newer request superseded us
    if (flt.status === "empty_region" || reps.status === "empty_region") {
      showBanner("aspirations infeasible on this front - showing previous region");
      return;
    }
    showBanner(null);
    model.memberIds = new Set(flt.entry_ids);
    model.reps = reps;
    repaint();
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    showBanner(`service error: ${(err as Error).message}`);
  }
}

function syncControls(): void {
  const greenProfile = el<HTMLSelectElement>("green-profile");
  const riskProfile = el<HTMLSelectElement>("risk-profile");
  const greenSlider = el<HTMLInputElement>("green-slider");
  const riskSlider = el<HTMLInputElement>("risk-slider");
  greenSlider.disabled = model.state.green.kind !== "custom";
  riskSlider.disabled = model.state.risk.kind !== "custom";
  if (model.state.green.kind === "profile") greenProfile.value = model.state.green.label;
  else greenProfile.value = "custom";
  if (model.state.risk.kind === "profile") riskProfile.value = model.state.risk.label;
  else riskProfile.value = "custom";
}

function wireControls(): void {
  const ranges = model.ranges!;
  const greenSlider = el<HTMLInputElement>("green-slider");
  const riskSlider = el<HTMLInputElement>("risk-slider");
  const pad = (r: { min: number; max: number }) => 0.1 * (r.max - r.min);
  greenSlider.min = String(ranges.carbon.min - pad(ranges.carbon));
  greenSlider.max = String(ranges.carbon.max + pad(ranges.carbon));
  greenSlider.step = "any";
  greenSlider.value = String(ranges.carbon.max);
  riskSlider.min = String(ranges.risk.min - pad(ranges.risk));
  riskSlider.max = String(ranges.risk.max + pad(ranges.risk));
  riskSlider.step = "any";
  riskSlider.value = String(ranges.risk.max);

  el<HTMLSelectElement>("green-profile").addEventListener("change", (ev) => {
    const value = (ev.target as HTMLSelectElement).value;
    model.state = value === "custom"
      ? chooseCustom(model.state, "green", Number(greenSlider.value), ranges)
      : chooseProfile(model.state, "green", value);
    syncControls();
    void refreshRegion();
  });
  el<HTMLSelectElement>("risk-profile").addEventListener("change", (ev) => {
    const value = (ev.target as HTMLSelectElement).value;
    model.state = value === "custom"
      ? chooseCustom(model.state, "risk", Number(riskSlider.value), ranges)
      : chooseProfile(model.state, "risk", value);
    syncControls();
    void refreshRegion();
  });
  greenSlider.addEventListener("input", () => {
    model.state = chooseCustom(model.state, "green", Number(greenSlider.value), ranges);
    void refreshRegion();
  });
  riskSlider.addEventListener("input", () => {
    model.state = chooseCustom(model.state, "risk", Number(riskSlider.value), ranges);
    void refreshRegion();
  });

  const canvas = el<HTMLCanvasElement>("scatter");
  let dragging = false;
  let last: [number, number] = [0, 0];
  let moved = false;
  canvas.addEventListener("pointerdown", (ev) => {
    dragging = true;
    moved = false;
    last = [ev.offsetX, ev.offsetY];
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    const dx = ev.offsetX - last[0];
    const dy = ev.offsetY - last[1];
    if (Math.abs(dx) + Math.abs(dy) > 2) moved = true;
    last = [ev.offsetX, ev.offsetY];
    model.state = orbit(model.state, dx * 0.01, dy * 0.01);
    repaint();
  });
  canvas.addEventListener("pointerup", (ev) => {
    dragging = false;
    if (!moved) {
      const hit = pickPoint(projected, ev.offsetX, ev.offsetY);
      model.state = selectEntry(model.state, hit);
      repaint();
    }
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    model.state = zoom(model.state, ev.deltaY < 0 ? 1.1 : 0.9);
    repaint();
  });
}

async function boot(): Promise<void> {
  try {
    model.front = await api.getFront();
    model.profiles = await api.getProfiles();
  } catch (err) {
    showBanner(`cannot reach the service: ${(err as Error).message}`);
    return;
  }
  if (!model.front.entries.length) {
    showBanner("the served front is empty");
    return;
  }
  model.ranges = frontRanges(model.front);
  const labels = Object.keys(model.profiles.green);
  el<HTMLSelectElement>("green-profile").innerHTML =
    labels.map((l) => `<option>${l}</option>`).join("") + "<option>custom</option>";
  const riskLabels = Object.keys(model.profiles.risk);
  el<HTMLSelectElement>("risk-profile").innerHTML =
    riskLabels.map((l) => `<option>${l}</option>`).join("") + "<option>custom</option>";
  wireControls();
  syncControls();
  repaint();
  await refreshRegion();
}

void boot();
