/** View state: per-axis threshold selection (named profile or raw value),
 * the inspected entry and the camera. The client never computes percentiles
 * or dominance; profile labels resolve through the thresholds the service
 * reported in /profiles, and custom values are clamped to the front's value
 * range plus 10% padding. */

import type { FrontDoc, ProfilesResponse, Thresholds } from "./types.js";

export type AxisChoice =
  | { kind: "profile"; label: string }
  | { kind: "custom"; value: number };

export interface Camera {
  yaw: number;
  pitch: number;
  zoom: number;
}

export interface ViewState {
  green: AxisChoice;
  risk: AxisChoice;
  selected: number | null;
  camera: Camera;
}

export interface Range {
  min: number;
  max: number;
}

export interface FrontRanges {
  carbon: Range;
  risk: Range;
}

export function initialState(): ViewState {
  return {
    green: { kind: "profile", label: "moderate" },
    risk: { kind: "profile", label: "cautious" },
    selected: null,
    camera: { yaw: 0.9, pitch: 0.5, zoom: 1.0 },
  };
}

export function frontRanges(front: FrontDoc): FrontRanges {
  const carbons = front.entries.map((e) => e.carbon);
  const risks = front.entries.map((e) => e.risk);
  return {
    carbon: { min: Math.min(...carbons), max: Math.max(...carbons) },
    risk: { min: Math.min(...risks), max: Math.max(...risks) },
  };
}

/** Custom thresholds stay inside [min, max] padded by 10% of the span. */
export function clampCustom(value: number, range: Range): number {
  const pad = 0.1 * (range.max - range.min);
  return Math.min(range.max + pad, Math.max(range.min - pad, value));
}

export function chooseProfile(state: ViewState, axis: "green" | "risk",
                              label: string): ViewState {
  return { ...state, [axis]: { kind: "profile", label } };
}

export function chooseCustom(state: ViewState, axis: "green" | "risk",
                             value: number, ranges: FrontRanges): ViewState {
  const range = axis === "green" ? ranges.carbon : ranges.risk;
  return { ...state, [axis]: { kind: "custom", value: clampCustom(value, range) } };
}

export function selectEntry(state: ViewState, id: number | null): ViewState {
  return { ...state, selected: id };
}

export function orbit(state: ViewState, dYaw: number, dPitch: number): ViewState {
  const pitch = Math.min(1.45, Math.max(-1.45, state.camera.pitch + dPitch));
  return { ...state, camera: { ...state.camera, yaw: state.camera.yaw + dYaw, pitch } };
}

export function zoom(state: ViewState, factor: number): ViewState {
  const z = Math.min(8, Math.max(0.2, state.camera.zoom * factor));
  return { ...state, camera: { ...state.camera, zoom: z } };
}

/** Resolve the active thresholds; named profiles use the service-resolved
 * values so all percentile math stays on the server. */
export function resolveThresholds(state: ViewState,
                                  profiles: ProfilesResponse): Thresholds {
  const p_g = state.green.kind === "profile"
    ? profiles.resolved.green[state.green.label]
    : state.green.value;
  const p_r = state.risk.kind === "profile"
    ? profiles.resolved.risk[state.risk.label]
    : state.risk.value;
  if (p_g === undefined || p_r === undefined) {
    throw new Error("profile label unknown to the service");
  }
  return { p_g, p_r };
}
