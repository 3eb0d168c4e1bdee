/** Canvas 3-D scatter of (risk, return, carbon) with orbit controls.
 * Points are normalized into a unit cube, rotated by yaw/pitch and drawn
 * with a mild perspective; no external renderer needed. */

import type { Camera } from "./state.js";
import type { FrontEntry, RepRole } from "./types.js";

export interface ProjectedPoint {
  x: number;
  y: number;
  depth: number;
  id: number;
}

export interface ScatterStyle {
  id: number;
  inRegion: boolean;
  role: RepRole | null;
  selected: boolean;
}

const AXES: Array<{ label: string; corner: [number, number, number] }> = [
  { label: "risk", corner: [1, 0, 0] },
  { label: "return", corner: [0, 1, 0] },
  { label: "carbon", corner: [0, 0, 1] },
];

function norm(value: number, min: number, max: number): number {
  return max > min ? (value - min) / (max - min) : 0.5;
}

function rotate(v: [number, number, number], cam: Camera): [number, number, number] {
  const [x, y, z] = [v[0] - 0.5, v[1] - 0.5, v[2] - 0.5];
  const cy = Math.cos(cam.yaw), sy = Math.sin(cam.yaw);
  const cp = Math.cos(cam.pitch), sp = Math.sin(cam.pitch);
  const x1 = cy * x + sy * z;
  const z1 = -sy * x + cy * z;
  const y2 = cp * y - sp * z1;
  const z2 = sp * y + cp * z1;
  return [x1, y2, z2];
}

export function projectPoints(entries: FrontEntry[], cam: Camera,
                              width: number, height: number): ProjectedPoint[] {
  const risks = entries.map((e) => e.risk);
  const rets = entries.map((e) => e.ret);
  const carbons = entries.map((e) => e.carbon);
  const [r0, r1] = [Math.min(...risks), Math.max(...risks)];
  const [t0, t1] = [Math.min(...rets), Math.max(...rets)];
  const [c0, c1] = [Math.min(...carbons), Math.max(...carbons)];
  const scale = 0.42 * Math.min(width, height) * cam.zoom;
  return entries.map((e, id) => {
    const cube: [number, number, number] = [
      norm(e.risk, r0, r1),
      norm(e.ret, t0, t1),
      norm(e.carbon, c0, c1),
    ];
    const [x, y, z] = rotate(cube, cam);
    const persp = 1 / (1.8 - z * 0.6);
    return {
      x: width / 2 + x * scale * persp,
      y: height / 2 - y * scale * persp,
      depth: z,
      id,
    };
  });
}

export function pickPoint(points: ProjectedPoint[], x: number, y: number,
                          radius = 8): number | null {
  let best: number | null = null;
  let bestDist = radius * radius;
  for (const p of points) {
    const d = (p.x - x) ** 2 + (p.y - y) ** 2;
    if (d <= bestDist) {
      bestDist = d;
      best = p.id;
    }
  }
  return best;
}

export function drawScatter(canvas: HTMLCanvasElement, entries: FrontEntry[],
                            styles: ScatterStyle[], cam: Camera): ProjectedPoint[] {
  const ctx = canvas.getContext("2d");
  if (!ctx) return [];
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  if (!entries.length) {
    ctx.fillStyle = "#7d8590";
    ctx.font = "14px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("empty front", width / 2, height / 2);
    return [];
  }
  // axis hints from the cube origin
  const origin = rotate([0, 0, 0], cam);
  const scale = 0.42 * Math.min(width, height) * cam.zoom;
  ctx.strokeStyle = "#2e3a4e";
  ctx.fillStyle = "#7d8590";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "left";
  for (const axis of AXES) {
    const tip = rotate(axis.corner, cam);
    const persp0 = 1 / (1.8 - origin[2] * 0.6);
    const persp1 = 1 / (1.8 - tip[2] * 0.6);
    const x0 = width / 2 + origin[0] * scale * persp0;
    const y0 = height / 2 - origin[1] * scale * persp0;
    const x1 = width / 2 + tip[0] * scale * persp1;
    const y1 = height / 2 - tip[1] * scale * persp1;
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
    ctx.stroke();
    ctx.fillText(axis.label, x1 + 4, y1);
  }

  const projected = projectPoints(entries, cam, width, height);
  const order = [...projected].sort((a, b) => a.depth - b.depth);
  for (const p of order) {
    const style = styles[p.id];
    const r = style.role ? 5 : style.inRegion ? 3.5 : 2.5;
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, Math.PI * 2);
    if (style.role) {
      ctx.fillStyle = "#e5484d"; // representatives: red markers
    } else if (style.inRegion) {
      ctx.fillStyle = "#3b82f6"; // region of interest: blue
    } else {
      ctx.fillStyle = "#9aa4b2"; // full front: grey
    }
    ctx.fill();
    if (style.selected) {
      ctx.strokeStyle = "#f5d90a";
      ctx.lineWidth = 2;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
  }
  return projected;
}
