/** Three 2-D projections of the front; same color coding as the 3-D view. */

import type { FrontEntry } from "./types.js";
import type { ScatterStyle } from "./scatter3d.js";

export interface PaneSpec {
  xField: "risk" | "ret" | "carbon";
  yField: "risk" | "ret" | "carbon";
  xLabel: string;
  yLabel: string;
}

export const PANES: PaneSpec[] = [
  { xField: "risk", yField: "ret", xLabel: "risk", yLabel: "return" },
  { xField: "risk", yField: "carbon", xLabel: "risk", yLabel: "carbon" },
  { xField: "ret", yField: "carbon", xLabel: "return", yLabel: "carbon" },
];

interface PanePoint {
  x: number;
  y: number;
  id: number;
}

export function paneProject(entries: FrontEntry[], spec: PaneSpec,
                            width: number, height: number, margin = 26): PanePoint[] {
  const xs = entries.map((e) => e[spec.xField]);
  const ys = entries.map((e) => e[spec.yField]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (v: number) => margin + (x1 > x0 ? (v - x0) / (x1 - x0) : 0.5) * (width - 2 * margin);
  const sy = (v: number) => height - margin - (y1 > y0 ? (v - y0) / (y1 - y0) : 0.5) * (height - 2 * margin);
  return entries.map((e, id) => ({ x: sx(e[spec.xField]), y: sy(e[spec.yField]), id }));
}

export function drawPane(canvas: HTMLCanvasElement, entries: FrontEntry[],
                         styles: ScatterStyle[], spec: PaneSpec): PanePoint[] {
  const ctx = canvas.getContext("2d");
  if (!ctx) return [];
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#2e3a4e";
  ctx.strokeRect(20, 8, width - 28, height - 28);
  ctx.fillStyle = "#7d8590";
  ctx.font = "10px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(spec.xLabel, width / 2, height - 4);
  ctx.save();
  ctx.translate(9, height / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(spec.yLabel, 0, 0);
  ctx.restore();
  if (!entries.length) return [];
  const pts = paneProject(entries, spec, width, height);
  for (const p of pts) {
    const style = styles[p.id];
    ctx.beginPath();
    ctx.arc(p.x, p.y, style.role ? 4 : 2.2, 0, Math.PI * 2);
    ctx.fillStyle = style.role ? "#e5484d" : style.inRegion ? "#3b82f6" : "#9aa4b2";
    ctx.fill();
    if (style.selected) {
      ctx.strokeStyle = "#f5d90a";
      ctx.stroke();
    }
  }
  return pts;
}
