/** Phase-region map over the (s, C) plane.
 *
 * Colors are fixed: impossible cells orange, pairwise-possible cells blue,
 * multi-only cells blue with a white diagonal hatch overlay, boundary cells
 * gray.  The hatch keeps the legend semantics of the homogeneous-setting
 * region figure.
 */

import { GridRow } from "./csv.js";
import { Color, Raster } from "./raster.js";
import { textWidth } from "./font.js";

export const IMPOSSIBLE_COLOR: Color = [255, 140, 26];
export const PAIRWISE_COLOR: Color = [31, 119, 180];
export const HATCH_BASE: Color = [31, 119, 180];
export const HATCH_STRIPE: Color = [255, 255, 255];
export const BOUNDARY_COLOR: Color = [136, 136, 136];
const AXIS: Color = [0, 0, 0];

export interface PhaseOptions {
  title?: string;
  width?: number;
  height?: number;
}

export interface PhasePlot {
  image: Raster;
  plotRect: { x: number; y: number; w: number; h: number };
  m: number;
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

export function renderPhase(rows: GridRow[], options: PhaseOptions = {}): PhasePlot {
  const ms = uniqueSorted(rows.map((r) => r.m));
  if (ms.length !== 1) {
    throw new Error(`grid CSV: expected a single m per grid, found ${ms.join(", ")}`);
  }
  const m = ms[0];
  const ss = uniqueSorted(rows.map((r) => r.s));
  const cs = uniqueSorted(rows.map((r) => r.C));
  const region = new Map<string, string>();
  for (const row of rows) {
    region.set(`${row.s}|${row.C}`, row.region);
  }
  if (region.size !== ss.length * cs.length) {
    throw new Error("grid CSV: grid is not a complete s x C lattice");
  }

  const width = options.width ?? 640;
  const height = options.height ?? 520;
  const margin = { left: 64, right: 150, top: 46, bottom: 56 };
  const plot = {
    x: margin.left,
    y: margin.top,
    w: width - margin.left - margin.right,
    h: height - margin.top - margin.bottom,
  };
  const image = new Raster(width, height);

  const xEdge = (i: number) => plot.x + Math.round((i / ss.length) * plot.w);
  // C grows upward
  const yEdge = (j: number) => plot.y + plot.h - Math.round((j / cs.length) * plot.h);

  for (let i = 0; i < ss.length; i++) {
    for (let j = 0; j < cs.length; j++) {
      const label = region.get(`${ss[i]}|${cs[j]}`)!;
      const x0 = xEdge(i);
      const x1 = xEdge(i + 1);
      const y1 = yEdge(j);
      const y0 = yEdge(j + 1);
      if (label === "impossible") {
        image.fillRect(x0, y0, x1 - x0, y1 - y0, IMPOSSIBLE_COLOR);
      } else if (label === "pairwise_possible") {
        image.fillRect(x0, y0, x1 - x0, y1 - y0, PAIRWISE_COLOR);
      } else if (label === "boundary") {
        image.fillRect(x0, y0, x1 - x0, y1 - y0, BOUNDARY_COLOR);
      } else {
        // multi_only: hatch in absolute coordinates so stripes run across cells
        for (let y = y0; y < y1; y++) {
          for (let x = x0; x < x1; x++) {
            const stripe = (x + y) % 7 < 2;
            image.setPixel(x, y, stripe ? HATCH_STRIPE : HATCH_BASE);
          }
        }
      }
    }
  }

  // axes
  image.line(plot.x - 1, plot.y, plot.x - 1, plot.y + plot.h, AXIS);
  image.line(plot.x - 1, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, AXIS);
  const xTickCount = Math.min(6, ss.length);
  for (let t = 0; t < xTickCount; t++) {
    const i = Math.round((t / Math.max(1, xTickCount - 1)) * (ss.length - 1));
    const x = Math.round((xEdge(i) + xEdge(i + 1)) / 2);
    image.line(x, plot.y + plot.h, x, plot.y + plot.h + 4, AXIS);
    const label = String(ss[i]);
    image.text(x - Math.floor(textWidth(label, 1) / 2), plot.y + plot.h + 8, label, AXIS, 1);
  }
  const yTickCount = Math.min(6, cs.length);
  for (let t = 0; t < yTickCount; t++) {
    const j = Math.round((t / Math.max(1, yTickCount - 1)) * (cs.length - 1));
    const y = Math.round((yEdge(j) + yEdge(j + 1)) / 2);
    image.line(plot.x - 5, y, plot.x - 1, y, AXIS);
    const label = String(cs[j]);
    image.text(plot.x - 10 - textWidth(label, 1), y - 3, label, AXIS, 1);
  }
  image.text(plot.x + Math.floor(plot.w / 2) - 3, height - 18, "S", AXIS, 1);
  image.text(10, plot.y + Math.floor(plot.h / 2) - 3, "C", AXIS, 1);

  const title = options.title ?? `PHASE REGIONS (M=${m})`;
  image.text(plot.x + Math.floor((plot.w - textWidth(title, 2)) / 2), 12, title, AXIS, 2);

  // legend
  const lx = plot.x + plot.w + 16;
  const entries: Array<[string, Color, boolean]> = [
    ["IMPOSSIBLE", IMPOSSIBLE_COLOR, false],
    ["PAIRWISE", PAIRWISE_COLOR, false],
    ["MULTI ONLY", HATCH_BASE, true],
    ["BOUNDARY", BOUNDARY_COLOR, false],
  ];
  entries.forEach(([label, color, hatched], idx) => {
    const y = plot.y + 10 + idx * 26;
    image.fillRect(lx, y, 20, 12, color);
    if (hatched) {
      for (let yy = y; yy < y + 12; yy++) {
        for (let xx = lx; xx < lx + 20; xx++) {
          if ((xx + yy) % 7 < 2) image.setPixel(xx, yy, HATCH_STRIPE);
        }
      }
    }
    image.text(lx + 26, y + 2, label, AXIS, 1);
  });

  return { image, plotRect: plot, m };
}
