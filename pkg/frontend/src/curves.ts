/** Mean matched-fraction curves (pre/post closure) with +-1 std bands. */

import { AggregateRow } from "./csv.js";
import { Color, Raster } from "./raster.js";
import { textWidth } from "./font.js";

export const PRE_COLOR: Color = [31, 119, 180];
export const POST_COLOR: Color = [255, 127, 14];
const AXIS: Color = [0, 0, 0];
const BAND_ALPHA = 0.3;

export interface CurvesOptions {
  title?: string;
  width?: number;
  height?: number;
}

export interface CurvesPlot {
  image: Raster;
  xPixel: (m: number) => number;
  yPixel: (fraction: number) => number;
  plotRect: { x: number; y: number; w: number; h: number };
}

interface Series {
  ms: number[];
  mean: number[];
  std: number[];
}

function seriesFor(rows: AggregateRow[], phase: "pre" | "post"): Series {
  const byM = new Map<number, AggregateRow>();
  for (const row of rows) {
    if (row.phase === phase) byM.set(row.m, row);
  }
  const ms = [...byM.keys()].sort((a, b) => a - b);
  return {
    ms,
    mean: ms.map((m) => byM.get(m)!.mean),
    std: ms.map((m) => byM.get(m)!.std),
  };
}

export function renderCurves(rows: AggregateRow[], options: CurvesOptions = {}): CurvesPlot {
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  const margin = { left: 70, right: 24, top: 46, bottom: 56 };
  const plot = {
    x: margin.left,
    y: margin.top,
    w: width - margin.left - margin.right,
    h: height - margin.top - margin.bottom,
  };
  const pre = seriesFor(rows, "pre");
  const post = seriesFor(rows, "post");
  const allMs = [...new Set([...pre.ms, ...post.ms])].sort((a, b) => a - b);
  if (allMs.length === 0) {
    throw new Error("aggregate CSV: no pre/post rows to plot");
  }
  const mLo = allMs[0];
  const mHi = allMs[allMs.length - 1];

  const image = new Raster(width, height);
  const xPixel = (m: number) =>
    mHi === mLo
      ? plot.x + Math.floor(plot.w / 2)
      : plot.x + Math.round(((m - mLo) / (mHi - mLo)) * (plot.w - 1));
  const yPixel = (f: number) => plot.y + Math.round((1 - f) * (plot.h - 1));

  const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

  // std bands first so the mean lines stay crisp
  for (const [series, color] of [
    [pre, PRE_COLOR],
    [post, POST_COLOR],
  ] as const) {
    for (let i = 0; i < series.ms.length; i++) {
      const xl = i === 0 ? xPixel(series.ms[i]) : xPixel((series.ms[i - 1] + series.ms[i]) / 2);
      const xr =
        i === series.ms.length - 1
          ? xPixel(series.ms[i])
          : xPixel((series.ms[i] + series.ms[i + 1]) / 2);
      const hi = yPixel(clamp01(series.mean[i] + series.std[i]));
      const lo = yPixel(clamp01(series.mean[i] - series.std[i]));
      const w = Math.max(xr - xl + 1, 7);
      image.blendRect(xl, hi, w, lo - hi + 1, color, BAND_ALPHA);
    }
  }
  for (const [series, color] of [
    [pre, PRE_COLOR],
    [post, POST_COLOR],
  ] as const) {
    for (let i = 0; i + 1 < series.ms.length; i++) {
      image.line(
        xPixel(series.ms[i]),
        yPixel(series.mean[i]),
        xPixel(series.ms[i + 1]),
        yPixel(series.mean[i + 1]),
        color,
        2,
      );
    }
    for (let i = 0; i < series.ms.length; i++) {
      image.fillRect(xPixel(series.ms[i]) - 2, yPixel(series.mean[i]) - 2, 5, 5, color);
    }
  }

  // axes and ticks
  image.line(plot.x - 1, plot.y, plot.x - 1, plot.y + plot.h, AXIS);
  image.line(plot.x - 1, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, AXIS);
  for (const f of [0, 0.25, 0.5, 0.75, 1]) {
    const y = yPixel(f);
    image.line(plot.x - 5, y, plot.x - 1, y, AXIS);
    const label = f.toFixed(2);
    image.text(plot.x - 10 - textWidth(label, 1), y - 3, label, AXIS, 1);
  }
  for (const m of allMs) {
    const x = xPixel(m);
    image.line(x, plot.y + plot.h, x, plot.y + plot.h + 4, AXIS);
    const label = String(m);
    image.text(x - Math.floor(textWidth(label, 1) / 2), plot.y + plot.h + 8, label, AXIS, 1);
  }
  image.text(plot.x + Math.floor(plot.w / 2) - 3, height - 18, "M", AXIS, 1);
  image.text(8, plot.y - 14, "FRACTION MATCHED", AXIS, 1);

  const title = options.title ?? "MATCHED FRACTION VS M";
  image.text(
    plot.x + Math.floor((plot.w - textWidth(title, 2)) / 2),
    12,
    title,
    AXIS,
    2,
  );

  // legend, top-right inside the plot
  const lx = plot.x + plot.w - 110;
  image.fillRect(lx, plot.y + 8, 18, 4, PRE_COLOR);
  image.text(lx + 24, plot.y + 5, "PRE", AXIS, 1);
  image.fillRect(lx, plot.y + 22, 18, 4, POST_COLOR);
  image.text(lx + 24, plot.y + 19, "POST", AXIS, 1);

  return { image, xPixel, yPixel, plotRect: plot };
}
