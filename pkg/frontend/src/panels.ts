import { Draw2D } from "./draw.js";
import type { FiveNumber, HeatmapPayload, MetaPayload, TestPayload } from "./types.js";

/** A rendered number with the raw payload value it came from, so contract
 * tests can audit that the UI invents nothing. */
export interface DisplayItem {
  label: string;
  value: number;
  text: string;
}

export function testPanelItems(payload: TestPayload): DisplayItem[] {
  return [
    { label: "observed crossings", value: payload.observed, text: String(payload.observed) },
    { label: "null mean", value: payload.null_mean, text: payload.null_mean.toFixed(2) },
    { label: "null sd", value: payload.null_sd, text: payload.null_sd.toFixed(3) },
    { label: "p-value", value: payload.p_value, text: payload.p_value.toFixed(4) },
    { label: "replicates", value: payload.replicates, text: String(payload.replicates) },
    { label: "seed", value: payload.seed, text: String(payload.seed) },
  ];
}

/** Linear white-to-blue ramp over the matrix range; presentation only. */
export function heatmapColor(value: number, lo: number, hi: number): string {
  const t = hi > lo ? (value - lo) / (hi - lo) : 0.5;
  const level = Math.round(255 - t * 200);
  return `rgb(${level},${level},255)`;
}

export interface HeatmapLayout {
  cellWidth: number;
  cellHeight: number;
  rows: number;
  cols: number;
}

export function heatmapLayout(
  payload: HeatmapPayload,
  width: number,
  height: number
): HeatmapLayout {
  const rows = payload.matrix.length;
  const cols = payload.matrix[0]?.length ?? 0;
  return { cellWidth: width / Math.max(cols, 1), cellHeight: height / Math.max(rows, 1), rows, cols };
}

export function renderHeatmap(
  ctx: Draw2D,
  payload: HeatmapPayload,
  width: number,
  height: number
): HeatmapLayout {
  const layout = heatmapLayout(payload, width, height);
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of payload.matrix) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  ctx.clearRect(0, 0, width, height);
  payload.matrix.forEach((row, i) => {
    row.forEach((v, j) => {
      ctx.fillStyle = heatmapColor(v, lo, hi);
      ctx.fillRect(j * layout.cellWidth, i * layout.cellHeight, layout.cellWidth + 0.5, layout.cellHeight + 0.5);
    });
  });
  // group boundary marker
  const split = payload.row_groups.filter((g) => g === 1).length;
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(0, split * layout.cellHeight);
  ctx.lineTo(width, split * layout.cellHeight);
  ctx.stroke();
  return layout;
}

/** Convert a pixel drag rectangle into row-id / feature-name subsets for a
 * sub-heatmap request. */
export function dragToSubsets(
  payload: HeatmapPayload,
  layout: HeatmapLayout,
  x0: number,
  y0: number,
  x1: number,
  y1: number
): { rows: string[]; features: string[] } {
  const colLo = Math.max(0, Math.floor(Math.min(x0, x1) / layout.cellWidth));
  const colHi = Math.min(layout.cols - 1, Math.floor(Math.max(x0, x1) / layout.cellWidth));
  const rowLo = Math.max(0, Math.floor(Math.min(y0, y1) / layout.cellHeight));
  const rowHi = Math.min(layout.rows - 1, Math.floor(Math.max(y0, y1) / layout.cellHeight));
  return {
    rows: payload.rows.slice(rowLo, rowHi + 1),
    features: payload.feature_names.slice(colLo, colHi + 1),
  };
}

export interface PieSlice {
  level: string;
  /** Proportion exactly as the payload reports it. */
  value: number;
  startAngle: number;
  endAngle: number;
  color: string;
}

const PIE_COLORS = ["#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951", "#ff8ab7", "#a463f2"];

export function pieSlices(proportions: Record<string, number>): PieSlice[] {
  const slices: PieSlice[] = [];
  let angle = -Math.PI / 2;
  Object.entries(proportions).forEach(([level, value], i) => {
    const end = angle + value * 2 * Math.PI;
    slices.push({
      level,
      value,
      startAngle: angle,
      endAngle: end,
      color: PIE_COLORS[i % PIE_COLORS.length],
    });
    angle = end;
  });
  return slices;
}

export interface BoxGeometry {
  /** [min, lowerHinge, median, upperHinge, max] straight from the payload. */
  summary: FiveNumber;
  whiskerLow: number;
  boxLow: number;
  median: number;
  boxHigh: number;
  whiskerHigh: number;
}

/** Pixel geometry of one box plot along an axis from lo..hi data range. */
export function boxGeometry(summary: FiveNumber, lo: number, hi: number, span: number): BoxGeometry {
  const place = (v: number): number => (hi > lo ? ((v - lo) / (hi - lo)) * span : span / 2);
  return {
    summary,
    whiskerLow: place(summary[0]),
    boxLow: place(summary[1]),
    median: place(summary[2]),
    boxHigh: place(summary[3]),
    whiskerHigh: place(summary[4]),
  };
}

export function metaPanelItems(payload: MetaPayload): DisplayItem[] {
  const items: DisplayItem[] = [];
  for (const [column, groups] of Object.entries(payload.categorical)) {
    for (const [group, proportions] of Object.entries(groups)) {
      for (const slice of pieSlices(proportions)) {
        items.push({
          label: `${column}/${group}/${slice.level}`,
          value: slice.value,
          text: `${(slice.value * 100).toFixed(1)}%`,
        });
      }
    }
  }
  for (const [column, groups] of Object.entries(payload.numeric)) {
    for (const [group, summary] of Object.entries(groups)) {
      const names = ["min", "q1", "median", "q3", "max"];
      summary.forEach((v, i) => {
        items.push({ label: `${column}/${group}/${names[i]}`, value: v, text: v.toPrecision(4) });
      });
    }
  }
  return items;
}
