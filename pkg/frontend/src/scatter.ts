import { classColor, Draw2D, GROUP_COLORS } from "./draw.js";
import { bounds, nearestPoint, Scale } from "./geometry.js";
import type { Point, SelectionPayload, SessionPayload } from "./types.js";

export interface ScatterOptions {
  width: number;
  height: number;
  pointRadius?: number;
  /** Pixel tolerance for endpoint picking. */
  pickRadius?: number;
}

export interface ScatterView {
  session: SessionPayload;
  selection: SelectionPayload | null;
  colorMode: "class" | "group";
  showMedoidTree: boolean;
  showPath: boolean;
  /** In-progress lasso polygons in data coordinates. */
  lassoDraft?: Point[][];
}

/**
 * Renders the embedding scatter: points colored by class or by selected
 * group, the medoid-subtree overlay, and the selected MST path projected
 * onto the embedding. Pure function of (view, options); holds no state.
 */
export function renderScatter(ctx: Draw2D, view: ScatterView, options: ScatterOptions): Scale {
  const { session, selection } = view;
  const radius = options.pointRadius ?? 2.5;
  const scale = new Scale(bounds(session.embedding), options.width, options.height, 16);
  const classIndex = new Map(session.classes.map((label, i) => [label, i]));
  const rowIndex = new Map(session.row_ids.map((id, i) => [id, i]));
  const groupOf = new Array<number>(session.n).fill(0);
  if (selection) {
    for (const id of selection.group1) groupOf[rowIndex.get(id) ?? -1] = 1;
    for (const id of selection.group2) groupOf[rowIndex.get(id) ?? -1] = 2;
  }

  ctx.clearRect(0, 0, options.width, options.height);
  ctx.globalAlpha = 0.9;
  for (let i = 0; i < session.n; i++) {
    const [px, py] = scale.point(session.embedding[i]);
    ctx.fillStyle =
      view.colorMode === "group" && selection
        ? GROUP_COLORS[groupOf[i]]
        : classColor(classIndex.get(session.labels[i]) ?? 0);
    ctx.beginPath();
    ctx.arc(px, py, radius, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.globalAlpha = 1.0;

  if (view.showMedoidTree) {
    ctx.strokeStyle = "#222";
    ctx.lineWidth = 1.5;
    for (const [a, b] of session.medoid_subtree) {
      const pa = scale.point(session.embedding[rowIndex.get(a)!]);
      const pb = scale.point(session.embedding[rowIndex.get(b)!]);
      ctx.beginPath();
      ctx.moveTo(pa[0], pa[1]);
      ctx.lineTo(pb[0], pb[1]);
      ctx.stroke();
    }
  }

  if (view.showPath && selection) {
    ctx.strokeStyle = "#000";
    ctx.lineWidth = 2;
    ctx.beginPath();
    selection.path_embedding.forEach((p, i) => {
      const [px, py] = scale.point(p);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  for (const polygon of view.lassoDraft ?? []) {
    if (polygon.length < 2) continue;
    ctx.strokeStyle = "#666";
    ctx.lineWidth = 1;
    ctx.beginPath();
    polygon.forEach((p, i) => {
      const [px, py] = scale.point(p);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.stroke();
  }
  return scale;
}

export type EndpointEvent =
  | { kind: "first"; rowId: string }
  | { kind: "pair"; a: string; b: string }
  | { kind: "duplicate"; rowId: string }
  | { kind: "miss" };

/**
 * Click-pair endpoint picking. Clicking the same point twice is a local
 * validation failure: the pending endpoint is kept and no request is issued.
 */
export class EndpointPicker {
  private pending: string | null = null;

  constructor(private readonly pickRadius = 8) {}

  click(session: SessionPayload, scale: Scale, pixel: Point): EndpointEvent {
    const pixels = session.embedding.map((p) => scale.point(p));
    const hit = nearestPoint(pixels, pixel, this.pickRadius);
    if (hit < 0) return { kind: "miss" };
    const rowId = session.row_ids[hit];
    if (this.pending === null) {
      this.pending = rowId;
      return { kind: "first", rowId };
    }
    if (this.pending === rowId) {
      return { kind: "duplicate", rowId };
    }
    const a = this.pending;
    this.pending = null;
    return { kind: "pair", a, b: rowId };
  }

  reset(): void {
    this.pending = null;
  }
}
