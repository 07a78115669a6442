import { contourSegments, defaultLevels } from "./contours.js";
import { Draw2D, GROUP_COLORS } from "./draw.js";
import { bounds, Scale } from "./geometry.js";
import type { ProjectionPayload } from "./types.js";

export interface ProjectionViewOptions {
  width: number;
  height: number;
  pointRadius?: number;
  showMstEdges?: boolean;
  showContours?: boolean;
}

/** Number the badge shows, formatted exactly from the payload value. */
export function varianceBadgeText(payload: ProjectionPayload): string {
  return `variance retained: ${(payload.variance_retained * 100).toFixed(1)}%`;
}

/**
 * Renders the unwound-path view: points of interest colored by group, the
 * path polyline in order, optional MST-edge and density-contour overlays,
 * and the variance badge in the upper right corner.
 */
export function renderProjection(
  ctx: Draw2D,
  payload: ProjectionPayload,
  options: ProjectionViewOptions
): Scale {
  const radius = options.pointRadius ?? 2.5;
  const scale = new Scale(
    bounds([...payload.coords, ...payload.path_coords]),
    options.width,
    options.height,
    18
  );
  ctx.clearRect(0, 0, options.width, options.height);

  if (options.showContours && payload.surface) {
    ctx.strokeStyle = "#b0c4de";
    ctx.lineWidth = 1;
    for (const { segments } of contourSegments(payload.surface, defaultLevels(payload.surface))) {
      for (const [[x1, y1], [x2, y2]] of segments) {
        ctx.beginPath();
        ctx.moveTo(scale.x(x1), scale.y(y1));
        ctx.lineTo(scale.x(x2), scale.y(y2));
        ctx.stroke();
      }
    }
  }

  if (options.showMstEdges) {
    ctx.strokeStyle = "#cccccc";
    ctx.lineWidth = 0.8;
    for (const [i, j] of payload.mst_edges) {
      const [x1, y1] = scale.point(payload.coords[i]);
      const [x2, y2] = scale.point(payload.coords[j]);
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    }
  }

  ctx.globalAlpha = 0.9;
  payload.coords.forEach((p, i) => {
    const [px, py] = scale.point(p);
    ctx.fillStyle = GROUP_COLORS[payload.poi_groups[i]] ?? GROUP_COLORS[0];
    ctx.beginPath();
    ctx.arc(px, py, radius, 0, 2 * Math.PI);
    ctx.fill();
  });
  ctx.globalAlpha = 1.0;

  ctx.strokeStyle = "#000";
  ctx.lineWidth = 2;
  ctx.beginPath();
  payload.path_coords.forEach((p, i) => {
    const [px, py] = scale.point(p);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();

  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  ctx.textAlign = "right";
  ctx.textBaseline = "top";
  ctx.fillText(varianceBadgeText(payload), options.width - 6, 6);
  return scale;
}
