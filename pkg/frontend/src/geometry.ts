import type { Point } from "./types.js";

/** Even-odd point-in-polygon, mirroring the service's lasso semantics. */
export function pointInPolygon(point: Point, polygon: Point[]): boolean {
  const [x, y] = point;
  let inside = false;
  let [x1, y1] = polygon[polygon.length - 1];
  for (const [x2, y2] of polygon) {
    if (y1 > y !== y2 > y && x < ((x2 - x1) * (y - y1)) / (y2 - y1) + x1) {
      inside = !inside;
    }
    [x1, y1] = [x2, y2];
  }
  return inside;
}

export function pointsInPolygon(points: Point[], polygon: Point[]): number[] {
  const hits: number[] = [];
  points.forEach((p, i) => {
    if (pointInPolygon(p, polygon)) hits.push(i);
  });
  return hits;
}

export interface Bounds {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function bounds(points: Point[], pad = 0.05): Bounds {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of points) {
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  const dx = (xMax - xMin || 1) * pad;
  const dy = (yMax - yMin || 1) * pad;
  return { xMin: xMin - dx, xMax: xMax + dx, yMin: yMin - dy, yMax: yMax + dy };
}

/** Affine map from data bounds onto a pixel rectangle (y flipped). */
export class Scale {
  constructor(
    readonly b: Bounds,
    readonly width: number,
    readonly height: number,
    readonly margin = 10
  ) {}

  x(v: number): number {
    return (
      this.margin +
      ((v - this.b.xMin) / (this.b.xMax - this.b.xMin)) * (this.width - 2 * this.margin)
    );
  }

  y(v: number): number {
    return (
      this.height -
      this.margin -
      ((v - this.b.yMin) / (this.b.yMax - this.b.yMin)) * (this.height - 2 * this.margin)
    );
  }

  point([px, py]: Point): Point {
    return [this.x(px), this.y(py)];
  }

  /** Inverse map from pixels back to data coordinates. */
  invert([px, py]: Point): Point {
    const x =
      this.b.xMin +
      ((px - this.margin) / (this.width - 2 * this.margin)) * (this.b.xMax - this.b.xMin);
    const y =
      this.b.yMin +
      ((this.height - this.margin - py) / (this.height - 2 * this.margin)) *
        (this.b.yMax - this.b.yMin);
    return [x, y];
  }
}

/** Squared distance helper for nearest-point picking. */
export function nearestPoint(points: Point[], target: Point, maxDistance: number): number {
  let best = -1;
  let bestD = maxDistance * maxDistance;
  points.forEach(([x, y], i) => {
    const d = (x - target[0]) ** 2 + (y - target[1]) ** 2;
    if (d <= bestD) {
      best = i;
      bestD = d;
    }
  });
  return best;
}
