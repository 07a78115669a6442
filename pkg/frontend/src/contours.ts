import type { Point, SurfacePayload } from "./types.js";

/**
 * Marching-squares iso-lines of a gridded surface.
 *
 * Returns one array of line segments per requested level; segments are in
 * data coordinates and short enough that rendering them individually is
 * visually indistinguishable from joined paths.
 */
export function contourSegments(
  surface: SurfacePayload,
  levels: number[]
): { level: number; segments: [Point, Point][] }[] {
  const { x, y, density } = surface;
  const rows = density.length;
  const cols = density[0]?.length ?? 0;
  const out: { level: number; segments: [Point, Point][] }[] = [];
  for (const level of levels) {
    const segments: [Point, Point][] = [];
    for (let i = 0; i + 1 < rows; i++) {
      for (let j = 0; j + 1 < cols; j++) {
        const corners = [
          density[i][j],
          density[i][j + 1],
          density[i + 1][j + 1],
          density[i + 1][j],
        ];
        let mask = 0;
        corners.forEach((v, k) => {
          if (v >= level) mask |= 1 << k;
        });
        if (mask === 0 || mask === 15) continue;
        const lerp = (a: number, b: number): number => {
          const t = (level - a) / (b - a);
          return Number.isFinite(t) ? Math.min(1, Math.max(0, t)) : 0.5;
        };
        // edge midpoints in data coordinates, interpolated along each side
        const top: Point = [x[j] + lerp(corners[0], corners[1]) * (x[j + 1] - x[j]), y[i]];
        const right: Point = [x[j + 1], y[i] + lerp(corners[1], corners[2]) * (y[i + 1] - y[i])];
        const bottom: Point = [
          x[j] + lerp(corners[3], corners[2]) * (x[j + 1] - x[j]),
          y[i + 1],
        ];
        const left: Point = [x[j], y[i] + lerp(corners[0], corners[3]) * (y[i + 1] - y[i])];
        const table: Record<number, [Point, Point][]> = {
          1: [[left, top]],
          2: [[top, right]],
          3: [[left, right]],
          4: [[right, bottom]],
          5: [
            [left, top],
            [right, bottom],
          ],
          6: [[top, bottom]],
          7: [[left, bottom]],
          8: [[bottom, left]],
          9: [[top, bottom]],
          10: [
            [top, right],
            [bottom, left],
          ],
          11: [[right, bottom]],
          12: [[left, right]],
          13: [[top, right]],
          14: [[left, top]],
        };
        segments.push(...(table[mask] ?? []));
      }
    }
    out.push({ level, segments });
  }
  return out;
}

/** Evenly spaced contour levels between the surface extremes. */
export function defaultLevels(surface: SurfacePayload, count = 8): number[] {
  let max = -Infinity;
  for (const row of surface.density) for (const v of row) if (v > max) max = v;
  if (!(max > 0)) return [];
  return Array.from({ length: count }, (_, i) => ((i + 1) / (count + 1)) * max);
}
