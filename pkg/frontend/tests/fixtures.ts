import { readFileSync } from "node:fs";
import type {
  HeatmapPayload,
  MetaPayload,
  Point,
  ProjectionPayload,
  SelectionPayload,
  SessionPayload,
  TestPayload,
} from "../src/types.js";

function load<T>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export const sessionFixture = load<SessionPayload>("session");
export const selectionFixture = load<SelectionPayload>("selection");
export const projectionFixture = load<ProjectionPayload>("project");
export const testFixture = load<TestPayload>("test");
export const heatmapFixture = load<HeatmapPayload>("heatmap");
export const metaFixture = load<MetaPayload>("meta");
export const lassoFixture = load<{
  polygons: Point[][];
  embedding: Point[];
  result: SelectionPayload;
}>("lasso");

/** Every number appearing anywhere in a payload. */
export function collectNumbers(value: unknown, into = new Set<number>()): Set<number> {
  if (typeof value === "number") into.add(value);
  else if (Array.isArray(value)) value.forEach((v) => collectNumbers(v, into));
  else if (value && typeof value === "object") {
    Object.values(value).forEach((v) => collectNumbers(v, into));
  }
  return into;
}
