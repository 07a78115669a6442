/** JSON payload shapes of the mstdiag service routes. */

export type Point = [number, number];

export interface SessionPayload {
  session_id: string;
  n: number;
  p: number;
  pca_dims: number | null;
  row_ids: string[];
  embedding: Point[];
  labels: string[];
  classes: string[];
  has_meta: boolean;
  medoids: Record<string, string>;
  /** Simplified medoid-subtree edges as [rowIdA, rowIdB, weight]. */
  medoid_subtree: [string, string, number][];
}

export interface SelectionPayload {
  group1: string[];
  group2: string[];
  path: string[];
  path_embedding: Point[];
}

export interface ProjectionConfigPayload {
  pca_dims: number;
  degree: number;
  lambda: number | null;
  bandwidth: number | null;
}

export interface SurfacePayload {
  x: number[];
  y: number[];
  density: number[][];
  bandwidth: number;
}

export interface ProjectionPayload {
  coords: Point[];
  path_coords: Point[];
  variance_retained: number;
  canonical_correlations: [number, number];
  lambda_used: number;
  config: ProjectionConfigPayload;
  poi_ids: string[];
  /** 1 = group one, 2 = group two, 0 = path-only point. */
  poi_groups: number[];
  /** Indices into poi_ids plus the edge weight. */
  mst_edges: [number, number, number][];
  surface?: SurfacePayload;
}

export interface TestPayload {
  observed: number;
  null_mean: number;
  null_sd: number;
  p_value: number;
  replicates: number;
  seed: number;
}

export interface HeatmapPayload {
  feature_order: number[];
  feature_names: string[];
  rows: string[];
  row_groups: number[];
  matrix: number[][];
  group1_means: number[];
  group2_means: number[];
}

export type FiveNumber = [number, number, number, number, number];

export interface MetaPayload {
  categorical: Record<string, Record<string, Record<string, number>>>;
  numeric: Record<string, Record<string, FiveNumber>>;
}

export interface ProjectRequest {
  pca_dims: number;
  degree: number;
  lambda?: number | null;
  bandwidth?: number | null;
  grid_size?: number;
}

export interface TestRequest {
  replicates?: number;
  seed?: number;
  variance_threshold?: number;
}
