/** Wire types for the debiasing service. Every coordinate shown on screen
 * originates from these frames; the UI never computes embedding math. */

export type Group = "seed_f" | "seed_m" | "evaluation" | "equalize" | "other";

export interface FramePoint {
  token: string;
  x: number;
  y: number;
  group: Group;
}

export interface DirectionSegment {
  label: string;
  x: number;
  y: number;
}

export interface CameraDto {
  kind: "pca" | "aligned" | "span";
  basis1: number[];
  basis2: number[];
  degenerate: boolean;
}

export interface FrameDto {
  step_index: number;
  step_label: string;
  description: string;
  snapshot_id: string;
  camera: CameraDto;
  points: FramePoint[];
  directions: DirectionSegment[];
}

export interface MetricReportDto {
  weat: number;
  ect: number;
  degenerate: boolean;
  snapshot_id: string;
  sets: Record<string, string[]>;
}

export interface TraceDto {
  method: string;
  subspace_method: string;
  label: string;
  frames: FrameDto[];
  output_snapshot_id: string;
  metrics_before: MetricReportDto | null;
  metrics_after: MetricReportDto | null;
}

export interface SessionInfo {
  session_id: string;
  vocab_size: number;
  dim: number;
  snapshot_id: string;
}

export interface JobResponse {
  trace: TraceDto;
  metrics_before: MetricReportDto | null;
  metrics_after: MetricReportDto | null;
  current_snapshot_id: string;
}

export interface NeighborsDto {
  token: string;
  state: "before" | "after";
  snapshot_id: string;
  neighbors: [string, number][];
}

export interface Preset {
  name: string;
  job: Record<string, unknown>;
}

export interface JobPayload {
  method: string;
  subspace_method: string;
  evaluation: string[];
  seeds_f?: string[];
  seeds_m?: string[];
  seed_pairs?: string[][];
  equalize?: string[][];
  second_seeds?: string[];
  label?: string;
  second_label?: string;
  metrics?: boolean;
}

export interface Toggles {
  labels: boolean;
  direction: boolean;
  evaluation: boolean;
}
