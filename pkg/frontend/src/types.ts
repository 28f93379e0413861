export type FigureKind = "traj3d" | "positions" | "separations" | "filter-activity";

export const FIGURE_KINDS: FigureKind[] = ["traj3d", "positions", "separations", "filter-activity"];

export interface PlotSpec {
  runDir: string;
  kind: FigureKind;
  outPath: string;
  options?: PlotOptions;
}

export interface PlotOptions {
  title?: string;
  /** draw collision/interception markers at their logged times (default true) */
  eventMarkers?: boolean;
}

export interface TrajectoryRow {
  t: number;
  agentId: number;
  role: string;
  px: number;
  py: number;
  pz: number;
  vx: number;
  vy: number;
  vz: number;
  anomX: number;
  anomY: number;
  anomZ: number;
  aX: number;
  aY: number;
  aZ: number;
  nActive: number;
  slackTotal: number;
  saturated: boolean;
}

export interface EventRow {
  t: number;
  kind: string;
  agentA: number | null;
  agentB: number | null;
  detail: string;
}

export interface RunConfig {
  rS: number;
  rCollision: number;
  rHit: number;
}

export interface RunData {
  name: string;
  trajectory: TrajectoryRow[];
  events: EventRow[];
  config: RunConfig;
  agentIds: number[];
  roles: Map<number, string>;
}
