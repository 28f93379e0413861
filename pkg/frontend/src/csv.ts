import { readFileSync } from "node:fs";
import { basename, join } from "node:path";

import { lookupNumber, parseYaml } from "./miniyaml.js";
import type { EventRow, RunConfig, RunData, TrajectoryRow } from "./types.js";

export class MissingColumnError extends Error {
  constructor(
    public readonly column: string,
    file: string,
  ) {
    super(`missing column "${column}" in ${file}`);
    this.name = "MissingColumnError";
  }
}

export class EmptyLogError extends Error {
  constructor(file: string) {
    super(`${file} contains a header but no data rows`);
    this.name = "EmptyLogError";
  }
}

const TRAJECTORY_COLUMNS = [
  "t",
  "agent_id",
  "role",
  "px",
  "py",
  "pz",
  "vx",
  "vy",
  "vz",
  "anom_x",
  "anom_y",
  "anom_z",
  "a_x",
  "a_y",
  "a_z",
  "n_active_constraints",
  "slack_total",
  "saturated",
] as const;

const EVENT_COLUMNS = ["t", "kind", "agent_a", "agent_b", "detail"] as const;

function parseTable(
  path: string,
  required: readonly string[],
): { index: Map<string, number>; rows: string[][] } {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new EmptyLogError(path);
  const header = lines[0]!.split(",");
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const column of required) {
    if (!index.has(column)) throw new MissingColumnError(column, path);
  }
  return { index, rows: lines.slice(1).map((line) => line.split(",")) };
}

export function readTrajectory(path: string): TrajectoryRow[] {
  const { index, rows } = parseTable(path, TRAJECTORY_COLUMNS);
  if (rows.length === 0) throw new EmptyLogError(path);
  const col = (name: string) => index.get(name)!;
  return rows.map((cells) => ({
    t: Number(cells[col("t")]),
    agentId: Number(cells[col("agent_id")]),
    role: cells[col("role")] ?? "",
    px: Number(cells[col("px")]),
    py: Number(cells[col("py")]),
    pz: Number(cells[col("pz")]),
    vx: Number(cells[col("vx")]),
    vy: Number(cells[col("vy")]),
    vz: Number(cells[col("vz")]),
    anomX: Number(cells[col("anom_x")]),
    anomY: Number(cells[col("anom_y")]),
    anomZ: Number(cells[col("anom_z")]),
    aX: Number(cells[col("a_x")]),
    aY: Number(cells[col("a_y")]),
    aZ: Number(cells[col("a_z")]),
    nActive: Number(cells[col("n_active_constraints")]),
    slackTotal: Number(cells[col("slack_total")]),
    saturated: cells[col("saturated")] === "1",
  }));
}

export function readEvents(path: string): EventRow[] {
  const { index, rows } = parseTable(path, EVENT_COLUMNS);
  const col = (name: string) => index.get(name)!;
  return rows.map((cells) => {
    const a = cells[col("agent_a")] ?? "";
    const b = cells[col("agent_b")] ?? "";
    return {
      t: Number(cells[col("t")]),
      kind: cells[col("kind")] ?? "",
      agentA: a === "" ? null : Number(a),
      agentB: b === "" ? null : Number(b),
      detail: cells.slice(col("detail")).join(","),
    };
  });
}

export function readConfig(path: string): RunConfig {
  const parsed = parseYaml(readFileSync(path, "utf8"));
  return {
    rS: lookupNumber(parsed, ["safety", "r_s"], NaN),
    rCollision: lookupNumber(parsed, ["sim", "r_collision"], NaN),
    rHit: lookupNumber(parsed, ["sim", "r_hit"], NaN),
  };
}

export function readRunDir(dir: string): RunData {
  const trajectory = readTrajectory(join(dir, "trajectory.csv"));
  const events = readEvents(join(dir, "events.csv"));
  const config = readConfig(join(dir, "config.yaml"));
  const roles = new Map<number, string>();
  for (const row of trajectory) {
    if (!roles.has(row.agentId)) roles.set(row.agentId, row.role);
  }
  const agentIds = [...roles.keys()].sort((a, b) => a - b);
  return { name: basename(dir), trajectory, events, config, agentIds, roles };
}
