import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { readRunDir } from "./csv.js";
import {
  renderFilterActivity,
  renderPositions,
  renderSeparations,
  renderTraj3d,
} from "./figures.js";
import type { PlotSpec, RunData } from "./types.js";

const RENDERERS: Record<PlotSpec["kind"], (data: RunData, options?: PlotSpec["options"]) => string> = {
  traj3d: renderTraj3d,
  positions: renderPositions,
  separations: renderSeparations,
  "filter-activity": renderFilterActivity,
};

/** Render one figure from a run directory and write it to spec.outPath. */
export function render(spec: PlotSpec): string {
  const renderer = RENDERERS[spec.kind];
  if (!renderer) {
    throw new Error(`unknown figure kind "${spec.kind}"`);
  }
  const data = readRunDir(spec.runDir);
  const svg = renderer(data, spec.options);
  mkdirSync(dirname(spec.outPath), { recursive: true });
  writeFileSync(spec.outPath, svg, "utf8");
  return spec.outPath;
}
