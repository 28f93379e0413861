export { render } from "./render.js";
export {
  EmptyLogError,
  MissingColumnError,
  readConfig,
  readEvents,
  readRunDir,
  readTrajectory,
} from "./csv.js";
export {
  renderFilterActivity,
  renderPositions,
  renderSeparations,
  renderTraj3d,
} from "./figures.js";
export { FIGURE_KINDS } from "./types.js";
export type { EventRow, FigureKind, PlotSpec, RunData, TrajectoryRow } from "./types.js";
