import type { EventRow, PlotOptions, RunData, TrajectoryRow } from "./types.js";
import { Scale, colorFor, document, el, fmt, linearScale, polyline, ticks } from "./svg.js";

const WIDTH = 880;
const HEIGHT = 600;
const MAX_POINTS = 1500;

interface Frame {
  x: Scale;
  y: Scale;
  parts: string[];
  left: number;
  top: number;
  width: number;
  height: number;
}

function makeFrame(
  left: number,
  top: number,
  width: number,
  height: number,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
): Frame {
  const x = linearScale(xDomain, [left, left + width]);
  const y = linearScale(yDomain, [top + height, top]);
  const parts: string[] = [];
  parts.push(
    el("rect", {
      x: left,
      y: top,
      width,
      height,
      fill: "none",
      stroke: "#444444",
      "stroke-width": 1,
    }),
  );
  for (const value of ticks(x.domain)) {
    const px = x(value);
    parts.push(
      el("line", { x1: px, y1: top + height, x2: px, y2: top + height + 4, stroke: "#444444" }),
      el("line", { x1: px, y1: top, x2: px, y2: top + height, stroke: "#eeeeee" }),
      el(
        "text",
        { x: px, y: top + height + 16, "text-anchor": "middle", "font-size": 10, fill: "#333333" },
        [],
        fmt(value),
      ),
    );
  }
  for (const value of ticks(y.domain)) {
    const py = y(value);
    parts.push(
      el("line", { x1: left - 4, y1: py, x2: left, y2: py, stroke: "#444444" }),
      el("line", { x1: left, y1: py, x2: left + width, y2: py, stroke: "#eeeeee" }),
      el(
        "text",
        { x: left - 7, y: py + 3, "text-anchor": "end", "font-size": 10, fill: "#333333" },
        [],
        fmt(value),
      ),
    );
  }
  parts.push(
    el(
      "text",
      { x: left + width / 2, y: top + height + 32, "text-anchor": "middle", "font-size": 11 },
      [],
      xLabel,
    ),
    el(
      "text",
      {
        x: 14,
        y: top + height / 2,
        "text-anchor": "middle",
        "font-size": 11,
        transform: `rotate(-90 14 ${fmt(top + height / 2)})`,
      },
      [],
      yLabel,
    ),
  );
  return { x, y, parts, left, top, width, height };
}

function clampPoint(frame: Frame, px: number, py: number): [number, number] {
  const x = Math.min(Math.max(px, frame.left), frame.left + frame.width);
  const y = Math.min(Math.max(py, frame.top), frame.top + frame.height);
  return [x, y];
}

function sample<T>(items: T[], maxPoints = MAX_POINTS): T[] {
  if (items.length <= maxPoints) return items;
  const step = Math.ceil(items.length / maxPoints);
  const out: T[] = [];
  for (let i = 0; i < items.length; i += step) out.push(items[i]!);
  if (out[out.length - 1] !== items[items.length - 1]) out.push(items[items.length - 1]!);
  return out;
}

function byAgent(data: RunData): Map<number, TrajectoryRow[]> {
  const series = new Map<number, TrajectoryRow[]>();
  for (const id of data.agentIds) series.set(id, []);
  for (const row of data.trajectory) series.get(row.agentId)!.push(row);
  return series;
}

function markerEvents(data: RunData, options?: PlotOptions): EventRow[] {
  if (options?.eventMarkers === false) return [];
  return data.events.filter((ev) => ev.kind === "collision" || ev.kind === "interception");
}

function eventColor(kind: string): string {
  return kind === "collision" ? "#d62728" : "#2ca02c";
}

function nearestRow(series: TrajectoryRow[], t: number): TrajectoryRow | undefined {
  if (series.length === 0) return undefined;
  let best = series[0]!;
  let bestGap = Math.abs(best.t - t);
  for (const row of series) {
    const gap = Math.abs(row.t - t);
    if (gap < bestGap) {
      best = row;
      bestGap = gap;
    }
  }
  return best;
}

function title(data: RunData, label: string): string {
  return el(
    "text",
    { x: WIDTH / 2, y: 22, "text-anchor": "middle", "font-size": 14, "font-weight": "bold" },
    [],
    `${data.name} — ${label}`,
  );
}

function legend(data: RunData, left: number, top: number): string[] {
  const parts: string[] = [];
  data.agentIds.forEach((id, i) => {
    const role = data.roles.get(id) ?? "agent";
    const y = top + i * 16;
    parts.push(
      el("line", {
        x1: left,
        y1: y,
        x2: left + 22,
        y2: y,
        stroke: colorFor(i),
        "stroke-width": 2,
        "stroke-dasharray": role === "target" ? "4 3" : "none",
      }),
      el(
        "text",
        { x: left + 27, y: y + 4, "font-size": 11 },
        [],
        `${role} ${id}`,
      ),
    );
  });
  return parts;
}

/** Isometric 3-D trajectory plot with event markers. */
export function renderTraj3d(data: RunData, options?: PlotOptions): string {
  const cos30 = Math.cos(Math.PI / 6);
  const sin30 = Math.sin(Math.PI / 6);
  const project = (x: number, y: number, z: number): [number, number] => [
    (x - y) * cos30,
    (x + y) * sin30 - z,
  ];

  const series = byAgent(data);
  const projected = new Map<number, Array<[number, number]>>();
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [id, rows] of series) {
    const pts = sample(rows).map((r) => project(r.px, r.py, r.pz));
    projected.set(id, pts);
    for (const [px, py] of pts) {
      minX = Math.min(minX, px);
      maxX = Math.max(maxX, px);
      minY = Math.min(minY, py);
      maxY = Math.max(maxY, py);
    }
  }
  const margin = 60;
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min((WIDTH - 2 * margin) / spanX, (HEIGHT - 2 * margin) / spanY);
  const toScreen = ([px, py]: [number, number]): [number, number] => [
    margin + (px - minX) * scale,
    HEIGHT - margin - (py - minY) * scale,
  ];

  const parts: string[] = [title(data, "3D trajectories")];
  // projected axis directions from the origin of the data bounding region
  const axisOrigin = project(0, 0, 0);
  const axisLen = 0.12 * Math.max(spanX, spanY);
  for (const [label, dir] of [
    ["x", project(1, 0, 0)],
    ["y", project(0, 1, 0)],
    ["z", project(0, 0, 1)],
  ] as Array<[string, [number, number]]>) {
    const start = toScreen(axisOrigin);
    const end = toScreen([axisOrigin[0] + dir[0] * axisLen, axisOrigin[1] + dir[1] * axisLen]);
    parts.push(
      el("line", { x1: start[0], y1: start[1], x2: end[0], y2: end[1], stroke: "#999999" }),
      el("text", { x: end[0] + 3, y: end[1], "font-size": 10, fill: "#666666" }, [], label),
    );
  }

  data.agentIds.forEach((id, i) => {
    const role = data.roles.get(id) ?? "agent";
    const pts = (projected.get(id) ?? []).map(toScreen);
    if (pts.length === 0) return;
    parts.push(
      polyline(pts, {
        stroke: colorFor(i),
        "stroke-width": role === "target" ? 1.2 : 1.8,
        "stroke-dasharray": role === "target" ? "5 4" : "none",
      }),
    );
    const [sx, sy] = pts[0]!;
    parts.push(el("circle", { cx: sx, cy: sy, r: 2.5, fill: colorFor(i) }));
  });

  for (const ev of markerEvents(data, options)) {
    if (ev.agentA === null) continue;
    const row = nearestRow(series.get(ev.agentA) ?? [], ev.t);
    if (!row) continue;
    const [mx, my] = toScreen(project(row.px, row.py, row.pz));
    parts.push(
      el("circle", {
        cx: mx,
        cy: my,
        r: 5,
        fill: eventColor(ev.kind),
        stroke: "#000000",
        "stroke-width": 0.8,
        class: "event-marker",
      }),
      el(
        "text",
        { x: mx + 8, y: my - 6, "font-size": 10, fill: eventColor(ev.kind) },
        [],
        `${ev.kind} @ ${fmt(ev.t)}s`,
      ),
    );
  }

  parts.push(...legend(data, WIDTH - 130, 40));
  return document(WIDTH, HEIGHT, parts);
}

function timeDomain(data: RunData): [number, number] {
  const last = data.trajectory[data.trajectory.length - 1]!;
  return [0, last.t];
}

function timeMarkers(frame: Frame, events: EventRow[], withLabels: boolean): string[] {
  const parts: string[] = [];
  for (const ev of events) {
    const px = frame.x(ev.t);
    if (px < frame.left - 1e-6 || px > frame.left + frame.width + 1e-6) continue;
    parts.push(
      el("line", {
        x1: px,
        y1: frame.top,
        x2: px,
        y2: frame.top + frame.height,
        stroke: eventColor(ev.kind),
        "stroke-dasharray": "3 3",
        class: "event-marker",
      }),
    );
    if (withLabels) {
      parts.push(
        el(
          "text",
          {
            x: px + 3,
            y: frame.top + 12,
            "font-size": 9,
            fill: eventColor(ev.kind),
          },
          [],
          `${ev.kind} @ ${fmt(ev.t)}s`,
        ),
      );
    }
  }
  return parts;
}

/** Per-axis position histories, one panel per coordinate. */
export function renderPositions(data: RunData, options?: PlotOptions): string {
  const series = byAgent(data);
  const events = markerEvents(data, options);
  const tDomain = timeDomain(data);
  const panels: Array<[string, (row: TrajectoryRow) => number]> = [
    ["x [m]", (r) => r.px],
    ["y [m]", (r) => r.py],
    ["z [m]", (r) => r.pz],
  ];
  const parts: string[] = [title(data, "position histories")];
  const panelHeight = 150;
  panels.forEach(([label, pick], panelIndex) => {
    let lo = Infinity;
    let hi = -Infinity;
    for (const rows of series.values()) {
      for (const row of rows) {
        const value = pick(row);
        lo = Math.min(lo, value);
        hi = Math.max(hi, value);
      }
    }
    const pad = 0.05 * (hi - lo || 1);
    const frame = makeFrame(
      60,
      45 + panelIndex * (panelHeight + 32),
      WIDTH - 220,
      panelHeight,
      tDomain,
      [lo - pad, hi + pad],
      panelIndex === panels.length - 1 ? "t [s]" : "",
      label,
    );
    data.agentIds.forEach((id, i) => {
      const role = data.roles.get(id) ?? "agent";
      const pts = sample(series.get(id) ?? []).map(
        (row) => clampPoint(frame, frame.x(row.t), frame.y(pick(row))),
      );
      frame.parts.push(
        polyline(pts, {
          stroke: colorFor(i),
          "stroke-width": role === "target" ? 1.0 : 1.6,
          "stroke-dasharray": role === "target" ? "5 4" : "none",
        }),
      );
    });
    frame.parts.push(...timeMarkers(frame, events, panelIndex === 0));
    parts.push(...frame.parts);
  });
  parts.push(...legend(data, WIDTH - 130, 50));
  return document(WIDTH, HEIGHT, parts);
}

/** Pairwise effector separations with the safety-distance floor. */
export function renderSeparations(data: RunData, options?: PlotOptions): string {
  const effectors = data.agentIds.filter((id) => data.roles.get(id) === "effector");
  const series = byAgent(data);
  const events = markerEvents(data, options);
  const tDomain = timeDomain(data);

  const pairs: Array<[number, number]> = [];
  for (let i = 0; i < effectors.length; i++) {
    for (let j = i + 1; j < effectors.length; j++) {
      pairs.push([effectors[i]!, effectors[j]!]);
    }
  }

  const curves = new Map<string, Array<[number, number]>>();
  let maxSep = 0;
  for (const [a, b] of pairs) {
    const rowsA = series.get(a) ?? [];
    const rowsB = series.get(b) ?? [];
    const n = Math.min(rowsA.length, rowsB.length);
    const pts: Array<[number, number]> = [];
    for (let k = 0; k < n; k++) {
      const ra = rowsA[k]!;
      const rb = rowsB[k]!;
      const d = Math.hypot(ra.px - rb.px, ra.py - rb.py, ra.pz - rb.pz);
      pts.push([ra.t, d]);
      maxSep = Math.max(maxSep, d);
    }
    curves.set(`${a}-${b}`, sample(pts));
  }

  const rS = data.config.rS;
  const yMax = Math.min(maxSep * 1.05, Math.max(4000, (Number.isFinite(rS) ? rS : 0) * 4));
  const frame = makeFrame(70, 45, WIDTH - 240, HEIGHT - 110, tDomain, [0, yMax], "t [s]", "separation [m]");

  let colorIndex = 0;
  const parts: string[] = [title(data, "pairwise effector separation")];
  for (const [key, pts] of curves) {
    const screen = pts.map(([t, d]) => clampPoint(frame, frame.x(t), frame.y(d)));
    frame.parts.push(polyline(screen, { stroke: colorFor(colorIndex), "stroke-width": 1.8 }));
    const anchor = screen[Math.min(40, screen.length - 1)];
    if (anchor) {
      frame.parts.push(
        el(
          "text",
          { x: anchor[0] + 4, y: anchor[1] - 4, "font-size": 10, fill: colorFor(colorIndex) },
          [],
          key,
        ),
      );
    }
    colorIndex += 1;
  }

  for (const [value, label, color] of [
    [data.config.rS, "r_s", "#000000"],
    [data.config.rCollision, "r_collision", "#d62728"],
  ] as Array<[number, string, string]>) {
    if (!Number.isFinite(value) || value > yMax) continue;
    const py = frame.y(value);
    frame.parts.push(
      el("line", {
        x1: frame.left,
        y1: py,
        x2: frame.left + frame.width,
        y2: py,
        stroke: color,
        "stroke-width": 1.2,
        "stroke-dasharray": "7 4",
      }),
      el(
        "text",
        { x: frame.left + frame.width + 5, y: py + 3, "font-size": 10, fill: color },
        [],
        label,
      ),
    );
  }

  frame.parts.push(...timeMarkers(frame, events, true));
  parts.push(...frame.parts);
  return document(WIDTH, HEIGHT, parts);
}

/** Active-constraint counts and slack expenditure per effector over time. */
export function renderFilterActivity(data: RunData, options?: PlotOptions): string {
  const effectors = data.agentIds.filter((id) => data.roles.get(id) === "effector");
  const series = byAgent(data);
  const tDomain = timeDomain(data);
  const markers = (options?.eventMarkers ?? true)
    ? data.events.filter((ev) => ev.kind === "filter_activation" || ev.kind === "collision")
    : [];

  let maxActive = 1;
  let maxLogSlack = 0.1;
  for (const id of effectors) {
    for (const row of series.get(id) ?? []) {
      maxActive = Math.max(maxActive, row.nActive);
      maxLogSlack = Math.max(maxLogSlack, Math.log10(1 + row.slackTotal));
    }
  }

  const parts: string[] = [title(data, "filter activity")];
  const top = makeFrame(
    70,
    45,
    WIDTH - 240,
    (HEIGHT - 150) / 2,
    tDomain,
    [0, maxActive + 0.5],
    "",
    "active constraints",
  );
  const bottom = makeFrame(
    70,
    45 + (HEIGHT - 150) / 2 + 45,
    WIDTH - 240,
    (HEIGHT - 150) / 2,
    tDomain,
    [0, maxLogSlack * 1.05],
    "t [s]",
    "log10(1 + slack)",
  );

  effectors.forEach((id, i) => {
    const rows = sample(series.get(id) ?? []);
    top.parts.push(
      polyline(
        rows.map((row) => clampPoint(top, top.x(row.t), top.y(row.nActive))),
        { stroke: colorFor(i), "stroke-width": 1.4 },
      ),
    );
    bottom.parts.push(
      polyline(
        rows.map((row) =>
          clampPoint(bottom, bottom.x(row.t), bottom.y(Math.log10(1 + row.slackTotal))),
        ),
        { stroke: colorFor(i), "stroke-width": 1.4 },
      ),
    );
  });

  for (const ev of markers) {
    const px = top.x(ev.t);
    if (px < top.left || px > top.left + top.width) continue;
    const color = ev.kind === "collision" ? "#d62728" : "#9467bd";
    top.parts.push(
      el("path", {
        d: `M ${fmt(px)} ${fmt(top.top + 6)} l 4 7 l -8 0 z`,
        fill: color,
        class: "event-marker",
      }),
    );
  }

  parts.push(...top.parts, ...bottom.parts);
  const legendParts: string[] = [];
  effectors.forEach((id, i) => {
    const y = 55 + i * 16;
    legendParts.push(
      el("line", { x1: WIDTH - 130, y1: y, x2: WIDTH - 108, y2: y, stroke: colorFor(i), "stroke-width": 2 }),
      el("text", { x: WIDTH - 103, y: y + 4, "font-size": 11 }, [], `effector ${id}`),
    );
  });
  parts.push(...legendParts);
  return document(WIDTH, HEIGHT, parts);
}
