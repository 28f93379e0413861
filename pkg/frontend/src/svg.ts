/** String-built SVG primitives: deterministic output, no DOM dependency. */

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : value}"`)
    .join(" ");
  const open = parts.length > 0 ? `<${name} ${parts}>` : `<${name}>`;
  if (children.length === 0 && text === undefined) {
    return parts.length > 0 ? `<${name} ${parts}/>` : `<${name}/>`;
  }
  const body = text !== undefined ? escapeText(text) : children.join("");
  return `${open}${body}</${name}>`;
}

export function polyline(points: Array<[number, number]>, attrs: Record<string, string | number>): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return el("polyline", { points: path, fill: "none", ...attrs });
}

export function document(width: number, height: number, children: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...children,
    "</svg>",
  ].join("\n");
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const k = (range[1] - range[0]) / (d1 - d0);
  const scale = ((value: number) => range[0] + (value - d0) * k) as Scale;
  scale.domain = [d0, d1];
  scale.range = range;
  return scale;
}

export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const unit = err >= 7.5 ? step * 10 : err >= 3.5 ? step * 5 : err >= 1.5 ? step * 2 : step;
  const start = Math.ceil(lo / unit) * unit;
  const out: number[] = [];
  for (let v = start; v <= hi + unit * 1e-9; v += unit) {
    out.push(Math.abs(v) < unit * 1e-9 ? 0 : v);
  }
  return out;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#17becf",
  "#8c564b",
  "#e377c2",
];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length]!;
}
