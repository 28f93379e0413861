/**
 * Minimal parser for the block-style YAML subset that the simulator emits in
 * config.yaml: nested mappings, block sequences ("- item") and plain scalars.
 * Not a general YAML parser; just enough to read configuration values back.
 */

export type YamlValue = string | number | boolean | null | YamlValue[] | YamlMap;
export interface YamlMap {
  [key: string]: YamlValue;
}

interface Line {
  indent: number;
  text: string;
}

function scalar(raw: string): YamlValue {
  const text = raw.trim();
  if (text === "" || text === "null" || text === "~") return null;
  if (text === "true") return true;
  if (text === "false") return false;
  const num = Number(text);
  if (!Number.isNaN(num) && /^[-+0-9.eE]+$/.test(text)) return num;
  if (
    (text.startsWith("'") && text.endsWith("'")) ||
    (text.startsWith('"') && text.endsWith('"'))
  ) {
    return text.slice(1, -1);
  }
  return text;
}

export function parseYaml(text: string): YamlMap {
  const lines: Line[] = [];
  for (const raw of text.split(/\r?\n/)) {
    if (raw.trim() === "" || raw.trim().startsWith("#")) continue;
    const indent = raw.length - raw.trimStart().length;
    lines.push({ indent, text: raw.trim() });
  }
  const [value] = parseBlock(lines, 0, 0);
  if (value === null || typeof value !== "object" || Array.isArray(value)) {
    return {};
  }
  return value;
}

function parseBlock(lines: Line[], start: number, indent: number): [YamlValue, number] {
  if (start >= lines.length) return [null, start];
  const first = lines[start]!;
  if (first.text.startsWith("- ") || first.text === "-") {
    const items: YamlValue[] = [];
    let i = start;
    while (i < lines.length && lines[i]!.indent === indent && lines[i]!.text.startsWith("-")) {
      const inline = lines[i]!.text.slice(1).trim();
      if (inline === "") {
        const [value, next] = parseBlock(lines, i + 1, nextIndent(lines, i + 1, indent));
        items.push(value);
        i = next;
      } else if (inline.includes(": ") || inline.endsWith(":")) {
        // sequence item that opens a mapping: "- id: 1"
        const synthetic: Line[] = [{ indent: indent + 2, text: inline }];
        let j = i + 1;
        while (j < lines.length && lines[j]!.indent > indent) {
          synthetic.push(lines[j]!);
          j += 1;
        }
        const [value] = parseBlock(synthetic, 0, synthetic[0]!.indent);
        items.push(value);
        i = j;
      } else {
        items.push(scalar(inline));
        i += 1;
      }
    }
    return [items, i];
  }

  const map: YamlMap = {};
  let i = start;
  while (i < lines.length && lines[i]!.indent === indent && !lines[i]!.text.startsWith("-")) {
    const line = lines[i]!.text;
    const sep = line.indexOf(":");
    if (sep < 0) {
      i += 1;
      continue;
    }
    const key = line.slice(0, sep).trim();
    const rest = line.slice(sep + 1).trim();
    if (rest === "") {
      const childIndent = nextIndent(lines, i + 1, indent);
      if (childIndent > indent || (i + 1 < lines.length && lines[i + 1]!.text.startsWith("-"))) {
        const [value, next] = parseBlock(lines, i + 1, childIndent);
        map[key] = value;
        i = next;
      } else {
        map[key] = null;
        i += 1;
      }
    } else {
      map[key] = scalar(rest);
      i += 1;
    }
  }
  return [map, i];
}

function nextIndent(lines: Line[], index: number, fallback: number): number {
  return index < lines.length ? lines[index]!.indent : fallback;
}

export function lookupNumber(map: YamlMap, path: string[], fallback: number): number {
  let node: YamlValue = map;
  for (const key of path) {
    if (node === null || typeof node !== "object" || Array.isArray(node)) return fallback;
    node = (node as YamlMap)[key] ?? null;
  }
  return typeof node === "number" ? node : fallback;
}
