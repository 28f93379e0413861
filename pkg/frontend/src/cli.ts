import { render } from "./render.js";
import { FIGURE_KINDS, type FigureKind } from "./types.js";

const USAGE = `usage: plot <run-dir> --kind ${FIGURE_KINDS.join("|")} --out FILE`;

export function main(argv: string[]): number {
  if (argv[0] === "plot") argv = argv.slice(1);
  let runDir: string | undefined;
  let kind: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--out") {
      out = argv[++i];
    } else if (arg === "--help" || arg === "-h") {
      console.log(USAGE);
      return 0;
    } else if (!arg.startsWith("--") && runDir === undefined) {
      runDir = arg;
    } else {
      console.error(`unexpected argument: ${arg}\n${USAGE}`);
      return 2;
    }
  }
  if (!runDir || !kind || !out) {
    console.error(USAGE);
    return 2;
  }
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    console.error(`unknown figure kind "${kind}"\n${USAGE}`);
    return 2;
  }
  try {
    const path = render({ runDir, kind: kind as FigureKind, outPath: out });
    console.log(`wrote ${path}`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
