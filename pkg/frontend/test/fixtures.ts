import { execFileSync } from "node:child_process";
import { existsSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join, resolve } from "node:path";

const HERE = dirname(fileURLToPath(import.meta.url));
export const FIXTURE_ROOT = resolve(HERE, "fixtures", "threeVthree");
const REPO_ROOT = resolve(HERE, "..", "..");

export interface FixtureDirs {
  baseline: string;
  filtered: string;
}

/** Generate the comparison fixture once by invoking the simulator CLI. */
export function ensureFixtures(): FixtureDirs {
  const filtered = join(FIXTURE_ROOT, "filtered");
  const baseline = join(FIXTURE_ROOT, "baseline");
  if (!existsSync(join(filtered, "trajectory.csv"))) {
    execFileSync(
      "python3",
      ["-m", "rcbf_swarm", "compare", "threeVthree", "--out", FIXTURE_ROOT],
      { cwd: REPO_ROOT, stdio: "pipe", timeout: 300_000 },
    );
  }
  return { baseline, filtered };
}
