/** Run-manifest driver:
 *
 *    node dist/run-data.js <run_manifest.json> <data-dir>
 *
 *  Invokes the qkr-detector CLI once per entry, materializing each inline
 *  config as a JSON file next to the outputs.  The literal "@data/" prefix
 *  in string config values is replaced by the data directory, so fit
 *  entries can reference earlier outputs.  Exit code 3 from the CLI
 *  (fit non-convergence, partial output written) is tolerated.
 */

import { spawnSync } from "node:child_process";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { RunEntry, RunManifest } from "./schema.js";

const PYTHON = process.env.PYTHON ?? "python3";

function resolveConfig(
  config: Record<string, unknown>,
  dataDir: string,
): Record<string, unknown> {
  const resolved: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(config)) {
    resolved[key] =
      typeof value === "string" && value.startsWith("@data/")
        ? join(dataDir, value.slice("@data/".length))
        : value;
  }
  return resolved;
}

function runEntry(entry: RunEntry, dataDir: string): boolean {
  const configDir = join(dataDir, "configs");
  mkdirSync(configDir, { recursive: true });
  const configPath = join(configDir, `${entry.out.replace(/[\\/]/g, "_")}.json`);
  writeFileSync(
    configPath,
    JSON.stringify(resolveConfig(entry.config, dataDir), null, 1),
  );
  const outPath = join(dataDir, entry.out);
  const args = [
    "-m",
    "qkr_detector.cli",
    entry.command,
    "--config",
    configPath,
    "--out",
    outPath,
  ];
  if (entry.threads !== undefined) {
    args.push("--threads", String(entry.threads));
  }
  console.log(`qkr-detector ${entry.command} -> ${entry.out}`);
  const proc = spawnSync(PYTHON, args, { stdio: "inherit" });
  if (proc.status !== 0 && proc.status !== 3) {
    console.error(`${entry.command} failed with exit code ${proc.status}`);
    return false;
  }
  return true;
}

export function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: run-data.js <run_manifest.json> <data-dir>");
    return 2;
  }
  const [manifestPath, dataDir] = argv;
  const manifest = RunManifest.parse(
    JSON.parse(readFileSync(manifestPath, "utf8")),
  );
  mkdirSync(dataDir, { recursive: true });
  let ok = true;
  for (const entry of manifest) {
    ok = runEntry(entry, dataDir) && ok;
  }
  return ok ? 0 : 1;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("run-data.js")) {
  process.exit(main(process.argv.slice(2)));
}
