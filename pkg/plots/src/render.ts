/** Figure-manifest driver:
 *
 *    node dist/render.js <figures.json> <data-dir> <out-dir>
 *
 *  Validates every referenced input against the CLI's declared layout
 *  before rendering; a schema mismatch exits non-zero naming the
 *  offending column.  Output SVGs are deterministic.
 */

import { existsSync, mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { SchemaError, Table, parseMatrix, parseTable, requireColumns } from "./csv.js";
import {
  renderDecay,
  renderHusimiGrid,
  renderRateScatter,
  renderResidualScaling,
  renderSeries,
  renderWdPanels,
} from "./figures.js";
import {
  FigureManifest,
  FigureSpec,
  FitJson,
  LyapunovJson,
  ResidualJson,
} from "./schema.js";

const TRAJECTORY_COLUMNS = [
  "t",
  "re_rho01",
  "im_rho01",
  "abs_rho01",
  "rho00",
  "rho11",
];

function loadJson(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf8"));
}

function loadTable(path: string): Table {
  return parseTable(readFileSync(path, "utf8"), path);
}

function checkExists(path: string): void {
  if (!existsSync(path)) {
    throw new SchemaError(`input file does not exist: ${path}`);
  }
}

function renderOne(spec: FigureSpec, dataDir: string): string {
  const resolve = (p: string) => join(dataDir, p);
  switch (spec.kind) {
    case "decay": {
      const tables = new Map<string, Table>();
      for (const input of spec.inputs) {
        checkExists(resolve(input.path));
        const table = loadTable(resolve(input.path));
        requireColumns(table, [input.x, input.y], input.path);
        tables.set(input.path, table);
      }
      const fitLines = spec.fits.map((fit) => {
        checkExists(resolve(fit.path));
        if (fit.type === "lyapunov") {
          const payload = LyapunovJson.parse(loadJson(resolve(fit.path)));
          return {
            rate: payload.lambda,
            amplitude: 1.0,
            label: fit.label ?? `classical rate ${payload.lambda.toPrecision(3)}`,
          };
        }
        const payload = FitJson.parse(loadJson(resolve(fit.path)));
        return {
          rate: payload.rate,
          amplitude: payload.amplitude,
          label: fit.label ?? `fit rate ${payload.rate.toPrecision(3)}`,
        };
      });
      for (const ref of spec.refs) {
        fitLines.push({
          rate: ref.rate,
          amplitude: ref.amplitude,
          label: ref.label ?? `reference rate ${ref.rate}`,
        });
      }
      return renderDecay(spec, tables, fitLines);
    }
    case "series": {
      const tables = new Map<string, Table>();
      for (const input of spec.inputs) {
        checkExists(resolve(input.path));
        const table = loadTable(resolve(input.path));
        requireColumns(table, [input.x, input.y], input.path);
        tables.set(input.path, table);
      }
      let sineFit;
      if (spec.sine_fit !== undefined) {
        checkExists(resolve(spec.sine_fit));
        sineFit = FitJson.parse(loadJson(resolve(spec.sine_fit)));
      }
      return renderSeries(spec, tables, sineFit);
    }
    case "rate_scatter": {
      checkExists(resolve(spec.input));
      const table = loadTable(resolve(spec.input));
      requireColumns(table, ["value", "gamma1", "gamma2", "flag"], spec.input);
      return renderRateScatter(spec, spec.input, table);
    }
    case "residual_scaling": {
      const residuals = spec.inputs.map((input) => {
        checkExists(resolve(input.path));
        const payload = ResidualJson.parse(loadJson(resolve(input.path)));
        return { n: input.n, value: payload.value };
      });
      return renderResidualScaling(spec, residuals);
    }
    case "husimi_grid": {
      const matrices = new Map<string, number[][]>();
      for (const panel of spec.panels) {
        checkExists(resolve(panel.path));
        matrices.set(
          panel.path,
          parseMatrix(readFileSync(resolve(panel.path), "utf8"), panel.path),
        );
      }
      return renderHusimiGrid(spec, matrices);
    }
    case "wd_panels": {
      const tables = new Map<string, Table>();
      for (const input of spec.inputs) {
        checkExists(resolve(input.path));
        tables.set(input.path, loadTable(resolve(input.path)));
      }
      return renderWdPanels(spec, tables);
    }
  }
}

export function main(argv: string[]): number {
  if (argv.length !== 3) {
    console.error("usage: render.js <figures.json> <data-dir> <out-dir>");
    return 2;
  }
  const [manifestPath, dataDir, outDir] = argv;
  const manifest = FigureManifest.parse(loadJson(manifestPath));
  mkdirSync(outDir, { recursive: true });
  let failures = 0;
  for (const spec of manifest) {
    try {
      const svg = renderOne(spec, dataDir);
      const outPath = join(outDir, spec.out);
      mkdirSync(dirname(outPath), { recursive: true });
      writeFileSync(outPath, svg);
      console.log(`rendered ${spec.id} -> ${outPath}`);
    } catch (err) {
      failures += 1;
      if (err instanceof SchemaError) {
        const detail = err.offendingColumn
          ? ` (offending column: ${err.offendingColumn})`
          : "";
        console.error(`schema mismatch in ${spec.id}: ${err.message}${detail}`);
      } else {
        console.error(`failed to render ${spec.id}: ${err}`);
      }
    }
  }
  return failures === 0 ? 0 : 1;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("render.js")) {
  process.exit(main(process.argv.slice(2)));
}

export { TRAJECTORY_COLUMNS };
