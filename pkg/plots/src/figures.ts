/** Render functions: one per figure kind.  Inputs are already-loaded
 *  tables/JSON payloads; nothing here recomputes physics, it only draws
 *  series, fitted-model curves and reference slopes. */

import { Table, column, requireColumns, SchemaError } from "./csv.js";
import { FitJson } from "./schema.js";
import { heatmapPngBase64 } from "./png.js";
import {
  Area,
  PALETTE,
  Svg,
  decadeTicks,
  drawAxes,
  drawLegend,
  formatTick,
  linearScale,
  niceTicks,
} from "./svg.js";

const WIDTH = 760;
const HEIGHT = 560;
const AREA: Area = { x0: 70, y0: 40, width: 640, height: 450 };

function log10(v: number): number {
  return Math.log(v) / Math.LN10;
}

function finiteExtent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi >= lo)) throw new SchemaError("no finite values to plot");
  return [lo, hi];
}

export interface LoadedSeries {
  path: string;
  table: Table;
}

/** Semilog decay plot: log10 of a column vs t, with exponential fit
 *  overlays drawn as straight lines. */
export function renderDecay(
  spec: {
    title: string;
    inputs: Array<{ path: string; x: string; y: string; label?: string }>;
    t_max?: number;
    y_min?: number;
  },
  tables: Map<string, Table>,
  fitLines: Array<{ rate: number; amplitude: number; label: string }>,
): string {
  const svg = new Svg(WIDTH, HEIGHT);
  const series = spec.inputs.map((input) => {
    const table = tables.get(input.path)!;
    requireColumns(table, [input.x, input.y], input.path);
    return {
      t: column(table, input.x, input.path),
      y: column(table, input.y, input.path),
      label: input.label ?? input.y,
    };
  });
  const tMax = spec.t_max ?? Math.max(...series.map((s) => s.t[s.t.length - 1]));
  const positives = series.flatMap((s) =>
    s.y.filter((v, i) => v > 0 && s.t[i] <= tMax).map(log10),
  );
  let [yLo, yHi] = finiteExtent(positives);
  if (spec.y_min !== undefined) yLo = log10(spec.y_min);
  yHi += 0.1;
  const xScale = linearScale(0, tMax, AREA.x0, AREA.x0 + AREA.width);
  const yScale = linearScale(yLo, yHi, AREA.y0 + AREA.height, AREA.y0);
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const points: Array<[number, number]> = [];
    s.t.forEach((t, j) => {
      if (t <= tMax && s.y[j] > 0 && log10(s.y[j]) >= yLo) {
        points.push([xScale(t), yScale(log10(s.y[j]))]);
      }
    });
    svg.polyline(points, `stroke="${color}" stroke-width="1.2"`);
    legend.push({ label: s.label, color });
  });
  fitLines.forEach((fit, i) => {
    if (fit.amplitude <= 0) return;
    const t0 = 0;
    const y0 = log10(fit.amplitude);
    const tAtFloor = (y0 - yLo) * (Math.LN10 / fit.rate);
    const t1 = Math.min(tMax, fit.rate > 0 ? tAtFloor : tMax);
    const pts: Array<[number, number]> = [
      [xScale(t0), yScale(y0)],
      [xScale(t1), yScale(y0 - (fit.rate * t1) / Math.LN10)],
    ];
    const color = "black";
    const dash = i === 0 ? "6,3" : "2,3";
    svg.polyline(
      pts,
      `stroke="${color}" stroke-width="1.5" stroke-dasharray="${dash}"`,
    );
    legend.push({ label: fit.label, color, dash });
  });
  drawAxes(svg, AREA, xScale, yScale, {
    xLabel: "t (kicks)",
    yLabel: "log10 value",
    xTicks: niceTicks(0, tMax),
    yTicks: decadeTicks(yLo, yHi),
  });
  svg.text(WIDTH / 2, 22, spec.title, { anchor: "middle", size: 14 });
  drawLegend(svg, AREA.x0 + AREA.width - 220, AREA.y0 + 18, legend);
  return svg.build();
}

/** Linear-scale time series with an optional damped-sinusoid fit curve. */
export function renderSeries(
  spec: {
    title: string;
    y_label: string;
    inputs: Array<{ path: string; x: string; y: string; label?: string }>;
  },
  tables: Map<string, Table>,
  sineFit?: FitJson,
): string {
  const svg = new Svg(WIDTH, HEIGHT);
  const series = spec.inputs.map((input) => {
    const table = tables.get(input.path)!;
    requireColumns(table, [input.x, input.y], input.path);
    return {
      t: column(table, input.x, input.path),
      y: column(table, input.y, input.path),
      label: input.label ?? input.y,
    };
  });
  const tMax = Math.max(...series.map((s) => s.t[s.t.length - 1]));
  const [yLoRaw, yHiRaw] = finiteExtent(series.flatMap((s) => s.y));
  const pad = 0.05 * (yHiRaw - yLoRaw || 1);
  const yLo = yLoRaw - pad;
  const yHi = yHiRaw + pad;
  const xScale = linearScale(0, tMax, AREA.x0, AREA.x0 + AREA.width);
  const yScale = linearScale(yLo, yHi, AREA.y0 + AREA.height, AREA.y0);
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    svg.polyline(
      s.t.map((t, j) => [xScale(t), yScale(s.y[j])] as [number, number]),
      `stroke="${color}" stroke-width="1.2"`,
    );
    legend.push({ label: s.label, color });
  });
  if (sineFit && sineFit.frequency !== undefined) {
    const points: Array<[number, number]> = [];
    for (let t = 0; t <= tMax; t += tMax / 600) {
      const value =
        0.5 +
        sineFit.amplitude *
          Math.sin(sineFit.frequency * t + (sineFit.phase ?? 0)) *
          Math.exp(-sineFit.rate * t);
      points.push([xScale(t), yScale(value)]);
    }
    svg.polyline(
      points,
      `stroke="black" stroke-width="1.3" stroke-dasharray="6,3"`,
    );
    legend.push({
      label: `fit: rate ${sineFit.rate.toPrecision(3)}, b ${sineFit.frequency.toPrecision(3)}`,
      color: "black",
      dash: "6,3",
    });
  }
  drawAxes(svg, AREA, xScale, yScale, {
    xLabel: "t (kicks)",
    yLabel: spec.y_label,
    xTicks: niceTicks(0, tMax),
    yTicks: niceTicks(yLo, yHi),
  });
  svg.text(WIDTH / 2, 22, spec.title, { anchor: "middle", size: 14 });
  drawLegend(svg, AREA.x0 + AREA.width - 260, AREA.y0 + 18, legend);
  return svg.build();
}

/** Rates from a sweep CSV against the varied value (or its square), with
 *  reference power laws. */
export function renderRateScatter(
  spec: {
    title: string;
    x: "value" | "value_squared";
    y: "gamma1" | "gamma2";
    loglog: boolean;
    power_laws: Array<{ coeff: number; exponent: number; label?: string }>;
  },
  path: string,
  table: Table,
): string {
  requireColumns(table, ["value", "gamma1", "gamma2", "flag"], path);
  const values = column(table, "value", path);
  const rates = column(table, spec.y, path);
  const xs = values.map((v) => (spec.x === "value_squared" ? v * v : v));
  const keep = xs
    .map((x, i) => [x, rates[i]] as [number, number])
    .filter(([x, y]) => Number.isFinite(y) && (!spec.loglog || (x > 0 && y > 0)));
  const svg = new Svg(WIDTH, HEIGHT);
  const xData = keep.map(([x]) => (spec.loglog ? log10(x) : x));
  const yData = keep.map(([, y]) => (spec.loglog ? log10(y) : y));
  let [xLo, xHi] = finiteExtent(xData);
  let [yLo, yHi] = finiteExtent(yData);
  const xPad = 0.06 * (xHi - xLo || 1);
  const yPad = 0.08 * (yHi - yLo || 1);
  xLo = spec.loglog ? xLo - xPad : Math.min(0, xLo);
  xHi += xPad;
  yLo = spec.loglog ? yLo - yPad : Math.min(0, yLo);
  yHi += yPad;
  const xScale = linearScale(xLo, xHi, AREA.x0, AREA.x0 + AREA.width);
  const yScale = linearScale(yLo, yHi, AREA.y0 + AREA.height, AREA.y0);
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  keep.forEach(([x, y]) => {
    svg.circle(
      xScale(spec.loglog ? log10(x) : x),
      yScale(spec.loglog ? log10(y) : y),
      4,
      PALETTE[0],
    );
  });
  legend.push({ label: spec.y, color: PALETTE[0] });
  spec.power_laws.forEach((law, i) => {
    const points: Array<[number, number]> = [];
    const [rawLo, rawHi] = finiteExtent(keep.map(([x]) => x));
    for (let k = 0; k <= 120; k += 1) {
      const x = spec.loglog
        ? rawLo * Math.pow(rawHi / rawLo, k / 120)
        : rawLo + ((rawHi - rawLo) * k) / 120;
      const y = law.coeff * Math.pow(x, law.exponent);
      const px = spec.loglog ? log10(x) : x;
      const py = spec.loglog ? log10(y) : y;
      if (py >= yLo && py <= yHi) {
        points.push([xScale(px), yScale(py)]);
      }
    }
    const dash = i === 0 ? "6,3" : "2,3";
    svg.polyline(
      points,
      `stroke="black" stroke-width="1.4" stroke-dasharray="${dash}"`,
    );
    legend.push({
      label:
        law.label ??
        `${law.coeff} x^${law.exponent}`,
      color: "black",
      dash,
    });
  });
  const tickFmt = spec.loglog
    ? (v: number) => `1e${formatTick(v)}`
    : formatTick;
  drawAxes(svg, AREA, xScale, yScale, {
    xLabel: spec.x === "value_squared" ? "eps^2" : "eps",
    yLabel: spec.y + " (rate per kick)",
    xTicks: spec.loglog ? decadeTicks(xLo, xHi) : niceTicks(xLo, xHi),
    yTicks: spec.loglog ? decadeTicks(yLo, yHi) : niceTicks(yLo, yHi),
    xTickLabel: tickFmt,
    yTickLabel: tickFmt,
  });
  svg.text(WIDTH / 2, 22, spec.title, { anchor: "middle", size: 14 });
  drawLegend(svg, AREA.x0 + 16, AREA.y0 + 18, legend);
  return svg.build();
}

/** Log-log residual-coherence scaling with a coeff/sqrt(N) reference. */
export function renderResidualScaling(
  spec: {
    title: string;
    inputs: Array<{ path: string; n: number }>;
    reference_coeff: number;
  },
  residuals: Array<{ n: number; value: number }>,
): string {
  const svg = new Svg(WIDTH, HEIGHT);
  const xData = residuals.map((r) => log10(r.n));
  const yData = residuals.map((r) => log10(r.value));
  let [xLo, xHi] = finiteExtent(xData);
  let [yLo, yHi] = finiteExtent(yData);
  xLo -= 0.2;
  xHi += 0.2;
  yLo -= 0.3;
  yHi += 0.3;
  const xScale = linearScale(xLo, xHi, AREA.x0, AREA.x0 + AREA.width);
  const yScale = linearScale(yLo, yHi, AREA.y0 + AREA.height, AREA.y0);
  residuals.forEach((r) => {
    svg.circle(xScale(log10(r.n)), yScale(log10(r.value)), 5, PALETTE[0]);
  });
  const refPoints: Array<[number, number]> = [];
  for (let d = xLo; d <= xHi; d += (xHi - xLo) / 60) {
    const n = Math.pow(10, d);
    refPoints.push([
      xScale(d),
      yScale(log10(spec.reference_coeff / Math.sqrt(n))),
    ]);
  }
  svg.polyline(
    refPoints,
    `stroke="black" stroke-width="1.4" stroke-dasharray="6,3"`,
  );
  drawAxes(svg, AREA, xScale, yScale, {
    xLabel: "Hilbert-space size N",
    yLabel: "residual coherence",
    xTicks: decadeTicks(xLo, xHi),
    yTicks: decadeTicks(yLo, yHi),
    xTickLabel: (v) => `1e${formatTick(v)}`,
    yTickLabel: (v) => `1e${formatTick(v)}`,
  });
  svg.text(WIDTH / 2, 22, spec.title, { anchor: "middle", size: 14 });
  drawLegend(svg, AREA.x0 + AREA.width - 220, AREA.y0 + 18, [
    { label: "simulation", color: PALETTE[0] },
    {
      label: `${spec.reference_coeff}/sqrt(N)`,
      color: "black",
      dash: "6,3",
    },
  ]);
  return svg.build();
}

/** A grid of Husimi heatmap panels, p vertical (upward), theta horizontal. */
export function renderHusimiGrid(
  spec: { title: string; panels: Array<{ path: string; label: string }>; ncols: number },
  matrices: Map<string, number[][]>,
): string {
  const panelW = 310;
  const panelH = 260;
  const margin = 42;
  const ncols = spec.ncols;
  const nrows = Math.ceil(spec.panels.length / ncols);
  const width = margin + ncols * (panelW + margin);
  const height = 50 + nrows * (panelH + margin);
  const svg = new Svg(width, height);
  svg.text(width / 2, 24, spec.title, { anchor: "middle", size: 14 });
  spec.panels.forEach((panel, idx) => {
    const row = Math.floor(idx / ncols);
    const col = idx % ncols;
    const x0 = margin + col * (panelW + margin);
    const y0 = 50 + row * (panelH + margin);
    const values = matrices.get(panel.path)!;
    svg.image(x0, y0, panelW, panelH, heatmapPngBase64(values));
    svg.raw(
      `<rect x="${x0}" y="${y0}" width="${panelW}" height="${panelH}" ` +
        `fill="none" stroke="black"/>`,
    );
    svg.text(x0 + panelW / 2, y0 - 6, panel.label, {
      anchor: "middle",
      size: 12,
    });
    svg.text(x0 + panelW / 2, y0 + panelH + 16, "theta: 0 .. 2 pi", {
      anchor: "middle",
      size: 10,
    });
    svg.text(x0 - 8, y0 + panelH / 2, "p: -pi .. pi", {
      anchor: "middle",
      size: 10,
      rotate: -90,
    });
  });
  return svg.build();
}

/** Stacked box-integral panels (up vs down curves with vertical offsets). */
export function renderWdPanels(
  spec: {
    title: string;
    inputs: Array<{ path: string; label: string; offset: number }>;
  },
  tables: Map<string, Table>,
): string {
  const svg = new Svg(WIDTH, HEIGHT);
  const series = spec.inputs.map((input) => {
    const table = tables.get(input.path)!;
    requireColumns(table, ["t", "wd_up", "wd_down"], input.path);
    return {
      t: column(table, "t", input.path),
      up: column(table, "wd_up", input.path),
      down: column(table, "wd_down", input.path),
      label: input.label,
      offset: input.offset,
    };
  });
  const tMax = Math.max(...series.map((s) => s.t[s.t.length - 1]));
  const yHi =
    Math.max(
      ...series.map((s) => Math.max(...s.up, ...s.down) + s.offset),
    ) + 0.1;
  const xScale = linearScale(0, tMax, AREA.x0, AREA.x0 + AREA.width);
  const yScale = linearScale(-0.05, yHi, AREA.y0 + AREA.height, AREA.y0);
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    svg.polyline(
      s.t.map((t, j) => [xScale(t), yScale(s.down[j] + s.offset)] as [number, number]),
      `stroke="${color}" stroke-width="1.4"`,
    );
    svg.polyline(
      s.t.map((t, j) => [xScale(t), yScale(s.up[j] + s.offset)] as [number, number]),
      `stroke="${color}" stroke-width="1.4" stroke-dasharray="5,3"`,
    );
    legend.push({ label: `${s.label} (down solid, up dashed)`, color });
  });
  drawAxes(svg, AREA, xScale, yScale, {
    xLabel: "t (kicks)",
    yLabel: "W_D (offset per curve)",
    xTicks: niceTicks(0, tMax),
    yTicks: niceTicks(-0.05, yHi),
  });
  svg.text(WIDTH / 2, 22, spec.title, { anchor: "middle", size: 14 });
  drawLegend(svg, AREA.x0 + AREA.width - 320, AREA.y0 + 18, legend);
  return svg.build();
}
