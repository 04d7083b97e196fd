/** Minimal deterministic SVG plotting: fixed canvas, generic font
 *  families, no timestamps or random ids. */

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export interface Area {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

export type Scale = (value: number) => number;

export function linearScale(
  lo: number,
  hi: number,
  pxLo: number,
  pxHi: number,
): Scale {
  const span = hi - lo || 1;
  return (v) => pxLo + ((v - lo) / span) * (pxHi - pxLo);
}

/** Round ticks covering [lo, hi] at a 1/2/5 step. */
export function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Integer decades covering a log10 range. */
export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let d = Math.ceil(lo); d <= Math.floor(hi) + 1e-12; d += 1) {
    ticks.push(d);
  }
  return ticks.length > 0 ? ticks : [Math.round(lo)];
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return Number(v.toPrecision(4)).toString();
  }
  return v.toExponential(1).replace("e+", "e").replace("e-", "e-");
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.parts.push(
      `<line x1="${r(x1)}" y1="${r(y1)}" x2="${r(x2)}" y2="${r(y2)}" ${style}/>`,
    );
  }

  polyline(points: Array<[number, number]>, style: string): void {
    const coords = points
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
      .map(([x, y]) => `${r(x)},${r(y)}`)
      .join(" ");
    this.parts.push(`<polyline points="${coords}" fill="none" ${style}/>`);
  }

  circle(x: number, y: number, radius: number, fill: string): void {
    this.parts.push(
      `<circle cx="${r(x)}" cy="${r(y)}" r="${radius}" fill="${fill}"/>`,
    );
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; anchor?: string; rotate?: number } = {},
  ): void {
    const size = opts.size ?? 12;
    const anchor = opts.anchor ?? "start";
    const transform =
      opts.rotate !== undefined
        ? ` transform="rotate(${opts.rotate} ${r(x)} ${r(y)})"`
        : "";
    this.parts.push(
      `<text x="${r(x)}" y="${r(y)}" font-size="${size}" ` +
        `text-anchor="${anchor}"${transform}>${esc(content)}</text>`,
    );
  }

  image(x: number, y: number, w: number, h: number, pngBase64: string): void {
    this.parts.push(
      `<image x="${r(x)}" y="${r(y)}" width="${r(w)}" height="${r(h)}" ` +
        `preserveAspectRatio="none" style="image-rendering:pixelated" ` +
        `href="data:image/png;base64,${pngBase64}"/>`,
    );
  }

  raw(markup: string): void {
    this.parts.push(markup);
  }

  build(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function r(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

export interface AxisOptions {
  xLabel: string;
  yLabel: string;
  xTicks: number[];
  yTicks: number[];
  xTickLabel?: (v: number) => string;
  yTickLabel?: (v: number) => string;
}

/** Frame, tick marks and labels around a plot area. */
export function drawAxes(
  svg: Svg,
  area: Area,
  xScale: Scale,
  yScale: Scale,
  opts: AxisOptions,
): void {
  const { x0, y0, width, height } = area;
  const frame = `stroke="black" stroke-width="1"`;
  svg.line(x0, y0, x0, y0 + height, frame);
  svg.line(x0, y0 + height, x0 + width, y0 + height, frame);
  svg.line(x0 + width, y0, x0 + width, y0 + height, frame);
  svg.line(x0, y0, x0 + width, y0, frame);
  const fx = opts.xTickLabel ?? formatTick;
  const fy = opts.yTickLabel ?? formatTick;
  for (const t of opts.xTicks) {
    const px = xScale(t);
    if (px < x0 - 0.5 || px > x0 + width + 0.5) continue;
    svg.line(px, y0 + height, px, y0 + height - 5, frame);
    svg.text(px, y0 + height + 16, fx(t), { anchor: "middle", size: 11 });
  }
  for (const t of opts.yTicks) {
    const py = yScale(t);
    if (py < y0 - 0.5 || py > y0 + height + 0.5) continue;
    svg.line(x0, py, x0 + 5, py, frame);
    svg.text(x0 - 6, py + 4, fy(t), { anchor: "end", size: 11 });
  }
  svg.text(x0 + width / 2, y0 + height + 34, opts.xLabel, {
    anchor: "middle",
  });
  svg.text(x0 - 44, y0 + height / 2, opts.yLabel, {
    anchor: "middle",
    rotate: -90,
  });
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

export function drawLegend(
  svg: Svg,
  x: number,
  y: number,
  entries: LegendEntry[],
): void {
  entries.forEach((entry, i) => {
    const yy = y + i * 16;
    svg.line(
      x,
      yy - 4,
      x + 22,
      yy - 4,
      `stroke="${entry.color}" stroke-width="2"` +
        (entry.dash ? ` stroke-dasharray="${entry.dash}"` : ""),
    );
    svg.text(x + 28, yy, entry.label, { size: 11 });
  });
}
