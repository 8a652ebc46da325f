import { writeFileSync } from "node:fs";
import { Series, readSeriesCsv } from "./csv.js";

export type LineStyle = "solid" | "dashed" | "dotted";

export interface SeriesSpec {
  path: string;
  label: string;
  style?: LineStyle;
}

export interface PlotSpec {
  series: SeriesSpec[];
  out: string;
  xRange?: [number, number];
  yRange?: [number, number];
}

export interface LoadedSeries {
  label: string;
  data: Series;
  style?: LineStyle;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 60, right: 170, top: 20, bottom: 50 };

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const DASH: Record<LineStyle, string> = {
  solid: "",
  dashed: "6 4",
  dotted: "2 3",
};

function px(v: number): string {
  return String(Math.round(v * 100) / 100);
}

function tickText(v: number): string {
  return String(Math.round(v * 1000) / 1000);
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function checkRange(r: [number, number], name: string): void {
  if (!Number.isFinite(r[0]) || !Number.isFinite(r[1]) || r[0] >= r[1]) {
    throw new Error(`${name} range must be two finite numbers a < b, got ${r[0]},${r[1]}`);
  }
}

/** Render the overlay (L1/n versus step/n) to an SVG string.
 *
 * Pure function of its inputs: no timestamps, no generated ids.  Curves are
 * straight segments between recorded points, clipped to the axis box, so a
 * sharp transition stays sharp.
 */
export function buildOverlaySvg(
  series: LoadedSeries[],
  xRange: [number, number] = [0, 1],
  yRange: [number, number] = [0, 1],
): string {
  if (series.length === 0) {
    throw new Error("at least one series required");
  }
  checkRange(xRange, "x");
  checkRange(yRange, "y");
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const x = (v: number) => MARGIN.left + ((v - xRange[0]) / (xRange[1] - xRange[0])) * plotW;
  const y = (v: number) => MARGIN.top + plotH - ((v - yRange[0]) / (yRange[1] - yRange[0])) * plotH;

  const out: string[] = [];
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  out.push(`<defs><clipPath id="plot-area"><rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}"/></clipPath></defs>`);

  const bottom = MARGIN.top + plotH;
  const right = MARGIN.left + plotW;
  for (let i = 0; i <= 5; i++) {
    const xv = xRange[0] + (i * (xRange[1] - xRange[0])) / 5;
    const yv = yRange[0] + (i * (yRange[1] - yRange[0])) / 5;
    const xp = px(x(xv));
    const yp = px(y(yv));
    out.push(`<line x1="${xp}" y1="${bottom}" x2="${xp}" y2="${bottom + 5}" stroke="#333333"/>`);
    out.push(`<text x="${xp}" y="${bottom + 18}" font-family="sans-serif" font-size="12" text-anchor="middle">${tickText(xv)}</text>`);
    out.push(`<line x1="${MARGIN.left - 5}" y1="${yp}" x2="${MARGIN.left}" y2="${yp}" stroke="#333333"/>`);
    out.push(`<text x="${MARGIN.left - 8}" y="${yp}" dy="0.32em" font-family="sans-serif" font-size="12" text-anchor="end">${tickText(yv)}</text>`);
  }
  out.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333333"/>`);
  out.push(`<text x="${px(MARGIN.left + plotW / 2)}" y="${bottom + 38}" font-family="sans-serif" font-size="14" text-anchor="middle">T / n</text>`);
  out.push(`<text transform="rotate(-90)" x="${px(-(MARGIN.top + plotH / 2))}" y="16" font-family="sans-serif" font-size="14" text-anchor="middle">L1 / n</text>`);

  out.push(`<g clip-path="url(#plot-area)">`);
  series.forEach((s, i) => {
    const n = s.data.n;
    const pts = s.data.rows
      .map((r) => `${px(x(r.step / n))},${px(y(r.l1 / n))}`)
      .join(" ");
    const style = s.style ?? "solid";
    const dash = DASH[style] ? ` stroke-dasharray="${DASH[style]}"` : "";
    out.push(`<polyline fill="none" stroke="${PALETTE[i % PALETTE.length]}" stroke-width="1.5"${dash} points="${pts}"/>`);
  });
  out.push(`</g>`);

  series.forEach((s, i) => {
    const ly = MARGIN.top + 12 + i * 20;
    const lx = right + 14;
    const style = s.style ?? "solid";
    const dash = DASH[style] ? ` stroke-dasharray="${DASH[style]}"` : "";
    out.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" stroke="${PALETTE[i % PALETTE.length]}" stroke-width="1.5"${dash}/>`);
    out.push(`<text x="${lx + 32}" y="${ly}" dy="0.32em" font-family="sans-serif" font-size="12">${escapeXml(s.label)}</text>`);
  });

  out.push(`</svg>`);
  return out.join("\n") + "\n";
}

/** Load every series in the spec, render, and write the image file. */
export function renderOverlay(spec: PlotSpec): string {
  if (spec.series.length === 0) {
    throw new Error("at least one series required");
  }
  const loaded = spec.series.map((s) => ({
    label: s.label,
    style: s.style,
    data: readSeriesCsv(s.path),
  }));
  const svg = buildOverlaySvg(loaded, spec.xRange ?? [0, 1], spec.yRange ?? [0, 1]);
  writeFileSync(spec.out, svg);
  return svg;
}
