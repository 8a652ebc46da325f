import { basename } from "node:path";
import { LineStyle, PlotSpec, SeriesSpec, renderOverlay } from "./plot.js";

const USAGE = `usage: render --out FILE [--x-range A,B] [--y-range A,B] SERIES...

SERIES is path.csv:label or path.csv:label:style where style is one of
solid, dashed, dotted.  A bare path.csv uses the file stem as the label.
Axis ranges default to 0,1 on both axes.`;

export class UsageError extends Error {}

const STYLES = new Set(["solid", "dashed", "dotted"]);

export function parseSeriesArg(token: string): SeriesSpec {
  const parts = token.split(":");
  if (parts[0] === "") {
    throw new UsageError(`empty path in '${token}'`);
  }
  if (parts.length === 1) {
    return { path: token, label: basename(token).replace(/\.[^.]*$/, "") };
  }
  const last = parts[parts.length - 1];
  if (parts.length >= 3 && STYLES.has(last)) {
    return {
      path: parts[0],
      label: parts.slice(1, -1).join(":"),
      style: last as LineStyle,
    };
  }
  const label = parts.slice(1).join(":");
  if (label === "") {
    throw new UsageError(`empty label in '${token}'`);
  }
  return { path: parts[0], label };
}

function parseRange(text: string, flag: string): [number, number] {
  const parts = text.split(",").map(Number);
  if (parts.length !== 2 || parts.some((v) => !Number.isFinite(v)) || parts[0] >= parts[1]) {
    throw new UsageError(`${flag} expects A,B with A < B, got '${text}'`);
  }
  return [parts[0], parts[1]];
}

export function parseArgs(argv: string[]): PlotSpec {
  if (argv.length === 0 || argv[0] !== "render") {
    throw new UsageError("expected the 'render' subcommand");
  }
  let out: string | null = null;
  let xRange: [number, number] | undefined;
  let yRange: [number, number] | undefined;
  const series: SeriesSpec[] = [];
  for (let i = 1; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--out" || a === "--x-range" || a === "--y-range") {
      const v = argv[++i];
      if (v === undefined) {
        throw new UsageError(`${a} needs a value`);
      }
      if (a === "--out") out = v;
      else if (a === "--x-range") xRange = parseRange(v, a);
      else yRange = parseRange(v, a);
    } else if (a.startsWith("--")) {
      throw new UsageError(`unknown flag ${a}`);
    } else {
      series.push(parseSeriesArg(a));
    }
  }
  if (out === null) {
    throw new UsageError("--out is required");
  }
  if (series.length === 0) {
    throw new UsageError("at least one series is required");
  }
  return { series, out, xRange, yRange };
}

/** Entry point; returns the process exit code. */
export function main(argv: string[]): number {
  if (argv[0] === "--help" || argv[0] === "-h") {
    console.log(USAGE);
    return 0;
  }
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (e) {
    if (e instanceof UsageError) {
      console.error(`error: ${e.message}`);
      console.error(USAGE);
      return 1;
    }
    throw e;
  }
  try {
    renderOverlay(spec);
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
  console.error(`wrote ${spec.out}`);
  return 0;
}
