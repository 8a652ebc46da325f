import { readFileSync } from "node:fs";

export const HEADER = "step,frac_steps,L1,L1_frac,alpha,n_components,n_edges";

export interface SeriesRow {
  step: number;
  fracSteps: number;
  l1: number;
  l1Frac: number;
  alpha: number;
  nComponents: number;
  nEdges: number;
}

export interface Series {
  n: number;
  rows: SeriesRow[];
  comment?: string;
}

export class CsvSchemaError extends Error {}

function asInt(text: string): number | null {
  return /^-?\d+$/.test(text) ? Number(text) : null;
}

function asFloat(text: string): number | null {
  if (text.trim() === "") return null;
  const v = Number(text);
  return Number.isFinite(v) ? v : null;
}

/** Parse one series CSV; `path` is only used to name errors. */
export function parseSeriesText(text: string, path: string): Series {
  let n: number | null = null;
  const commentLines: string[] = [];
  const rows: SeriesRow[] = [];
  let headerSeen = false;
  let lineno = 0;
  for (const line of text.split("\n")) {
    lineno += 1;
    if (line === "") continue;
    if (line.startsWith("#")) {
      if (headerSeen) {
        throw new CsvSchemaError(`${path}:${lineno}: comment after header`);
      }
      const body = line.slice(1).trim();
      if (body.startsWith("n=") && n === null) {
        n = asInt(body.slice(2));
        if (n === null) {
          throw new CsvSchemaError(`${path}:${lineno}: bad n comment '${body}'`);
        }
      } else {
        commentLines.push(body);
      }
      continue;
    }
    if (!headerSeen) {
      if (line !== HEADER) {
        throw new CsvSchemaError(
          `${path}:${lineno}: bad header '${line}', expected '${HEADER}'`);
      }
      headerSeen = true;
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== 7) {
      throw new CsvSchemaError(
        `${path}:${lineno}: expected 7 fields, got ${parts.length}`);
    }
    const step = asInt(parts[0]);
    const fracSteps = asFloat(parts[1]);
    const l1 = asInt(parts[2]);
    const l1Frac = asFloat(parts[3]);
    const alpha = asInt(parts[4]);
    const nComponents = asInt(parts[5]);
    const nEdges = asInt(parts[6]);
    if (step === null || fracSteps === null || l1 === null || l1Frac === null
        || alpha === null || nComponents === null || nEdges === null) {
      throw new CsvSchemaError(`${path}:${lineno}: non-numeric field in '${line}'`);
    }
    rows.push({ step, fracSteps, l1, l1Frac, alpha, nComponents, nEdges });
  }
  if (!headerSeen) {
    throw new CsvSchemaError(`${path}:${lineno || 1}: missing header`);
  }
  if (n === null) {
    throw new CsvSchemaError(`${path}: missing '# n=' comment`);
  }
  if (n < 1) {
    throw new CsvSchemaError(`${path}: n must be >= 1, got ${n}`);
  }
  return {
    n,
    rows,
    comment: commentLines.length ? commentLines.join("\n") : undefined,
  };
}

export function readSeriesCsv(path: string): Series {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new CsvSchemaError(`${path}: ${(e as Error).message}`);
  }
  return parseSeriesText(text, path);
}
