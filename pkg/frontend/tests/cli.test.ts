import { existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { UsageError, main, parseArgs, parseSeriesArg } from "../src/cli.js";
import { HEADER } from "../src/csv.js";

describe("parseSeriesArg", () => {
  it("splits path and label at the first colon", () => {
    expect(parseSeriesArg("runs/er.csv:ER")).toEqual({ path: "runs/er.csv", label: "ER" });
  });

  it("defaults the label to the file stem", () => {
    expect(parseSeriesArg("runs/er_100_1.csv"))
      .toEqual({ path: "runs/er_100_1.csv", label: "er_100_1" });
  });

  it("keeps colons inside labels", () => {
    expect(parseSeriesArg("a.csv:beta: 0.5"))
      .toEqual({ path: "a.csv", label: "beta: 0.5" });
  });

  it("peels a trailing style token", () => {
    expect(parseSeriesArg("a.csv:HR:dashed"))
      .toEqual({ path: "a.csv", label: "HR", style: "dashed" });
    expect(parseSeriesArg("a.csv:b:c:dotted"))
      .toEqual({ path: "a.csv", label: "b:c", style: "dotted" });
  });

  it("rejects empty paths and labels", () => {
    expect(() => parseSeriesArg(":x")).toThrow(UsageError);
    expect(() => parseSeriesArg("a.csv:")).toThrow(UsageError);
  });
});

describe("parseArgs", () => {
  it("builds a spec from flags and positionals", () => {
    const spec = parseArgs([
      "render", "--out", "fig.svg", "a.csv:A", "--x-range", "0,2",
      "b.csv:B:dotted", "--y-range", "0,0.5",
    ]);
    expect(spec.out).toBe("fig.svg");
    expect(spec.series.length).toBe(2);
    expect(spec.series[1].style).toBe("dotted");
    expect(spec.xRange).toEqual([0, 2]);
    expect(spec.yRange).toEqual([0, 0.5]);
  });

  it("requires the render subcommand", () => {
    expect(() => parseArgs(["plot", "a.csv:A"])).toThrowError("render");
  });

  it("requires --out", () => {
    expect(() => parseArgs(["render", "a.csv:A"])).toThrowError("--out is required");
  });

  it("requires at least one series", () => {
    expect(() => parseArgs(["render", "--out", "f.svg"]))
      .toThrowError("at least one series");
  });

  it("rejects unknown flags, dangling values, and bad ranges", () => {
    expect(() => parseArgs(["render", "--nope", "a.csv:A"])).toThrowError("unknown flag");
    expect(() => parseArgs(["render", "a.csv:A", "--out"])).toThrowError("needs a value");
    expect(() => parseArgs(["render", "--out", "f.svg", "--x-range", "1,1", "a.csv:A"]))
      .toThrowError("A < B");
  });
});

describe("main", () => {
  let dir: string;

  beforeAll(() => {
    dir = mkdtempSync(join(tmpdir(), "cli-test-"));
  });

  afterAll(() => {
    rmSync(dir, { recursive: true, force: true });
  });

  it("renders a figure and exits 0", () => {
    const csv = join(dir, "a.csv");
    writeFileSync(csv, `# n=10\n${HEADER}\n0,0,1,0.1,0,10,0\n10,1,7,0.7,0,3,10\n`);
    const out = join(dir, "fig.svg");
    expect(main(["render", "--out", out, `${csv}:demo run`])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg).toContain("demo run");
  });

  it("exits 1 on usage errors without writing anything", () => {
    const out = join(dir, "nothing.svg");
    expect(main(["render", "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("exits 1 when a series file is missing", () => {
    expect(main(["render", "--out", join(dir, "x.svg"), join(dir, "ghost.csv") + ":g"]))
      .toBe(1);
  });

  it("prints usage on --help and exits 0", () => {
    expect(main(["--help"])).toBe(0);
  });
});
