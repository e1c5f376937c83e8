import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { run } from "../src/cli";
import { CsvError, parseResultsCsv } from "../src/csv";
import { render, renderToString } from "../src/plots";

const FIXTURES = join(__dirname, "fixtures");

function fixture(name: string): string {
  return join(FIXTURES, name);
}

function countMatches(haystack: string, pattern: RegExp): number {
  return (haystack.match(pattern) ?? []).length;
}

describe("csv parsing", () => {
  it("parses the experiments CSV", () => {
    const rows = parseResultsCsv(readFileSync(fixture("variance_scaling.csv"), "utf-8"));
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].experiment).toBe("variance_scaling");
    expect(typeof rows[0].value).toBe("number");
  });

  it("rejects an empty file", () => {
    expect(() => parseResultsCsv("")).toThrow(/empty CSV/);
  });

  it("rejects a header-only file", () => {
    const header = "experiment,n,statistic,value,std_err,reps,boundary_frac,seed";
    expect(() => parseResultsCsv(header + "\n")).toThrow(/empty CSV/);
  });

  it("names the missing column", () => {
    const bad = "experiment,n,statistic,value,reps,boundary_frac,seed\nx,1,s,0,1,0,0\n";
    expect(() => parseResultsCsv(bad)).toThrow(/missing column: std_err/);
  });
});

describe("scaling figure", () => {
  const csv = readFileSync(fixture("variance_scaling.csv"), "utf-8");
  const rows = parseResultsCsv(csv);

  it("contains three data series and two reference curves", () => {
    const svg = renderToString(rows, "scaling");
    expect(countMatches(svg, /class="series"/g)).toBe(3);
    expect(countMatches(svg, /class="reference"/g)).toBe(2);
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
  });

  it("draws error bars from std_err", () => {
    const svg = renderToString(rows, "scaling");
    expect(countMatches(svg, /<line /g)).toBeGreaterThan(6);
  });

  it("is byte-stable across reruns", () => {
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    const a = join(dir, "a.svg");
    const b = join(dir, "b.svg");
    render({ inputCsv: fixture("variance_scaling.csv"), kind: "scaling", outPath: a });
    render({ inputCsv: fixture("variance_scaling.csv"), kind: "scaling", outPath: b });
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("does not mutate the input CSV", () => {
    const before = readFileSync(fixture("variance_scaling.csv"));
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    render({
      inputCsv: fixture("variance_scaling.csv"),
      kind: "scaling",
      outPath: join(dir, "out.svg"),
    });
    expect(readFileSync(fixture("variance_scaling.csv"))).toEqual(before);
  });

  it("reports a missing statistic", () => {
    const thinned = csv
      .split("\n")
      .filter((line) => !line.includes("var_over_n"))
      .join("\n");
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    const path = join(dir, "thin.csv");
    writeFileSync(path, thinned);
    expect(() =>
      render({ inputCsv: path, kind: "scaling", outPath: join(dir, "out.svg") }),
    ).toThrow(/var_over_n/);
  });
});

describe("other figure kinds", () => {
  it("low_density renders a band and a series", () => {
    const rows = parseResultsCsv(readFileSync(fixture("low_density.csv"), "utf-8"));
    const svg = renderToString(rows, "low_density");
    expect(countMatches(svg, /class="band"/g)).toBe(1);
    expect(countMatches(svg, /class="series"/g)).toBe(1);
  });

  it("animals renders one cell per (n, p)", () => {
    const rows = parseResultsCsv(readFileSync(fixture("animals.csv"), "utf-8"));
    const svg = renderToString(rows, "animals");
    const cells = rows.filter((r) => r.statistic.startsWith("animal_ratio[")
      && !r.statistic.includes("pass")).length;
    expect(countMatches(svg, /class="cell"/g)).toBe(cells);
  });

  it("suite_summary renders pass/fail boxes", () => {
    const rows = parseResultsCsv(readFileSync(fixture("entropy_suite.csv"), "utf-8"));
    const svg = renderToString(rows, "suite_summary");
    expect(countMatches(svg, /class="pass"/g)).toBeGreaterThan(0);
  });
});

describe("cli", () => {
  it("writes a figure and exits 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    const out = join(dir, "fig.svg");
    const code = run(["--in", fixture("variance_scaling.csv"), "--kind", "scaling",
                      "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("<svg");
  });

  it("rejects unknown kinds with a usage error", () => {
    expect(run(["--in", "x.csv", "--kind", "pie", "--out", "y.svg"])).toBe(2);
    expect(run(["--in", "x.csv"])).toBe(2);
  });

  it("fails on unreadable input", () => {
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    expect(run(["--in", join(dir, "missing.csv"), "--kind", "scaling",
                "--out", join(dir, "out.svg")])).toBe(1);
  });

  it("rejects non-svg output paths", () => {
    const dir = mkdtempSync(join(tmpdir(), "fpp-plots-"));
    expect(run(["--in", fixture("variance_scaling.csv"), "--kind", "scaling",
                "--out", join(dir, "fig.png")])).toBe(1);
  });
});
