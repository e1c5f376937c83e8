/**
 * Figure rendering for fpp-lab result CSVs.
 *
 * Kinds:
 *  - scaling:       Var, Var/n and Var*log(n)/n against n on log-log axes,
 *                   with error bars and reference curves n and n/log n
 *                   normalized at the smallest n;
 *  - low_density:   normalized low-weight-edge ratio against eps with a
 *                   3-standard-error band;
 *  - animals:       heatmap of the greedy scaling ratio over (n, p);
 *  - suite_summary: pass/fail card for check-suite rows.
 *
 * Rendering is read-only and deterministic: identical CSV bytes give
 * identical SVG bytes.
 */

import * as fs from "node:fs";

import { CsvError, ResultRow, parseResultsCsv, requireSeries } from "./csv";
import {
  Scale,
  el,
  fmt,
  linScale,
  logScale,
  pathFromPoints,
  polyline,
  svgDocument,
  text,
} from "./svg";

export type PlotKind = "scaling" | "low_density" | "animals" | "suite_summary";

export interface PlotSpec {
  inputCsv: string;
  kind: PlotKind;
  outPath: string;
}

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 30, bottom: 50 };

const SERIES_COLORS = ["#1f6fb2", "#c23b22", "#2a9d54"];

function frame(title: string, xLabel: string, yLabel: string): string[] {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  return [
    text(WIDTH / 2 - 60, 18, title, { "font-size": 13 }),
    el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "black" }),
    el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "black" }),
    text(WIDTH / 2 - 20, HEIGHT - 12, xLabel),
    text(12, HEIGHT / 2, yLabel, { transform: `rotate(-90 16 ${HEIGHT / 2})` }),
  ];
}

function errorBar(x: number, lo: number, hi: number, color: string): string {
  return [
    el("line", { x1: x, y1: lo, x2: x, y2: hi, stroke: color, "stroke-width": 1 }),
    el("line", { x1: x - 3, y1: lo, x2: x + 3, y2: lo, stroke: color, "stroke-width": 1 }),
    el("line", { x1: x - 3, y1: hi, x2: x + 3, y2: hi, stroke: color, "stroke-width": 1 }),
  ].join("");
}

function renderScaling(rows: ResultRow[]): string {
  const varRows = requireSeries(rows, "tau_var");
  const overN = requireSeries(rows, "var_over_n");
  const logOverN = requireSeries(rows, "var_logn_over_n");
  const series = [
    { name: "Var tau", rows: varRows },
    { name: "Var/n", rows: overN },
    { name: "Var log n/n", rows: logOverN },
  ];
  const ns = varRows.map((r) => r.n);
  const nMin = Math.min(...ns);
  const nMax = Math.max(...ns);

  // reference curves pinned to Var at the smallest n
  const base = varRows[0].value;
  const refGrid: number[] = [];
  for (let i = 0; i <= 32; i++) {
    refGrid.push(nMin * Math.pow(nMax / nMin, i / 32));
  }
  const refLinear = refGrid.map((n) => [n, (base * n) / nMin] as [number, number]);
  const refNLogN = refGrid.map(
    (n) => [n, base * (n / Math.log(n)) / (nMin / Math.log(nMin))] as [number, number],
  );

  const allValues = series
    .flatMap((s) => s.rows.map((r) => Math.max(r.value - r.std_err, 1e-12)))
    .concat(series.flatMap((s) => s.rows.map((r) => r.value + r.std_err)))
    .concat(refLinear.map(([, v]) => v))
    .concat(refNLogN.map(([, v]) => v))
    .filter((v) => v > 0);
  const yLo = Math.min(...allValues);
  const yHi = Math.max(...allValues);

  const sx = logScale(nMin, nMax, MARGIN.left, WIDTH - MARGIN.right);
  const sy = logScale(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const body = frame("Passage time variance scaling", "n (log)", "value (log)");
  for (const n of ns) {
    body.push(text(sx(n) - 8, HEIGHT - MARGIN.bottom + 16, String(n)));
  }
  body.push(
    pathFromPoints(refLinear.map(([n, v]) => [sx(n), sy(v)]), {
      class: "reference",
      stroke: "#888888",
      "stroke-dasharray": "6 3",
    }),
    pathFromPoints(refNLogN.map(([n, v]) => [sx(n), sy(v)]), {
      class: "reference",
      stroke: "#888888",
      "stroke-dasharray": "2 3",
    }),
    text(WIDTH - 180, MARGIN.top + 12, "ref: n (dashed), n/log n (dotted)", {
      fill: "#555555",
    }),
  );
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i];
    const pts = s.rows.map((r) => [sx(r.n), sy(r.value)] as [number, number]);
    body.push(polyline(pts, { class: "series", stroke: color, "stroke-width": 1.5 }));
    for (const r of s.rows) {
      const lo = Math.max(r.value - r.std_err, yLo);
      const hi = r.value + r.std_err;
      if (r.std_err > 0) {
        body.push(errorBar(sx(r.n), sy(lo), sy(hi), color));
      }
      body.push(el("circle", { cx: sx(r.n), cy: sy(r.value), r: 2.5, fill: color }));
    }
    body.push(text(WIDTH - 180, MARGIN.top + 28 + 14 * i, s.name, { fill: color }));
  });
  return svgDocument(WIDTH, HEIGHT, body);
}

function renderLowDensity(rows: ResultRow[]): string {
  const ratioRows = rows
    .filter((r) => /^low_ratio\[eps=/.test(r.statistic))
    .map((r) => ({
      eps: Number(r.statistic.slice("low_ratio[eps=".length, -1)),
      value: r.value,
      se: r.std_err,
    }))
    .sort((a, b) => a.eps - b.eps);
  if (ratioRows.length === 0) {
    throw new CsvError("missing statistic: low_ratio[eps=...]");
  }
  const xs = ratioRows.map((r) => r.eps);
  const sx = logScale(Math.min(...xs), Math.max(...xs), MARGIN.left, WIDTH - MARGIN.right);
  const hiVals = ratioRows.map((r) => r.value + 3 * r.se);
  const loVals = ratioRows.map((r) => Math.max(r.value - 3 * r.se, 0));
  const sy = linScale(0, Math.max(...hiVals) * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);

  const body = frame("Low-weight geodesic edges", "eps (log)", "count / (n mu^(1/4))");
  const bandPoints = ratioRows
    .map((r, i) => `${fmt(sx(r.eps))},${fmt(sy(hiVals[i]))}`)
    .concat(
      [...ratioRows].reverse().map((r, i) =>
        `${fmt(sx(r.eps))},${fmt(sy(loVals[ratioRows.length - 1 - i]))}`),
    )
    .join(" ");
  body.push(el("polygon", { points: bandPoints, fill: "#aecbe8", class: "band" }));
  body.push(
    polyline(ratioRows.map((r) => [sx(r.eps), sy(r.value)]), {
      class: "series",
      stroke: SERIES_COLORS[0],
      "stroke-width": 1.5,
    }),
  );
  for (const r of ratioRows) {
    body.push(el("circle", { cx: sx(r.eps), cy: sy(r.value), r: 2.5, fill: SERIES_COLORS[0] }));
    body.push(text(sx(r.eps) - 10, HEIGHT - MARGIN.bottom + 16, String(r.eps)));
  }
  body.push(text(WIDTH - 180, MARGIN.top + 12, "band: +-3 SE", { fill: "#555555" }));
  return svgDocument(WIDTH, HEIGHT, body);
}

function renderAnimals(rows: ResultRow[]): string {
  const cells = rows
    .filter((r) => /^animal_ratio\[p=/.test(r.statistic))
    .map((r) => ({
      n: r.n,
      p: Number(r.statistic.slice("animal_ratio[p=".length, -1)),
      value: r.value,
    }));
  if (cells.length === 0) {
    throw new CsvError("missing statistic: animal_ratio[p=...]");
  }
  const ns = [...new Set(cells.map((c) => c.n))].sort((a, b) => a - b);
  const ps = [...new Set(cells.map((c) => c.p))].sort((a, b) => b - a);
  const vMax = Math.max(...cells.map((c) => c.value));
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const cw = plotW / ps.length;
  const ch = plotH / ns.length;

  const body = frame("Greedy animal scaling ratio", "p", "n");
  ns.forEach((n, i) => {
    body.push(text(MARGIN.left - 30, MARGIN.top + (i + 0.6) * ch, String(n)));
    ps.forEach((p, j) => {
      const cell = cells.find((c) => c.n === n && c.p === p);
      if (!cell) return;
      const t = vMax > 0 ? cell.value / vMax : 0;
      const red = Math.round(40 + 200 * t);
      const blue = Math.round(220 - 160 * t);
      body.push(
        el("rect", {
          class: "cell",
          x: MARGIN.left + j * cw,
          y: MARGIN.top + i * ch,
          width: cw - 2,
          height: ch - 2,
          fill: `rgb(${red},90,${blue})`,
        }),
      );
      body.push(
        text(MARGIN.left + j * cw + 6, MARGIN.top + (i + 0.55) * ch, fmt(cell.value), {
          fill: "white",
        }),
      );
    });
  });
  ps.forEach((p, j) => {
    body.push(text(MARGIN.left + (j + 0.3) * cw, HEIGHT - MARGIN.bottom + 16, String(p)));
  });
  return svgDocument(WIDTH, HEIGHT, body);
}

function renderSuiteSummary(rows: ResultRow[]): string {
  const passRows = rows.filter((r) => r.statistic.split("[")[0].endsWith("_pass"));
  if (passRows.length === 0) {
    throw new CsvError("missing statistic: *_pass rows");
  }
  const rowH = 22;
  const height = MARGIN.top + passRows.length * rowH + MARGIN.bottom;
  const body: string[] = [text(WIDTH / 2 - 60, 18, "Check suite summary", { "font-size": 13 })];
  passRows.forEach((r, i) => {
    const ok = r.value === 1.0;
    body.push(
      el("rect", {
        class: ok ? "pass" : "fail",
        x: MARGIN.left,
        y: MARGIN.top + i * rowH,
        width: 16,
        height: 16,
        fill: ok ? "#2a9d54" : "#c23b22",
      }),
    );
    body.push(
      text(MARGIN.left + 24, MARGIN.top + i * rowH + 12,
           `${r.statistic}  (reps=${r.reps})`),
    );
  });
  return svgDocument(WIDTH, height, body);
}

export function renderToString(rows: ResultRow[], kind: PlotKind): string {
  switch (kind) {
    case "scaling":
      return renderScaling(rows);
    case "low_density":
      return renderLowDensity(rows);
    case "animals":
      return renderAnimals(rows);
    case "suite_summary":
      return renderSuiteSummary(rows);
    default:
      throw new CsvError(`unknown plot kind: ${kind}`);
  }
}

export function render(spec: PlotSpec): void {
  if (!spec.outPath.endsWith(".svg")) {
    throw new CsvError("only .svg output is supported");
  }
  const textContent = fs.readFileSync(spec.inputCsv, "utf-8");
  const rows = parseResultsCsv(textContent);
  const svg = renderToString(rows, spec.kind);
  fs.writeFileSync(spec.outPath, svg);
}
