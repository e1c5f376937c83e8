/**
 * Minimal deterministic SVG builder: pure string assembly, fixed number
 * formatting, no timestamps or randomness, so identical inputs yield
 * byte-identical files.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toPrecision(6);
  // strip trailing zeros without changing the value's text determinism
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.$/, "") : s;
}

export type Attrs = Record<string, string | number>;

export function el(tag: string, attrs: Attrs, body = ""): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body === "" ? `<${tag} ${parts}/>` : `<${tag} ${parts}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el("text", { x, y, "font-size": 11, "font-family": "sans-serif", ...attrs }, content);
}

export interface Scale {
  (value: number): number;
}

/** Log-scale mapping data in [lo, hi] onto pixels [a, b]. */
export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const llo = Math.log(lo);
  const lhi = Math.log(hi);
  const span = lhi - llo || 1;
  return (v: number) => a + ((Math.log(v) - llo) / span) * (b - a);
}

export function linScale(lo: number, hi: number, a: number, b: number): Scale {
  const span = hi - lo || 1;
  return (v: number) => a + ((v - lo) / span) * (b - a);
}

export function polyline(points: Array<[number, number]>, attrs: Attrs): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

export function pathFromPoints(points: Array<[number, number]>, attrs: Attrs): string {
  const d = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join(" ");
  return el("path", { d, fill: "none", ...attrs });
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
