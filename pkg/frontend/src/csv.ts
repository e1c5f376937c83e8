/**
 * Reader for the fpp-lab results CSV.
 *
 * The file format is fixed: a header line
 *   experiment,n,statistic,value,std_err,reps,boundary_frac,seed
 * followed by one row per statistic. Fields never contain commas or
 * quotes, so splitting on commas is exact.
 */

export const CSV_HEADER = [
  "experiment",
  "n",
  "statistic",
  "value",
  "std_err",
  "reps",
  "boundary_frac",
  "seed",
] as const;

export interface ResultRow {
  experiment: string;
  n: number;
  statistic: string;
  value: number;
  std_err: number;
  reps: number;
  boundary_frac: number;
  seed: number;
}

export class CsvError extends Error {}

export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header line");
  }
  const header = lines[0].split(",");
  for (const column of CSV_HEADER) {
    if (!header.includes(column)) {
      throw new CsvError(`missing column: ${column}`);
    }
  }
  if (header.length !== CSV_HEADER.length ||
      !CSV_HEADER.every((c, i) => header[i] === c)) {
    throw new CsvError(
      `header must be exactly "${CSV_HEADER.join(",")}", got "${lines[0]}"`,
    );
  }
  if (lines.length === 1) {
    throw new CsvError("empty CSV: header but no data rows");
  }
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== CSV_HEADER.length) {
      throw new CsvError(`row ${i + 1} has ${parts.length} fields, expected ${CSV_HEADER.length}`);
    }
    rows.push({
      experiment: parts[0],
      n: Number(parts[1]),
      statistic: parts[2],
      value: Number(parts[3]),
      std_err: Number(parts[4]),
      reps: Number(parts[5]),
      boundary_frac: Number(parts[6]),
      seed: Number(parts[7]),
    });
  }
  return rows;
}

/** Rows carrying one statistic, keyed and sorted by n. */
export function seriesByN(rows: ResultRow[], statistic: string): ResultRow[] {
  return rows
    .filter((r) => r.statistic === statistic)
    .sort((a, b) => a.n - b.n);
}

export function requireSeries(rows: ResultRow[], statistic: string): ResultRow[] {
  const out = seriesByN(rows, statistic);
  if (out.length === 0) {
    throw new CsvError(`missing statistic: ${statistic}`);
  }
  return out;
}
