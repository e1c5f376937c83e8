#!/usr/bin/env node
/**
 * fpp-plots --in results.csv --kind scaling --out fig.svg
 *
 * Exit codes: 0 figure written, 1 data error (missing column/statistic,
 * unreadable input), 2 usage error.
 */

import { CsvError } from "./csv";
import { PlotKind, render } from "./plots";

const KINDS: PlotKind[] = ["scaling", "low_density", "animals", "suite_summary"];

const USAGE = `usage: fpp-plots --in <results.csv> --kind <${KINDS.join("|")}> --out <fig.svg>`;

export function run(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      console.error(USAGE);
      return 2;
    }
    args.set(key.slice(2), value);
  }
  const input = args.get("in");
  const kind = args.get("kind");
  const out = args.get("out");
  if (!input || !kind || !out) {
    console.error(USAGE);
    return 2;
  }
  if (!KINDS.includes(kind as PlotKind)) {
    console.error(`unknown kind "${kind}"; ${USAGE}`);
    return 2;
  }
  try {
    render({ inputCsv: input, kind: kind as PlotKind, outPath: out });
  } catch (err) {
    const message = err instanceof CsvError || err instanceof Error
      ? err.message : String(err);
    console.error(`error: ${message}`);
    return 1;
  }
  return 0;
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
