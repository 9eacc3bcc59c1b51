import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Resvg } from "@resvg/resvg-js";

import { aggregate } from "./aggregate.js";
import { readBenchCsv } from "./csv.js";
import { renderFigure } from "./svg.js";

function parseArgs(argv: string[]): { csv: string; out: string } {
  let csv = "";
  let out = ".";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--csv") csv = argv[++i] ?? "";
    else if (argv[i] === "--out") out = argv[++i] ?? ".";
    else throw new Error(`unknown argument ${argv[i]} (expected --csv/--out)`);
  }
  if (!csv) throw new Error("--csv <bench results file> is required");
  return { csv, out };
}

export function main(argv: string[]): void {
  const { csv, out } = parseArgs(argv);
  const rows = readBenchCsv(csv);
  const series = aggregate(rows);
  mkdirSync(out, { recursive: true });

  const figures: Array<[string, string, string, (s: ReturnType<typeof aggregate>[number]) => number[]]> = [
    ["recovery", "Recovery rate vs sparsity", "recovery rate", (s) => s.recovery],
    ["rse", "Mean relative square error vs sparsity", "mean RSE", (s) => s.meanRse],
    ["iterations", "Mean inner iterations vs sparsity", "mean iterations", (s) => s.meanInnerIters],
  ];
  for (const [name, title, ylabel, pick] of figures) {
    const svg = renderFigure(series, pick, title, ylabel);
    const svgPath = join(out, `${name}.svg`);
    writeFileSync(svgPath, svg);
    writeFileSync(join(out, `${name}.png`), new Resvg(svg).render().asPng());
    console.log(`wrote ${svgPath} [+.png] (${series.length} series, ${rows.length} records)`);
  }
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (invokedDirectly) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}
