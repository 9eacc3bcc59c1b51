import { readFileSync } from "node:fs";

/** One bench trial row, narrowed to the fields the figures use. */
export interface TrialRow {
  algorithm: string;
  penalty: string;
  k: number;
  trial: number;
  recovered: boolean;
  rse: number;
  totalInnerIters: number;
}

const REQUIRED = [
  "algorithm",
  "penalty",
  "k",
  "trial",
  "recovered",
  "rse",
  "total_inner_iters",
] as const;

/** Parse bench CSV text (CRLF or LF). Throws naming any missing column,
 *  or "no records" when only the header is present. */
export function parseBenchCsv(text: string): TrialRow[] {
  const lines = text.split(/\r\n|\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new Error("empty CSV: no header");

  const header = lines[0].split(",");
  const col: Record<string, number> = {};
  header.forEach((name, i) => {
    col[name] = i;
  });
  for (const name of REQUIRED) {
    if (!(name in col)) throw new Error(`missing column "${name}"`);
  }
  if (lines.length === 1) throw new Error("no records");

  const rows: TrialRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(`row ${i}: ${cells.length} fields, header has ${header.length}`);
    }
    rows.push({
      algorithm: cells[col.algorithm],
      penalty: cells[col.penalty],
      k: Number(cells[col.k]),
      trial: Number(cells[col.trial]),
      recovered: cells[col.recovered] === "1",
      rse: Number(cells[col.rse]),
      totalInnerIters: Number(cells[col.total_inner_iters]),
    });
  }
  return rows;
}

export function readBenchCsv(path: string): TrialRow[] {
  return parseBenchCsv(readFileSync(path, "utf-8"));
}
