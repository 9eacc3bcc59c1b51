import { describe, expect, it } from "vitest";

import { parseBenchCsv } from "../src/csv";

const HEADER =
  "algorithm,penalty,k,trial,seed,recovered,rse,outer_iters," +
  "total_inner_iters,runtime_ms,lambda,snr_db,rng,error";

const ROW =
  "lasso,none,15,0,9388972499468060349,1,0.00012,1,3581,55.2," +
  "1.0000000000000001e-05,,philox4x64,";

describe("parseBenchCsv", () => {
  it("parses CRLF rows into typed records", () => {
    const rows = parseBenchCsv(`${HEADER}\r\n${ROW}\r\n`);
    expect(rows).toHaveLength(1);
    expect(rows[0]).toEqual({
      algorithm: "lasso",
      penalty: "none",
      k: 15,
      trial: 0,
      recovered: true,
      rse: 0.00012,
      totalInnerIters: 3581,
    });
  });

  it("accepts bare LF line endings too", () => {
    const rows = parseBenchCsv(`${HEADER}\n${ROW}\n`);
    expect(rows).toHaveLength(1);
    expect(rows[0].recovered).toBe(true);
  });

  it("reads booleans from the 0/1 column", () => {
    const zero = ROW.replace(",1,0.00012", ",0,0.00012");
    const rows = parseBenchCsv(`${HEADER}\r\n${zero}\r\n`);
    expect(rows[0].recovered).toBe(false);
  });

  it("names a missing column", () => {
    const noRse = HEADER.replace("rse,", "");
    expect(() => parseBenchCsv(`${noRse}\r\n`)).toThrow('missing column "rse"');
    const noPen = HEADER.replace("penalty,", "");
    expect(() => parseBenchCsv(`${noPen}\r\n`)).toThrow(
      'missing column "penalty"',
    );
  });

  it("rejects a header-only file with no records", () => {
    expect(() => parseBenchCsv(`${HEADER}\r\n`)).toThrow("no records");
  });

  it("rejects rows with the wrong field count", () => {
    expect(() => parseBenchCsv(`${HEADER}\r\nlasso,none,15\r\n`)).toThrow(
      /row 1: 3 fields/,
    );
  });

  it("rejects an empty file", () => {
    expect(() => parseBenchCsv("")).toThrow("empty CSV");
  });
});
