// End-to-end compatibility with the Python package: the exported file must
// pass its embedding loader's validation (dimension header, row arity,
// numeric values) and cover every requested key, including #ctx variants.
import { execFileSync } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { DeterministicEncoder } from "../src/encoders.js";
import { exportEmbeddings } from "../src/export.js";

let dir: string;
beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "embed-export-"));
});
afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

const VALIDATE_SCRIPT = `
import sys
from proplab.embeddings import load_embeddings

store = load_embeddings(sys.argv[1])
keys = sys.argv[2].split(",")
missing = [k for k in keys if store.get(k) is None]
print(f"dim={store.dim} rows={len(store)} missing={len(missing)}")
`;

function validateWithPrimaryLoader(file: string, keys: string[]): string {
  return execFileSync("python3", ["-c", VALIDATE_SCRIPT, file, keys.join(",")], {
    encoding: "utf8",
  }).trim();
}

describe("primary-loader compatibility", () => {
  it("a 1024-wide export loads cleanly and covers all keys", async () => {
    const segments = path.join(dir, "segments.tsv");
    fs.writeFileSync(
      segments,
      "1:0:17\tour glorious nation stands alone\tlead-in our glorious nation stands alone follow-up\n" +
        "1:20:34\tthe usual experts disagree\tso the usual experts disagree again\n" +
        "2:0:11\tenough is enough\tsaid that enough is enough already\n",
    );
    const out = path.join(dir, "embeddings.tsv");
    const stats = await exportEmbeddings(
      { segmentsFile: segments, outFile: out, pooling: "mean", batchSize: 2 },
      new DeterministicEncoder(1024),
    );
    expect(stats).toEqual({ rows: 6, emptyKeys: [], dim: 1024 });
    expect(fs.readFileSync(out, "utf8").startsWith("#dim=1024\n")).toBe(true);

    const report = validateWithPrimaryLoader(out, [
      "1:0:17",
      "1:0:17#ctx",
      "1:20:34",
      "1:20:34#ctx",
      "2:0:11",
      "2:0:11#ctx",
    ]);
    expect(report).toBe("dim=1024 rows=6 missing=0");
  });

  it("zero rows from empty text still parse as valid vectors", async () => {
    const segments = path.join(dir, "segments.tsv");
    fs.writeFileSync(segments, "1:0:0\t\n1:1:4\tshort text\n");
    const out = path.join(dir, "embeddings.tsv");
    await exportEmbeddings(
      { segmentsFile: segments, outFile: out, pooling: "mean", batchSize: 32 },
      new DeterministicEncoder(16),
      () => {},
    );
    const report = validateWithPrimaryLoader(out, ["1:0:0", "1:1:4"]);
    expect(report).toBe("dim=16 rows=2 missing=0");
  });
});
