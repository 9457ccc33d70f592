import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { DeterministicEncoder, pool } from "../src/encoders.js";
import { exportEmbeddings } from "../src/export.js";

let dir: string;
beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "embed-export-"));
});
afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

function writeSegments(content: string): string {
  const file = path.join(dir, "segments.tsv");
  fs.writeFileSync(file, content);
  return file;
}

const THREE_SEGMENTS = "1:0:5\tstrike them hard\n1:6:9\tpeace now\n2:0:4\tvote\n";

async function runExport(
  content: string,
  overrides: Partial<Parameters<typeof exportEmbeddings>[0]> = {},
  dim = 8,
) {
  const out = path.join(dir, overrides.outFile ?? "embeddings.tsv");
  const warnings: string[] = [];
  const stats = await exportEmbeddings(
    {
      segmentsFile: writeSegments(content),
      pooling: "mean",
      batchSize: 32,
      ...overrides,
      outFile: out,
    },
    new DeterministicEncoder(dim),
    (m) => warnings.push(m),
  );
  return { stats, warnings, out, lines: fs.readFileSync(out, "utf8").split("\n") };
}

describe("exportEmbeddings", () => {
  it("writes one row per key under a #dim header and a provenance comment", async () => {
    const { stats, lines } = await runExport(THREE_SEGMENTS);
    expect(lines[0]).toBe("#dim=8");
    expect(lines[1]).toBe("# model=deterministic-hash pooling=mean");
    expect(lines.slice(2, 5).map((l) => l.split("\t")[0])).toEqual([
      "1:0:5",
      "1:6:9",
      "2:0:4",
    ]);
    expect(lines.slice(2, 5).every((l) => l.split("\t").length === 9)).toBe(true);
    expect(lines[5]).toBe("");
    expect(stats).toEqual({ rows: 3, emptyKeys: [], dim: 8 });
  });

  it("suffixes context-augmented rows with #ctx", async () => {
    const { stats, lines } = await runExport(
      "1:0:5\tstrike\tbefore strike after\n",
    );
    expect(stats.rows).toBe(2);
    expect(lines[2].split("\t")[0]).toBe("1:0:5");
    expect(lines[3].split("\t")[0]).toBe("1:0:5#ctx");
    expect(lines[2]).not.toBe(lines[3].replace("#ctx", ""));
  });

  it("produces identical files for identical input", async () => {
    const first = await runExport(THREE_SEGMENTS, { outFile: "a.tsv" });
    const second = await runExport(THREE_SEGMENTS, { outFile: "b.tsv" });
    expect(fs.readFileSync(first.out, "utf8")).toBe(
      fs.readFileSync(second.out, "utf8"),
    );
  });

  it("is insensitive to batch size", async () => {
    const big = await runExport(THREE_SEGMENTS, { outFile: "big.tsv", batchSize: 64 });
    const tiny = await runExport(THREE_SEGMENTS, { outFile: "tiny.tsv", batchSize: 1 });
    expect(fs.readFileSync(big.out, "utf8")).toBe(fs.readFileSync(tiny.out, "utf8"));
  });

  it("emits a zero vector and a warning for empty text", async () => {
    const { stats, warnings, lines } = await runExport("1:0:0\t\n2:0:4\tvote\n");
    expect(stats.emptyKeys).toEqual(["1:0:0"]);
    expect(warnings).toEqual([
      "warning: empty text for 1:0:0; writing a zero vector",
    ]);
    const values = lines[2].split("\t").slice(1);
    expect(values).toEqual(new Array(8).fill("0.00000000"));
  });

  it("mean and first-token pooling disagree on multi-token text", async () => {
    const mean = await runExport(THREE_SEGMENTS, { outFile: "mean.tsv" });
    const first = await runExport(THREE_SEGMENTS, {
      outFile: "first.tsv",
      pooling: "first-token",
    });
    expect(first.lines[1]).toBe("# model=deterministic-hash pooling=first-token");
    expect(mean.lines[2]).not.toBe(first.lines[2]);
  });

  it.each([
    ["unknown pooling", { pooling: "max" as never }, /unknown pooling max/],
    ["zero batch", { batchSize: 0 }, /batch size must be a positive integer/],
  ])("rejects %s", async (_name, overrides, message) => {
    await expect(runExport(THREE_SEGMENTS, overrides)).rejects.toThrowError(
      message,
    );
  });
});

describe("pooling helpers", () => {
  const tokens = [
    [1, 3],
    [3, 5],
  ];

  it("mean averages across tokens", () => {
    expect(pool(tokens, "mean")).toEqual([2, 4]);
  });

  it("first-token copies the first row", () => {
    const out = pool(tokens, "first-token");
    expect(out).toEqual([1, 3]);
    out[0] = 99;
    expect(tokens[0][0]).toBe(1); // a copy, not a view
  });
});

describe("DeterministicEncoder", () => {
  it("maps equal tokens to equal vectors", async () => {
    const enc = new DeterministicEncoder(4);
    const [a, b] = await enc.encodeTokens(["war war", "war peace"]);
    expect(a[0]).toEqual(a[1]);
    expect(a[0]).toEqual(b[0]);
    expect(a[0]).not.toEqual(b[1]);
  });

  it("keeps values inside [-1, 1)", async () => {
    const enc = new DeterministicEncoder(256);
    const [m] = await enc.encodeTokens(["bounds check token"]);
    for (const vec of m) for (const v of vec) {
      expect(v).toBeGreaterThanOrEqual(-1);
      expect(v).toBeLessThan(1);
    }
  });

  it("rejects a non-positive dimension", () => {
    expect(() => new DeterministicEncoder(0)).toThrowError(RangeError);
  });
});
