import {
  DataError,
  parseSegmentsTsv,
  renderEmbeddingFile,
  writeFileAtomic,
} from "./format.js";
import { Pooling, TokenEncoder, pool } from "./encoders.js";

export interface ExportJob {
  /** segments TSV: key, text, optional context-augmented text */
  segmentsFile: string;
  outFile: string;
  pooling: Pooling;
  batchSize: number;
}

export interface ExportStats {
  rows: number;
  emptyKeys: string[];
  dim: number;
}

/** Encode every segment (and its `#ctx` variant when the input carries a
 *  third column) and write the embedding file.  Empty texts become zero
 *  vectors and are reported on stderr rather than failing the run. */
export async function exportEmbeddings(
  job: ExportJob,
  encoder: TokenEncoder,
  warn: (message: string) => void = (m) => process.stderr.write(m + "\n"),
): Promise<ExportStats> {
  if (job.pooling !== "mean" && job.pooling !== "first-token") {
    throw new DataError(`unknown pooling ${job.pooling}`);
  }
  if (!Number.isInteger(job.batchSize) || job.batchSize < 1) {
    throw new DataError(`batch size must be a positive integer, got ${job.batchSize}`);
  }

  const segments = parseSegmentsTsv(job.segmentsFile);
  const entries: [string, string][] = [];
  for (const row of segments) {
    entries.push([row.key, row.text]);
    if (row.ctxText !== undefined) entries.push([`${row.key}#ctx`, row.ctxText]);
  }

  const emptyKeys: string[] = [];
  const vectors = new Map<string, number[]>();
  const pending: [string, string][] = [];
  for (const [key, text] of entries) {
    if (text.trim() === "") {
      emptyKeys.push(key);
      vectors.set(key, new Array<number>(encoder.dim).fill(0));
      warn(`warning: empty text for ${key}; writing a zero vector`);
    } else {
      pending.push([key, text]);
    }
  }

  for (let start = 0; start < pending.length; start += job.batchSize) {
    const batch = pending.slice(start, start + job.batchSize);
    const encoded = await encoder.encodeTokens(batch.map(([, text]) => text));
    batch.forEach(([key], i) => {
      vectors.set(key, pool(encoded[i], job.pooling));
    });
  }

  const comment = `model=${encoder.name} pooling=${job.pooling}`;
  const ordered = entries.map(
    ([key]) => [key, vectors.get(key)!] as [string, number[]],
  );
  writeFileAtomic(job.outFile, renderEmbeddingFile(encoder.dim, comment, ordered));
  return { rows: entries.length, emptyKeys, dim: encoder.dim };
}
