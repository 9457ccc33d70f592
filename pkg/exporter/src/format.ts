import fs from "node:fs";
import path from "node:path";

/** One input row: a segment key, its text, and optionally the
 *  context-augmented variant of the text. */
export interface SegmentRow {
  key: string;
  text: string;
  ctxText?: string;
}

export class DataError extends Error {}

/** Parse a segments TSV (`key \t text [\t context-augmented text]`).
 *  Blank lines and `#` comments are skipped; duplicate keys are rejected
 *  because the output format requires unique keys. */
export function parseSegmentsTsv(file: string): SegmentRow[] {
  const rows: SegmentRow[] = [];
  const seen = new Set<string>();
  const lines = fs.readFileSync(file, "utf8").split("\n");
  lines.forEach((line, i) => {
    if (line === "" || line.startsWith("#")) return;
    const fields = line.split("\t");
    if (fields.length < 2 || fields.length > 3) {
      throw new DataError(
        `${path.basename(file)}:${i + 1}: expected 2 or 3 fields, got ${fields.length}`,
      );
    }
    const [key, text, ctxText] = fields;
    if (key === "") {
      throw new DataError(`${path.basename(file)}:${i + 1}: empty key`);
    }
    if (seen.has(key)) {
      throw new DataError(`${path.basename(file)}:${i + 1}: duplicate key ${key}`);
    }
    seen.add(key);
    rows.push(ctxText === undefined ? { key, text } : { key, text, ctxText });
  });
  return rows;
}

/** Render a vector component to 9 significant digits. */
export function formatValue(x: number): string {
  if (!Number.isFinite(x)) throw new DataError(`non-finite embedding value ${x}`);
  return x.toPrecision(9);
}

/** Serialize the embedding file: `#dim=<D>` header, one comment line
 *  recording provenance, then `key \t v1 \t ... \t vD` rows. */
export function renderEmbeddingFile(
  dim: number,
  comment: string,
  rows: Iterable<[string, ArrayLike<number>]>,
): string {
  const lines = [`#dim=${dim}`, `# ${comment}`];
  for (const [key, vector] of rows) {
    if (vector.length !== dim) {
      throw new DataError(`row ${key}: ${vector.length} values, header says ${dim}`);
    }
    const parts = [key];
    for (let i = 0; i < vector.length; i++) parts.push(formatValue(vector[i]));
    lines.push(parts.join("\t"));
  }
  return lines.join("\n") + "\n";
}

/** Write atomically: temp file in the target directory, then rename. */
export function writeFileAtomic(file: string, content: string): void {
  const dir = path.dirname(path.resolve(file));
  const tmp = path.join(dir, `.${path.basename(file)}.${process.pid}.tmp`);
  fs.writeFileSync(tmp, content, "utf8");
  fs.renameSync(tmp, file);
}
