#!/usr/bin/env node
import { parseArgs } from "node:util";

import { DataError } from "./format.js";
import {
  DeterministicEncoder,
  EncoderLoadError,
  Pooling,
  TokenEncoder,
  TransformersEncoder,
} from "./encoders.js";
import { exportEmbeddings } from "./export.js";

const USAGE = `usage: embed-export --segments FILE --out FILE [options]

options:
  --segments FILE    input TSV: key, text, optional context-augmented text
  --out FILE         embedding file to write (atomic temp + rename)
  --model ID         pretrained model identifier (needs @xenova/transformers)
  --deterministic    use the built-in hash backend instead of a model
  --dim N            output width for the deterministic backend (default 1024)
  --pooling MODE     mean (default) or first-token
  --batch-size N     segments encoded per inference call (default 32)
`;

export async function main(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        segments: { type: "string" },
        out: { type: "string" },
        model: { type: "string" },
        deterministic: { type: "boolean", default: false },
        dim: { type: "string", default: "1024" },
        pooling: { type: "string", default: "mean" },
        "batch-size": { type: "string", default: "32" },
        help: { type: "boolean", default: false },
      },
    }));
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}`);
    return 1;
  }
  if (values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  if (!values.segments || !values.out) {
    process.stderr.write(`--segments and --out are required\n${USAGE}`);
    return 1;
  }
  if (!values.model && !values.deterministic) {
    process.stderr.write(`pick a backend: --model ID or --deterministic\n${USAGE}`);
    return 1;
  }

  try {
    const encoder: TokenEncoder = values.model
      ? await TransformersEncoder.load(values.model)
      : new DeterministicEncoder(Number(values.dim));
    const stats = await exportEmbeddings(
      {
        segmentsFile: values.segments,
        outFile: values.out,
        pooling: values.pooling as Pooling,
        batchSize: Number(values["batch-size"]),
      },
      encoder,
    );
    process.stdout.write(
      `wrote ${stats.rows} embedding rows (dim ${stats.dim}) to ${values.out}\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof EncoderLoadError || err instanceof DataError) {
      process.stderr.write(`${err.message}\n`);
      return 2;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`${(err as Error).message}\n`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
