export type Pooling = "mean" | "first-token";

/** A sentence encoder that exposes per-token vectors so the exporter can
 *  apply either pooling strategy itself. */
export interface TokenEncoder {
  readonly name: string;
  readonly dim: number;
  /** One matrix per input text: tokens x dim. Inputs are never empty. */
  encodeTokens(texts: string[]): Promise<number[][][]>;
}

export class EncoderLoadError extends Error {}

export function pool(tokens: number[][], pooling: Pooling): number[] {
  if (pooling === "first-token") return tokens[0].slice();
  const dim = tokens[0].length;
  const out = new Array<number>(dim).fill(0);
  for (const vec of tokens) for (let i = 0; i < dim; i++) out[i] += vec[i];
  for (let i = 0; i < dim; i++) out[i] /= tokens.length;
  return out;
}

// 64-bit FNV-1a, the seed for the deterministic backend below.
function fnv1a64(text: string): bigint {
  let h = 0xcbf29ce484222325n;
  const bytes = Buffer.from(text, "utf8");
  for (const b of bytes) {
    h ^= BigInt(b);
    h = (h * 0x100000001b3n) & 0xffffffffffffffffn;
  }
  return h;
}

/** Deterministic stand-in for a pretrained encoder: every token maps to a
 *  fixed pseudo-random vector derived from its hash, so identical input
 *  always produces identical files.  Exists for tests and for exercising
 *  the full export path where no model weights are available. */
export class DeterministicEncoder implements TokenEncoder {
  readonly name: string;
  readonly dim: number;

  constructor(dim = 1024, name = "deterministic-hash") {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new RangeError(`dim must be a positive integer, got ${dim}`);
    }
    this.dim = dim;
    this.name = name;
  }

  private tokenVector(token: string): number[] {
    // splitmix64 stream seeded by the token hash; values in [-1, 1)
    let state = fnv1a64(token);
    const vec = new Array<number>(this.dim);
    for (let i = 0; i < this.dim; i++) {
      state = (state + 0x9e3779b97f4a7c15n) & 0xffffffffffffffffn;
      let z = state;
      z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & 0xffffffffffffffffn;
      z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & 0xffffffffffffffffn;
      z ^= z >> 31n;
      vec[i] = Number(z >> 11n) / 2 ** 52 - 1; // 53-bit mantissa, exact
    }
    return vec;
  }

  async encodeTokens(texts: string[]): Promise<number[][][]> {
    return texts.map((text) => {
      const tokens = text.split(/\s+/).filter((t) => t !== "");
      return tokens.map((t) => this.tokenVector(t));
    });
  }
}

/** Real pretrained backend via @xenova/transformers (an optional peer
 *  dependency); loaded lazily so the rest of the package works without
 *  it installed. */
export class TransformersEncoder implements TokenEncoder {
  readonly name: string;
  readonly dim: number;
  private readonly pipe: (texts: string[], opts: object) => Promise<{
    dims: number[];
    data: Float32Array;
  }>;

  private constructor(name: string, dim: number, pipe: TransformersEncoder["pipe"]) {
    this.name = name;
    this.dim = dim;
    this.pipe = pipe;
  }

  static async load(model: string): Promise<TransformersEncoder> {
    let pipelineFactory;
    try {
      ({ pipeline: pipelineFactory } = await import("@xenova/transformers"));
    } catch (err) {
      throw new EncoderLoadError(
        `cannot load encoder backend for ${model}: ` +
          `install the optional dependency @xenova/transformers (${err})`,
      );
    }
    const pipe = await pipelineFactory("feature-extraction", model);
    // probe once to learn the output width
    const probe = await pipe(["probe"], { pooling: "none" });
    const dim = probe.dims[probe.dims.length - 1];
    return new TransformersEncoder(model, dim, pipe);
  }

  async encodeTokens(texts: string[]): Promise<number[][][]> {
    const out = await this.pipe(texts, { pooling: "none" });
    const [batch, tokens, dim] = out.dims;
    const result: number[][][] = [];
    for (let b = 0; b < batch; b++) {
      const matrix: number[][] = [];
      for (let t = 0; t < tokens; t++) {
        const offset = (b * tokens + t) * dim;
        matrix.push(Array.from(out.data.subarray(offset, offset + dim)));
      }
      result.push(matrix);
    }
    return result;
  }
}
