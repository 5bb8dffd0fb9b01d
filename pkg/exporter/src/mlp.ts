/**
 * A small feed-forward classifier trained with plain batch gradient descent.
 *
 * Hidden layers use tanh so activations stay bounded and finite; the output
 * layer is a softmax trained with cross-entropy. The network is deliberately
 * minimal: dense layers, momentum, full-batch updates. Everything is double
 * precision and sequential, so a fixed seed reproduces training exactly.
 */

import { Rng } from "./rng";

/** Raised when training or a forward pass produces non-finite values. */
export class TrainingDiverged extends Error {
  constructor(detail: string) {
    super(`training diverged: ${detail}`);
    this.name = "TrainingDiverged";
  }
}

export interface TrainOptions {
  epochs: number;
  lr: number;
  momentum: number;
}

export const TRAIN_DEFAULTS: TrainOptions = {
  epochs: 600,
  lr: 0.25,
  momentum: 0.9,
};

function zeros(rows: number, cols: number): number[][] {
  return Array.from({ length: rows }, () => new Array<number>(cols).fill(0));
}

export class Mlp {
  /** Layer widths, input first, class count last. */
  readonly sizes: number[];
  /** weights[l][i][j] connects neuron i of layer l to neuron j of layer l+1. */
  weights: number[][][];
  biases: number[][];

  constructor(sizes: number[], rng: Rng) {
    if (sizes.length < 2) {
      throw new RangeError("an MLP needs an input and an output layer");
    }
    if (sizes.some((s) => !Number.isInteger(s) || s < 1)) {
      throw new RangeError(`layer sizes must be positive integers: ${sizes}`);
    }
    this.sizes = [...sizes];
    this.weights = [];
    this.biases = [];
    for (let l = 0; l + 1 < sizes.length; l++) {
      const fanIn = sizes[l];
      const fanOut = sizes[l + 1];
      const scale = Math.sqrt(6 / (fanIn + fanOut));
      const w = zeros(fanIn, fanOut);
      for (let i = 0; i < fanIn; i++) {
        for (let j = 0; j < fanOut; j++) {
          w[i][j] = rng.uniform(-scale, scale);
        }
      }
      this.weights.push(w);
      this.biases.push(new Array<number>(fanOut).fill(0));
    }
  }

  get nLayers(): number {
    return this.sizes.length - 1;
  }

  /**
   * Forward a batch and keep every layer.
   *
   * Returns acts[k][row][neuron] for k = 0..nLayers, where acts[0] echoes the
   * input, intermediate entries are tanh activations and the last entry holds
   * softmax class probabilities.
   */
  forwardCollect(x: number[][]): number[][][] {
    const acts: number[][][] = [x.map((row) => [...row])];
    let current = acts[0];
    for (let l = 0; l < this.nLayers; l++) {
      const w = this.weights[l];
      const b = this.biases[l];
      const out = zeros(current.length, b.length);
      for (let r = 0; r < current.length; r++) {
        for (let j = 0; j < b.length; j++) {
          let s = b[j];
          for (let i = 0; i < w.length; i++) {
            s += current[r][i] * w[i][j];
          }
          out[r][j] = s;
        }
        if (l + 1 < this.nLayers) {
          for (let j = 0; j < b.length; j++) out[r][j] = Math.tanh(out[r][j]);
        } else {
          softmaxInPlace(out[r]);
        }
      }
      acts.push(out);
      current = out;
    }
    return acts;
  }

  /** Class probabilities for a batch (the last layer of forwardCollect). */
  probabilities(x: number[][]): number[][] {
    const acts = this.forwardCollect(x);
    return acts[acts.length - 1];
  }

  /** Hard class prediction per row. */
  predict(x: number[][]): number[] {
    return this.probabilities(x).map((p) => argmax(p));
  }

  /**
   * Full-batch gradient descent with momentum on the cross-entropy loss.
   * Returns the per-epoch mean loss. Throws TrainingDiverged as soon as the
   * loss stops being finite.
   */
  train(x: number[][], y: number[], opts: Partial<TrainOptions> = {}): number[] {
    const { epochs, lr, momentum } = { ...TRAIN_DEFAULTS, ...opts };
    if (x.length !== y.length) {
      throw new RangeError(`got ${x.length} rows but ${y.length} labels`);
    }
    const n = x.length;
    const k = this.sizes[this.sizes.length - 1];
    if (y.some((c) => !Number.isInteger(c) || c < 0 || c >= k)) {
      throw new RangeError(`labels must be integers in [0, ${k})`);
    }
    const vW = this.weights.map((w) => zeros(w.length, w[0].length));
    const vB = this.biases.map((b) => new Array<number>(b.length).fill(0));
    const losses: number[] = [];

    for (let epoch = 0; epoch < epochs; epoch++) {
      const acts = this.forwardCollect(x);
      const probs = acts[acts.length - 1];
      let loss = 0;
      for (let r = 0; r < n; r++) {
        // no clamp: an underflowed true-class probability IS divergence
        loss -= Math.log(probs[r][y[r]]);
      }
      loss /= n;
      if (!Number.isFinite(loss)) {
        throw new TrainingDiverged(`loss is ${loss} at epoch ${epoch}`);
      }
      losses.push(loss);

      // delta starts as the softmax cross-entropy gradient, then walks back
      let delta = probs.map((p, r) =>
        p.map((v, j) => (v - (y[r] === j ? 1 : 0)) / n),
      );
      for (let l = this.nLayers - 1; l >= 0; l--) {
        const below = acts[l];
        const w = this.weights[l];
        const gradW = zeros(w.length, w[0].length);
        const gradB = new Array<number>(this.biases[l].length).fill(0);
        for (let r = 0; r < n; r++) {
          for (let j = 0; j < gradB.length; j++) {
            const d = delta[r][j];
            gradB[j] += d;
            for (let i = 0; i < w.length; i++) {
              gradW[i][j] += below[r][i] * d;
            }
          }
        }
        if (l > 0) {
          const next = zeros(n, w.length);
          for (let r = 0; r < n; r++) {
            for (let i = 0; i < w.length; i++) {
              let s = 0;
              for (let j = 0; j < gradB.length; j++) {
                s += delta[r][j] * w[i][j];
              }
              // tanh'(a) expressed through the stored activation a
              next[r][i] = s * (1 - below[r][i] * below[r][i]);
            }
          }
          delta = next;
        }
        for (let i = 0; i < w.length; i++) {
          for (let j = 0; j < gradB.length; j++) {
            vW[l][i][j] = momentum * vW[l][i][j] - lr * gradW[i][j];
            w[i][j] += vW[l][i][j];
          }
        }
        for (let j = 0; j < gradB.length; j++) {
          vB[l][j] = momentum * vB[l][j] - lr * gradB[j];
          this.biases[l][j] += vB[l][j];
        }
      }
    }
    return losses;
  }
}

function argmax(row: number[]): number {
  let best = 0;
  for (let j = 1; j < row.length; j++) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

function softmaxInPlace(row: number[]): void {
  let top = row[0];
  for (const v of row) top = Math.max(top, v);
  let total = 0;
  for (let j = 0; j < row.length; j++) {
    row[j] = Math.exp(row[j] - top);
    total += row[j];
  }
  for (let j = 0; j < row.length; j++) row[j] /= total;
}
