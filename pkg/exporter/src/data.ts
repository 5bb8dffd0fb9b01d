/**
 * Toy classification datasets at desk scale.
 *
 * Rows are generated class-interleaved (row i belongs to class i mod k), so
 * any contiguous split keeps the classes balanced.
 */

import { Rng } from "./rng";

export interface ToyData {
  /** Feature matrix, rows x columns. */
  x: number[][];
  /** Class index per row. */
  y: number[];
  /** Class labels, indexed by the values in y. */
  classes: string[];
}

export const DATASETS = ["moons", "blobs"] as const;
export type DatasetName = (typeof DATASETS)[number];

/** Two interleaved half circles with isotropic Gaussian jitter. */
export function moons(n: number, noise: number, rng: Rng): ToyData {
  const x: number[][] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    const cls = i % 2;
    const t = rng.next() * Math.PI;
    let px: number;
    let py: number;
    if (cls === 0) {
      px = Math.cos(t);
      py = Math.sin(t);
    } else {
      px = 1 - Math.cos(t);
      py = 0.5 - Math.sin(t);
    }
    x.push([px + noise * rng.normal(), py + noise * rng.normal()]);
    y.push(cls);
  }
  return { x, y, classes: ["c0", "c1"] };
}

/** k isotropic Gaussian clusters centred on a circle of radius 2. */
export function blobs(n: number, k: number, spread: number, rng: Rng): ToyData {
  if (k < 2) throw new RangeError(`blobs needs at least 2 classes, got ${k}`);
  const centers = Array.from({ length: k }, (_, c) => {
    const angle = (2 * Math.PI * c) / k;
    return [2 * Math.cos(angle), 2 * Math.sin(angle)];
  });
  const x: number[][] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    const cls = i % k;
    x.push([
      centers[cls][0] + spread * rng.normal(),
      centers[cls][1] + spread * rng.normal(),
    ]);
    y.push(cls);
  }
  return { x, y, classes: Array.from({ length: k }, (_, c) => `c${c}`) };
}

export function makeDataset(
  name: string,
  n: number,
  noise: number,
  rng: Rng,
): ToyData {
  if (n < 4) throw new RangeError(`need at least 4 rows, got ${n}`);
  switch (name) {
    case "moons":
      return moons(n, noise, rng);
    case "blobs":
      return blobs(n, 3, Math.max(noise, 0.05) * 3, rng);
    default:
      throw new RangeError(
        `unknown dataset ${JSON.stringify(name)}; pick one of ${DATASETS.join(", ")}`,
      );
  }
}
