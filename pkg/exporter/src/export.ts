/**
 * End-to-end export: sample a toy dataset, train a small MLP, forward the
 * held-out split and write its per-layer activations as one ARFF view per
 * layer, next to the domain features, the model's predictions, a mining
 * settings file and a JSON manifest.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { numericArff, nominalArff } from "./arff";
import { DatasetName, makeDataset } from "./data";
import { Mlp, TrainingDiverged, TRAIN_DEFAULTS } from "./mlp";
import { Rng } from "./rng";
import { DESK_SCALE, MiningOptions, miningSettings } from "./settings";

export interface ExportConfig {
  /** Output directory, created if missing. */
  out: string;
  dataset: DatasetName;
  /** Rows in the exported (held-out) split. */
  entities: number;
  /** Rows the network is trained on; they are never exported. */
  trainEntities: number;
  /** Hidden layer widths, input side first. */
  layers: number[];
  /** 1-based hidden layer indices to export; defaults to all of them. */
  exportLayers?: number[];
  seed: number;
  /** Sampling jitter passed to the dataset generator. */
  noise: number;
  epochs: number;
  lr: number;
  mining: MiningOptions;
}

export const EXPORT_DEFAULTS: Omit<ExportConfig, "out"> = {
  dataset: "moons",
  entities: 240,
  trainEntities: 480,
  layers: [8, 4],
  seed: 0,
  noise: 0.12,
  epochs: TRAIN_DEFAULTS.epochs,
  lr: TRAIN_DEFAULTS.lr,
  mining: DESK_SCALE,
};

export interface ExportManifest {
  dataset: string;
  seed: number;
  /** Every layer width, input dimension first, class count last. */
  layerSizes: number[];
  /** 1-based indices of the hidden layers that were exported. */
  exportedLayers: number[];
  /** Rows shared by every exported ARFF. */
  rows: number;
  files: {
    domain: string;
    views: string[];
    predictions: string;
    settings: string;
    manifest: string;
  };
}

/** Column-wise z-scoring with the statistics of the training rows. */
function standardize(train: number[][], test: number[][]): void {
  const dims = train[0].length;
  for (let j = 0; j < dims; j++) {
    let mean = 0;
    for (const row of train) mean += row[j];
    mean /= train.length;
    let varSum = 0;
    for (const row of train) varSum += (row[j] - mean) ** 2;
    const sd = Math.sqrt(varSum / train.length) || 1;
    for (const row of train) row[j] = (row[j] - mean) / sd;
    for (const row of test) row[j] = (row[j] - mean) / sd;
  }
}

function validate(config: ExportConfig): void {
  if (config.entities < 20) {
    throw new RangeError(`need at least 20 exported rows, got ${config.entities}`);
  }
  if (config.trainEntities < 20) {
    throw new RangeError(`need at least 20 training rows, got ${config.trainEntities}`);
  }
  if (config.layers.length === 0) {
    throw new RangeError("need at least one hidden layer");
  }
  const chosen = config.exportLayers ?? [];
  for (const k of chosen) {
    if (!Number.isInteger(k) || k < 1 || k > config.layers.length) {
      throw new RangeError(
        `layer index ${k} outside 1..${config.layers.length}`,
      );
    }
  }
}

export function exportViews(config: ExportConfig): ExportManifest {
  validate(config);
  const rng = new Rng(config.seed);
  const total = config.trainEntities + config.entities;
  const data = makeDataset(config.dataset, total, config.noise, rng);

  // class-interleaved rows, so a prefix/suffix split stays balanced
  const trainX = data.x.slice(0, config.trainEntities);
  const trainY = data.y.slice(0, config.trainEntities);
  const testX = data.x.slice(config.trainEntities);
  standardize(trainX, testX);

  const sizes = [trainX[0].length, ...config.layers, data.classes.length];
  const net = new Mlp(sizes, rng);
  net.train(trainX, trainY, { epochs: config.epochs, lr: config.lr });

  const acts = net.forwardCollect(testX);
  for (const layer of acts) {
    for (const row of layer) {
      for (const v of row) {
        if (!Number.isFinite(v)) {
          throw new TrainingDiverged("non-finite activation in the export split");
        }
      }
    }
  }
  const predicted = acts[acts.length - 1].map((p) => {
    let best = 0;
    for (let j = 1; j < p.length; j++) if (p[j] > p[best]) best = j;
    return best;
  });

  const exported = config.exportLayers ?? config.layers.map((_, i) => i + 1);
  fs.mkdirSync(config.out, { recursive: true });

  const domainNames = Array.from({ length: testX[0].length }, (_, j) => `x${j}`);
  const viewFiles: string[] = ["view1.arff"];
  writeText(config.out, "view1.arff", numericArff("domain", domainNames, testX));

  for (const [slot, k] of exported.entries()) {
    const width = config.layers[k - 1];
    const names = Array.from({ length: width }, (_, i) => `L${k}n${i}`);
    const file = `view${slot + 2}.arff`;
    writeText(config.out, file, numericArff(`layer${k}`, names, acts[k]));
    viewFiles.push(file);
  }

  writeText(
    config.out,
    "predictions.arff",
    nominalArff("predictions", "prediction", data.classes, predicted),
  );
  writeText(
    config.out,
    "settings.txt",
    miningSettings(viewFiles, "exported", config.mining),
  );

  const manifest: ExportManifest = {
    dataset: config.dataset,
    seed: config.seed,
    layerSizes: sizes,
    exportedLayers: exported,
    rows: config.entities,
    files: {
      domain: "view1.arff",
      views: viewFiles,
      predictions: "predictions.arff",
      settings: "settings.txt",
      manifest: "manifest.json",
    },
  };
  writeText(config.out, "manifest.json", JSON.stringify(manifest, null, 2) + "\n");
  return manifest;
}

function writeText(dir: string, name: string, body: string): void {
  fs.writeFileSync(path.join(dir, name), body, { encoding: "utf-8" });
}
