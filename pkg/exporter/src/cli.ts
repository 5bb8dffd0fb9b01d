/**
 * Command line entry point.
 *
 * Exit codes: 0 on success, 1 when flags or configuration fail validation,
 * 2 when the run itself fails (e.g. training diverged).
 */

import { parseArgs } from "node:util";
import * as path from "node:path";

import { DATASETS, DatasetName } from "./data";
import { TrainingDiverged, TRAIN_DEFAULTS } from "./mlp";
import { EXPORT_DEFAULTS, ExportConfig, exportViews } from "./export";

const USAGE = `usage: activation-exporter --out DIR [options]

Train a small MLP on a toy dataset and export the held-out split as ARFF
views (domain features, one view per hidden layer, model predictions), a
mining settings file and a JSON manifest.

options:
  --out DIR             output directory (required)
  --entities N          exported rows (default ${EXPORT_DEFAULTS.entities})
  --train N             training rows (default 2x --entities)
  --seed N              RNG seed (default ${EXPORT_DEFAULTS.seed})
  --dataset NAME        ${DATASETS.join(" | ")} (default ${EXPORT_DEFAULTS.dataset})
  --layers CSV          hidden layer widths (default ${EXPORT_DEFAULTS.layers.join(",")})
  --export-layers CSV   1-based hidden layers to export (default: all)
  --noise X             sampling jitter (default ${EXPORT_DEFAULTS.noise})
  --epochs N            training epochs (default ${TRAIN_DEFAULTS.epochs})
  --lr X                learning rate (default ${TRAIN_DEFAULTS.lr})
  --help                show this message
`;

function intFlag(name: string, raw: string): number {
  const v = Number(raw);
  if (!Number.isInteger(v)) throw new RangeError(`--${name} wants an integer, got ${raw}`);
  return v;
}

function floatFlag(name: string, raw: string): number {
  const v = Number(raw);
  if (!Number.isFinite(v)) throw new RangeError(`--${name} wants a number, got ${raw}`);
  return v;
}

function csvInts(name: string, raw: string): number[] {
  return raw.split(",").map((part) => intFlag(name, part.trim()));
}

export function runCli(argv: string[]): number {
  let config: ExportConfig;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        out: { type: "string" },
        entities: { type: "string" },
        train: { type: "string" },
        seed: { type: "string" },
        dataset: { type: "string" },
        layers: { type: "string" },
        "export-layers": { type: "string" },
        noise: { type: "string" },
        epochs: { type: "string" },
        lr: { type: "string" },
        help: { type: "boolean" },
      },
    });
    if (values.help) {
      process.stdout.write(USAGE);
      return 0;
    }
    if (!values.out) throw new RangeError("--out is required");
    const dataset = values.dataset ?? EXPORT_DEFAULTS.dataset;
    if (!DATASETS.includes(dataset as DatasetName)) {
      throw new RangeError(
        `unknown dataset ${dataset}; pick one of ${DATASETS.join(", ")}`,
      );
    }
    const entities = values.entities
      ? intFlag("entities", values.entities)
      : EXPORT_DEFAULTS.entities;
    config = {
      out: values.out,
      dataset: dataset as DatasetName,
      entities,
      trainEntities: values.train ? intFlag("train", values.train) : 2 * entities,
      layers: values.layers ? csvInts("layers", values.layers) : EXPORT_DEFAULTS.layers,
      exportLayers: values["export-layers"]
        ? csvInts("export-layers", values["export-layers"])
        : undefined,
      seed: values.seed ? intFlag("seed", values.seed) : EXPORT_DEFAULTS.seed,
      noise: values.noise ? floatFlag("noise", values.noise) : EXPORT_DEFAULTS.noise,
      epochs: values.epochs ? intFlag("epochs", values.epochs) : EXPORT_DEFAULTS.epochs,
      lr: values.lr ? floatFlag("lr", values.lr) : EXPORT_DEFAULTS.lr,
      mining: EXPORT_DEFAULTS.mining,
    };
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }

  try {
    const manifest = exportViews(config);
    const files = [
      ...manifest.files.views,
      manifest.files.predictions,
      manifest.files.settings,
      manifest.files.manifest,
    ];
    for (const f of files) {
      process.stdout.write(`wrote ${path.join(config.out, f)}\n`);
    }
    process.stdout.write(
      `exported ${manifest.rows} rows from ${manifest.dataset} ` +
        `(layers ${manifest.exportedLayers.join(",")})\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof RangeError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    if (err instanceof TrainingDiverged) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    process.stderr.write(`unexpected error: ${(err as Error).message}\n`);
    return 2;
  }
}

if (typeof require !== "undefined" && require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
