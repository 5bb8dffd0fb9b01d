/**
 * Settings file generation for the mining engine.
 *
 * The exported directory is meant to be mined as-is, so the file lists the
 * view ARFFs as Input1..n (relative paths, resolved against the settings
 * file) together with thresholds sized for desk-scale data.
 */

export interface MiningOptions {
  minJaccard: number;
  maxPvalue: number;
  minSupport: number;
  maxSupport: number;
  workingSize: number;
  maxSize: number;
  numRetRed: number;
  treeDepth: number;
  supplementTrees: number;
  iterations: number;
  restarts: number;
}

/** Small-data profile: shallow trees, one restart, tight result sets. */
export const DESK_SCALE: MiningOptions = {
  minJaccard: 0.5,
  maxPvalue: 0.01,
  minSupport: 8,
  maxSupport: 1000000,
  workingSize: 60,
  maxSize: 200,
  numRetRed: 3,
  treeDepth: 3,
  supplementTrees: 0,
  iterations: 0,
  restarts: 1,
};

export function miningSettings(
  inputs: string[],
  outputName: string,
  opts: MiningOptions = DESK_SCALE,
): string {
  if (inputs.length === 0) {
    throw new RangeError("a settings file needs at least one input view");
  }
  const lines = inputs.map((path, i) => `Input${i + 1} = ${path}`);
  lines.push(
    "OutputFolder = results",
    `OutputFileName = ${outputName}`,
    `minJS = ${opts.minJaccard}`,
    `maxPval = ${opts.maxPvalue}`,
    `MinSupport = ${opts.minSupport}`,
    `MaxSupport = ${opts.maxSupport}`,
    `WorkingRSSize = ${opts.workingSize}`,
    `MaxRSSize = ${opts.maxSize}`,
    `numRetRed = ${opts.numRetRed}`,
    `ATreeDepth = ${opts.treeDepth}`,
    `numSupplementTrees = ${opts.supplementTrees}`,
    `numIterations = ${opts.iterations}`,
    `numRandomRestarts = ${opts.restarts}`,
  );
  return lines.join("\n") + "\n";
}
