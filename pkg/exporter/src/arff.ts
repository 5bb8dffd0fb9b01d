/**
 * ARFF writers for the subset the mining engine reads back:
 * `@relation`, `@attribute <name> numeric`, `@attribute <name> {a,b,...}`,
 * `@data`, comma-separated rows, no quoting, no missing values.
 */

const NAME_OK = /^[^\s,(){}]+$/;

function checkName(name: string, what: string): void {
  if (!NAME_OK.test(name)) {
    throw new RangeError(
      `${what} ${JSON.stringify(name)} must be free of whitespace, commas and brackets`,
    );
  }
}

/**
 * Shortest exact decimal form of a finite double. JavaScript's default
 * number-to-string conversion round-trips, so readers recover the value bit
 * for bit.
 */
export function formatNumber(v: number): string {
  if (!Number.isFinite(v)) {
    throw new RangeError(`ARFF cells must be finite, got ${v}`);
  }
  return String(v);
}

/** One all-numeric view: rows x names.length values. */
export function numericArff(
  relation: string,
  names: string[],
  rows: number[][],
): string {
  checkName(relation, "relation name");
  if (names.length === 0) throw new RangeError("a view needs attributes");
  const seen = new Set<string>();
  for (const name of names) {
    checkName(name, "attribute name");
    if (seen.has(name)) throw new RangeError(`duplicate attribute ${name}`);
    seen.add(name);
  }
  const out = [`@relation ${relation}`];
  for (const name of names) out.push(`@attribute ${name} numeric`);
  out.push("@data");
  for (const row of rows) {
    if (row.length !== names.length) {
      throw new RangeError(
        `row has ${row.length} cells, header declares ${names.length}`,
      );
    }
    out.push(row.map(formatNumber).join(","));
  }
  return out.join("\n") + "\n";
}

/** A single nominal column, e.g. model predictions. */
export function nominalArff(
  relation: string,
  attribute: string,
  classes: string[],
  codes: number[],
): string {
  checkName(relation, "relation name");
  checkName(attribute, "attribute name");
  if (classes.length < 2) throw new RangeError("need at least 2 classes");
  for (const c of classes) checkName(c, "class label");
  if (new Set(classes).size !== classes.length) {
    throw new RangeError(`duplicate class labels in ${classes}`);
  }
  const out = [
    `@relation ${relation}`,
    `@attribute ${attribute} {${classes.join(",")}}`,
    "@data",
  ];
  for (const code of codes) {
    if (!Number.isInteger(code) || code < 0 || code >= classes.length) {
      throw new RangeError(`class code ${code} outside [0, ${classes.length})`);
    }
    out.push(classes[code]);
  }
  return out.join("\n") + "\n";
}
