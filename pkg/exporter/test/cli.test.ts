import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterAll, afterEach, describe, expect, it, vi } from "vitest";

import { runCli } from "../src/cli";

const tmpRoots: string[] = [];

function tmpDir(): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "exporter-cli-"));
  tmpRoots.push(dir);
  return dir;
}

afterAll(() => {
  for (const dir of tmpRoots) fs.rmSync(dir, { recursive: true, force: true });
});

function quiet() {
  const out = vi.spyOn(process.stdout, "write").mockImplementation(() => true);
  const err = vi.spyOn(process.stderr, "write").mockImplementation(() => true);
  return { out, err };
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("runCli", () => {
  it("exports a directory with the documented flags", () => {
    const out = tmpDir();
    const spies = quiet();
    const rc = runCli([
      "--out", out,
      "--entities", "60",
      "--train", "120",
      "--epochs", "200",
      "--seed", "7",
    ]);
    expect(rc).toBe(0);
    expect(fs.existsSync(path.join(out, "view1.arff"))).toBe(true);
    expect(fs.existsSync(path.join(out, "settings.txt"))).toBe(true);
    const printed = spies.out.mock.calls.map((c) => String(c[0])).join("");
    expect(printed).toContain("manifest.json");
    expect(printed).toContain("exported 60 rows from moons");
  });

  it("prints usage on --help and exits 0", () => {
    const spies = quiet();
    expect(runCli(["--help"])).toBe(0);
    const printed = spies.out.mock.calls.map((c) => String(c[0])).join("");
    expect(printed).toContain("usage:");
  });

  it("fails validation without --out", () => {
    const spies = quiet();
    expect(runCli([])).toBe(1);
    const printed = spies.err.mock.calls.map((c) => String(c[0])).join("");
    expect(printed).toContain("--out is required");
  });

  it("rejects unknown flags, datasets and malformed numbers", () => {
    quiet();
    expect(runCli(["--out", tmpDir(), "--frobnicate"])).toBe(1);
    expect(runCli(["--out", tmpDir(), "--dataset", "circles"])).toBe(1);
    expect(runCli(["--out", tmpDir(), "--entities", "sixty"])).toBe(1);
    expect(runCli(["--out", tmpDir(), "--layers", "8,x"])).toBe(1);
  });

  it("maps a diverging run to exit code 2", () => {
    const spies = quiet();
    const rc = runCli([
      "--out", tmpDir(),
      "--entities", "30",
      "--train", "60",
      "--epochs", "10",
      "--lr", "1e9",
    ]);
    expect(rc).toBe(2);
    const printed = spies.err.mock.calls.map((c) => String(c[0])).join("");
    expect(printed).toContain("training diverged");
  });
});
