import { describe, expect, it } from "vitest";

import { Rng } from "../src/rng";

describe("Rng", () => {
  it("replays the same stream for the same seed", () => {
    const a = new Rng(42);
    const b = new Rng(42);
    for (let i = 0; i < 1000; i++) {
      expect(a.next()).toBe(b.next());
    }
  });

  it("differs across seeds", () => {
    const a = new Rng(1);
    const b = new Rng(2);
    const same = Array.from({ length: 32 }, () => a.next() === b.next());
    expect(same.every(Boolean)).toBe(false);
  });

  it("stays inside [0, 1) and spreads over the unit interval", () => {
    const rng = new Rng(7);
    const draws = Array.from({ length: 4000 }, () => rng.next());
    expect(Math.min(...draws)).toBeGreaterThanOrEqual(0);
    expect(Math.max(...draws)).toBeLessThan(1);
    const mean = draws.reduce((s, v) => s + v, 0) / draws.length;
    expect(mean).toBeGreaterThan(0.45);
    expect(mean).toBeLessThan(0.55);
  });

  it("draws roughly standard normals", () => {
    const rng = new Rng(11);
    const draws = Array.from({ length: 4000 }, () => rng.normal());
    expect(draws.every(Number.isFinite)).toBe(true);
    const mean = draws.reduce((s, v) => s + v, 0) / draws.length;
    const sd = Math.sqrt(
      draws.reduce((s, v) => s + (v - mean) ** 2, 0) / draws.length,
    );
    expect(Math.abs(mean)).toBeLessThan(0.1);
    expect(sd).toBeGreaterThan(0.9);
    expect(sd).toBeLessThan(1.1);
  });

  it("keeps int(n) inside [0, n)", () => {
    const rng = new Rng(3);
    for (let i = 0; i < 500; i++) {
      const v = rng.int(7);
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(7);
      expect(Number.isInteger(v)).toBe(true);
    }
  });

  it("rejects fractional seeds", () => {
    expect(() => new Rng(1.5)).toThrow(RangeError);
  });
});
