import { describe, expect, it } from "vitest";
import {
  esc,
  formatTick,
  linearScale,
  niceTicks,
  padDomain,
  polyline,
  svgDocument,
} from "../src/svg";

describe("esc", () => {
  it("escapes markup characters", () => {
    expect(esc('a<b & "c">d')).toBe("a&lt;b &amp; &quot;c&quot;&gt;d");
  });
});

describe("formatTick", () => {
  it("prints zero, integers and small decimals compactly", () => {
    expect(formatTick(0)).toBe("0");
    expect(formatTick(30000)).toBe("30000");
    expect(formatTick(0.00005)).toBe("0.00005");
    expect(formatTick(0.1 + 0.2)).toBe("0.3");
  });
});

describe("linearScale", () => {
  it("maps domain endpoints to range endpoints", () => {
    const s = linearScale(10, 20, 0, 100);
    expect(s(10)).toBe(0);
    expect(s(20)).toBe(100);
    expect(s(15)).toBe(50);
  });

  it("collapses a degenerate domain to the range midpoint", () => {
    const s = linearScale(5, 5, 0, 100);
    expect(s(5)).toBe(50);
  });
});

describe("padDomain", () => {
  it("widens the domain on both sides", () => {
    const [lo, hi] = padDomain(0, 10);
    expect(lo).toBeLessThan(0);
    expect(hi).toBeGreaterThan(10);
  });

  it("handles an all-equal domain", () => {
    const [lo, hi] = padDomain(3, 3);
    expect(lo).toBeLessThan(3);
    expect(hi).toBeGreaterThan(3);
  });
});

describe("niceTicks", () => {
  it("covers the domain with round steps", () => {
    const ticks = niceTicks(0, 50000, 6);
    expect(ticks[0]).toBeGreaterThanOrEqual(0);
    expect(ticks[ticks.length - 1]).toBeLessThanOrEqual(50000);
    expect(ticks.length).toBeGreaterThanOrEqual(4);
    const steps = new Set(
      ticks.slice(1).map((t, i) => formatTick(t - ticks[i]))
    );
    expect(steps.size).toBe(1);
  });

  it("returns the single value of a degenerate domain", () => {
    expect(niceTicks(2, 2)).toEqual([2]);
  });
});

describe("svgDocument", () => {
  it("wraps the body in a sized standalone document", () => {
    const doc = svgDocument(100, 50, polyline([[0, 0], [10, 10]], 'fill="none"'));
    expect(doc.startsWith('<svg xmlns="http://www.w3.org/2000/svg"')).toBe(true);
    expect(doc).toContain('width="100" height="50"');
    expect(doc).toContain("<polyline");
    expect(doc.trimEnd().endsWith("</svg>")).toBe(true);
  });
});
