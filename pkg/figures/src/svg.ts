/**
 * Minimal deterministic SVG building blocks.
 *
 * Everything renders to plain strings with fixed-precision
 * coordinates and no timestamps, so the same input always produces
 * byte-identical output.
 */

export interface PlotArea {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export type Scale = (value: number) => number;

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Pixel coordinate with two fixed decimals. */
export function px(x: number): string {
  return x.toFixed(2);
}

/** Short human-readable tick label. */
export function formatTick(v: number): string {
  if (v === 0) {
    return "0";
  }
  return String(Number(v.toPrecision(10)));
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number
): Scale {
  if (d1 === d0) {
    const mid = (r0 + r1) / 2;
    return () => mid;
  }
  const k = (r1 - r0) / (d1 - d0);
  return (v: number) => r0 + (v - d0) * k;
}

/** Widen a degenerate or tight domain so marks never sit on the frame. */
export function padDomain(min: number, max: number, frac = 0.05): [number, number] {
  if (min === max) {
    const pad = Math.abs(min) * frac || 1;
    return [min - pad, max + pad];
  }
  const pad = (max - min) * frac;
  return [min - pad, max + pad];
}

/** Tick positions at 1/2/5 times a power of ten covering [min, max]. */
export function niceTicks(min: number, max: number, count = 5): number[] {
  if (min === max) {
    return [min];
  }
  const rough = (max - min) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const residual = rough / mag;
  const step = residual <= 1 ? mag : residual <= 2 ? 2 * mag : residual <= 5 ? 5 * mag : 10 * mag;
  const ticks: number[] = [];
  let v = Math.ceil(min / step) * step;
  const eps = step * 1e-9;
  while (v <= max + eps) {
    ticks.push(Math.abs(v) < eps ? 0 : v);
    v += step;
  }
  return ticks;
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: string
): string {
  return `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ${attrs}/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  attrs: string
): string {
  return `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" ${attrs}/>`;
}

export function circle(cx: number, cy: number, r: number, attrs: string): string {
  return `<circle cx="${px(cx)}" cy="${px(cy)}" r="${px(r)}" ${attrs}/>`;
}

export function text(x: number, y: number, s: string, attrs: string): string {
  return `<text x="${px(x)}" y="${px(y)}" ${attrs}>${esc(s)}</text>`;
}

export function points(pairs: Array<[number, number]>): string {
  return pairs.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
}

export function polyline(pairs: Array<[number, number]>, attrs: string): string {
  return `<polyline points="${points(pairs)}" ${attrs}/>`;
}

export function polygon(pairs: Array<[number, number]>, attrs: string): string {
  return `<polygon points="${points(pairs)}" ${attrs}/>`;
}

/** Frame, ticks and tick labels around one plot area. */
export function axes(
  area: PlotArea,
  xScale: Scale,
  yScale: Scale,
  xTicks: number[],
  yTicks: number[],
  xTickLabel: (v: number) => string = formatTick
): string {
  const parts: string[] = [];
  const frame = 'fill="none" stroke="#333" stroke-width="1"';
  parts.push(
    rect(area.left, area.top, area.right - area.left, area.bottom - area.top, frame)
  );
  const tick = 'stroke="#333" stroke-width="1"';
  const label = 'font-family="sans-serif" font-size="11" fill="#333"';
  for (const v of xTicks) {
    const x = xScale(v);
    parts.push(line(x, area.bottom, x, area.bottom + 4, tick));
    parts.push(
      text(x, area.bottom + 16, xTickLabel(v), `${label} text-anchor="middle"`)
    );
  }
  for (const v of yTicks) {
    const y = yScale(v);
    parts.push(line(area.left - 4, y, area.left, y, tick));
    parts.push(
      text(area.left - 7, y + 3.5, formatTick(v), `${label} text-anchor="end"`)
    );
  }
  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    rect(0, 0, width, height, 'fill="#ffffff"'),
    body,
    "</svg>",
    "",
  ].join("\n");
}
