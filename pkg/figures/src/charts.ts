/**
 * The three chart styles behind the benchmark figures.
 *
 * Quantile traces (bands or per-checkpoint boxes), two-panel tree
 * statistic curves, and five-number box grids over dimension.  Each
 * renderer draws exactly what its rows contain; quantiles and
 * summaries were computed upstream.
 */

import { BoxGridRow, ConvergenceRow, TreeCurveRow } from "./csv";
import {
  PlotArea,
  axes,
  circle,
  formatTick,
  line,
  linearScale,
  niceTicks,
  padDomain,
  polygon,
  polyline,
  rect,
  svgDocument,
  text,
} from "./svg";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const LABEL = 'font-family="sans-serif" font-size="12" fill="#333"';
const TITLE = 'font-family="sans-serif" font-size="13" font-weight="600" fill="#111"';

function groupByLabel<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const groups = new Map<string, T[]>();
  for (const row of rows) {
    const label = key(row);
    let bucket = groups.get(label);
    if (!bucket) {
      bucket = [];
      groups.set(label, bucket);
    }
    bucket.push(row);
  }
  return groups;
}

function gridlines(area: PlotArea, ys: (v: number) => number, ticks: number[]): string {
  return ticks
    .map((t) => line(area.left, ys(t), area.right, ys(t), 'stroke="#e8e8e8" stroke-width="1"'))
    .join("\n");
}

function legend(x: number, y: number, labels: string[]): string {
  const parts: string[] = [];
  labels.forEach((label, i) => {
    const lx = x + i * 150;
    const color = PALETTE[i % PALETTE.length];
    parts.push(line(lx, y - 4, lx + 20, y - 4, `stroke="${color}" stroke-width="3"`));
    parts.push(text(lx + 26, y, label, LABEL));
  });
  return parts.join("\n");
}

function xAxisLabel(area: PlotArea, label: string): string {
  const cx = (area.left + area.right) / 2;
  return text(cx, area.bottom + 36, label, `${LABEL} text-anchor="middle"`);
}

function yAxisLabel(area: PlotArea, label: string): string {
  const cy = (area.top + area.bottom) / 2;
  const attrs = `${LABEL} text-anchor="middle" transform="translate(16 ${cy.toFixed(2)}) rotate(-90)"`;
  return text(0, 0, label, attrs);
}

export interface ConvergenceOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  /** "bands" overlays quantile envelopes; "boxes" draws one box per checkpoint. */
  style: "bands" | "boxes";
}

export function renderConvergence(
  rows: ConvergenceRow[],
  opts: ConvergenceOptions
): string {
  const width = 760;
  const height = 440;
  const area: PlotArea = { left: 74, top: 60, right: width - 24, bottom: height - 56 };
  const groups = groupByLabel(rows, (r) => r.variant);
  for (const series of groups.values()) {
    series.sort((a, b) => a.checkpoint - b.checkpoint);
  }

  const checkpoints = rows.map((r) => r.checkpoint);
  const xMin = Math.min(...checkpoints);
  const xMax = Math.max(...checkpoints);
  const [yMin, yMax] = padDomain(
    Math.min(...rows.map((r) => r.q05)),
    Math.max(...rows.map((r) => r.q95))
  );
  const xs = linearScale(xMin, xMax, area.left, area.right);
  const ys = linearScale(yMin, yMax, area.bottom, area.top);
  const yTicks = niceTicks(yMin, yMax, 5);

  const parts: string[] = [];
  parts.push(gridlines(area, ys, yTicks));

  const variants = [...groups.keys()];
  variants.forEach((variant, vi) => {
    const series = groups.get(variant)!;
    const color = PALETTE[vi % PALETTE.length];
    if (opts.style === "bands") {
      const envelope: Array<[number, number]> = series.map((r) => [
        xs(r.checkpoint),
        ys(r.q95),
      ]);
      for (let i = series.length - 1; i >= 0; i--) {
        envelope.push([xs(series[i].checkpoint), ys(series[i].q05)]);
      }
      parts.push(
        polygon(envelope, `class="band" fill="${color}" fill-opacity="0.18" stroke="none"`)
      );
    } else {
      // cap the box count so dense checkpoint grids stay readable
      const stride = Math.max(1, Math.ceil(series.length / 40));
      const offset = (vi - (variants.length - 1) / 2) * 9;
      const half = 3.5;
      series.forEach((r, i) => {
        if (i % stride !== 0 && i !== series.length - 1) {
          return;
        }
        const x = xs(r.checkpoint) + offset;
        parts.push(
          line(x, ys(r.q05), x, ys(r.q95), `class="whisker" stroke="${color}" stroke-width="1"`)
        );
        parts.push(
          rect(
            x - half,
            ys(r.q75),
            2 * half,
            ys(r.q25) - ys(r.q75),
            `class="box" fill="#ffffff" stroke="${color}" stroke-width="1"`
          )
        );
        parts.push(
          line(
            x - half,
            ys(r.q50),
            x + half,
            ys(r.q50),
            `class="median-tick" stroke="${color}" stroke-width="1.5"`
          )
        );
      });
    }
    const medians: Array<[number, number]> = series.map((r) => [
      xs(r.checkpoint),
      ys(r.q50),
    ]);
    const widthPx = opts.style === "bands" ? 1.8 : 1.2;
    parts.push(
      polyline(
        medians,
        `class="median" fill="none" stroke="${color}" stroke-width="${widthPx}"`
      )
    );
  });

  parts.push(axes(area, xs, ys, niceTicks(xMin, xMax, 6), yTicks));
  parts.push(text(area.left, 24, opts.title, TITLE));
  parts.push(legend(area.left, 44, variants));
  parts.push(xAxisLabel(area, opts.xLabel));
  parts.push(yAxisLabel(area, opts.yLabel));
  return svgDocument(width, height, parts.join("\n"));
}

export interface TreeCurveOptions {
  title: string;
  xLabel: string;
}

export function renderTreeCurves(
  rows: TreeCurveRow[],
  opts: TreeCurveOptions
): string {
  const width = 760;
  const height = 400;
  const panels: Array<{ caption: string; value: (r: TreeCurveRow) => number }> = [
    { caption: "mean edge length m", value: (r) => r.mMean },
    { caption: "edge length spread sigma", value: (r) => r.sigmaMean },
  ];
  const leftOuter = 74;
  const gap = 64;
  const panelWidth = (width - leftOuter - 20 - gap) / panels.length;
  const groups = groupByLabel(rows, (r) => r.variant);
  for (const series of groups.values()) {
    series.sort((a, b) => a.checkpoint - b.checkpoint);
  }
  const variants = [...groups.keys()];
  const xMin = Math.min(...rows.map((r) => r.checkpoint));
  const xMax = Math.max(...rows.map((r) => r.checkpoint));

  const parts: string[] = [];
  panels.forEach((panel, pi) => {
    const left = leftOuter + pi * (panelWidth + gap);
    const area: PlotArea = { left, top: 80, right: left + panelWidth, bottom: height - 52 };
    const values = rows.map(panel.value);
    const [yMin, yMax] = padDomain(Math.min(...values), Math.max(...values));
    const xs = linearScale(xMin, xMax, area.left, area.right);
    const ys = linearScale(yMin, yMax, area.bottom, area.top);
    const yTicks = niceTicks(yMin, yMax, 5);
    parts.push(gridlines(area, ys, yTicks));
    variants.forEach((variant, vi) => {
      const series = groups.get(variant)!;
      const color = PALETTE[vi % PALETTE.length];
      const pts: Array<[number, number]> = series.map((r) => [
        xs(r.checkpoint),
        ys(panel.value(r)),
      ]);
      parts.push(
        polyline(pts, `class="curve" fill="none" stroke="${color}" stroke-width="1.8"`)
      );
      for (const [x, y] of pts) {
        parts.push(circle(x, y, 2.2, `class="point" fill="${color}"`));
      }
    });
    parts.push(axes(area, xs, ys, niceTicks(xMin, xMax, 4), yTicks));
    const cx = (area.left + area.right) / 2;
    parts.push(
      text(cx, area.top - 10, panel.caption, `${LABEL} text-anchor="middle" class="caption"`)
    );
  });

  parts.push(text(leftOuter, 24, opts.title, TITLE));
  parts.push(legend(leftOuter, 48, variants));
  parts.push(
    text(width / 2, height - 14, opts.xLabel, `${LABEL} text-anchor="middle"`)
  );
  return svgDocument(width, height, parts.join("\n"));
}

export interface BoxGridOptions {
  title: string;
  xLabel: string;
  yLabel: string;
}

export function renderBoxGrid(rows: BoxGridRow[], opts: BoxGridOptions): string {
  const groups = groupByLabel(rows, (r) => r.panel);
  const panels = [...groups.keys()];
  const leftOuter = 74;
  const gap = 56;
  const panelWidth = 330;
  const width = leftOuter + panels.length * panelWidth + (panels.length - 1) * gap + 20;
  const height = 400;

  const parts: string[] = [];
  panels.forEach((panel, pi) => {
    const panelRows = groups.get(panel)!;
    const left = leftOuter + pi * (panelWidth + gap);
    const area: PlotArea = { left, top: 64, right: left + panelWidth, bottom: height - 56 };
    const dims = [...new Set(panelRows.map((r) => r.d))].sort((a, b) => a - b);
    const slot = new Map(dims.map((d, i) => [d, i]));
    const xs = linearScale(-0.5, dims.length - 0.5, area.left, area.right);
    const [yMin, yMax] = padDomain(
      Math.min(...panelRows.map((r) => r.min)),
      Math.max(...panelRows.map((r) => r.max))
    );
    const ys = linearScale(yMin, yMax, area.bottom, area.top);
    const yTicks = niceTicks(yMin, yMax, 5);
    parts.push(gridlines(area, ys, yTicks));

    const bandWidth = panelWidth / dims.length;
    const boxWidth = Math.min(44, bandWidth * 0.5);
    const half = boxWidth / 2;
    for (const row of panelRows) {
      const x = xs(slot.get(row.d)!);
      const cap = boxWidth * 0.3;
      parts.push(
        line(x, ys(row.min), x, ys(row.max), 'class="whisker" stroke="#444" stroke-width="1"')
      );
      parts.push(line(x - cap, ys(row.min), x + cap, ys(row.min), 'stroke="#444" stroke-width="1"'));
      parts.push(line(x - cap, ys(row.max), x + cap, ys(row.max), 'stroke="#444" stroke-width="1"'));
      parts.push(
        rect(
          x - half,
          ys(row.q75),
          boxWidth,
          ys(row.q25) - ys(row.q75),
          'class="box" fill="#ffffff" stroke="#1f77b4" stroke-width="1.5"'
        )
      );
      parts.push(
        line(
          x - half,
          ys(row.q50),
          x + half,
          ys(row.q50),
          'class="median" stroke="#d62728" stroke-width="2"'
        )
      );
    }

    const xTicks = dims.map((_, i) => i);
    parts.push(axes(area, xs, ys, xTicks, yTicks, (i) => formatTick(dims[i])));
    const cx = (area.left + area.right) / 2;
    parts.push(
      text(cx, area.top - 10, panel, `${LABEL} text-anchor="middle" class="caption"`)
    );
    parts.push(xAxisLabel(area, opts.xLabel));
    if (pi === 0) {
      parts.push(yAxisLabel(area, opts.yLabel));
    }
  });

  parts.push(text(leftOuter, 24, opts.title, TITLE));
  return svgDocument(width, height, parts.join("\n"));
}
