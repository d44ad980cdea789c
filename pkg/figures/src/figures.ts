/**
 * Registry mapping every benchmark figure id to its CSV schema,
 * chart style and axis labels.
 */

import { renderBoxGrid, renderConvergence, renderTreeCurves } from "./charts";
import { parseBoxGrid, parseConvergence, parseTreeCurve } from "./csv";

export type FigureSpec =
  | {
      schema: "convergence";
      style: "bands" | "boxes";
      title: string;
      xLabel: string;
      yLabel: string;
    }
  | { schema: "tree-curve"; title: string; xLabel: string }
  | { schema: "box-grid"; title: string; xLabel: string; yLabel: string };

export const FIGURES: Record<string, FigureSpec> = {
  fig4: {
    schema: "convergence",
    style: "bands",
    title: "nested search: phip driver vs direct mindist driver",
    xLabel: "perturbations",
    yLabel: "mindist",
  },
  fig5: {
    schema: "convergence",
    style: "boxes",
    title: "plateau annealing: short vs long plateaus",
    xLabel: "perturbations",
    yLabel: "mindist",
  },
  fig6: {
    schema: "convergence",
    style: "boxes",
    title: "nested search: evolution of mindist",
    xLabel: "perturbations",
    yLabel: "mindist",
  },
  fig7: {
    schema: "convergence",
    style: "boxes",
    title: "long runs: nested search vs plateau annealing",
    xLabel: "perturbations",
    yLabel: "mindist",
  },
  fig8: {
    schema: "tree-curve",
    title: "tree edge statistics along discrepancy-driven runs",
    xLabel: "perturbations",
  },
  fig9: {
    schema: "box-grid",
    title: "2D subsamples: plain vs centered-discrepancy optimized",
    xLabel: "dimension",
    yLabel: "centered L2 discrepancy (squared)",
  },
  fig10: {
    schema: "box-grid",
    title: "2D subsamples of star-discrepancy optimized designs",
    xLabel: "dimension",
    yLabel: "discrepancy",
  },
  fig11: {
    schema: "box-grid",
    title: "2D subsamples of the scrambled quasirandom sequence",
    xLabel: "dimension",
    yLabel: "centered L2 discrepancy (squared)",
  },
  fig12: {
    schema: "box-grid",
    title: "2D subsamples of distance-optimized designs",
    xLabel: "dimension",
    yLabel: "discrepancy",
  },
  fig13: {
    schema: "box-grid",
    title: "2D subsample tree statistics of distance-optimized designs",
    xLabel: "dimension",
    yLabel: "edge length",
  },
  fig14: {
    schema: "box-grid",
    title: "2D subsample tree statistics of discrepancy-optimized designs",
    xLabel: "dimension",
    yLabel: "edge length",
  },
};

export const FIGURE_IDS = Object.keys(FIGURES);

/** Parse one figure's CSV text and render it to an SVG string. */
export function renderFigure(id: string, csvText: string): string {
  const spec = FIGURES[id];
  if (!spec) {
    throw new Error(`unknown figure id "${id}"; expected one of ${FIGURE_IDS.join(", ")}`);
  }
  if (spec.schema === "convergence") {
    return renderConvergence(parseConvergence(csvText), spec);
  }
  if (spec.schema === "tree-curve") {
    return renderTreeCurves(parseTreeCurve(csvText), spec);
  }
  return renderBoxGrid(parseBoxGrid(csvText), spec);
}
