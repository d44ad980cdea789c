/**
 * Command line entry point.
 *
 * Usage: render <figure-id> <csv-dir> <out-dir>
 *
 * Reads <csv-dir>/<figure-id>.csv and writes <out-dir>/<figure-id>.svg.
 * Exit codes: 0 success, 1 schema mismatch or unusable data,
 * 2 usage error or unreadable input.
 */

import * as fs from "fs";
import * as path from "path";
import { SchemaError } from "./csv";
import { FIGURES, FIGURE_IDS, renderFigure } from "./figures";

export function runCli(argv: string[]): number {
  if (argv.length !== 3) {
    console.error("usage: render <figure-id> <csv-dir> <out-dir>");
    return 2;
  }
  const [figureId, csvDir, outDir] = argv;
  if (!FIGURES[figureId]) {
    console.error(
      `unknown figure id "${figureId}"; expected one of ${FIGURE_IDS.join(", ")}`
    );
    return 2;
  }
  const csvPath = path.join(csvDir, `${figureId}.csv`);
  let csvText: string;
  try {
    csvText = fs.readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`cannot read ${csvPath}: ${(err as Error).message}`);
    return 2;
  }
  let svg: string;
  try {
    svg = renderFigure(figureId, csvText);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`${csvPath}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  fs.mkdirSync(outDir, { recursive: true });
  const outPath = path.join(outDir, `${figureId}.svg`);
  fs.writeFileSync(outPath, svg);
  console.log(outPath);
  return 0;
}

if (require.main === module) {
  process.exitCode = runCli(process.argv.slice(2));
}
