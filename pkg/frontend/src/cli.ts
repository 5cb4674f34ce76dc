/**
 * Figure renderer CLI.
 *
 * Usage:
 *   render validity   <raster.csv> <out.svg> [boundary.csv]
 *   render surface    <sweep.csv> <out.svg>
 *   render contour    <sweep.csv> <out.svg>
 *   render sections   <sections.csv> <out.svg>
 *   render timeseries <simulate.csv> <out.svg> [tau_rupt]
 */

import { readFileSync, writeFileSync } from "node:fs";

import { renderContour } from "./figures/contour.ts";
import { renderSections } from "./figures/sections.ts";
import { renderSurface } from "./figures/surface.ts";
import { renderTimeseries } from "./figures/timeseries.ts";
import { renderValidity } from "./figures/validity.ts";

function main(argv: string[]): number {
  const [kind, input, output, extra] = argv;
  if (!kind || !input || !output) {
    console.error("usage: render <kind> <input.csv> <out.svg> [extra]");
    return 1;
  }
  const csv = readFileSync(input, "utf8");
  let svg: string;
  switch (kind) {
    case "validity":
      svg = renderValidity(csv, extra ? readFileSync(extra, "utf8") : null);
      break;
    case "surface":
      svg = renderSurface(csv);
      break;
    case "contour":
      svg = renderContour(csv);
      break;
    case "sections":
      svg = renderSections(csv);
      break;
    case "timeseries":
      svg = renderTimeseries(csv, {
        tauRupt: extra !== undefined ? Number(extra) : undefined,
      });
      break;
    default:
      console.error(`unknown figure kind: ${kind}`);
      return 1;
  }
  writeFileSync(output, svg);
  return 0;
}

process.exit(main(process.argv.slice(2)));
